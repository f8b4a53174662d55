import json

import pytest

from horocenter.cli import main

TRI = {
    "points": [
        {"coords": [0.0, 0.0], "mass": 1.0},
        {"coords": [1.0, 0.0], "mass": 1.0},
        {"coords": [0.0, 1.0], "mass": 1.0},
    ]
}

TREE_DOC = {
    "space": "tree",
    "edges": [["A", "B", 2.0], ["B", "C", 3.0], ["B", "D", 1.5]],
    "ideal_leaves": ["C"],
    "basepoint": ["A-B", 0.0],
}


@pytest.fixture()
def tri_file(tmp_path):
    path = tmp_path / "tri.json"
    path.write_text(json.dumps(TRI))
    return str(path)


@pytest.fixture()
def tree_file(tmp_path):
    path = tmp_path / "tree.json"
    path.write_text(json.dumps(TREE_DOC))
    return str(path)


def test_barycenter_json_output(tri_file, tmp_path, capsys):
    out = tmp_path / "result.json"
    code = main(
        [
            "barycenter",
            "--space",
            "euclidean",
            "--dim",
            "2",
            "--input",
            tri_file,
            "--output",
            str(out),
        ]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["converged"] is True
    assert doc["center"]["coords"] == pytest.approx([1 / 3, 1 / 3], abs=1e-9)


def test_barycenter_csv_trace(tri_file, capsys):
    code = main(
        ["barycenter", "--space", "euclidean", "--dim", "2", "--input", tri_file,
         "--format", "csv"]
    )
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "iter,diameter"
    assert float(lines[-1].split(",")[1]) < 1e-8


def test_select_singleton_echo(tmp_path, capsys):
    body = tmp_path / "single.json"
    body.write_text(json.dumps({"generators": [{"coords": [7.0, -2.0]}]}))
    code = main(
        ["select", "--space", "euclidean", "--dim", "2", "--input", str(body)]
    )
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["point"]["coords"] == [7.0, -2.0]


def test_select_tree_with_document_ideal(tree_file, tmp_path, capsys):
    body = tmp_path / "body.json"
    body.write_text(
        json.dumps(
            {
                "generators": [
                    {"edge": "A-B", "offset": 0.5},
                    {"edge": "B-D", "offset": 1.0},
                ],
                "ideal": {"end_leaf": "C"},
            }
        )
    )
    code = main(["select", "--space-json", tree_file, "--input", str(body)])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["point"] == {"edge": "B-D", "offset": 1.0}


def test_classify_output(tree_file, tmp_path, capsys):
    body = tmp_path / "body.json"
    body.write_text(
        json.dumps(
            {
                "generators": [
                    {"edge": "A-B", "offset": 0.5},
                    {"edge": "B-D", "offset": 1.0},
                ]
            }
        )
    )
    code = main(["classify", "--space-json", tree_file, "--input", str(body)])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "non-shrinking"
    assert doc["max_limit_separation"] == pytest.approx(0.5)


def test_scan_deterministic_bytes(tmp_path):
    args = [
        "scan-shift", "--space", "hyperbolic", "--dim", "2",
        "--samples", "40", "--seed", "7",
    ]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_scan_csv_format(tmp_path):
    out = tmp_path / "scan.csv"
    code = main(
        ["scan-mass", "--space", "euclidean", "--dim", "2", "--samples", "15",
         "--seed", "3", "--format", "csv", "--output", str(out)]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "sample,in_disp,out_disp,ratio"
    assert len(lines) == 16


def test_scan_selector_tree(tree_file, tmp_path):
    out = tmp_path / "sel.json"
    code = main(
        ["scan-selector", "--space-json", tree_file, "--samples", "10",
         "--seed", "2", "--no-smoothing", "--output", str(out)]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert "straddle_ratios" in doc
    assert len(doc["straddle_ratios"]) == 5


def test_exit_1_on_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"points": [{"coords": [0.0], "mass": -1}]}')
    code = main(
        ["barycenter", "--space", "euclidean", "--dim", "1", "--input", str(bad)]
    )
    assert code == 1
    assert "mass" in capsys.readouterr().err


def test_exit_1_on_missing_file(capsys):
    code = main(
        ["barycenter", "--space", "euclidean", "--dim", "2", "--input", "/no/such.json"]
    )
    assert code == 1


def test_exit_1_on_bad_json(tmp_path, capsys):
    bad = tmp_path / "broken.json"
    bad.write_text("{oops")
    code = main(
        ["barycenter", "--space", "euclidean", "--dim", "2", "--input", str(bad)]
    )
    assert code == 1
    assert "invalid JSON" in capsys.readouterr().err


def test_exit_2_on_unresolved_classification(tmp_path, capsys):
    body = tmp_path / "pair.json"
    # same-level hyperbolic pair still decaying at a tiny horizon
    body.write_text(
        json.dumps(
            {
                "generators": [
                    {"coords": [2.352409615243247, 2.1292794550948173, 0.0]},
                    {"coords": [2.352409615243247, -2.1292794550948173, 0.0]},
                ],
                "ideal": {"null_vector": [1.0, 0.0, 1.0]},
            }
        )
    )
    code = main(
        ["classify", "--space", "hyperbolic", "--dim", "2", "--input", str(body),
         "--horizon", "2"]
    )
    assert code == 2
    assert "unresolved" in capsys.readouterr().err


def test_exit_2_on_non_convergence_with_partial_trace(tri_file, tmp_path, capsys):
    out = tmp_path / "partial.json"
    code = main(
        ["barycenter", "--space", "euclidean", "--dim", "2", "--input", tri_file,
         "--max-iters", "0", "--output", str(out)]
    )
    assert code == 2
    doc = json.loads(out.read_text())
    assert doc["converged"] is False
    assert doc["diameter_trace"]


def test_env_seed_override(tri_file, tmp_path, monkeypatch):
    args = [
        "scan-shift", "--space", "euclidean", "--dim", "2", "--samples", "10",
    ]
    a, b, c = (tmp_path / name for name in ("a.json", "b.json", "c.json"))
    monkeypatch.setenv("HOROCENTER_SEED", "123")
    assert main(args + ["--output", str(a)]) == 0
    monkeypatch.setenv("HOROCENTER_SEED", "456")
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() != b.read_bytes()
    # explicit flag wins over the environment
    assert main(args + ["--seed", "123", "--output", str(c)]) == 0
    assert a.read_bytes() == c.read_bytes()
