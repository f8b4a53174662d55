"""Command line front end.

Subcommands: barycenter, select, classify, scan-shift, scan-mass,
scan-selector.  Structured results are emitted as JSON; traces and scan
records can be emitted as CSV.  Exit codes: 0 success, 1 input error,
2 non-convergence or unresolved classification (the partial artifact is
still written).

All randomness flows from --seed; the HOROCENTER_SEED environment
variable overrides the default when the flag is absent.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import jsonio
from .barycenter import ConvergenceError, center_of_mass
from .horosphere import (
    ClassificationError,
    SelectOptions,
    classify_body,
    select,
)
from .jsonio import InputError
from .lipschitz import (
    ScanParams,
    mass_shift_scan,
    point_shift_scan,
    selector_scan,
)
from .spaces import EUCLIDEAN, HYPERBOLIC, TREE, GeometryError, IdealPoint, Space

ENV_SEED = "HOROCENTER_SEED"


def _default_seed() -> int:
    raw = os.environ.get(ENV_SEED)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{ENV_SEED}: expected an integer, got {raw!r}") from None


def _add_space_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--space", choices=[EUCLIDEAN, HYPERBOLIC, TREE], help="model space kind"
    )
    parser.add_argument("--dim", type=int, help="dimension (euclidean/hyperbolic)")
    parser.add_argument("--space-json", help="path to a space description document")


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--output", help="output path (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horocenter",
        description="Weighted centers, horosphere selectors and Lipschitz scans "
        "in three model Hadamard spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("barycenter", help="iterative center of a weighted point set")
    _add_space_flags(p)
    p.add_argument("--input", required=True, help="configuration document")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iters", type=int, default=200)
    p.add_argument("--max-points", type=int, default=7)
    _add_output_flags(p)

    p = sub.add_parser("select", help="map a convex body to a point")
    _add_space_flags(p)
    p.add_argument("--input", required=True, help="body document (may carry 'ideal')")
    p.add_argument("--ideal", help="inline ideal-point JSON (overrides the document)")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iters", type=int, default=200)
    p.add_argument("--horizon", type=float, default=64.0)
    p.add_argument("--classify-tol", type=float, default=1e-6)
    p.add_argument("--snap-tol", type=float, default=1e-4)
    p.add_argument("--no-smoothing", action="store_true")
    _add_output_flags(p)

    p = sub.add_parser("classify", help="shrinking / non-shrinking verdict for a body")
    _add_space_flags(p)
    p.add_argument("--input", required=True)
    p.add_argument("--ideal", help="inline ideal-point JSON (overrides the document)")
    p.add_argument("--horizon", type=float, default=64.0)
    p.add_argument("--classify-tol", type=float, default=1e-6)
    _add_output_flags(p)

    for name, blurb in (
        ("scan-shift", "Lipschitz scan: shift one point"),
        ("scan-mass", "Lipschitz scan: change one mass"),
        ("scan-selector", "Lipschitz scan: perturb a convex body"),
    ):
        p = sub.add_parser(name, help=blurb)
        _add_space_flags(p)
        p.add_argument("--n-points", type=int, default=4)
        p.add_argument("--samples", type=int, default=100)
        p.add_argument("--epsilon", type=float, default=0.05)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--scale", type=float, default=2.0)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--max-iters", type=int, default=200)
        if name == "scan-selector":
            p.add_argument("--ideal", help="inline ideal-point JSON")
            p.add_argument("--no-smoothing", action="store_true")
        _add_output_flags(p)

    return parser


# -- input assembly ------------------------------------------------------------


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _resolve_space(args) -> Space:
    if args.space_json:
        return jsonio.space_from_json(jsonio.loads(_read_file(args.space_json), "space"))
    if not args.space:
        raise InputError("space: pass --space or --space-json")
    if args.space == TREE:
        raise InputError("space: tree spaces need --space-json")
    if args.dim is None:
        raise InputError("space.dim: pass --dim for euclidean/hyperbolic")
    try:
        return Space.euclidean(args.dim) if args.space == EUCLIDEAN else Space.hyperbolic(args.dim)
    except GeometryError as exc:
        raise InputError(f"space: {exc}") from None


def _resolve_ideal(space: Space, args, doc=None) -> IdealPoint:
    if getattr(args, "ideal", None):
        return jsonio.ideal_from_json(space, jsonio.loads(args.ideal, "ideal"), "ideal")
    if doc is not None and "ideal" in doc:
        return jsonio.ideal_from_json(space, doc["ideal"], "ideal")
    # sensible defaults so quick runs need no boilerplate
    if space.kind == EUCLIDEAN:
        return IdealPoint.direction((1.0,) + (0.0,) * (space.dim - 1))
    if space.kind == HYPERBOLIC:
        return IdealPoint.null_vector((1.0, 1.0) + (0.0,) * (space.dim - 1))
    leaves = sorted(space.tree.ideal_leaves)
    if not leaves:
        raise InputError("ideal: tree has no marked leaves; pass --ideal")
    return IdealPoint.end(leaves[0])


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


# -- subcommand bodies -----------------------------------------------------------


def _run_barycenter(args) -> int:
    space = _resolve_space(args)
    config = jsonio.configuration_from_json(
        space, jsonio.loads(_read_file(args.input), "configuration")
    )
    status = 0
    try:
        result = center_of_mass(space, config, args.tol, args.max_iters, args.max_points)
    except ConvergenceError as exc:
        result, status = exc.result, 2
        print(f"barycenter: {exc}", file=sys.stderr)
    if args.format == "csv":
        _emit(jsonio.trace_csv(result), args.output)
    else:
        _emit(jsonio.dumps(jsonio.result_to_json(space, result)), args.output)
    return status


def _run_select(args) -> int:
    space = _resolve_space(args)
    doc = jsonio.loads(_read_file(args.input), "body")
    body = jsonio.body_from_json(space, doc)
    xi = _resolve_ideal(space, args, doc)
    opts = SelectOptions(
        tol=args.tol,
        max_iters=args.max_iters,
        horizon=args.horizon,
        classify_tol=args.classify_tol,
        snap_tol=args.snap_tol,
        smoothing=not args.no_smoothing,
    )
    try:
        point = select(space, body, xi, opts=opts)
    except (ConvergenceError, ClassificationError) as exc:
        print(f"select: {exc}", file=sys.stderr)
        return 2
    _emit(jsonio.dumps({"point": jsonio.point_to_json(space, point)}), args.output)
    return 0


def _run_classify(args) -> int:
    space = _resolve_space(args)
    doc = jsonio.loads(_read_file(args.input), "body")
    body = jsonio.body_from_json(space, doc)
    xi = _resolve_ideal(space, args, doc)
    try:
        shrink = classify_body(space, body, xi, args.horizon, args.classify_tol)
    except ClassificationError as exc:
        print(f"classify: {exc}", file=sys.stderr)
        return 2
    _emit(
        jsonio.dumps(
            {
                "verdict": shrink.verdict,
                "max_limit_separation": shrink.max_limit_separation,
                "probe_horizon": shrink.probe_horizon,
            }
        ),
        args.output,
    )
    return 0


def _run_scan(args, kind: str) -> int:
    space = _resolve_space(args)
    seed = args.seed if args.seed is not None else _default_seed()
    ideal = None
    smoothing = True
    if kind == "selector":
        ideal = _resolve_ideal(space, args)
        smoothing = not args.no_smoothing
    params = ScanParams(
        space=space,
        n_points=args.n_points,
        samples=args.samples,
        epsilon=args.epsilon,
        seed=seed,
        tol=args.tol,
        max_iters=args.max_iters,
        smoothing=smoothing,
        ideal=ideal,
        scale=args.scale,
    )
    try:
        if kind == "shift":
            report = point_shift_scan(params)
        elif kind == "mass":
            report = mass_shift_scan(params)
        else:
            report = selector_scan(params)
    except GeometryError as exc:
        raise InputError(f"scan: {exc}") from None
    if args.format == "csv":
        _emit(jsonio.report_csv(report), args.output)
    else:
        _emit(jsonio.dumps(jsonio.report_to_json(report)), args.output)
    if args.output is not None:
        print(
            f"max_ratio={report.max_ratio!r} mean_ratio={report.mean_ratio!r} "
            f"failures={report.failures} skipped={report.skipped}"
        )
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "barycenter":
            return _run_barycenter(args)
        if args.command == "select":
            return _run_select(args)
        if args.command == "classify":
            return _run_classify(args)
        return _run_scan(args, args.command.removeprefix("scan-"))
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
