"""Seeded perturbation scans estimating Lipschitz moduli.

Three scans share one sampling scheme: per-sample generators are derived
as seed xor sample-index, so reports are bit-identical across runs and
independent of execution order.

* point shift -- move one point of a weighted configuration by a geodesic
  step of size epsilon, ratio = center displacement / point displacement;
* mass change -- perturb one mass by a signed fraction of itself, ratio
  normalized by |delta| * diameter / total mass;
* selector -- perturb every generator of a body, ratio = selector
  displacement / generator-set Hausdorff distance.

Zero-denominator samples are counted, never turned into ratios, and
non-convergent samples are counted as failures and excluded from the
statistics.  The branch-straddle probe reproduces the selector's jump
discontinuity at a tree branch vertex and its repair by smoothing.

The generator-set Hausdorff distance stands in for the hull Hausdorff
distance: generator sets within h of each other have hulls within h, so
the proxy upper-bounds the hull distance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from . import spaces
from .barycenter import (
    Configuration,
    ConvergenceError,
    center_of_mass,
    config_diameter,
    replace_mass,
    replace_point,
)
from .horosphere import (
    ClassificationError,
    ConvexBody,
    SelectOptions,
    select,
)
from .spaces import GeometryError, IdealPoint, Space, TREE

DEFAULT_SCALE = 2.0
MASS_LOW, MASS_HIGH = 0.5, 2.0


@dataclass(frozen=True)
class ScanParams:
    space: Space
    n_points: int = 4
    samples: int = 100
    epsilon: float = 0.05
    seed: int = 0
    tol: float = 1e-8
    max_iters: int = 200
    smoothing: bool = True
    ideal: IdealPoint | None = None
    scale: float = DEFAULT_SCALE

    def validated(self) -> "ScanParams":
        if self.samples < 1:
            raise GeometryError(f"samples must be >= 1, got {self.samples}")
        if self.epsilon <= 0.0:
            raise GeometryError(f"epsilon must be positive, got {self.epsilon}")
        if self.n_points < 1:
            raise GeometryError(f"n_points must be >= 1, got {self.n_points}")
        return self


class ScanRecord(NamedTuple):
    sample: int
    in_disp: float
    out_disp: float
    ratio: float


@dataclass
class LipschitzReport:
    records: list[ScanRecord]
    max_ratio: float
    mean_ratio: float
    failures: int
    skipped: int
    straddle: list[float] | None = field(default=None)


def _finish(records, failures, skipped, straddle=None) -> LipschitzReport:
    ratios = [r.ratio for r in records]
    return LipschitzReport(
        records=records,
        max_ratio=max(ratios) if ratios else 0.0,
        mean_ratio=sum(ratios) / len(ratios) if ratios else 0.0,
        failures=failures,
        skipped=skipped,
        straddle=straddle,
    )


def hausdorff(space: Space, a: ConvexBody, b: ConvexBody) -> float:
    """Symmetric Hausdorff distance between finite generator sets."""

    def directed(src, dst):
        worst = 0.0
        for p in src:
            best = min(spaces.distance(space, p, q) for q in dst)
            if best > worst:
                worst = best
        return worst

    return max(directed(a.generators, b.generators), directed(b.generators, a.generators))


# -- per-sample draws (exposed so tests can re-derive every case) ------------


def draw_configuration(space: Space, rng, n_points: int, scale: float) -> Configuration:
    points = [spaces.draw_point(space, rng, scale) for _ in range(n_points)]
    masses = [float(m) for m in rng.uniform(MASS_LOW, MASS_HIGH, n_points)]
    return Configuration.of(space, zip(points, masses))


def shift_case(params: ScanParams, index: int):
    """Configuration, shifted index, and the shifted point for one sample."""
    rng = spaces.sub_rng(params.seed, index)
    config = draw_configuration(params.space, rng, params.n_points, params.scale)
    k = int(rng.integers(params.n_points))
    moved = spaces.random_shift(params.space, config.items[k].point, params.epsilon, rng)
    return config, k, moved


def mass_case(params: ScanParams, index: int):
    """Configuration, perturbed index, and the signed mass delta."""
    rng = spaces.sub_rng(params.seed, index)
    config = draw_configuration(params.space, rng, params.n_points, params.scale)
    k = int(rng.integers(params.n_points))
    mass = config.items[k].mass
    delta = params.epsilon * mass * float(rng.uniform(-1.0, 1.0))
    delta = max(delta, -0.9 * mass)  # keep the perturbed mass positive
    return config, k, delta


def body_case(params: ScanParams, index: int):
    """Body and its per-generator perturbation for one selector sample."""
    rng = spaces.sub_rng(params.seed, index)
    gens = [
        spaces.draw_point(params.space, rng, params.scale)
        for _ in range(params.n_points)
    ]
    body = ConvexBody.of(params.space, gens)
    perturbed = [
        spaces.random_shift(params.space, g, params.epsilon * float(rng.random()), rng)
        for g in body.generators
    ]
    return body, ConvexBody.of(params.space, perturbed)


# -- scans -------------------------------------------------------------------


def point_shift_scan(params: ScanParams) -> LipschitzReport:
    params = params.validated()
    if params.n_points < 2:
        raise GeometryError("point shift scan needs n_points >= 2")
    space = params.space
    records, failures, skipped = [], 0, 0
    for i in range(params.samples):
        config, k, moved = shift_case(params, i)
        in_disp = spaces.distance(space, config.items[k].point, moved)
        if in_disp == 0.0:
            skipped += 1
            continue
        try:
            before = center_of_mass(space, config, params.tol, params.max_iters).center
            after = center_of_mass(
                space, replace_point(config, k, moved), params.tol, params.max_iters
            ).center
        except ConvergenceError:
            failures += 1
            continue
        out_disp = spaces.distance(space, before, after)
        records.append(ScanRecord(i, in_disp, out_disp, out_disp / in_disp))
    return _finish(records, failures, skipped)


def mass_shift_scan(params: ScanParams) -> LipschitzReport:
    params = params.validated()
    if params.n_points < 2:
        raise GeometryError("mass shift scan needs n_points >= 2")
    space = params.space
    records, failures, skipped = [], 0, 0
    for i in range(params.samples):
        config, k, delta = mass_case(params, i)
        denom = abs(delta) * config_diameter(space, config) / config.total_mass
        if denom == 0.0:
            skipped += 1
            continue
        try:
            before = center_of_mass(space, config, params.tol, params.max_iters).center
            bumped = replace_mass(config, k, config.items[k].mass + delta)
            after = center_of_mass(space, bumped, params.tol, params.max_iters).center
        except ConvergenceError:
            failures += 1
            continue
        out_disp = spaces.distance(space, before, after)
        records.append(ScanRecord(i, denom, out_disp, out_disp / denom))
    return _finish(records, failures, skipped)


def selector_scan(params: ScanParams) -> LipschitzReport:
    params = params.validated()
    space = params.space
    xi = params.ideal
    if xi is None:
        raise GeometryError("selector scan needs an ideal point")
    spaces.validate_ideal(space, xi)
    opts = SelectOptions(
        tol=params.tol, max_iters=params.max_iters, smoothing=params.smoothing
    )
    records, failures, skipped = [], 0, 0
    for i in range(params.samples):
        body, perturbed = body_case(params, i)
        denom = hausdorff(space, body, perturbed)
        if denom == 0.0:
            skipped += 1
            continue
        try:
            out_disp = spaces.distance(
                space,
                select(space, body, xi, opts=opts),
                select(space, perturbed, xi, opts=opts),
            )
        except (ConvergenceError, ClassificationError):
            failures += 1
            continue
        records.append(ScanRecord(i, denom, out_disp, out_disp / denom))
    straddle = None
    if space.kind == TREE and not params.smoothing:
        straddle = branch_straddle_probe(
            space, xi, eps0=params.epsilon, smoothing=False
        )
    return _finish(records, failures, skipped, straddle)


# -- the singular-point family -------------------------------------------------


def branch_straddle_probe(
    space: Space,
    xi: IdealPoint,
    eps0: float | None = None,
    halvings: int = 4,
    contact_depth: float | None = None,
    smoothing: bool = False,
    snap_tol: float = SelectOptions.snap_tol,
    opts: SelectOptions | None = None,
) -> list[float]:
    """Selector ratios for a two-generator family straddling a branch vertex.

    Generators sit on two distinct branches below the first branch vertex
    at depths contact_depth -/+ delta; the paired body swaps the signs.
    The contact generator flips between branches while the bodies differ
    by 2*delta, so without smoothing the ratio grows like 1/delta as
    delta halves.  With smoothing both outputs clamp to the vertex
    (depths sit inside the snap band) and the jump disappears.
    """
    if space.kind != TREE:
        raise GeometryError("the straddle probe is tree-specific")
    tree = space.tree
    if xi is None or xi.leaf is None:
        raise GeometryError("the straddle probe needs a marked-end ideal point")
    if not tree.branch_vertices:
        raise GeometryError("tree has no branch vertex to straddle")
    vertex = tree.branch_vertices[0]
    anchor = tree.leaf_edge(xi.leaf)
    toward_end = tree.vertex_path(vertex, xi.leaf)[0] if vertex != xi.leaf else anchor.index
    branches = [ei for _, ei in tree.adjacency[vertex] if ei != toward_end][:2]
    if len(branches) < 2:
        raise GeometryError(f"vertex {vertex!r} lacks two branches off the end")
    if contact_depth is None:
        contact_depth = 0.5 * snap_tol
    if eps0 is None or eps0 >= contact_depth:
        eps0 = 0.5 * contact_depth
    limit = min(tree.edges[ei].length for ei in branches)
    if contact_depth + eps0 >= limit:
        raise GeometryError("branch edges too short for the straddle family")
    opts = opts or SelectOptions(smoothing=smoothing, snap_tol=snap_tol)

    def family(delta: float):
        lo = ConvexBody.of(
            space,
            [
                tree.point_toward(vertex, branches[0], contact_depth - delta),
                tree.point_toward(vertex, branches[1], contact_depth + delta),
            ],
        )
        hi = ConvexBody.of(
            space,
            [
                tree.point_toward(vertex, branches[0], contact_depth + delta),
                tree.point_toward(vertex, branches[1], contact_depth - delta),
            ],
        )
        return lo, hi

    ratios = []
    delta = eps0
    for _ in range(halvings + 1):
        lo, hi = family(delta)
        gap = spaces.distance(
            space, select(space, lo, xi, opts=opts), select(space, hi, xi, opts=opts)
        )
        ratios.append(gap / hausdorff(space, lo, hi))
        delta *= 0.5
    return ratios
