"""Horofunction sweeps, the limit pseudometric, and the selector.

A convex body is represented by its finite generator set; diameters and
sweeps reduce to generator-level computations (the hull diameter equals
the max pairwise generator distance, so hulls never need materializing).

The selector maps a body to a point through a fixed pipeline: find the
first horosphere touching the generators, project everything onto it,
decide whether the projected set shrinks along rays to the ideal point,
then either return the contact point (shrinking) or the unit-mass center
of the projected generators (non-shrinking), and finally smooth the
output across tree branch vertices.  Singletons short-circuit, so
select({x}) == x holds exactly.

Classification targets sets on a common horosphere (the projected stage
of the pipeline): pairs at different horofunction levels keep at least
their level gap along the rays and never shrink to a point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from . import spaces
from .barycenter import (
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    center_of_mass,
    unit_configuration,
)
from .spaces import GeometryError, IdealPoint, Space, TREE

SHRINKING = "shrinking"
NON_SHRINKING = "non-shrinking"

DEFAULT_HORIZON = 64.0
DEFAULT_CLASSIFY_TOL = 1e-6
DEFAULT_SNAP_TOL = 1e-4
CONTACT_SLACK = 1e-9
MONOTONE_SLACK = 1e-9


class ClassificationError(RuntimeError):
    """A pairwise separation limit did not resolve within the horizon."""


@dataclass(frozen=True)
class ConvexBody:
    """Convex hull of finitely many generators, stored as the generators."""

    generators: tuple

    @classmethod
    def of(cls, space: Space, points) -> "ConvexBody":
        canon = [spaces.canonical_point(space, p) for p in points]
        if not canon:
            raise GeometryError("a body needs at least one generator")
        seen, unique = set(), []
        for p in canon:
            if p not in seen:
                seen.add(p)
                unique.append(p)
        return cls(tuple(unique))

    def __len__(self) -> int:
        return len(self.generators)


def body_diameter(space: Space, body: ConvexBody) -> float:
    gens = body.generators
    best = 0.0
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            d = spaces.distance(space, gens[i], gens[j])
            if d > best:
                best = d
    return best


@dataclass(frozen=True)
class HorosphereLevel:
    ideal: IdealPoint
    level: float
    basepoint: object


@dataclass(frozen=True)
class ShrinkClass:
    verdict: str
    max_limit_separation: float
    probe_horizon: float


class LimitSeparation(NamedTuple):
    value: float
    resolved: bool


@dataclass(frozen=True)
class SelectOptions:
    tol: float = DEFAULT_TOL
    max_iters: int = DEFAULT_MAX_ITERS
    horizon: float = DEFAULT_HORIZON
    classify_tol: float = DEFAULT_CLASSIFY_TOL
    snap_tol: float = DEFAULT_SNAP_TOL
    smoothing: bool = True


def first_horosphere(space: Space, body: ConvexBody, xi: IdealPoint, o):
    """First expanding horoball level that meets the generator set.

    Returns the touching level and the generators achieving it (ties
    within a small absolute slack all count as contact).
    """
    spaces.validate_ideal(space, xi, o)
    levels = [spaces.busemann(space, xi, o, g) for g in body.generators]
    t_star = min(levels)
    contact = [
        g for g, b in zip(body.generators, levels) if b <= t_star + CONTACT_SLACK
    ]
    return HorosphereLevel(xi, t_star, o), contact


def project_to_level(space: Space, x, xi: IdealPoint, o, t: float):
    """Move x along its ray toward xi down to horofunction level t."""
    level = spaces.busemann(space, xi, o, x)
    if t > level + CONTACT_SLACK:
        raise GeometryError(
            f"target level {t} is above the point's level {level}; "
            "projection only moves toward the ideal point"
        )
    return spaces.ray_point(space, x, xi, max(level - t, 0.0))


def probe_schedule(horizon: float) -> list[float]:
    if horizon <= 0.0:
        raise GeometryError(f"horizon must be positive, got {horizon}")
    probes = []
    s = 1.0
    while s < horizon:
        probes.append(s)
        s *= 2.0
    probes.append(float(horizon))
    return probes


def limit_separation(
    space: Space,
    x,
    y,
    xi: IdealPoint,
    horizon: float = DEFAULT_HORIZON,
    tol: float = DEFAULT_CLASSIFY_TOL,
) -> LimitSeparation:
    """Separation of the rays from x and y toward xi, probed geometrically.

    The probe sequence is nonincreasing (distance between asymptotic rays
    is convex and bounded, hence nonincreasing); a violation beyond slack
    signals a geometry bug and raises.  Resolution means the last value
    dropped below tol, or two successive probes agreed to within tol.
    """
    if tol <= 0.0:
        raise GeometryError(f"tol must be positive, got {tol}")
    spaces.validate_ideal(space, xi)
    previous = None
    value = spaces.distance(space, x, y)
    resolved = value < tol
    for s in probe_schedule(horizon):
        probe = spaces.ray_separation(space, x, y, xi, s)
        if probe > value + MONOTONE_SLACK:
            raise GeometryError(
                f"ray separation increased from {value} to {probe} at s={s}"
            )
        previous, value = value, probe
        if value < tol or abs(previous - value) < tol:
            resolved = True
    return LimitSeparation(value, resolved)


def classify_body(
    space: Space,
    body: ConvexBody,
    xi: IdealPoint,
    horizon: float = DEFAULT_HORIZON,
    tol: float = DEFAULT_CLASSIFY_TOL,
) -> ShrinkClass:
    """Shrinking iff every generator pair's limit separation is below tol."""
    gens = body.generators
    worst = 0.0
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            sep = limit_separation(space, gens[i], gens[j], xi, horizon, tol)
            if not sep.resolved:
                raise ClassificationError(
                    f"pair ({i}, {j}) unresolved at horizon {horizon}; "
                    "raise the horizon"
                )
            if sep.value > worst:
                worst = sep.value
    verdict = SHRINKING if worst < tol else NON_SHRINKING
    return ShrinkClass(verdict, worst, float(horizon))


def snap_singular(space: Space, x, snap_tol: float = DEFAULT_SNAP_TOL):
    """Clamp tree points near a branch vertex onto it; identity elsewhere.

    Branch vertices are the tree's singular points; clamping makes the
    selector locally constant around them, trading a jump discontinuity
    for a flat spot.  Smooth spaces have no singular points.
    """
    if snap_tol <= 0.0:
        raise GeometryError(f"snap_tol must be positive, got {snap_tol}")
    if space.kind != TREE:
        return x
    vertex, d = space.tree.nearest_branch_vertex(x)
    if vertex is not None and d <= snap_tol:
        return space.tree.vertex_point(vertex)
    return x


def select(
    space: Space,
    body: ConvexBody,
    xi: IdealPoint,
    o=None,
    opts: SelectOptions | None = None,
):
    """Map a convex body to a point of the space.

    Pipeline: first touching horosphere, projection of all generators to
    it, shrink classification of the projected set, then the contact
    point (shrinking; ties are merged into their unit-mass center) or the
    unit-mass center of the projected generators (non-shrinking).  The
    result is smoothed across branch vertices unless smoothing is off.
    """
    opts = opts or SelectOptions()
    o = spaces.basepoint(space) if o is None else o
    if len(body) == 1:
        return body.generators[0]
    level, contact = first_horosphere(space, body, xi, o)
    projected = [
        project_to_level(space, g, xi, o, level.level) for g in body.generators
    ]
    verdict = classify_body(
        space, ConvexBody.of(space, projected), xi, opts.horizon, opts.classify_tol
    )
    if verdict.verdict == SHRINKING:
        if len(contact) == 1:
            picked = contact[0]
        else:
            picked = center_of_mass(
                space,
                unit_configuration(space, contact),
                opts.tol,
                opts.max_iters,
                max_points=max(len(contact), 7),
            ).center
    else:
        picked = center_of_mass(
            space,
            unit_configuration(space, projected),
            opts.tol,
            opts.max_iters,
            max_points=max(len(projected), 7),
        ).center
    if opts.smoothing:
        picked = snap_singular(space, picked, opts.snap_tol)
    return picked
