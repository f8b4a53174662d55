"""Three model Hadamard spaces behind one functional interface.

Every operation takes a :class:`Space` descriptor first and dispatches on
its kind:

* ``euclidean`` -- R^n, points are coordinate tuples.
* ``hyperbolic`` -- the hyperboloid sheet {<x,x> = -1, x0 > 0} in
  (n+1)-dimensional Minkowski space with signature (-,+,...,+).  Geodesics
  and rays have sinh/cosh closed forms; interpolation results are
  re-projected onto the sheet, which keeps the constraint residual near
  rounding level throughout the desk-scale working region (points within
  distance ~10 of the basepoint).
* ``tree`` -- a finite metric tree with marked ends (see ``trees``).

Ideal points are unit directions (euclidean), future-pointing null
vectors normalized against the basepoint (hyperbolic), or marked leaf
ids (tree).  Horofunction levels follow the convention b(o) = 0 with b
decreasing at unit rate along rays toward the ideal point, so horoballs
{b <= t} expand as t grows.

Hyperbolic closed forms used below:

* distance(x, y) = 2 asinh(sqrt(<x-y, x-y>)/2), which is exact for nearby
  points where acosh(-<x,y>) loses half the significand;
* ray(x, xi, s) = exp(-s) x + sinh(s) xi / alpha with alpha = -<x, xi>,
  which lies on the sheet identically in exact arithmetic;
* separation of two rays toward the same end,
  cosh d(s) - 1 = 2 sinh^2(g/2) + 2 (sinh^2(d0/2) - sinh^2(g/2)) e^{-2s}
  with g the horofunction gap b(x) - b(y) and d0 = distance(x, y).  The
  naive route (interpolate far ray points, then measure) cancels
  catastrophically past s ~ 8; this form is stable for every s.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError
from .trees import Tree, TreePoint

EUCLIDEAN = "euclidean"
HYPERBOLIC = "hyperbolic"
TREE = "tree"

HYPERBOLOID_TOL = 1e-9
IDEAL_TOL = 1e-9

_SEED_MASK = 0x7FFF_FFFF_FFFF_FFFF


@dataclass(frozen=True)
class Space:
    """Descriptor for one of the three model spaces."""

    kind: str
    dim: int = 0
    tree: Tree | None = None

    @classmethod
    def euclidean(cls, dim: int) -> "Space":
        if dim < 1:
            raise GeometryError(f"dim must be >= 1, got {dim}")
        return cls(EUCLIDEAN, dim)

    @classmethod
    def hyperbolic(cls, dim: int) -> "Space":
        if dim < 1:
            raise GeometryError(f"dim must be >= 1, got {dim}")
        return cls(HYPERBOLIC, dim)

    @classmethod
    def tree_space(cls, edges, ideal_leaves=(), basepoint=None) -> "Space":
        return cls(TREE, 0, Tree(edges, ideal_leaves, basepoint))


@dataclass(frozen=True)
class IdealPoint:
    """Boundary point: a direction, a null vector, or a marked leaf id."""

    vector: tuple[float, ...] | None = None
    leaf: str | None = None

    @classmethod
    def direction(cls, components) -> "IdealPoint":
        vec = tuple(float(c) for c in components)
        norm = math.sqrt(sum(c * c for c in vec))
        if norm == 0.0:
            raise GeometryError("direction must be nonzero")
        return cls(vector=tuple(c / norm for c in vec))

    @classmethod
    def null_vector(cls, components) -> "IdealPoint":
        vec, _ = _polish_null([float(c) for c in components])
        return cls(vector=vec)

    @classmethod
    def end(cls, leaf: str) -> "IdealPoint":
        return cls(leaf=str(leaf))


def basepoint(space: Space):
    if space.kind == EUCLIDEAN:
        return (0.0,) * space.dim
    if space.kind == HYPERBOLIC:
        return (1.0,) + (0.0,) * space.dim
    return space.tree.basepoint


# -- point validation ------------------------------------------------------


def _mink(x, y) -> float:
    s = -x[0] * y[0]
    for i in range(1, len(x)):
        s += x[i] * y[i]
    return s


_SPLIT = 134217729.0  # 2**27 + 1, Dekker's splitter


def _two_product(a: float, b: float):
    """Error-free product: returns (fl(a*b), rounding remainder)."""
    p = a * b
    c = _SPLIT * a
    ahi = c - (c - a)
    alo = a - ahi
    c = _SPLIT * b
    bhi = c - (c - b)
    blo = b - bhi
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


def _mink_exact(x, y) -> float:
    """Minkowski product via exact products and exact summation.

    The horofunction level of a far ray point comes from a cancellation
    of order exp(2s); plain double products waste half the achievable
    accuracy there, and this path recovers it.
    """
    terms = []
    p, e = _two_product(x[0], y[0])
    terms.append(-p)
    terms.append(-e)
    for i in range(1, len(x)):
        p, e = _two_product(x[i], y[i])
        terms.append(p)
        terms.append(e)
    return math.fsum(terms)


def _ulp_steps(x: float, k: int) -> float:
    target = math.inf if k > 0 else -math.inf
    for _ in range(abs(k)):
        x = math.nextafter(x, target)
    return x


def _polish_null(vec, window: int = 8, good: float = 1e-18):
    """Nudge spatial components by ulps to minimize the null defect.

    A null vector's defect after ordinary normalization is ~1e-16, which
    rays amplify by exp(2s); pairs of one-ulp nudges interpolate the
    defect down to ~1e-18 because their step sizes are incommensurate.
    """
    vec = list(vec)
    best_defect = abs(_mink_exact(vec, vec))
    best = tuple(vec)
    if best_defect < good:
        return best, best_defect
    for i, j in itertools.combinations(range(1, len(vec)), 2):
        bi, bj = vec[i], vec[j]
        for ki in range(-window, window + 1):
            vec[i] = _ulp_steps(bi, ki)
            for kj in range(-window, window + 1):
                vec[j] = _ulp_steps(bj, kj)
                d = abs(_mink_exact(vec, vec))
                if d < best_defect:
                    best_defect, best = d, tuple(vec)
                    if d < good:
                        return best, best_defect
        vec[i], vec[j] = bi, bj
    return best, best_defect


def _project_hyperboloid(x):
    n2 = -_mink(x, x)
    if n2 <= 0.0:
        raise GeometryError("vector is not timelike, cannot project to hyperboloid")
    r = 1.0 / math.sqrt(n2)
    if x[0] < 0.0:
        r = -r
    return tuple(c * r for c in x)


def validate_point(space: Space, p) -> None:
    if space.kind == TREE:
        if not isinstance(p, TreePoint):
            raise GeometryError(f"tree space expects TreePoint, got {type(p).__name__}")
        space.tree.validate(p)
        return
    if not isinstance(p, tuple) or not all(isinstance(c, float) for c in p):
        raise GeometryError("point must be a tuple of floats")
    if space.kind == EUCLIDEAN:
        if len(p) != space.dim:
            raise GeometryError(f"expected {space.dim} coordinates, got {len(p)}")
        return
    if len(p) != space.dim + 1:
        raise GeometryError(f"expected {space.dim + 1} coordinates, got {len(p)}")
    if p[0] <= 0.0:
        raise GeometryError("hyperboloid point must have positive first coordinate")
    if abs(_mink(p, p) + 1.0) > HYPERBOLOID_TOL:
        raise GeometryError(f"point is off the hyperboloid: <x,x> = {_mink(p, p)}")


def canonical_point(space: Space, p):
    validate_point(space, p)
    if space.kind == TREE:
        return space.tree.canonical(p)
    return tuple(float(c) for c in p)


def validate_ideal(space: Space, xi: IdealPoint, o=None) -> None:
    if space.kind == TREE:
        if xi.leaf is None:
            raise GeometryError("tree ideal point must name a marked leaf")
        space.tree.leaf_edge(xi.leaf)
        return
    if xi.vector is None:
        raise GeometryError(f"{space.kind} ideal point needs a vector")
    v = xi.vector
    if space.kind == EUCLIDEAN:
        if len(v) != space.dim:
            raise GeometryError(f"expected {space.dim} components, got {len(v)}")
        norm = math.sqrt(sum(c * c for c in v))
        if abs(norm - 1.0) > 1e-12:
            raise GeometryError(f"direction must be unit, |u| = {norm}")
        return
    if len(v) != space.dim + 1:
        raise GeometryError(f"expected {space.dim + 1} components, got {len(v)}")
    if abs(_mink(v, v)) > IDEAL_TOL:
        raise GeometryError(f"ideal vector must be null, <xi,xi> = {_mink(v, v)}")
    if v[0] <= 0.0:
        raise GeometryError("ideal vector must be future pointing")
    base = basepoint(space) if o is None else o
    if abs(_mink(base, v) + 1.0) > IDEAL_TOL:
        raise GeometryError(
            f"ideal vector not normalized against basepoint, <o,xi> = {_mink(base, v)}"
        )


def normalize_ideal(space: Space, xi: IdealPoint, o=None) -> IdealPoint:
    """Rescale a hyperbolic null vector so <o, xi> = -1; no-op otherwise."""
    if space.kind != HYPERBOLIC or xi.vector is None:
        return xi
    base = basepoint(space) if o is None else o
    prod = _mink(base, xi.vector)
    if prod >= 0.0:
        raise GeometryError("ideal vector points away from the sheet")
    vec, _ = _polish_null([c / -prod for c in xi.vector])
    return IdealPoint(vector=vec)


# -- metric and geodesics ---------------------------------------------------


def distance(space: Space, x, y) -> float:
    """Geodesic distance.  Arity is checked here; deeper point validity
    (on-sheet, offsets in range) is enforced where points enter the
    system, via canonical_point in the aggregate constructors."""
    if space.kind == EUCLIDEAN:
        return math.dist(x, y)
    if space.kind == HYPERBOLIC:
        if len(x) != space.dim + 1 or len(y) != space.dim + 1:
            raise GeometryError(
                f"expected {space.dim + 1} coordinates, got {len(x)} and {len(y)}"
            )
        delta = tuple(a - b for a, b in zip(x, y))
        q = _mink(delta, delta)
        if q <= 0.0:
            return 0.0
        return 2.0 * math.asinh(0.5 * math.sqrt(q))
    return space.tree.distance(x, y)


def geodesic_point(space: Space, x, y, t: float):
    """Point at arclength fraction t in [0, 1] from x toward y."""
    if not 0.0 <= t <= 1.0:
        raise GeometryError(f"geodesic parameter must lie in [0, 1], got {t}")
    if t == 0.0:
        return x
    if t == 1.0:
        return y
    if space.kind == EUCLIDEAN:
        return tuple(a + t * (b - a) for a, b in zip(x, y))
    if space.kind == HYPERBOLIC:
        d = distance(space, x, y)
        if d < 1e-14:
            return x
        # unit tangent at x toward y, written to avoid cancellation for small d
        cm1 = 2.0 * math.sinh(0.5 * d) ** 2
        sh = math.sinh(d)
        tan = tuple(((b - a) - cm1 * a) / sh for a, b in zip(x, y))
        c, s = math.cosh(t * d), math.sinh(t * d)
        return _project_hyperboloid(tuple(c * a + s * w for a, w in zip(x, tan)))
    tree = space.tree
    d = tree.distance(x, y)
    if d == 0.0:
        return x
    return tree.walk(x, y, t * d)


def ray_point(space: Space, x, xi: IdealPoint, s: float):
    """Unit-speed point at arclength s >= 0 along the ray from x toward xi."""
    if s < 0.0:
        raise GeometryError(f"ray parameter must be nonnegative, got {s}")
    if s == 0.0:
        return x
    if space.kind == EUCLIDEAN:
        return tuple(a + s * u for a, u in zip(x, xi.vector))
    if space.kind == HYPERBOLIC:
        alpha = -_mink_exact(x, xi.vector)
        if alpha <= 0.0:
            raise GeometryError("ideal vector points away from the sheet")
        # Assemble exp(-s) x + sinh(s) xi/alpha (on the sheet identically)
        # in extended precision: the xi spine grows like exp(s) and would
        # otherwise absorb the low bits that carry the transverse part.
        ls = np.longdouble(-s)
        decay = np.exp(ls)
        grow = np.sinh(-ls) / np.longdouble(alpha)
        comps = [
            decay * np.longdouble(a) + grow * np.longdouble(n)
            for a, n in zip(x, xi.vector)
        ]
        n2 = comps[0] * comps[0]
        for c in comps[1:]:
            n2 = n2 - c * c
        # Renormalize while the measured norm is trustworthy; past the
        # window the cancellation noise exceeds the signal even in
        # extended precision and the symbolic form is the best available.
        if 0.5 < float(n2) < 2.0:
            root = np.sqrt(n2)
            comps = [c / root for c in comps]
        if s >= 5.0 and len(comps) <= 8:
            target = float(np.longdouble(alpha) * np.exp(ls))
            return _round_minimizing_level(comps, xi.vector, target)
        return tuple(float(c) for c in comps)
    return space.tree.ray(x, xi.leaf, s)


def _round_minimizing_level(comps, xi_vec, target: float) -> tuple[float, ...]:
    """Round extended-precision components to doubles, choosing per-component
    directions that best preserve -<r, xi> = target.

    Far along a ray the per-component rounding granularity exceeds the
    horofunction residual being represented, so the nearest rounding is
    not the best one; every candidate stays within one ulp of the true
    point, leaving all metric identities untouched.
    """
    nearest = [float(c) for c in comps]
    alts = [
        math.nextafter(n, math.inf if float(c) < c else -math.inf)
        for n, c in zip(nearest, comps)
    ]
    best, best_score = None, math.inf
    for mask in range(1 << len(nearest)):
        cand = tuple(
            alts[i] if mask >> i & 1 else nearest[i] for i in range(len(nearest))
        )
        score = abs(_mink_exact(cand, xi_vec) + target)
        if score < best_score:
            best, best_score = cand, score
    return best


def busemann(space: Space, xi: IdealPoint, o, x) -> float:
    """Horofunction level of x: 0 at o, decreasing at unit rate toward xi."""
    if space.kind == EUCLIDEAN:
        return -sum((a - b) * u for a, b, u in zip(x, o, xi.vector))
    if space.kind == HYPERBOLIC:
        alpha = -_mink_exact(x, xi.vector)
        if alpha <= 0.0:
            raise GeometryError("ideal vector points away from the sheet")
        beta = -_mink_exact(o, xi.vector)
        return math.log(alpha) - math.log(beta)
    tree = space.tree
    return tree.depth_toward_end(x, xi.leaf) - tree.depth_toward_end(o, xi.leaf)


def ray_separation(space: Space, x, y, xi: IdealPoint, s: float) -> float:
    """distance(ray(x, xi, s), ray(y, xi, s)), computed stably per space."""
    if space.kind == EUCLIDEAN:
        return distance(space, x, y)  # parallel rays keep their separation
    if space.kind == HYPERBOLIC:
        d0 = distance(space, x, y)
        alpha = -_mink(x, xi.vector)
        beta = -_mink(y, xi.vector)
        if alpha <= 0.0 or beta <= 0.0:
            raise GeometryError("ideal vector points away from the sheet")
        gap = math.log(alpha) - math.log(beta)
        a2 = math.sinh(0.5 * d0) ** 2
        g2 = math.sinh(0.5 * gap) ** 2
        cm1 = 2.0 * (g2 + (a2 - g2) * math.exp(-2.0 * s))
        if cm1 <= 0.0:
            return 0.0
        return 2.0 * math.asinh(math.sqrt(0.5 * cm1))
    return space.tree.distance(space.tree.ray(x, xi.leaf, s), space.tree.ray(y, xi.leaf, s))


# -- seeded generation -------------------------------------------------------


def sub_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Per-sample generator; xor keeps parallel and sequential runs equal."""
    return np.random.default_rng((int(seed) ^ int(index)) & _SEED_MASK)


def draw_point(space: Space, rng: np.random.Generator, scale: float):
    """One point within distance `scale` of the basepoint."""
    if scale <= 0.0:
        raise GeometryError(f"scale must be positive, got {scale}")
    if space.kind == EUCLIDEAN:
        direction = _unit_gauss(rng, space.dim)
        r = scale * float(rng.random())
        return tuple(r * u for u in direction)
    if space.kind == HYPERBOLIC:
        direction = _unit_gauss(rng, space.dim)
        r = scale * float(rng.random())
        c, s = math.cosh(r), math.sinh(r)
        return _project_hyperboloid((c,) + tuple(s * u for u in direction))
    tree = space.tree
    target = tree.random_physical_point(rng)
    d = tree.distance(tree.basepoint, target)
    if d <= scale:
        return target
    return tree.walk(tree.basepoint, target, scale * float(rng.random()))


def random_point(space: Space, seed: int, scale: float):
    return draw_point(space, sub_rng(seed), scale)


def draw_ideal(space: Space, rng: np.random.Generator) -> IdealPoint:
    if space.kind == EUCLIDEAN:
        return IdealPoint(vector=_unit_gauss(rng, space.dim))
    if space.kind == HYPERBOLIC:
        # redraw until the null defect polishes out; a residual defect is
        # amplified by exp(2s) along rays, so near-exact nullity matters
        best, best_defect = None, math.inf
        for _ in range(20):
            vec, defect = _polish_null((1.0,) + _unit_gauss(rng, space.dim))
            if defect < best_defect:
                best, best_defect = vec, defect
            if best_defect < 1e-18:
                break
        return IdealPoint(vector=best)
    leaves = sorted(space.tree.ideal_leaves)
    if not leaves:
        raise GeometryError("tree has no marked ideal leaves")
    return IdealPoint(leaf=leaves[int(rng.integers(len(leaves)))])


def random_shift(space: Space, x, step: float, rng: np.random.Generator):
    """Geodesic exponential step of size `step` in a random direction."""
    if step < 0.0:
        raise GeometryError(f"step must be nonnegative, got {step}")
    if step == 0.0:
        return x
    if space.kind == EUCLIDEAN:
        direction = _unit_gauss(rng, space.dim)
        return tuple(a + step * u for a, u in zip(x, direction))
    if space.kind == HYPERBOLIC:
        while True:
            g = tuple(float(c) for c in rng.normal(size=space.dim + 1))
            gx = _mink(g, x)
            tangent = tuple(gi + gx * a for gi, a in zip(g, x))
            norm2 = _mink(tangent, tangent)
            if norm2 > 1e-12:
                break
        norm = math.sqrt(norm2)
        tangent = tuple(w / norm for w in tangent)
        c, s = math.cosh(step), math.sinh(step)
        return _project_hyperboloid(tuple(c * a + s * w for a, w in zip(x, tangent)))
    return space.tree.random_walk_shift(x, step, rng)


def _unit_gauss(rng: np.random.Generator, dim: int) -> tuple[float, ...]:
    while True:
        g = rng.normal(size=dim)
        norm = float(np.linalg.norm(g))
        if norm > 1e-12:
            return tuple(float(c / norm) for c in g)
