"""Finite metric trees with marked ends.

A tree space is a connected acyclic graph with strictly positive edge
lengths.  Points live on edges as (edge id, offset), the offset measured
from the edge's first vertex.  Degree-1 vertices may be marked as ideal
leaves: the incident edge of a marked leaf is treated as extending past
the leaf without bound, so offsets outside the physical range are legal
there.  That extension is how rays to infinity, and hence horofunctions,
are realized on a finite topology.

Distances between arbitrary edge points reduce to leg-to-endpoint plus
vertex-to-vertex terms; both legs use |offset| / |length - offset|, which
stays correct on extended edges (the path simply runs through the leaf).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import GeometryError

# Offsets this close to a vertex are canonicalized onto it, so point
# equality across incident edges is well defined.
VERTEX_SNAP = 1e-12


class TreeError(GeometryError):
    """Invalid tree topology or tree point."""


@dataclass(frozen=True)
class TreePoint:
    """Position on a tree edge: offset from the edge's first vertex."""

    edge: str
    offset: float


@dataclass(frozen=True)
class TreeEdge:
    u: str
    v: str
    length: float
    eid: str
    index: int


class Tree:
    """Immutable tree topology with precomputed vertex metrics.

    Construction validates connectivity, acyclicity and the ideal-leaf
    marks, and precomputes all-pairs vertex distances plus per-source
    predecessor tables (trees here are desk sized, so quadratic tables
    are the simplest correct choice).
    """

    def __init__(self, edges, ideal_leaves=(), basepoint=None):
        if not edges:
            raise TreeError("a tree needs at least one edge")
        self.edges: list[TreeEdge] = []
        self._by_id: dict[str, TreeEdge] = {}
        adjacency: dict[str, list[tuple[str, int]]] = {}
        for i, (u, v, length) in enumerate(edges):
            u, v = str(u), str(v)
            if "-" in u or "-" in v:
                raise TreeError(f"vertex names must not contain '-': {u!r}, {v!r}")
            if u == v:
                raise TreeError(f"self-loop at vertex {u!r}")
            length = float(length)
            if not math.isfinite(length) or length <= 0.0:
                raise TreeError(f"edge {u}-{v} must have positive length, got {length}")
            eid = f"{u}-{v}"
            if eid in self._by_id or f"{v}-{u}" in self._by_id:
                raise TreeError(f"duplicate edge {eid}")
            edge = TreeEdge(u, v, length, eid, i)
            self.edges.append(edge)
            self._by_id[eid] = edge
            adjacency.setdefault(u, []).append((v, i))
            adjacency.setdefault(v, []).append((u, i))
        self.vertices: list[str] = sorted(adjacency)
        if len(self.edges) != len(self.vertices) - 1:
            raise TreeError("edge count must equal vertex count minus one")
        self.adjacency = adjacency
        self.degree = {vert: len(nbrs) for vert, nbrs in adjacency.items()}

        self._dist: dict[str, dict[str, float]] = {}
        self._prev: dict[str, dict[str, int]] = {}
        for source in self.vertices:
            dist, prev = self._scan_from(source)
            if len(dist) != len(self.vertices):
                raise TreeError("tree is not connected")
            self._dist[source] = dist
            self._prev[source] = prev

        self.ideal_leaves = frozenset(str(x) for x in ideal_leaves)
        for leaf in self.ideal_leaves:
            if leaf not in self.degree:
                raise TreeError(f"unknown ideal leaf {leaf!r}")
            if self.degree[leaf] != 1:
                raise TreeError(f"ideal leaf {leaf!r} must have degree 1")
        self.branch_vertices = tuple(
            vert for vert in self.vertices if self.degree[vert] >= 3
        )
        if basepoint is None:
            basepoint = TreePoint(self.edges[0].eid, 0.0)
        self.basepoint = self.canonical(basepoint)

    def _scan_from(self, source: str):
        dist = {source: 0.0}
        prev: dict[str, int] = {}
        stack = [source]
        while stack:
            here = stack.pop()
            for other, ei in self.adjacency[here]:
                if other not in dist:
                    dist[other] = dist[here] + self.edges[ei].length
                    prev[other] = ei
                    stack.append(other)
        return dist, prev

    # -- lookups ---------------------------------------------------------

    def edge(self, eid: str) -> TreeEdge:
        try:
            return self._by_id[eid]
        except KeyError:
            raise TreeError(f"unknown edge {eid!r}") from None

    def leaf_edge(self, leaf: str) -> TreeEdge:
        if leaf not in self.ideal_leaves:
            raise TreeError(f"{leaf!r} is not a marked ideal leaf")
        _, ei = self.adjacency[leaf][0]
        return self.edges[ei]

    def vertex_distance(self, a: str, b: str) -> float:
        return self._dist[a][b]

    def vertex_path(self, a: str, b: str) -> list[int]:
        """Edge indices along the unique vertex path from a to b."""
        prev = self._prev[a]
        path = []
        here = b
        while here != a:
            ei = prev[here]
            path.append(ei)
            e = self.edges[ei]
            here = e.u if e.v == here else e.v
        path.reverse()
        return path

    # -- points ----------------------------------------------------------

    def validate(self, p: TreePoint) -> None:
        e = self.edge(p.edge)
        off = p.offset
        if not math.isfinite(off):
            raise TreeError(f"non-finite offset on edge {e.eid}")
        if off < -VERTEX_SNAP and e.u not in self.ideal_leaves:
            raise TreeError(f"offset {off} below edge {e.eid}")
        if off > e.length + VERTEX_SNAP and e.v not in self.ideal_leaves:
            raise TreeError(f"offset {off} beyond edge {e.eid} of length {e.length}")

    def vertex_point(self, vertex: str) -> TreePoint:
        """Canonical point at a vertex: lowest incident edge index."""
        ei = min(ei for _, ei in self.adjacency[vertex])
        e = self.edges[ei]
        return TreePoint(e.eid, 0.0 if e.u == vertex else e.length)

    def canonical(self, p: TreePoint) -> TreePoint:
        self.validate(p)
        e = self.edge(p.edge)
        if abs(p.offset) <= VERTEX_SNAP:
            return self.vertex_point(e.u)
        if abs(p.offset - e.length) <= VERTEX_SNAP:
            return self.vertex_point(e.v)
        return TreePoint(e.eid, float(p.offset))

    def at_vertex(self, p: TreePoint) -> str | None:
        q = self.canonical(p)
        e = self.edge(q.edge)
        if q.offset == 0.0:
            return e.u
        if q.offset == e.length:
            return e.v
        return None

    # -- metric ----------------------------------------------------------

    def distance(self, p: TreePoint, q: TreePoint) -> float:
        ep, eq = self.edge(p.edge), self.edge(q.edge)
        if ep.index == eq.index:
            return abs(p.offset - q.offset)
        best = math.inf
        for end_p, leg_p in ((ep.u, abs(p.offset)), (ep.v, abs(ep.length - p.offset))):
            for end_q, leg_q in (
                (eq.u, abs(q.offset)),
                (eq.v, abs(eq.length - q.offset)),
            ):
                total = leg_p + self._dist[end_p][end_q] + leg_q
                if total < best:
                    best = total
        return best

    def walk(self, p: TreePoint, q: TreePoint, s: float) -> TreePoint:
        """Point at arclength s from p along the unique geodesic toward q."""
        if s <= 0.0:
            return p
        ep, eq = self.edge(p.edge), self.edge(q.edge)
        if ep.index == eq.index:
            step = s if q.offset >= p.offset else -s
            return TreePoint(p.edge, p.offset + step)
        best = None
        for end_p, leg_p, off_p in (
            (ep.u, abs(p.offset), 0.0),
            (ep.v, abs(ep.length - p.offset), ep.length),
        ):
            for end_q, leg_q, off_q in (
                (eq.u, abs(q.offset), 0.0),
                (eq.v, abs(eq.length - q.offset), eq.length),
            ):
                total = leg_p + self._dist[end_p][end_q] + leg_q
                if best is None or total < best[0]:
                    best = (total, end_p, leg_p, off_p, end_q, off_q)
        _, end_p, leg_p, off_p, end_q, off_q = best
        if s <= leg_p:
            step = s if off_p >= p.offset else -s
            return TreePoint(p.edge, p.offset + step)
        s -= leg_p
        here = end_p
        for ei in self.vertex_path(end_p, end_q):
            e = self.edges[ei]
            if s <= e.length:
                return TreePoint(e.eid, s if e.u == here else e.length - s)
            s -= e.length
            here = e.v if e.u == here else e.u
        step = s if q.offset >= off_q else -s
        return TreePoint(q.edge, off_q + step)

    # -- rays to a marked end ---------------------------------------------

    def ray(self, p: TreePoint, leaf: str, s: float) -> TreePoint:
        """Point at arclength s from p along the ray toward the end at leaf."""
        e = self.leaf_edge(leaf)
        outward = 1.0 if e.v == leaf else -1.0
        anchor_off = e.length if e.v == leaf else 0.0
        if self.edge(p.edge).index == e.index:
            return TreePoint(e.eid, p.offset + outward * s)
        anchor = self.vertex_point(leaf)
        d0 = self.distance(p, anchor)
        if s <= d0:
            return self.walk(p, anchor, s)
        return TreePoint(e.eid, anchor_off + outward * (s - d0))

    def depth_toward_end(self, p: TreePoint, leaf: str) -> float:
        """Signed distance to the leaf anchor; negative past the leaf."""
        e = self.leaf_edge(leaf)
        if self.edge(p.edge).index == e.index:
            outward = 1.0 if e.v == leaf else -1.0
            anchor_off = e.length if e.v == leaf else 0.0
            return -outward * (p.offset - anchor_off)
        return self.distance(p, self.vertex_point(leaf))

    # -- assorted helpers --------------------------------------------------

    def point_toward(self, vertex: str, edge_index: int, depth: float) -> TreePoint:
        """Point at the given depth from a vertex into one incident edge."""
        e = self.edges[edge_index]
        if e.u == vertex:
            return TreePoint(e.eid, depth)
        if e.v == vertex:
            return TreePoint(e.eid, e.length - depth)
        raise TreeError(f"edge {e.eid} is not incident to {vertex!r}")

    def nearest_branch_vertex(self, p: TreePoint) -> tuple[str | None, float]:
        best, best_d = None, math.inf
        for vert in self.branch_vertices:
            d = self.distance(p, self.vertex_point(vert))
            if d < best_d:
                best, best_d = vert, d
        return best, best_d

    def random_physical_point(self, rng) -> TreePoint:
        e = self.edges[int(rng.integers(len(self.edges)))]
        return TreePoint(e.eid, float(rng.uniform(0.0, e.length)))

    def random_walk_shift(self, p: TreePoint, step: float, rng) -> TreePoint:
        """Walk distance `step` from p, branching uniformly at vertices.

        Dead ends at unmarked leaves stop the walk short; marked leaves
        continue onto the ideal extension.
        """
        e = self.edge(p.edge)
        off = p.offset
        heading_v = bool(rng.integers(2))
        remaining = step
        while remaining > 0.0:
            if heading_v:
                stop_vertex, boundary = e.v, e.length
            else:
                stop_vertex, boundary = e.u, 0.0
            if stop_vertex in self.ideal_leaves:
                gap = math.inf
            else:
                gap = abs(boundary - off)
            if remaining <= gap:
                return TreePoint(e.eid, off + (remaining if heading_v else -remaining))
            remaining -= gap
            choices = [ei for _, ei in self.adjacency[stop_vertex] if ei != e.index]
            if not choices:
                return self.vertex_point(stop_vertex)
            e = self.edges[choices[int(rng.integers(len(choices)))]]
            heading_v = e.u == stop_vertex
            off = 0.0 if heading_v else e.length
        return TreePoint(e.eid, off)
