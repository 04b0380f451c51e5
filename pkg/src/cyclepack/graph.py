"""Weighted undirected graphs, paths, cycles, packings and girth primitives.

Weights are exact rationals. Internally every graph also carries an integer
copy of its weights scaled by the least common denominator, so the hot loops
(Dijkstra, pruned DFS) run on Python ints while results are reported as
``Fraction`` values.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Sequence

VERTEX = "vertex"
EDGE = "edge"
MODES = (VERTEX, EDGE)

INF = math.inf


def as_weight(x) -> Fraction:
    """Parse ``x`` (int, str like ``"3/2"``, Fraction) into an exact weight."""
    return Fraction(x)


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with strictly positive rational edge weights.

    Edge ids are positions in ``edges``. Subgraphs keep the vertex ids of
    their host; ``vertex_set`` then lists the vertices actually present
    (``None`` means all of ``range(n)``).
    """

    n: int
    edges: tuple[tuple[int, int, Fraction], ...]
    multi: bool = False
    vertex_set: frozenset[int] | None = None

    def __post_init__(self):
        edges = tuple((int(u), int(v), Fraction(w)) for u, v, w in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.vertex_set is not None:
            object.__setattr__(self, "vertex_set", frozenset(self.vertex_set))
        if self.n < 0:
            raise ValueError("negative vertex count")
        present = self.vertex_set
        seen: set[tuple[int, int]] = set()
        for u, v, w in edges:
            for x in (u, v):
                if not 0 <= x < self.n or (present is not None and x not in present):
                    raise ValueError(f"edge endpoint {x} not a vertex")
            if w <= 0:
                raise ValueError(f"non-positive weight {w} on edge {u}-{v}")
            if not self.multi:
                if u == v:
                    raise ValueError(f"loop at {u} in a simple graph")
                key = (min(u, v), max(u, v))
                if key in seen:
                    raise ValueError(f"parallel edge {key} in a simple graph")
                seen.add(key)

    # -- basic views -------------------------------------------------------

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        if self.vertex_set is None:
            return tuple(range(self.n))
        return tuple(sorted(self.vertex_set))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adj(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """``adj[v]`` = tuple of ``(neighbour, edge id)`` sorted by neighbour."""
        lists: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for eid, (u, v, _) in enumerate(self.edges):
            lists[u].append((v, eid))
            if u != v:
                lists[v].append((u, eid))
        return tuple(tuple(sorted(lst)) for lst in lists)

    @cached_property
    def scale(self) -> int:
        s = 1
        for _, _, w in self.edges:
            s = math.lcm(s, w.denominator)
        return s

    @cached_property
    def iw(self) -> tuple[int, ...]:
        """Edge weights multiplied by ``scale`` (exact integers)."""
        s = self.scale
        return tuple(int(w * s) for _, _, w in self.edges)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        """Map ``(min, max)`` endpoint pair to edge id (simple graphs)."""
        if self.multi:
            raise TypeError("edge_index is only defined for simple graphs")
        return {(min(u, v), max(u, v)): eid for eid, (u, v, _) in enumerate(self.edges)}

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self.edge_index[(min(u, v), max(u, v))]
        except KeyError:
            raise KeyError(f"no edge {u}-{v}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_index

    def weight(self, u: int, v: int) -> Fraction:
        return self.edges[self.edge_id(u, v)][2]

    def edge_key(self, eid: int) -> Hashable:
        """Stable edge reference: endpoint pair for simple graphs, id otherwise."""
        if self.multi:
            return eid
        u, v, _ = self.edges[eid]
        return (min(u, v), max(u, v))

    def resolve_edge(self, e) -> int:
        """Turn an edge reference (id or endpoint pair) into an edge id."""
        if isinstance(e, tuple):
            return self.edge_id(*e)
        if not 0 <= e < self.m:
            raise KeyError(f"unknown edge id {e}")
        return e

    def degree(self, v: int) -> int:
        return sum(2 if x == v else 1 for x, _ in self.adj[v])

    def to_scaled(self, x) -> Fraction:
        return Fraction(x) * self.scale

    def from_scaled(self, x: int) -> Fraction:
        return Fraction(x, self.scale)

    # -- derived graphs ----------------------------------------------------

    def subgraph(self, edge_ids: Iterable[int], vertices: Iterable[int] | None = None) -> WeightedGraph:
        """Subgraph on the given edges, keeping host vertex ids.

        Without ``vertices`` the vertex set is the set of edge endpoints.
        """
        ids = sorted(set(edge_ids))
        edges = tuple(self.edges[i] for i in ids)
        if vertices is None:
            vs = {x for u, v, _ in edges for x in (u, v)}
        else:
            vs = set(vertices)
        return WeightedGraph(self.n, edges, self.multi, frozenset(vs))

    def without_vertices(self, removed: Iterable[int]) -> WeightedGraph:
        gone = set(removed)
        keep = [i for i, (u, v, _) in enumerate(self.edges) if u not in gone and v not in gone]
        return self.subgraph(keep, [x for x in self.vertices if x not in gone])

    def without_edges(self, keys: Iterable[Hashable]) -> WeightedGraph:
        gone = set(keys)
        keep = [i for i in range(self.m) if self.edge_key(i) not in gone]
        return self.subgraph(keep, self.vertices)

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for s in self.vertices:
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                x = stack.pop()
                for y, _ in self.adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            out.append(sorted(comp))
        return out

    def is_forest(self) -> bool:
        return girth(self) == INF

    def relabeled(self) -> tuple[WeightedGraph, dict[int, int]]:
        """Dense relabelling; returns the new graph and old-to-new id map."""
        mapping = {v: i for i, v in enumerate(self.vertices)}
        edges = tuple((mapping[u], mapping[v], w) for u, v, w in self.edges)
        return WeightedGraph(len(mapping), edges, self.multi), mapping


def graph_from_edges(n: int, edges: Iterable[Sequence], multi: bool = False) -> WeightedGraph:
    """Convenience constructor; a missing weight defaults to 1."""
    out = []
    for e in edges:
        if len(e) == 2:
            out.append((e[0], e[1], Fraction(1)))
        else:
            out.append((e[0], e[1], Fraction(e[2])))
    return WeightedGraph(n, tuple(out), multi)


# -- paths and cycles -------------------------------------------------------


def canonical_cycle(seq: Sequence[int]) -> tuple[int, ...]:
    """Rotate so the minimum id is first, then orient toward the smaller neighbour."""
    seq = list(seq)
    if len(seq) < 3:
        if not seq:
            return ()
        i = seq.index(min(seq))
        return tuple(seq[i:] + seq[:i])
    i = seq.index(min(seq))
    rot = seq[i:] + seq[:i]
    if rot[-1] < rot[1]:
        rot = [rot[0]] + rot[:0:-1]
    return tuple(rot)


def _path_weight(g: WeightedGraph, seq: Sequence[int]) -> Fraction:
    total = Fraction(0)
    for a, b in zip(seq, seq[1:]):
        total += g.weight(a, b)
    return total


@dataclass(frozen=True)
class VertexPath:
    vertices: tuple[int, ...]
    weight: Fraction

    @classmethod
    def from_vertices(cls, g: WeightedGraph, seq: Sequence[int]) -> VertexPath:
        seq = tuple(seq)
        if not seq:
            raise ValueError("empty path")
        if len(set(seq)) != len(seq):
            raise ValueError(f"path repeats a vertex: {seq}")
        return cls(seq, _path_weight(g, seq))

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((min(a, b), max(a, b)) for a, b in zip(self.vertices, self.vertices[1:]))

    @property
    def ends(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    def canonical(self) -> tuple[int, ...]:
        """Endpoint-ordered form used for deduplication."""
        v = self.vertices
        return v if v[0] <= v[-1] else v[::-1]

    def reversed(self) -> VertexPath:
        return VertexPath(self.vertices[::-1], self.weight)

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True, order=True)
class Cycle:
    """A simple cycle in canonical form.

    ``edges`` holds edge keys of the host graph (endpoint pairs for simple
    graphs). Ordering is by ``(weight, vertices)``, which is the tie-break
    order used wherever the library picks "the shortest" cycles.
    """

    weight: Fraction
    vertices: tuple[int, ...]
    edges: frozenset = frozenset()

    @classmethod
    def from_vertices(cls, g: WeightedGraph, seq: Sequence[int]) -> Cycle:
        seq = list(seq)
        if len(seq) < 3 or len(set(seq)) != len(seq):
            raise ValueError(f"not a simple cycle: {seq}")
        total = Fraction(0)
        keys = set()
        for a, b in zip(seq, seq[1:] + seq[:1]):
            eid = g.edge_id(a, b)
            total += g.edges[eid][2]
            keys.add((min(a, b), max(a, b)))
        return cls(total, canonical_cycle(seq), frozenset(keys))

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def arc(self, i: int, j: int) -> tuple[int, ...]:
        """Vertices from position ``i`` forward to position ``j`` (inclusive)."""
        n = len(self.vertices)
        out = [self.vertices[i % n]]
        while i % n != j % n:
            i += 1
            out.append(self.vertices[i % n])
        return tuple(out)

    def __str__(self) -> str:
        return " ".join(map(str, self.vertices))


@dataclass(frozen=True)
class CyclePacking:
    cycles: tuple[Cycle, ...]
    mode: str = VERTEX

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(self.cycles))
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not packing_is_disjoint(self.cycles, self.mode):
            raise ValueError(f"cycles are not {self.mode}-disjoint")

    @property
    def total_weight(self) -> Fraction:
        return sum((c.weight for c in self.cycles), Fraction(0))

    def __len__(self) -> int:
        return len(self.cycles)


def packing_is_disjoint(cycles: Iterable[Cycle], mode: str) -> bool:
    seen: set = set()
    for c in cycles:
        items = c.vertex_set if mode == VERTEX else c.edges
        if seen & items:
            return False
        seen |= items
    return True


def verify_packing(g: WeightedGraph, cycles: Sequence[Cycle], mode: str) -> str | None:
    """Return ``None`` if ``cycles`` is a valid packing in ``g``, else a reason."""
    for c in cycles:
        vs = c.vertices
        if len(vs) < 3 or len(set(vs)) != len(vs):
            return f"cycle {c} is not simple"
        total = Fraction(0)
        for a, b in zip(vs, vs[1:] + vs[:1]):
            if not g.has_edge(a, b):
                return f"cycle {c} uses missing edge {a}-{b}"
            total += g.weight(a, b)
        if total != c.weight:
            return f"cycle {c} weight {c.weight} != {total}"
        if c.vertex_set - set(g.vertices):
            return f"cycle {c} leaves the graph"
    if not packing_is_disjoint(cycles, mode):
        return f"cycles not {mode}-disjoint"
    return None


# -- shortest paths ------------------------------------------------------------


def dijkstra(
    g: WeightedGraph,
    src: int,
    banned_edge: int | None = None,
    allowed: set[int] | frozenset[int] | None = None,
    target: int | None = None,
) -> tuple[dict[int, int], dict[int, tuple[int, int]]]:
    """Integer-weight Dijkstra; returns scaled distances and parent (vertex, edge).

    Ties are broken toward smaller vertex ids so the recovered paths are
    deterministic.
    """
    iw = g.iw
    dist = {src: 0}
    parent: dict[int, tuple[int, int]] = {}
    done: set[int] = set()
    heap = [(0, src)]
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        if x == target:
            break
        for y, eid in g.adj[x]:
            if eid == banned_edge or y == x:
                continue
            if allowed is not None and y not in allowed:
                continue
            nd = d + iw[eid]
            old = dist.get(y)
            if old is None or nd < old or (nd == old and y not in done and x < parent[y][0]):
                dist[y] = nd
                parent[y] = (x, eid)
                heapq.heappush(heap, (nd, y))
    return dist, parent


def _trace(parent: dict[int, tuple[int, int]], src: int, dst: int) -> list[int]:
    out = [dst]
    while out[-1] != src:
        out.append(parent[out[-1]][0])
    out.reverse()
    return out


def shortest_path(g: WeightedGraph, s: int, t: int, allowed=None, banned_edge=None) -> VertexPath | None:
    dist, parent = dijkstra(g, s, banned_edge=banned_edge, allowed=allowed, target=t)
    if t not in dist:
        return None
    seq = _trace(parent, s, t)
    return VertexPath(tuple(seq), g.from_scaled(dist[t]))


def _girth_scaled(g: WeightedGraph) -> int | float:
    best: int | float = INF
    iw = g.iw
    for eid, (u, v, _) in enumerate(g.edges):
        if u == v:
            best = min(best, iw[eid])
            continue
        if iw[eid] >= best:
            continue
        dist, _ = dijkstra(g, u, banned_edge=eid, target=v)
        if v in dist:
            best = min(best, dist[v] + iw[eid])
    return best


def girth(g: WeightedGraph) -> Fraction | float:
    """Minimum cycle weight, or ``math.inf`` for forests. Handles multigraphs."""
    s = _girth_scaled(g)
    return INF if s == INF else g.from_scaled(s)


def shortest_cycle_through_edge(g: WeightedGraph, e) -> Cycle | None:
    """A minimum-weight cycle through edge ``e`` (id or endpoint pair); None for bridges."""
    if g.multi:
        raise TypeError("shortest_cycle_through_edge expects a simple graph")
    eid = g.resolve_edge(e)
    u, v, _ = g.edges[eid]
    dist, parent = dijkstra(g, u, banned_edge=eid, target=v)
    if v not in dist:
        return None
    return Cycle.from_vertices(g, _trace(parent, u, v))


def clean(g: WeightedGraph) -> WeightedGraph:
    """Keep exactly the vertices and edges lying on some shortest cycle."""
    gs = _girth_scaled(g)
    if gs == INF:
        return WeightedGraph(g.n, (), g.multi, frozenset())
    iw = g.iw
    keep = []
    for eid, (u, v, _) in enumerate(g.edges):
        if u == v:
            if iw[eid] == gs:
                keep.append(eid)
            continue
        if iw[eid] > gs:
            continue
        dist, _ = dijkstra(g, u, banned_edge=eid, target=v)
        if v in dist and dist[v] + iw[eid] == gs:
            keep.append(eid)
    return g.subgraph(keep)


def is_clean(g: WeightedGraph) -> bool:
    c = clean(g)
    return c.m == g.m and set(c.vertices) == set(g.vertices)


def _distances_to(g: WeightedGraph, s: int, floor: int) -> dict[int, int]:
    """Scaled distances from ``s`` using only vertices ``>= floor``."""
    allowed = {x for x in g.vertices if x >= floor}
    dist, _ = dijkstra(g, s, allowed=allowed)
    return dist


def cycles_up_to_scaled(g: WeightedGraph, bound: int) -> list[Cycle]:
    """All simple cycles of scaled weight ``<= bound`` (simple graphs).

    Each cycle is grown from its minimum vertex ``s`` through vertices
    ``> s`` only; a partial path is cut off as soon as its weight plus the
    distance back to ``s`` exceeds the bound.
    """
    if g.multi:
        raise TypeError("cycle enumeration expects a simple graph")
    iw = g.iw
    adj = g.adj
    found: dict[tuple[int, ...], int] = {}
    for s in g.vertices:
        dist = _distances_to(g, s, s)
        if len(dist) < 3:
            continue
        path = [s]
        on_path = {s}

        def grow(x: int, w: int) -> None:
            for y, eid in adj[x]:
                nw = w + iw[eid]
                if y == s:
                    if len(path) >= 3 and nw <= bound and path[1] < path[-1]:
                        found[tuple(path)] = nw
                    continue
                if y < s or y in on_path:
                    continue
                dy = dist.get(y)
                if dy is None or nw + dy > bound:
                    continue
                path.append(y)
                on_path.add(y)
                grow(y, nw)
                path.pop()
                on_path.discard(y)

        grow(s, 0)
    out = []
    for seq, w in found.items():
        keys = frozenset((min(a, b), max(a, b)) for a, b in zip(seq, seq[1:] + seq[:1]))
        out.append(Cycle(g.from_scaled(w), canonical_cycle(seq), keys))
    out.sort()
    return out


def cycles_up_to(g: WeightedGraph, bound) -> list[Cycle]:
    b = g.to_scaled(bound)
    return cycles_up_to_scaled(g, math.floor(b))


def all_shortest_cycles(g: WeightedGraph) -> list[Cycle]:
    """Every cycle of weight ``girth(g)``, canonical and sorted."""
    gs = _girth_scaled(g)
    if gs == INF:
        raise ValueError("graph is a forest")
    return cycles_up_to_scaled(g, gs)


def shortest_cycle(g: WeightedGraph) -> Cycle | None:
    """The minimum cycle under ``(weight, canonical form)``, or None for forests."""
    gs = _girth_scaled(g)
    if gs == INF:
        return None
    return cycles_up_to_scaled(g, gs)[0]
