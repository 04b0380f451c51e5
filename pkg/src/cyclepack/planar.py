"""Combinatorial plane embeddings.

An embedding is a rotation system (clockwise neighbour order per vertex)
plus an assignment of face-tracing orbits to regions of the plane. For a
connected graph every orbit is its own region; when the graph has several
components, one boundary orbit of each component can share a region with
orbits of other components, which is how nested or side-by-side
components are represented. Any region may be declared the outer face.

The rotation system itself comes from networkx's planarity test; faces,
interiors, duals and independent sets are computed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

from .graph import Cycle, WeightedGraph


class NonPlanarError(ValueError):
    pass


Dart = tuple[int, int]


@dataclass(frozen=True)
class Interior:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]
    faces: frozenset[int]


@dataclass(frozen=True, eq=False)
class PlaneEmbedding:
    host: WeightedGraph
    rotation: dict[int, tuple[int, ...]]
    region_of_orbit: tuple[int, ...]
    outer_face: int
    loose: dict[int, int] = field(default_factory=dict)
    _interiors: dict = field(default_factory=dict, repr=False)

    # -- faces --------------------------------------------------------------

    @cached_property
    def orbits(self) -> tuple[tuple[Dart, ...], ...]:
        return _trace_orbits(self.rotation)

    @cached_property
    def orbit_of_dart(self) -> dict[Dart, int]:
        return {d: i for i, orb in enumerate(self.orbits) for d in orb}

    @cached_property
    def face_count(self) -> int:
        top = max(self.region_of_orbit, default=-1)
        return max(top, self.outer_face, max(self.loose.values(), default=-1)) + 1

    @cached_property
    def face_orbits(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.face_count)]
        for o, r in enumerate(self.region_of_orbit):
            out[r].append(o)
        return tuple(tuple(x) for x in out)

    def face_of_dart(self, d: Dart) -> int:
        return self.region_of_orbit[self.orbit_of_dart[d]]

    @cached_property
    def face_vertex_sets(self) -> tuple[frozenset[int], ...]:
        out = []
        for f in range(self.face_count):
            vs = {u for o in self.face_orbits[f] for u, _ in self.orbits[o]}
            vs |= {v for v, r in self.loose.items() if r == f}
            out.append(frozenset(vs))
        return tuple(out)

    def face_vertices(self, f: int) -> frozenset[int]:
        return self.face_vertex_sets[f]

    def face_edges(self, f: int) -> frozenset[tuple[int, int]]:
        return frozenset((min(u, v), max(u, v)) for o in self.face_orbits[f] for u, v in self.orbits[o])

    def face_walk_length(self, f: int) -> int:
        return sum(len(self.orbits[o]) for o in self.face_orbits[f])

    @cached_property
    def face_cycles(self) -> tuple[Cycle | None, ...]:
        """Frontier of each face as a Cycle when it is a single simple cycle."""
        out = []
        for f in range(self.face_count):
            orbs = self.face_orbits[f]
            if len(orbs) != 1 or any(r == f for r in self.loose.values()):
                out.append(None)
                continue
            seq = [u for u, _ in self.orbits[orbs[0]]]
            if len(seq) < 3 or len(set(seq)) != len(seq):
                out.append(None)
                continue
            out.append(Cycle.from_vertices(self.host, seq))
        return tuple(out)

    def face_cycle(self, f: int) -> Cycle | None:
        return self.face_cycles[f]

    def faces_with_cycle(self, cycle: Cycle) -> list[int]:
        return [f for f, c in enumerate(self.face_cycles) if c is not None and c.edges == cycle.edges]

    def is_facial(self, cycle: Cycle) -> bool:
        return bool(self.faces_with_cycle(cycle))

    def euler_ok(self) -> bool:
        comps = len(self.host.components())
        return len(self.host.vertices) - self.host.m + self.face_count == 1 + comps

    # -- interiors ----------------------------------------------------------

    @cached_property
    def _dual_adj(self) -> dict[int, list[tuple[int, tuple[int, int]]]]:
        adj: dict[int, list[tuple[int, tuple[int, int]]]] = {f: [] for f in range(self.face_count)}
        for u, v, _ in self.host.edges:
            a, b = self.face_of_dart((u, v)), self.face_of_dart((v, u))
            key = (min(u, v), max(u, v))
            adj[a].append((b, key))
            adj[b].append((a, key))
        return adj

    def interior(self, cycle: Cycle) -> Interior:
        """Vertices, edges and faces strictly inside ``cycle``."""
        hit = self._interiors.get(cycle.edges)
        if hit is not None:
            return hit
        for u, v in cycle.edges:
            if not self.host.has_edge(u, v):
                raise ValueError(f"cycle edge {u}-{v} not in the graph")
        outside = {self.outer_face}
        stack = [self.outer_face]
        adj = self._dual_adj
        while stack:
            f = stack.pop()
            for h, key in adj[f]:
                if key in cycle.edges or h in outside:
                    continue
                outside.add(h)
                stack.append(h)
        inside_faces = frozenset(f for f in range(self.face_count) if f not in outside)
        on = cycle.vertex_set
        iv = set()
        ie = set()
        for u, v, _ in self.host.edges:
            key = (min(u, v), max(u, v))
            if key in cycle.edges:
                continue
            if self.face_of_dart((u, v)) in inside_faces:
                ie.add(key)
                iv.update(x for x in (u, v) if x not in on)
        iv.update(v for v, r in self.loose.items() if r in inside_faces)
        res = Interior(frozenset(iv), frozenset(ie), inside_faces)
        self._interiors[cycle.edges] = res
        return res

    def closed_interior(self, cycle: Cycle) -> tuple[frozenset[int], frozenset]:
        inn = self.interior(cycle)
        return inn.vertices | cycle.vertex_set, inn.edges | cycle.edges

    # -- edits ----------------------------------------------------------------

    def delete_interior(self, cycle: Cycle) -> PlaneEmbedding:
        """Remove every vertex and edge strictly inside ``cycle``.

        The inside of ``cycle`` becomes one face; all other faces keep their
        identity (their ids are renumbered compactly).
        """
        inn = self.interior(cycle)
        gone_v = inn.vertices
        keep = [
            i for i, (u, v, _) in enumerate(self.host.edges)
            if (min(u, v), max(u, v)) not in inn.edges
        ]
        host = self.host.subgraph(keep, [x for x in self.host.vertices if x not in gone_v])
        rot = {
            v: tuple(u for u in nbrs if (min(u, v), max(u, v)) not in inn.edges)
            for v, nbrs in self.rotation.items() if v not in gone_v
        }
        rot = {v: r for v, r in rot.items() if r}
        loose = {v: r for v, r in self.loose.items() if v not in gone_v}
        for v in host.vertices:
            if v not in rot and v not in loose:
                loose[v] = -1
        old = {orb: self.region_of_orbit[i] for i, orb in enumerate(self.orbits)}
        new_orbits = _trace_orbits(rot)
        fresh = max(self.region_of_orbit, default=-1) + 1
        regions = [old.get(orb, fresh) for orb in new_orbits]
        loose = {v: (fresh if r == -1 else r) for v, r in loose.items()}
        used = sorted(set(regions) | set(loose.values()) | {self.outer_face})
        remap = {r: i for i, r in enumerate(used)}
        return PlaneEmbedding(
            host,
            rot,
            tuple(remap[r] for r in regions),
            remap[self.outer_face],
            {v: remap[r] for v, r in loose.items()},
        )


def _trace_orbits(rotation: dict[int, tuple[int, ...]]) -> tuple[tuple[Dart, ...], ...]:
    nxt = {}
    for v, nbrs in rotation.items():
        d = len(nbrs)
        for i, u in enumerate(nbrs):
            nxt[(u, v)] = (v, nbrs[(i + 1) % d])
    seen: set[Dart] = set()
    out = []
    for d in sorted(nxt):
        if d in seen:
            continue
        orb = []
        cur = d
        while cur not in seen:
            seen.add(cur)
            orb.append(cur)
            cur = nxt[cur]
        # rotate so the smallest dart leads; keeps orbit identity stable under edits
        i = orb.index(min(orb))
        out.append(tuple(orb[i:] + orb[:i]))
    return tuple(out)


def _default_regions(host: WeightedGraph, rotation, orbits) -> tuple[tuple[int, ...], int, dict[int, int]]:
    """Each component's longest orbit goes to a shared outer region."""
    comp_of = {}
    for i, comp in enumerate(host.components()):
        for v in comp:
            comp_of[v] = i
    host_orbit: dict[int, int] = {}
    for o, orb in enumerate(orbits):
        c = comp_of[orb[0][0]]
        cur = host_orbit.get(c)
        if cur is None or len(orb) > len(orbits[cur]):
            host_orbit[c] = o
    hosts = set(host_orbit.values())
    regions = []
    outer = None
    nxt = 0
    for o in range(len(orbits)):
        if o in hosts:
            if outer is None:
                outer = nxt
                nxt += 1
            regions.append(outer)
        else:
            regions.append(nxt)
            nxt += 1
    if outer is None:
        outer = nxt
    loose = {v: outer for v in host.vertices if v not in rotation}
    return tuple(regions), outer, loose


def embedding_from_rotation(host: WeightedGraph, rotation: dict[int, Sequence[int]], outer: int | None = None) -> PlaneEmbedding:
    rot = {v: tuple(nbrs) for v, nbrs in rotation.items() if nbrs}
    for v, nbrs in rot.items():
        if sorted(nbrs) != sorted(u for u, _ in host.adj[v]):
            raise ValueError(f"rotation at {v} does not match its neighbours")
    orbits = _trace_orbits(rot)
    regions, default_outer, loose = _default_regions(host, rot, orbits)
    emb = PlaneEmbedding(host, rot, regions, default_outer, loose)
    if outer is not None:
        if not 0 <= outer < emb.face_count:
            raise ValueError(f"no face {outer}")
        emb = replace(emb, outer_face=outer, _interiors={})
    if not emb.euler_ok():
        raise NonPlanarError("rotation system is not planar")
    return emb


def embed(g: WeightedGraph) -> PlaneEmbedding:
    """A planar rotation system for ``g``; raises NonPlanarError otherwise."""
    if g.multi:
        raise TypeError("embed expects a simple graph")
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from((u, v) for u, v, _ in g.edges)
    ok, P = nx.check_planarity(G)
    if not ok:
        raise NonPlanarError("graph is not planar")
    rotation = {v: tuple(P.neighbors_cw_order(v)) for v in g.vertices if g.adj[v]}
    return embedding_from_rotation(g, rotation)


def reroot_outer(emb: PlaneEmbedding, cycle: Cycle) -> PlaneEmbedding:
    """Same rotation system with the face bounded by ``cycle`` as the outer face."""
    faces = emb.faces_with_cycle(cycle)
    if not faces:
        raise ValueError("cycle is not facial")
    if emb.outer_face in faces:
        return emb
    return replace(emb, outer_face=faces[0], _interiors={})


def cycle_interior(emb: PlaneEmbedding, cycle: Cycle) -> tuple[frozenset, frozenset, frozenset]:
    inn = emb.interior(cycle)
    return inn.vertices, inn.edges, inn.faces


def cycle_le(emb: PlaneEmbedding, c1: Cycle, c2: Cycle) -> bool:
    """``c1 <= c2``: every element of c1 is on c2 or strictly inside it."""
    vs, es = emb.closed_interior(c2)
    return c1.vertex_set <= vs and c1.edges <= es


def cycle_order(emb: PlaneEmbedding, c1: Cycle, c2: Cycle) -> str:
    """One of ``<=, <v, <e, >=, >v, >e, crossing, incomparable``.

    The ``>`` forms report that c2 lies inside c1; they mirror the ``<``
    forms so the relation is total.
    """
    if c1.edges == c2.edges:
        return "<="
    vdis = not (c1.vertex_set & c2.vertex_set)
    edis = not (c1.edges & c2.edges)
    if cycle_le(emb, c1, c2):
        return "<v" if vdis else "<e" if edis else "<="
    if cycle_le(emb, c2, c1):
        return ">v" if vdis else ">e" if edis else ">="
    if c1.edges & emb.interior(c2).edges and c2.edges & emb.interior(c1).edges:
        return "crossing"
    return "incomparable"


# -- dual ---------------------------------------------------------------------


@dataclass(frozen=True)
class DualGraph:
    graph: WeightedGraph
    primal_edge: tuple[tuple[int, int], ...]

    def primal_edges_of(self, dual_edge_ids: Iterable[int]) -> frozenset[tuple[int, int]]:
        return frozenset(self.primal_edge[i] for i in dual_edge_ids)


def dual(emb: PlaneEmbedding) -> DualGraph:
    edges = []
    prim = []
    for u, v, w in emb.host.edges:
        edges.append((emb.face_of_dart((u, v)), emb.face_of_dart((v, u)), w))
        prim.append((min(u, v), max(u, v)))
    return DualGraph(WeightedGraph(emb.face_count, tuple(edges), multi=True), tuple(prim))


# -- independent sets ------------------------------------------------------------


def find_independent_set(adj: dict, k: int) -> list | None:
    """Exact search for k pairwise non-adjacent nodes (branch and reduce).

    ``adj`` maps each node to the set of its neighbours.
    """
    adj = {v: set(nb) - {v} for v, nb in adj.items()}
    return _is_rec(adj, k)


def _is_rec(adj: dict, k: int) -> list | None:
    if k <= 0:
        return []
    if len(adj) < k:
        return None
    for v in sorted(adj, key=lambda x: (len(adj[x]), repr(x))):
        if len(adj[v]) <= 1:
            rest = _is_rec(_drop(adj, {v} | adj[v]), k - 1)
            return None if rest is None else [v] + rest
        break
    if all(not nb for nb in adj.values()):
        return sorted(adj, key=repr)[:k]
    v = max(adj, key=lambda x: (len(adj[x]), repr(x)))
    rest = _is_rec(_drop(adj, {v} | adj[v]), k - 1)
    if rest is not None:
        return [v] + rest
    return _is_rec(_drop(adj, {v}), k)


def _drop(adj: dict, gone: set) -> dict:
    return {v: nb - gone for v, nb in adj.items() if v not in gone}


def max_independent_set_size(adj: dict, cap: int) -> tuple[int, list]:
    """Largest independent set of size at most ``cap``."""
    best: list = []
    for r in range(1, cap + 1):
        s = find_independent_set(adj, r)
        if s is None:
            break
        best = s
    return len(best), best


@dataclass(frozen=True)
class MapGraph:
    embedding: PlaneEmbedding
    nodes: tuple[int, ...]

    @cached_property
    def adjacency(self) -> dict[int, set[int]]:
        vs = {f: self.embedding.face_vertices(f) for f in self.nodes}
        adj: dict[int, set[int]] = {f: set() for f in self.nodes}
        for i, a in enumerate(self.nodes):
            for b in self.nodes[i + 1:]:
                if vs[a] & vs[b]:
                    adj[a].add(b)
                    adj[b].add(a)
        return adj


def map_independent_set(M: MapGraph, k: int) -> list[int] | None:
    return find_independent_set(M.adjacency, k)


def planar_quarter_is(g: WeightedGraph, k: int) -> list[int] | None:
    """Exact independent set of size k (exists whenever n >= 4k on planar graphs)."""
    adj = {v: {u for u, _ in g.adj[v]} for v in g.vertices}
    return find_independent_set(adj, k)


# -- text formats ---------------------------------------------------------------


def format_embedding(emb: PlaneEmbedding) -> str:
    lines = [f"r {v}: " + " ".join(map(str, emb.rotation[v])) for v in sorted(emb.rotation)]
    lines.append(f"outer {emb.outer_face}")
    return "\n".join(lines) + "\n"


def parse_embedding(host: WeightedGraph, text: str) -> PlaneEmbedding:
    rotation = {}
    outer = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("r "):
            head, _, rest = line[2:].partition(":")
            rotation[int(head)] = tuple(int(x) for x in rest.split())
        elif line.startswith("outer "):
            outer = int(line.split()[1])
        else:
            raise ValueError(f"bad embedding line {raw!r}")
    return embedding_from_rotation(host, rotation, outer)


def dual_dot(emb: PlaneEmbedding) -> str:
    d = dual(emb)
    lines = ["graph dual {"]
    for f in range(emb.face_count):
        tag = ", shape=doublecircle" if f == emb.outer_face else ""
        lines.append(f'  f{f} [label="f{f}"{tag}];')
    for (a, b, w), (u, v) in zip(d.graph.edges, d.primal_edge):
        lines.append(f'  f{a} -- f{b} [label="{u}-{v}:{w}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def face_adjacency_dot(emb: PlaneEmbedding) -> str:
    M = MapGraph(emb, tuple(range(emb.face_count)))
    lines = ["graph faces {"]
    for f in M.nodes:
        lines.append(f'  f{f} [label="f{f}: {" ".join(map(str, sorted(emb.face_vertices(f))))}"];')
    for a in M.nodes:
        for b in sorted(M.adjacency[a]):
            if a < b:
                lines.append(f"  f{a} -- f{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
