"""Laminar Shortest Cycle Tree (LSCT) of a clean plane graph.

The root is a shortest cycle bounding the outer face. A node whose cycle
bounds an internal face is a leaf. A splittable node (poles ``s, t`` with a
third interior ``s``-``t`` path of weight ``g/2``) is an S-node whose
children are the unions of consecutive pole paths. Any other node is a
U-node whose children are the maximal shortest cycles strictly below it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator

from .graph import (
    Cycle,
    VertexPath,
    WeightedGraph,
    all_shortest_cycles,
    dijkstra,
    girth,
    is_clean,
)
from .planar import PlaneEmbedding, cycle_le, embed, reroot_outer

LEAF = "leaf"
SNODE = "S"
UNODE = "U"


class LsctError(RuntimeError):
    """A structural fact about shortest cycles was violated (internal error)."""


# -- touching ---------------------------------------------------------------


@dataclass(frozen=True)
class Touch:
    kind: str  # "touching" | "crossing" | "disjoint"
    path: tuple[int, ...] = ()
    poles: tuple[int, int] | None = None
    paths: tuple[VertexPath, ...] = ()


def _arcs_between(g: WeightedGraph, c: Cycle, s: int, t: int) -> tuple[VertexPath, VertexPath]:
    i, j = c.vertices.index(s), c.vertices.index(t)
    n = len(c)
    fwd = c.arc(i, j)
    back = c.arc(j, i + n)[::-1]
    return VertexPath.from_vertices(g, fwd), VertexPath.from_vertices(g, back)


def touch_classify(g: WeightedGraph, c1: Cycle, c2: Cycle) -> Touch:
    """How two distinct shortest cycles meet: along one path, at two poles, or not at all."""
    if c1.weight != c2.weight:
        raise ValueError("cycles differ in weight, so they are not both shortest")
    if c1.edges == c2.edges:
        raise ValueError("cycles are identical")
    common = c1.vertex_set & c2.vertex_set
    if not common:
        return Touch("disjoint")
    shared = c1.edges & c2.edges
    if len(shared) == len(common) - 1:
        nb: dict[int, list[int]] = {v: [] for v in common}
        for a, b in shared:
            nb[a].append(b)
            nb[b].append(a)
        ends = [v for v in common if len(nb[v]) <= 1]
        start = min(ends)
        seq = [start]
        prev = None
        while True:
            nxt = [x for x in nb[seq[-1]] if x != prev]
            if not nxt:
                break
            prev = seq[-1]
            seq.append(nxt[0])
        if len(seq) == len(common):
            return Touch("touching", tuple(seq))
    if len(common) == 2 and not shared:
        s, t = sorted(common)
        p1, p2 = _arcs_between(g, c1, s, t)
        q1, q2 = _arcs_between(g, c2, s, t)
        half = c1.weight / 2
        if all(p.weight == half for p in (p1, p2, q1, q2)):
            return Touch("crossing", poles=(s, t), paths=(p1, p2, q1, q2))
    raise ValueError("intersection pattern impossible for two shortest cycles")


# -- index of shortest cycles -------------------------------------------------


class CycleIndex:
    """All shortest cycles of an embedded graph with cached closed interiors."""

    def __init__(self, emb: PlaneEmbedding, gir: Fraction | None = None):
        self.emb = emb
        self.girth = girth(emb.host) if gir is None else gir
        self.cycles: list[Cycle] = all_shortest_cycles(emb.host)
        self._closed = {}

    def closed(self, c: Cycle) -> tuple[frozenset, frozenset]:
        hit = self._closed.get(c.edges)
        if hit is None:
            hit = self.emb.closed_interior(c)
            self._closed[c.edges] = hit
        return hit

    def le(self, a: Cycle, b: Cycle) -> bool:
        vs, es = self.closed(b)
        return a.vertex_set <= vs and a.edges <= es

    def below(self, c: Cycle) -> list[Cycle]:
        return [x for x in self.cycles if x.edges != c.edges and self.le(x, c)]


def is_internal_facial(emb: PlaneEmbedding, c: Cycle) -> bool:
    inn = emb.interior(c)
    return not inn.vertices and not inn.edges and len(inn.faces) == 1


# -- poles and paths -----------------------------------------------------------


def _interior_path(emb: PlaneEmbedding, c: Cycle, s: int, t: int, removed: set, used_edges: set):
    """Shortest s-t path whose edges lie strictly inside ``c`` (and avoid ``removed``)."""
    g = emb.host
    inn = emb.interior(c)
    allowed = (set(inn.vertices) - removed) | {s, t}
    sub_ids = [
        g.edge_id(a, b) for a, b in inn.edges
        if a in allowed and b in allowed and (a, b) not in used_edges
    ]
    if not sub_ids:
        return None
    sub = g.subgraph(sub_ids, allowed)
    dist, parent = dijkstra(sub, s, target=t)
    if t not in dist:
        return None
    seq = [t]
    while seq[-1] != s:
        seq.append(parent[seq[-1]][0])
    seq.reverse()
    return seq, sub.from_scaled(dist[t])


def find_poles(emb: PlaneEmbedding, c: Cycle) -> tuple[int, int] | None:
    """The unique pole pair of a shortest cycle, or None if it is unsplittable."""
    g = emb.host
    if c.weight.numerator == 0:
        return None
    half = c.weight / 2
    n = len(c)
    vs = c.vertices
    pref = [Fraction(0)]
    for i in range(n):
        pref.append(pref[-1] + g.weight(vs[i], vs[(i + 1) % n]))
    inn = emb.interior(c)
    if not inn.edges:
        return None
    found = []
    j = 0
    for i in range(n):
        while j < n and pref[j] - pref[i] < half:
            j += 1
        if j >= n:
            break
        if j > i and pref[j] - pref[i] == half:
            s, t = vs[i], vs[j]
            res = _interior_path(emb, c, s, t, set(), set())
            if res is not None and res[1] == half:
                found.append((s, t))
    if len(found) > 1:
        raise LsctError(f"cycle {c} has {len(found)} pole pairs")
    return found[0] if found else None


def s_node_paths(emb: PlaneEmbedding, c: Cycle, s: int, t: int) -> tuple[VertexPath, ...]:
    """All internally disjoint weight-g/2 s-t paths in the closed interior, clockwise from s.

    The first and last paths are the two arcs of ``c``.
    """
    g = emb.host
    half = c.weight / 2
    if s not in c.vertex_set or t not in c.vertex_set:
        raise ValueError("poles must lie on the cycle")
    a1, a2 = _arcs_between(g, c, s, t)
    if a1.weight != half or a2.weight != half:
        raise ValueError("poles are not antipodal on the cycle")
    inner: list[VertexPath] = []
    removed: set[int] = set()
    used: set[tuple[int, int]] = set()
    while True:
        res = _interior_path(emb, c, s, t, removed, used)
        if res is None or res[1] != half:
            break
        seq = res[0]
        inner.append(VertexPath.from_vertices(g, seq))
        removed.update(seq[1:-1])
        if len(seq) == 2:
            used.add((min(s, t), max(s, t)))
    if not inner:
        raise ValueError("pole mismatch: no third path")
    rot = emb.rotation[s]
    d = len(rot)
    pos = {u: i for i, u in enumerate(rot)}
    first = {id(p): p.vertices[1] for p in (a1, a2, *inner)}
    inner_first = {p.vertices[1] for p in inner}

    def sweep_hits_inner(start: VertexPath) -> bool:
        i = pos[start.vertices[1]]
        other = a2 if start is a1 else a1
        for step in range(1, d):
            u = rot[(i + step) % d]
            if u == other.vertices[1]:
                return False
            if u in inner_first:
                return True
        return False

    start = a1 if sweep_hits_inner(a1) else a2
    other = a2 if start is a1 else a1
    base = pos[start.vertices[1]]
    inner.sort(key=lambda p: (pos[first[id(p)]] - base) % d)
    return (start, *inner, other)


def _union(g: WeightedGraph, p: VertexPath, q: VertexPath) -> Cycle:
    return Cycle.from_vertices(g, list(p.vertices) + list(q.vertices[::-1][1:-1]))


def u_node_children(emb: PlaneEmbedding, c: Cycle, index: CycleIndex | None = None) -> list[Cycle]:
    """Maximal shortest cycles strictly below ``c``."""
    if index is None:
        index = CycleIndex(emb)
    below = index.below(c)
    out = []
    for x in below:
        if not any(y.edges != x.edges and index.le(x, y) for y in below):
            out.append(x)
    return sorted(out)


# -- tree --------------------------------------------------------------------


@dataclass(frozen=True)
class LsctNode:
    id: int
    cycle: Cycle
    kind: str
    parent: int | None
    children: tuple[int, ...] = ()
    poles: tuple[int, int] | None = None
    paths: tuple[VertexPath, ...] = ()


@dataclass(frozen=True, eq=False)
class LsctTree:
    nodes: tuple[LsctNode, ...]
    girth: Fraction
    root: int = 0

    @cached_property
    def by_cycle(self) -> dict[frozenset, int]:
        return {n.cycle.edges: n.id for n in self.nodes}

    def node(self, i: int) -> LsctNode:
        return self.nodes[i]

    def ancestors(self, i: int) -> list[int]:
        out = []
        p = self.nodes[i].parent
        while p is not None:
            out.append(p)
            p = self.nodes[p].parent
        return out

    def is_descendant(self, a: int, b: int) -> bool:
        """True when ``a`` is ``b`` or lies below it."""
        return a == b or b in self.ancestors(a)

    def descendants(self, i: int) -> Iterator[int]:
        stack = [i]
        while stack:
            x = stack.pop()
            yield x
            stack.extend(self.nodes[x].children)

    def leaves(self) -> list[int]:
        return [n.id for n in self.nodes if not n.children]

    def s_nodes(self) -> list[int]:
        return [n.id for n in self.nodes if n.kind == SNODE]

    def non_tree_pairs(self, nid: int) -> list[tuple[int, int]]:
        """Index pairs (i, j) whose union is a non-tree cycle at S-node ``nid``."""
        last = len(self.nodes[nid].paths) - 1
        return [
            (i, j)
            for i in range(last + 1)
            for j in range(i + 2, last + 1)
            if not (i == 0 and j == last)
        ]

    def to_dot(self) -> str:
        lines = ["digraph lsct {"]
        for n in self.nodes:
            label = f"{n.kind} {n.cycle}"
            if n.poles:
                label += f" poles={n.poles[0]},{n.poles[1]}"
            lines.append(f'  n{n.id} [label="{label}"];')
        for n in self.nodes:
            for c in n.children:
                lines.append(f"  n{n.id} -> n{c};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_jsonl(self, host: WeightedGraph) -> str:
        roles: dict[int, list] = {n.id: [] for n in self.nodes}
        for nid in self.s_nodes():
            ps = self.nodes[nid].paths
            for i in range(len(ps)):
                for j in range(i + 1, len(ps)):
                    key = _union(host, ps[i], ps[j]).edges
                    other = self.by_cycle.get(key)
                    if other is not None:
                        roles[other].append([nid, i, j])
        out = []
        for n in self.nodes:
            rec = {
                "id": n.id,
                "kind": n.kind,
                "cycle": list(n.cycle.vertices),
                "weight": str(n.cycle.weight),
                "parent": n.parent,
                "children": list(n.children),
                "poles": list(n.poles) if n.poles else None,
                "paths": [list(p.vertices) for p in n.paths],
                "path_pair_of": roles[n.id],
            }
            out.append(json.dumps(rec, sort_keys=True))
        return "\n".join(out) + "\n"


def pair_cycle(host: WeightedGraph, tree: LsctTree, nid: int, i: int, j: int) -> Cycle:
    ps = tree.nodes[nid].paths
    return _union(host, ps[i], ps[j])


def choose_root_face(emb: PlaneEmbedding, gir: Fraction) -> Cycle:
    """The smallest shortest facial cycle of an internal face."""
    cands = [
        c for f, c in enumerate(emb.face_cycles)
        if c is not None and f != emb.outer_face and c.weight == gir
    ]
    if not cands:
        cands = [c for c in emb.face_cycles if c is not None and c.weight == gir]
    if not cands:
        raise LsctError("no face is bounded by a shortest cycle")
    return min(cands)


def build_lsct(g: WeightedGraph, emb: PlaneEmbedding | None = None) -> tuple[PlaneEmbedding, LsctTree]:
    """Embed a clean graph with a shortest outer facial cycle and build its LSCT."""
    if not g.edges:
        raise ValueError("graph is a forest")
    if not is_clean(g):
        raise ValueError("graph is not clean")
    gir = girth(g)
    if emb is None:
        emb = embed(g)
    emb = reroot_outer(emb, choose_root_face(emb, gir))
    root_cycle = emb.face_cycle(emb.outer_face)
    index = CycleIndex(emb, gir)
    return emb, _build(emb, index, root_cycle, gir)


def _build(emb: PlaneEmbedding, index: CycleIndex, root_cycle: Cycle, gir: Fraction) -> LsctTree:
    g = emb.host
    nodes: list[dict] = [dict(cycle=root_cycle, parent=None)]
    i = 0
    while i < len(nodes):
        rec = nodes[i]
        c = rec["cycle"]
        if is_internal_facial(emb, c):
            rec.update(kind=LEAF, children=[])
        else:
            poles = find_poles(emb, c)
            if poles is not None:
                paths = s_node_paths(emb, c, *poles)
                rec.update(kind=SNODE, poles=poles, paths=paths, children=[])
                kids = [_union(g, paths[h - 1], paths[h]) for h in range(1, len(paths))]
            else:
                rec.update(kind=UNODE, children=[])
                kids = u_node_children(emb, c, index)
                if not kids:
                    raise LsctError(f"non-facial cycle {c} has no shortest cycle below it")
            for kc in kids:
                rec["children"].append(len(nodes))
                nodes.append(dict(cycle=kc, parent=i))
        i += 1
    frozen = tuple(
        LsctNode(
            id=j,
            cycle=r["cycle"],
            kind=r["kind"],
            parent=r["parent"],
            children=tuple(r["children"]),
            poles=r.get("poles"),
            paths=tuple(r.get("paths", ())),
        )
        for j, r in enumerate(nodes)
    )
    return LsctTree(frozen, gir)


def covers(tree: LsctTree, host: WeightedGraph, c: Cycle) -> bool:
    """Is ``c`` a tree node or the union of two paths of some S-node?"""
    if c.edges in tree.by_cycle:
        return True
    for nid in tree.s_nodes():
        ps = tree.nodes[nid].paths
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                if ps[i].edges | ps[j].edges == c.edges:
                    return True
    return False
