"""Kernel and exact solver for edge-disjoint shortest cycle packing on planar graphs.

The marked family ``C_M`` (leaves, branching U-nodes, S-nodes with their
two near-root pairs, extension chains, the root and all non-tree cycles)
always contains some solution when one exists. The kernel keeps only the
union of ``C_M`` and then simplifies it with three rules: drop loops,
resolve parallel pairs, dissolve degree-2 vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import networkx as nx

from .graph import (
    EDGE,
    INF,
    Cycle,
    CyclePacking,
    WeightedGraph,
    all_shortest_cycles,
    clean,
    girth,
    verify_packing,
)
from .lsct import LEAF, SNODE, UNODE, LsctTree, build_lsct, pair_cycle
from .planar import PlaneEmbedding, cycle_le, dual, embed, find_independent_set

YES = "yes"
NO = "no"
KERNEL = "kernel"


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


# -- leaf shortcut -----------------------------------------------------------------


def facial_cycles(t: LsctTree) -> list[Cycle]:
    """Leaf cycles plus the root, which bounds the outer face."""
    out = {t.nodes[i].cycle.edges: t.nodes[i].cycle for i in t.leaves()}
    out.setdefault(t.nodes[t.root].cycle.edges, t.nodes[t.root].cycle)
    return sorted(out.values())


def leaf_shortcut(t: LsctTree, k: int) -> CyclePacking | None:
    """k edge-disjoint facial shortest cycles when there are at least 4k of them, else None.

    The faces counted are the leaves and the outer face bounded by the root;
    their edge-sharing graph is planar, so 4k of them hold an independent
    set of size k.
    """
    faces = facial_cycles(t)
    if k <= 0:
        return CyclePacking((), EDGE)
    if len(faces) < 4 * k:
        return None
    adj = {i: {j for j in range(len(faces)) if j != i and faces[i].edges & faces[j].edges} for i in range(len(faces))}
    pick = find_independent_set(adj, k)
    assert pick is not None, "a planar graph on 4k vertices has an independent set of size k"
    return CyclePacking(tuple(sorted(faces[i] for i in pick)), EDGE)


# -- extensions ----------------------------------------------------------------------


def _path_to(emb: PlaneEmbedding, t: LsctTree, c: Cycle) -> list[int]:
    """Tree nodes X with c <= X, from the root downwards."""
    root = t.nodes[t.root]
    if not cycle_le(emb, c, root.cycle):
        return []
    out = [t.root]
    while True:
        nxt = [ch for ch in t.nodes[out[-1]].children if cycle_le(emb, c, t.nodes[ch].cycle)]
        if not nxt:
            return out
        out.append(nxt[0])


def lowest_extension(emb: PlaneEmbedding, t: LsctTree, c: Cycle) -> Cycle | None:
    """The unique minimal shortest cycle C' with c <_e C', or None."""
    chain = _path_to(emb, t, c)
    ext = [x for x in chain if not t.nodes[x].cycle.edges & c.edges]
    if not ext:
        return None
    star = t.nodes[ext[-1]]
    if star.kind != SNODE:
        return star.cycle
    touched = [i for i, p in enumerate(star.paths) if p.edges & c.edges]
    assert touched, "a cycle below an S-node must share edges with one of its paths"
    i, j = touched[0], touched[-1]
    assert 0 < i and j < len(star.paths) - 1
    return pair_cycle(emb.host, t, star.id, i - 1, j + 1)


def extension_chain(emb: PlaneEmbedding, t: LsctTree, c: Cycle, limit: int | None = None) -> list[Cycle]:
    """c, L(c), L(L(c)), ... up to a cycle without extension (or ``limit`` cycles)."""
    out = [c]
    while limit is None or len(out) < limit:
        nxt = lowest_extension(emb, t, out[-1])
        if nxt is None:
            break
        out.append(nxt)
    return out


def brute_lowest_extension(emb: PlaneEmbedding, c: Cycle) -> Cycle | None:
    """Lowest extension straight from the definition (for testing)."""
    exts = [
        x for x in all_shortest_cycles(emb.host)
        if not (x.edges & c.edges) and cycle_le(emb, c, x)
    ]
    low = [x for x in exts if all(cycle_le(emb, x, y) for y in exts)]
    assert len(low) <= 1
    return low[0] if low else None


# -- marking -----------------------------------------------------------------------------


@dataclass(frozen=True)
class MarkedCycles:
    base: tuple[Cycle, ...]
    non_tree: tuple[Cycle, ...]
    chains: dict[frozenset, tuple[Cycle, ...]]
    root: Cycle

    @property
    def all(self) -> tuple[Cycle, ...]:
        seen: dict[frozenset, Cycle] = {self.root.edges: self.root}
        for c in self.non_tree:
            seen.setdefault(c.edges, c)
        for b in self.base:
            for c in self.chains[b.edges]:
                seen.setdefault(c.edges, c)
        return tuple(sorted(seen.values()))


@dataclass(frozen=True)
class TrivialYes:
    packing: CyclePacking
    reason: str


def base_cycles(t: LsctTree, host: WeightedGraph) -> list[Cycle]:
    out: dict[frozenset, Cycle] = {}
    for n in t.nodes:
        if n.kind == LEAF and n.id != t.root:
            out.setdefault(n.cycle.edges, n.cycle)
        elif n.kind == UNODE and len(n.children) >= 2:
            out.setdefault(n.cycle.edges, n.cycle)
        elif n.kind == SNODE:
            last = len(n.paths) - 1
            out.setdefault(n.cycle.edges, n.cycle)
            for i, j in ((0, last - 1), (1, last)):
                c = pair_cycle(host, t, n.id, i, j)
                out.setdefault(c.edges, c)
    return sorted(out.values())


def non_tree_cycles(t: LsctTree, host: WeightedGraph) -> list[Cycle]:
    out: dict[frozenset, Cycle] = {}
    for nid in t.s_nodes():
        for i, j in t.non_tree_pairs(nid):
            c = pair_cycle(host, t, nid, i, j)
            if c.edges not in t.by_cycle:
                out.setdefault(c.edges, c)
    return sorted(out.values())


def mark_cycles(emb: PlaneEmbedding, t: LsctTree, k: int) -> MarkedCycles:
    """The marked family; extension chains are followed for at most k cycles."""
    if len(facial_cycles(t)) >= 4 * k:
        raise ValueError("mark_cycles expects fewer than 4k facial shortest cycles")
    base = base_cycles(t, emb.host)
    chains = {b.edges: tuple(extension_chain(emb, t, b, limit=k)) for b in base}
    m = MarkedCycles(tuple(base), tuple(non_tree_cycles(t, emb.host)), chains, t.nodes[t.root].cycle)
    if chain_witness(m, k) is None:
        assert len(m.all) <= 52 * k * k, "marked family exceeds 52k^2"
    return m


def chain_witness(marked: MarkedCycles, k: int) -> TrivialYes | None:
    """k nested edge-disjoint cycles from an extension chain of length k, if any."""
    for b in marked.base:
        ch = marked.chains[b.edges]
        if len(ch) >= k:
            return TrivialYes(CyclePacking(tuple(sorted(ch[:k])), EDGE), "extension chain")
    return None


def degree_bound(t: LsctTree, marked: MarkedCycles) -> int:
    """2|C_M| plus p(p+1) over marked U-nodes with p children."""
    keys = {c.edges for c in marked.all}
    extra = sum(
        len(n.children) * (len(n.children) + 1)
        for n in t.nodes if n.kind == UNODE and n.cycle.edges in keys
    )
    return 2 * len(keys) + extra


# -- reduction rules -----------------------------------------------------------------------


@dataclass
class _Edge:
    u: int
    v: int
    w: Fraction
    walk: tuple[int, ...]  # original vertices from u to v (u == v for loops)


@dataclass
class _Multi:
    edges: dict[int, _Edge]
    nxt: int

    def graph(self, n: int) -> WeightedGraph:
        verts = {x for e in self.edges.values() for x in (e.u, e.v)}
        return WeightedGraph(n, tuple((e.u, e.v, e.w) for e in self.edges.values()), multi=True, vertex_set=verts)

    def incident(self) -> dict[int, list[int]]:
        inc: dict[int, list[int]] = {}
        for i, e in sorted(self.edges.items()):
            inc.setdefault(e.u, []).append(i)
            if e.v != e.u:
                inc.setdefault(e.v, []).append(i)
            else:
                inc[e.u].append(i)
        return inc


def _walk_cycle(host: WeightedGraph, walk: Sequence[int]) -> Cycle:
    return Cycle.from_vertices(host, list(walk[:-1]))


@dataclass(frozen=True)
class KernelInstance:
    graph: WeightedGraph
    k: int
    log: tuple[str, ...]
    certificates: tuple[Cycle, ...]
    walks: tuple[tuple[int, ...], ...]  # per kernel edge id: original vertex walk
    original: WeightedGraph
    old_id: dict[int, int]
    compressed: tuple[Fraction, ...] | None = None

    def lift(self, cycles: Iterable[Cycle]) -> list[Cycle]:
        """Map kernel cycles back to original cycles (plus the rule certificates)."""
        out = list(self.certificates)
        for c in cycles:
            seq: list[int] = []
            vs = list(c.vertices) + [c.vertices[0]]
            for a, b in zip(vs, vs[1:]):
                w = self.walks[self.graph.edge_id(a, b)]
                w = w if w[0] == self.old_id[a] else w[::-1]
                seq.extend(w[:-1])
            out.append(Cycle.from_vertices(self.original, seq))
        return out


@dataclass(frozen=True)
class KernelResult:
    kind: str
    kernel: KernelInstance | None = None
    packing: CyclePacking | None = None
    log: tuple[str, ...] = ()
    marked: MarkedCycles | None = None

    @property
    def k(self) -> int | None:
        return self.kernel.k if self.kernel else None


Compressor = Callable[[Sequence[Fraction]], Sequence[Fraction]]


def identity_compressor(ws: Sequence[Fraction]) -> Sequence[Fraction]:
    return list(ws)


def _apply_rules(host: WeightedGraph, H: _Multi, k: int, g0: Fraction, log: list[str], certs: list[Cycle]) -> str | int:
    """Run the rules to exhaustion. Returns YES/NO or the final k."""

    def after_decrement() -> str | None:
        if k == 0:
            return YES
        gi = girth(H.graph(host.n)) if H.edges else INF
        if gi > g0:
            return NO
        return None

    while True:
        loops = sorted(i for i, e in H.edges.items() if e.u == e.v)
        if loops:
            i = loops[0]
            e = H.edges.pop(i)
            if e.w == g0:
                k -= 1
                certs.append(_walk_cycle(host, e.walk))
                log.append(f"rr2 loop v={e.u} w={e.w} k={k}")
                out = after_decrement()
                if out:
                    return out
            else:
                assert e.w > g0
                log.append(f"rr2 loop v={e.u} w={e.w}")
            continue
        groups: dict[tuple[int, int], list[int]] = {}
        for i, e in sorted(H.edges.items()):
            groups.setdefault(_key(e.u, e.v), []).append(i)
        par = sorted(p for p, ids in groups.items() if len(ids) > 1)
        if par:
            ids = groups[par[0]]
            by_w = sorted(ids, key=lambda i: (H.edges[i].w, i))
            e1, e2 = H.edges[by_w[0]], H.edges[by_w[1]]
            s = e1.w + e2.w
            assert s >= g0, "two parallel edges form a cycle below the girth"
            if s == g0:
                w2 = e2.walk if e2.walk[0] == e1.walk[-1] else e2.walk[::-1]
                certs.append(_walk_cycle(host, list(e1.walk) + list(w2[1:])))
                del H.edges[by_w[0]], H.edges[by_w[1]]
                k -= 1
                log.append(f"rr3 pair {par[0][0]}-{par[0][1]} w={e1.w}+{e2.w} k={k}")
                out = after_decrement()
                if out:
                    return out
            else:
                top = max(ids, key=lambda i: (H.edges[i].w, i))
                log.append(f"rr3 drop {par[0][0]}-{par[0][1]} w={H.edges[top].w}")
                del H.edges[top]
            continue
        inc = H.incident()
        deg2 = sorted(v for v, es in inc.items() if len(es) == 2)
        if deg2:
            v = deg2[0]
            a, b = (H.edges[i] for i in inc[v])
            wa = a.walk if a.walk[-1] == v else a.walk[::-1]
            wb = b.walk if b.walk[0] == v else b.walk[::-1]
            x = a.u if a.v == v else a.v
            y = b.v if b.u == v else b.u
            for i in inc[v]:
                del H.edges[i]
            H.edges[H.nxt] = _Edge(x, y, a.w + b.w, tuple(wa) + tuple(wb[1:]))
            H.nxt += 1
            log.append(f"rr1 dissolve v={v} new={x}-{y} w={a.w + b.w}")
            continue
        low = sorted(v for v, es in inc.items() if len(es) <= 1)
        if low:
            v = low[0]
            for i in inc[v]:
                del H.edges[i]
            log.append(f"prune v={v}")
            continue
        return k


def kernelize_ed(g: WeightedGraph, k: int, compressor: Compressor | None = None) -> KernelResult:
    """Kernel for edge-disjoint shortest cycle packing on a planar graph."""
    if k <= 0:
        return KernelResult(YES, packing=CyclePacking((), EDGE), log=("k<=0",))
    c = clean(g)
    if not c.edges:
        return KernelResult(NO, log=("forest",))
    emb, t = build_lsct(c)
    g0 = t.girth
    short = leaf_shortcut(t, k)
    if short is not None:
        return KernelResult(YES, packing=short, log=(f"facial cycles {len(facial_cycles(t))} >= 4k",))
    marked = mark_cycles(emb, t, k)
    trivial = chain_witness(marked, k)
    if trivial is not None:
        return KernelResult(YES, packing=trivial.packing, log=("extension chain reaches k",), marked=marked)
    keys = set()
    for cyc in marked.all:
        keys |= cyc.edges
    H = _Multi({}, 0)
    for u, v, w in c.edges:
        if _key(u, v) in keys:
            H.edges[H.nxt] = _Edge(u, v, w, (u, v))
            H.nxt += 1
    log: list[str] = [f"marked {len(marked.all)} cycles, H has {len(H.edges)} edges"]
    certs: list[Cycle] = []
    out = _apply_rules(c, H, k, g0, log, certs)
    if out == YES:
        return KernelResult(YES, packing=CyclePacking(tuple(sorted(certs)), EDGE), log=tuple(log), marked=marked)
    if out == NO or not H.edges:
        return KernelResult(NO, log=tuple(log), marked=marked)
    kk = int(out)
    verts = sorted({x for e in H.edges.values() for x in (e.u, e.v)})
    new = {v: i for i, v in enumerate(verts)}
    items = sorted(H.edges.items())
    kg = WeightedGraph(len(verts), tuple((new[e.u], new[e.v], e.w) for _, e in items))
    walks = tuple(e.walk for _, e in items)
    comp = None
    if compressor is not None:
        comp = tuple(Fraction(x) for x in compressor([e.w for _, e in items]))
        ok = verify_weight_compression(kg, comp)
        assert ok, "weight compression changed a cycle comparison"
    ki = KernelInstance(kg, kk, tuple(log), tuple(sorted(certs)), walks, c, dict(enumerate(verts)), comp)
    assert kg.n <= 200 * kk * kk, "kernel exceeds 200k'^2 vertices"
    assert all(kg.degree(v) >= 3 for v in kg.vertices), "kernel keeps a vertex of degree < 3"
    return KernelResult(KERNEL, kernel=ki, log=tuple(log), marked=marked)


# -- weight compression check --------------------------------------------------------------


def _cycle_sample(g: WeightedGraph, limit: int) -> list[frozenset]:
    nxg = nx.Graph()
    nxg.add_nodes_from(g.vertices)
    nxg.add_edges_from((u, v) for u, v, _ in g.edges)
    out = []
    for cyc in itertools.islice(nx.simple_cycles(nxg), limit + 1):
        ring = list(cyc) + [cyc[0]]
        out.append(frozenset(_key(a, b) for a, b in zip(ring, ring[1:])))
    if len(out) > limit:
        out = out[:limit] + [c.edges for c in all_shortest_cycles(g)]
    return out


def verify_weight_compression(g: WeightedGraph, new_weights: Sequence, limit: int = 10_000) -> bool:
    """Do the new weights order every enumerated pair of cycles like the old ones?

    All simple cycles are compared when there are at most ``limit``;
    otherwise the first ``limit`` found plus all shortest cycles.
    """
    if len(new_weights) != g.m:
        raise ValueError("one new weight per edge expected")
    neww = {_key(u, v): Fraction(x) for (u, v, _), x in zip(g.edges, new_weights)}
    pairs = sorted(
        (sum((g.weight(a, b) for a, b in c), Fraction(0)), sum((neww[e] for e in c), Fraction(0)))
        for c in set(_cycle_sample(g, limit))
    )
    for (a1, b1), (a2, b2) in zip(pairs, pairs[1:]):
        if (a1 == a2) != (b1 == b2) or (a1 < a2 and not b1 < b2):
            return False
    return True


# -- exact solver ----------------------------------------------------------------------------


def _choose(cycles: Sequence[Cycle], k: int) -> list[Cycle] | None:
    cycles = sorted(cycles)

    def rec(start: int, used: frozenset, chosen: list[Cycle]) -> list[Cycle] | None:
        if len(chosen) == k:
            return list(chosen)
        for i in range(start, len(cycles) - (k - len(chosen)) + 1):
            c = cycles[i]
            if c.edges & used:
                continue
            chosen.append(c)
            got = rec(i + 1, used | c.edges, chosen)
            if got:
                return got
            chosen.pop()
        return None

    return rec(0, frozenset(), [])


def solve_scp_ed_planar(g: WeightedGraph, k: int) -> CyclePacking | None:
    """k edge-disjoint shortest cycles of a planar graph, searched over the marked family."""
    if k <= 0:
        return CyclePacking((), EDGE)
    c = clean(g)
    if not c.edges:
        return None
    emb, t = build_lsct(c)
    pack = leaf_shortcut(t, k)
    if pack is None:
        marked = mark_cycles(emb, t, k)
        trivial = chain_witness(marked, k)
        if trivial is not None:
            pack = trivial.packing
        else:
            got = _choose(marked.all, k)
            pack = None if got is None else CyclePacking(tuple(sorted(got)), EDGE)
    if pack is not None:
        why = verify_packing(g, pack.cycles, EDGE)
        assert why is None, why
        assert len(pack.cycles) == k and all(x.weight == t.girth for x in pack.cycles)
    return pack


# -- min-cut packing -------------------------------------------------------------------------


@dataclass(frozen=True)
class CutPacking:
    cuts: tuple[frozenset[tuple[int, int]], ...]
    weight: Fraction


def min_cut_value(g: WeightedGraph) -> Fraction:
    nxg = nx.Graph()
    nxg.add_nodes_from(g.vertices)
    scale = g.scale
    nxg.add_weighted_edges_from((u, v, int(w * scale)) for u, v, w in g.edges)
    val, _ = nx.stoer_wagner(nxg)
    return Fraction(val, scale)


def is_min_cut_set(g: WeightedGraph, cut: Iterable[tuple[int, int]], value: Fraction | None = None) -> bool:
    cut = {_key(*e) for e in cut}
    if value is None:
        value = min_cut_value(g)
    w = sum((g.weight(a, b) for a, b in cut), Fraction(0))
    rest = WeightedGraph(g.n, tuple(e for e in g.edges if _key(e[0], e[1]) not in cut), vertex_set=g.vertex_set)
    return w == value and len(rest.components()) > 1


def solve_min_cut_packing_planar(g: WeightedGraph, k: int) -> CutPacking | None:
    """k minimum cuts with pairwise disjoint edge sets, via cycles in the dual."""
    if len(g.vertices) < 2:
        raise ValueError("min-cut packing needs at least two vertices")
    if len(g.components()) != 1:
        raise ValueError("min-cut packing needs a connected graph")
    emb = embed(g)
    d = dual(emb)
    # subdivide so the dual becomes simple: loops into 3 edges, others into 2
    edges: list[tuple[int, int, Fraction]] = []
    owner: dict[tuple[int, int], int] = {}
    n = d.graph.n
    for eid, (a, b, w) in enumerate(d.graph.edges):
        if a == b:
            x, y = n, n + 1
            n += 2
            seq = [(a, x), (x, y), (y, a)]
            part = w / 3
        else:
            x = n
            n += 1
            seq = [(a, x), (x, b)]
            part = w / 2
        for p, q in seq:
            edges.append((p, q, part))
            owner[_key(p, q)] = eid
    sd = WeightedGraph(n, tuple(edges))
    lam = min_cut_value(g)
    if k <= 0:
        return CutPacking((), lam)
    pack = solve_scp_ed_planar(sd, k)
    if pack is None:
        return None
    cuts = []
    for cyc in pack.cycles:
        ids = {owner[e] for e in cyc.edges}
        cut = frozenset(d.primal_edge[i] for i in ids)
        assert cyc.weight == lam, "dual girth differs from the minimum cut"
        assert is_min_cut_set(g, cut, lam), "mapped edge set is not a minimum cut"
        cuts.append(cut)
    for a, b in itertools.combinations(cuts, 2):
        assert not (a & b)
    return CutPacking(tuple(sorted(cuts, key=sorted)), lam)
