"""Brute-force ground truth.

Nothing here calls into the solver modules: cycle enumeration, girth,
min cuts and the packing search are written out again on purpose, so a bug
in a solver cannot silently agree with the oracle. Only the graphcore value
types are shared.
"""

from __future__ import annotations

import heapq
import itertools
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .graph import EDGE, VERTEX, Cycle, WeightedGraph, canonical_cycle

DEFAULT_GUARD = 200_000


class GuardExceeded(RuntimeError):
    pass


def _neighbours(g: WeightedGraph) -> dict[int, list[tuple[int, Fraction]]]:
    nb: dict[int, list[tuple[int, Fraction]]] = {v: [] for v in g.vertices}
    for u, v, w in g.edges:
        nb[u].append((v, w))
        nb[v].append((u, w))
    for v in nb:
        nb[v].sort()
    return nb


def _make_cycle(g: WeightedGraph, seq: Sequence[int], w: Fraction) -> Cycle:
    seq = list(seq)
    keys = frozenset((min(a, b), max(a, b)) for a, b in zip(seq, seq[1:] + seq[:1]))
    return Cycle(w, canonical_cycle(seq), keys)


def _dist_from(nb, src, allowed) -> dict[int, int]:
    dist = {src: 0}
    heap = [(0, src)]
    while heap:
        d, x = heapq.heappop(heap)
        if d > dist[x]:
            continue
        for y, w in nb[x]:
            if y not in allowed:
                continue
            nd = d + w
            if y not in dist or nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist


def all_cycles_up_to(g: WeightedGraph, ell) -> list[Cycle]:
    """Every simple cycle of weight <= ell, by DFS from each minimum vertex."""
    ell = Fraction(ell)
    scale = 1
    for _, _, w in g.edges:
        scale = math.lcm(scale, w.denominator)
    bound = math.floor(ell * scale)
    nb = {v: [(y, int(w * scale)) for y, w in ys] for v, ys in _neighbours(g).items()}
    found: dict[tuple[int, ...], int] = {}
    verts = list(g.vertices)
    for s in verts:
        allowed = {v for v in verts if v >= s}
        back = _dist_from(nb, s, allowed)
        path = [s]
        on_path = {s}

        def dfs(x: int, w: int) -> None:
            for y, wy in nb[x]:
                nw = w + wy
                if y == s:
                    if len(path) >= 3 and nw <= bound and path[1] < path[-1]:
                        found[tuple(path)] = nw
                elif y > s and y not in on_path and y in back and nw + back[y] <= bound:
                    path.append(y)
                    on_path.add(y)
                    dfs(y, nw)
                    path.pop()
                    on_path.discard(y)

        dfs(s, 0)
    return sorted(_make_cycle(g, p, Fraction(w, scale)) for p, w in found.items())


def all_cycles_by_edge_subsets(g: WeightedGraph, max_edges: int = 18) -> list[Cycle]:
    """Second enumerator: every edge subset whose subgraph is one 2-regular component."""
    m = g.m
    if m > max_edges:
        raise GuardExceeded(f"{m} edges exceed the edge-subset guard {max_edges}")
    out = []
    for size in range(3, m + 1):
        for subset in itertools.combinations(range(m), size):
            deg: dict[int, list[int]] = {}
            for eid in subset:
                u, v, _ = g.edges[eid]
                deg.setdefault(u, []).append(v)
                deg.setdefault(v, []).append(u)
            if len(deg) != size or any(len(x) != 2 for x in deg.values()):
                continue
            start = min(deg)
            seq = [start]
            prev, cur = None, start
            while True:
                a, b = deg[cur]
                nxt = a if a != prev else b
                if nxt == start:
                    break
                seq.append(nxt)
                prev, cur = cur, nxt
            if len(seq) != size:
                continue
            w = sum((g.edges[e][2] for e in subset), Fraction(0))
            out.append(_make_cycle(g, seq, w))
    return sorted(out)


def oracle_girth(g: WeightedGraph) -> Fraction | float:
    nb = _neighbours(g)
    best: Fraction | float = math.inf
    for u, v, w in g.edges:
        dist = {u: Fraction(0)}
        heap = [(Fraction(0), u)]
        while heap:
            d, x = heapq.heappop(heap)
            if d > dist[x]:
                continue
            for y, wy in nb[x]:
                if {x, y} == {u, v}:
                    continue
                nd = d + wy
                if y not in dist or nd < dist[y]:
                    dist[y] = nd
                    heapq.heappush(heap, (nd, y))
        if v in dist:
            best = min(best, dist[v] + w)
    return best


# -- packing search ------------------------------------------------------------


def _masks(g: WeightedGraph, cycles: Sequence[Cycle], mode: str) -> list[int]:
    if mode == VERTEX:
        return [sum(1 << v for v in c.vertices) for c in cycles]
    index = {}
    for u, v, _ in g.edges:
        index[(min(u, v), max(u, v))] = len(index)
    return [sum(1 << index[e] for e in c.edges) for c in cycles]


def _min_total(cycles: list[Cycle], masks: list[int], k: int, cap=None) -> list[int] | None:
    order = sorted(range(len(cycles)), key=lambda i: cycles[i])
    ws = [cycles[i].weight for i in order]
    ms = [masks[i] for i in order]
    best: list = [None, None]

    def rec(start: int, need: int, used: int, total: Fraction, chosen: list[int]) -> None:
        if need == 0:
            if best[0] is None or total < best[0]:
                best[0] = total
                best[1] = list(chosen)
            return
        for i in range(start, len(ws) - need + 1):
            if best[0] is not None and total + ws[i] * need >= best[0]:
                return
            if cap is not None and total + ws[i] * need > cap:
                return
            if ms[i] & used:
                continue
            chosen.append(order[i])
            rec(i + 1, need - 1, used | ms[i], total + ws[i], chosen)
            chosen.pop()

    rec(0, k, 0, Fraction(0), [])
    return best[1]


def _vector(cycles: list[Cycle], masks: list[int], budgets: Sequence[Fraction]) -> list[int] | None:
    slots = sorted(range(len(budgets)), key=lambda i: budgets[i])
    assign: dict[int, int] = {}

    def rec(j: int, used: int, last: int) -> bool:
        if j == len(slots):
            return True
        b = budgets[slots[j]]
        same = j > 0 and budgets[slots[j - 1]] == b
        for i, c in enumerate(cycles):
            if c.weight > b or masks[i] & used:
                continue
            if same and i <= last:
                continue
            assign[slots[j]] = i
            if rec(j + 1, used | masks[i], i):
                return True
        return False

    if not rec(0, 0, -1):
        return None
    return [assign[i] for i in range(len(budgets))]


def best_packing(
    g: WeightedGraph,
    k: int,
    mode: str = VERTEX,
    objective: str = "min-total",
    bound=None,
    budgets: Sequence | None = None,
    guard: int = DEFAULT_GUARD,
    total_bound=None,
) -> list[Cycle] | None:
    """Exact optimum by backtracking over candidate cycles.

    ``min-total`` minimises the total weight over packings of cycles of
    weight at most ``bound`` (all cycles when ``bound`` is None);
    ``shortest-only`` packs cycles of weight exactly the girth; ``vector``
    assigns one cycle per budget. ``total_bound`` (min-total only) rejects
    packings heavier than the bound. Returns the cycles, or None.
    """
    if k == 0:
        return []
    if objective == "shortest-only":
        gi = oracle_girth(g)
        if gi == math.inf:
            return None
        cands = [c for c in all_cycles_up_to(g, gi) if c.weight == gi]
    elif objective == "vector":
        if budgets is None or len(budgets) != k:
            raise ValueError("vector objective needs k budgets")
        budgets = [Fraction(b) for b in budgets]
        cands = all_cycles_up_to(g, max(budgets))
    elif objective == "min-total":
        if bound is None:
            bound = sum((w for _, _, w in g.edges), Fraction(0))
        cands = all_cycles_up_to(g, bound)
    else:
        raise ValueError(f"unknown objective {objective!r}")
    if len(cands) > guard:
        raise GuardExceeded(f"{len(cands)} candidate cycles exceed guard {guard}")
    masks = _masks(g, cands, mode)
    if objective == "vector":
        pick = _vector(cands, masks, budgets)
    else:
        pick = _min_total(cands, masks, k, None if total_bound is None else Fraction(total_bound))
    if pick is None:
        return None
    return [cands[i] for i in pick]


def packing_exists_within(g: WeightedGraph, k: int, mode: str, cycles: Sequence[Cycle]) -> bool:
    """Is there a k-packing using only the given cycles?"""
    masks = _masks(g, list(cycles), mode)
    return _min_total(list(cycles), masks, k) is not None


# -- min cuts -----------------------------------------------------------------


def all_min_cuts(g: WeightedGraph) -> tuple[Fraction, list[frozenset[tuple[int, int]]]]:
    """Minimum cut weight and every distinct minimum cut-set, by trying all bipartitions.

    Vectorised over subsets with numpy; vertex ``vertices[0]`` is fixed on one
    side so each bipartition is seen once.
    """
    verts = list(g.vertices)
    n = len(verts)
    if n < 2:
        raise ValueError("need at least two vertices")
    if n > 24:
        raise GuardExceeded("too many vertices for exhaustive cuts")
    pos = {v: i for i, v in enumerate(verts)}
    scale = 1
    for _, _, w in g.edges:
        scale = math.lcm(scale, w.denominator)
    ids = np.arange(1, 1 << (n - 1), dtype=np.int64) << 1
    weight = np.zeros(len(ids), dtype=np.int64)
    for u, v, w in g.edges:
        a, b = pos[u], pos[v]
        cross = ((ids >> a) ^ (ids >> b)) & 1
        weight += cross * int(w * scale)
    best = int(weight.min())
    cuts = set()
    for side in ids[weight == best]:
        side = int(side)
        cuts.add(frozenset(
            (min(u, v), max(u, v)) for u, v, _ in g.edges
            if ((side >> pos[u]) ^ (side >> pos[v])) & 1
        ))
    return Fraction(best, scale), sorted(cuts, key=sorted)


def disjoint_min_cuts(g: WeightedGraph, k: int) -> list[frozenset] | None:
    _, cuts = all_min_cuts(g)
    chosen: list[frozenset] = []

    def rec(start: int, used: frozenset) -> bool:
        if len(chosen) == k:
            return True
        for i in range(start, len(cuts)):
            if cuts[i] & used:
                continue
            chosen.append(cuts[i])
            if rec(i + 1, used | cuts[i]):
                return True
            chosen.pop()
        return False

    return list(chosen) if rec(0, frozenset()) else None


def is_min_cut(g: WeightedGraph, cut: Iterable[tuple[int, int]]) -> bool:
    """Is ``cut`` exactly the edge set between the two sides of a minimum bipartition?"""
    cut = frozenset((min(u, v), max(u, v)) for u, v in cut)
    best, cuts = all_min_cuts(g)
    return cut in set(cuts)


# -- other source problems ------------------------------------------------------


def max_independent_set(nodes: Iterable, adjacent) -> list:
    """Largest independent set by subset enumeration (small inputs only)."""
    nodes = list(nodes)
    for size in range(len(nodes), 0, -1):
        for sub in itertools.combinations(nodes, size):
            if all(not adjacent(a, b) for a, b in itertools.combinations(sub, 2)):
                return list(sub)
    return []


def graph_independent_set(g: WeightedGraph, k: int) -> list[int] | None:
    nb = {v: set() for v in g.vertices}
    for u, v, _ in g.edges:
        nb[u].add(v)
        nb[v].add(u)
    for sub in itertools.combinations(g.vertices, k):
        if all(b not in nb[a] for a, b in itertools.combinations(sub, 2)):
            return list(sub)
    return None


def multicolored_clique(g: WeightedGraph, classes: Sequence[Sequence[int]]) -> list[int] | None:
    for pick in itertools.product(*classes):
        if all(g.has_edge(a, b) for a, b in itertools.combinations(pick, 2)):
            return list(pick)
    return None


def sat_brute(clauses: Sequence[Sequence[int]], nvars: int) -> dict[int, bool] | None:
    for bits in itertools.product((False, True), repeat=nvars):
        val = {i + 1: b for i, b in enumerate(bits)}
        if all(any(val[abs(l)] == (l > 0) for l in cl) for cl in clauses):
            return val
    return None


def shortest_factor_length(word: Sequence[str], letter: str) -> int | None:
    pos = [i for i, x in enumerate(word) if x == letter]
    gaps = [b - a for a, b in zip(pos, pos[1:])]
    return min(gaps) if gaps else None


def dsf_brute(word: Sequence[str], alphabet: Iterable[str], blank: str = "_", max_len: int = 20_000):
    """Disjoint Shortest Factors by backtracking.

    Returns ``{letter: (i, j)}`` with 1-based inclusive positions, or None.
    Letters are handled in order of fewest candidate factors first.
    """
    word = list(word)
    if len(word) > max_len:
        raise GuardExceeded("word too long")
    options = {}
    for a in alphabet:
        if a == blank:
            continue
        d = shortest_factor_length(word, a)
        if d is None:
            return None
        options[a] = [(i, i + d) for i in range(len(word) - d) if word[i] == a and word[i + d] == a]
    letters = sorted(options, key=lambda a: (len(options[a]), a))
    used = [False] * len(word)
    pick: dict[str, tuple[int, int]] = {}

    def rec(idx: int) -> bool:
        if idx == len(letters):
            return True
        a = letters[idx]
        for i, j in options[a]:
            if any(used[i:j + 1]):
                continue
            for t in range(i, j + 1):
                used[t] = True
            pick[a] = (i + 1, j + 1)
            if rec(idx + 1):
                return True
            for t in range(i, j + 1):
                used[t] = False
        pick.pop(a, None)
        return False

    return dict(pick) if rec(0) else None


# -- solution checking -----------------------------------------------------------


def _cut_is_minimum(g: WeightedGraph, cut: frozenset, value: Fraction) -> bool:
    """A disconnecting edge set of weight equal to the minimum cut is a minimum cut-set."""
    w = Fraction(0)
    for u, v, x in g.edges:
        if (min(u, v), max(u, v)) in cut:
            w += x
    if w != value:
        return False
    nb = {v: [] for v in g.vertices}
    for u, v, _ in g.edges:
        if (min(u, v), max(u, v)) not in cut:
            nb[u].append(v)
            nb[v].append(u)
    start = g.vertices[0]
    seen = {start}
    stack = [start]
    while stack:
        for y in nb[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) < len(g.vertices)


def _min_cut_value(g: WeightedGraph) -> Fraction:
    if len(g.vertices) <= 24:
        return all_min_cuts(g)[0]
    import networkx as nx

    scale = 1
    for _, _, w in g.edges:
        scale = math.lcm(scale, w.denominator)
    nxg = nx.Graph()
    nxg.add_nodes_from(g.vertices)
    nxg.add_weighted_edges_from((u, v, int(w * scale)) for u, v, w in g.edges)
    return Fraction(nx.stoer_wagner(nxg)[0], scale)


def verify_solution(problem: str, g: WeightedGraph, k: int, budgets: Sequence, sol) -> tuple[bool, str]:
    """Check a claimed solution against its instance.

    ``sol`` is a parsed solution (answer, cycles, cuts, total). Yes claims
    are checked structurally; no claims are re-decided by brute force and
    reported as unchecked when the instance exceeds the oracle guard.
    """
    mode = EDGE if problem.endswith("-ed") or problem == "mincut-pack" else VERTEX
    budgets = [Fraction(b) for b in budgets]
    if not sol.answer:
        try:
            if problem == "mincut-pack":
                found = k > 0 and disjoint_min_cuts(g, k) is not None
            elif problem.startswith("minsum"):
                found = best_packing(g, k, mode, "min-total", bound=budgets[0], total_bound=budgets[0]) is not None
            elif problem.startswith("minvec"):
                found = best_packing(g, k, mode, "vector", budgets=budgets) is not None
            else:
                found = best_packing(g, k, mode, "shortest-only") is not None
        except GuardExceeded as exc:
            return True, f"no-claim unchecked ({exc})"
        return (False, "a solution exists") if found else (True, "no-claim confirmed")

    if problem == "mincut-pack":
        if len(sol.cuts) != k:
            return False, f"expected {k} cuts, got {len(sol.cuts)}"
        value = _min_cut_value(g)
        seen: set = set()
        for cut in sol.cuts:
            cut = frozenset((min(u, v), max(u, v)) for u, v in cut)
            if any(not g.has_edge(u, v) for u, v in cut):
                return False, "cut uses a non-edge"
            if not _cut_is_minimum(g, cut, value):
                return False, f"not a minimum cut: {sorted(cut)}"
            if cut & seen:
                return False, "cuts share an edge"
            seen |= cut
        if sol.total is not None and sol.total != value * k:
            return False, "total does not match"
        return True, "ok"

    want = len(budgets) if problem.startswith("minvec") else k
    if len(sol.cycles) != want:
        return False, f"expected {want} cycles, got {len(sol.cycles)}"
    cycles = []
    for seq in sol.cycles:
        if len(seq) < 3 or len(set(seq)) != len(seq):
            return False, f"not a simple cycle: {seq}"
        w = Fraction(0)
        for a, b in zip(seq, seq[1:] + seq[:1]):
            if not g.has_edge(a, b):
                return False, f"missing edge {a}-{b}"
            w += g.weight(a, b)
        cycles.append(_make_cycle(g, seq, w))
    masks = _masks(g, cycles, mode)
    acc = 0
    for m in masks:
        if m & acc:
            return False, f"cycles are not {mode}-disjoint"
        acc |= m
    total = sum((c.weight for c in cycles), Fraction(0))
    if sol.total is not None and sol.total != total:
        return False, f"total {sol.total} does not match {total}"
    if problem.startswith("minsum") and total > budgets[0]:
        return False, f"total {total} exceeds {budgets[0]}"
    if problem.startswith("minvec"):
        for c, b in zip(cycles, budgets):
            if c.weight > b:
                return False, f"cycle of weight {c.weight} exceeds its budget {b}"
    if problem in ("scp", "scp-ed"):
        gi = oracle_girth(g)
        if any(c.weight != gi for c in cycles):
            return False, "a cycle is not a shortest cycle"
    return True, "ok"
