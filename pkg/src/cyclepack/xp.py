"""Path censuses, chord machinery and the XP solvers for Min-Sum / Min-Vector packing.

The solvers follow the enumeration argument: list every path of weight at
most the budget, close each path into a cycle with one more edge, and search
the resulting cycle list for a cheapest k-packing. When the census exceeds
its cap the solver falls back to a greedy cover for an early witness and an
exact direct enumeration for the final answer.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import (
    EDGE,
    VERTEX,
    Cycle,
    CyclePacking,
    VertexPath,
    WeightedGraph,
    canonical_cycle,
    cycles_up_to_scaled,
    shortest_cycle,
    verify_packing,
)

log = logging.getLogger(__name__)

DEFAULT_CAP = 10**7


class CensusOverflow(Exception):
    """The number of paths within the bound exceeds the cap."""

    def __init__(self, cap: int):
        super().__init__(f"more than {cap} paths")
        self.cap = cap


@dataclass(frozen=True)
class PathCensusConfig:
    length_bound: Fraction
    cap: int = DEFAULT_CAP
    cap_policy: str = "paper-formula"

    def effective_cap(self, n: int, k: int) -> int:
        if self.cap_policy == "explicit":
            return self.cap
        return formula_cap(n, k, self.cap)


def formula_cap(n: int, k: int, hard_cap: int = DEFAULT_CAP) -> int:
    """``n^(256k^4) * n^(1024k^5)`` clamped to ``hard_cap``."""
    if n <= 1:
        return hard_cap
    exponent = 256 * k**4 + 1024 * k**5
    if exponent * math.log10(n) > math.log10(hard_cap):
        return hard_cap
    return min(hard_cap, n**exponent)


def _scaled_bound(g: WeightedGraph, ell) -> int:
    return math.floor(Fraction(ell) * g.scale)


def _census(g: WeightedGraph, bound: int, cap: int) -> list[tuple[tuple[int, ...], int]]:
    """All simple paths of scaled weight <= bound as ``(vertices, weight)``.

    Each undirected path is reported once, oriented from its smaller end.
    Raises CensusOverflow as soon as more than ``cap`` paths are seen.
    """
    iw = g.iw
    adj = g.adj
    out: list[tuple[tuple[int, ...], int]] = []
    if bound < 0:
        return out
    for s in g.vertices:
        out.append(((s,), 0))
        if len(out) > cap:
            raise CensusOverflow(cap)
        path = [s]
        on_path = {s}
        stack = [(iter(adj[s]), 0)]
        while stack:
            it, w = stack[-1]
            step = next(it, None)
            if step is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            y, eid = step
            nw = w + iw[eid]
            if y in on_path or nw > bound:
                continue
            path.append(y)
            on_path.add(y)
            if s < y:
                out.append((tuple(path), nw))
                if len(out) > cap:
                    raise CensusOverflow(cap)
            stack.append((iter(adj[y]), nw))
    return out


def enumerate_paths(g: WeightedGraph, ell, cap: int = DEFAULT_CAP) -> list[VertexPath]:
    """Every simple path (trivial ones included) of weight <= ell.

    Raises CensusOverflow when there are more than ``cap`` of them.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    raw = _census(g, _scaled_bound(g, ell), cap)
    return [VertexPath(p, g.from_scaled(w)) for p, w in raw]


def count_paths(g: WeightedGraph, ell, cap: int = DEFAULT_CAP) -> int:
    return len(_census(g, _scaled_bound(g, ell), cap))


def _cycles_from_census(g: WeightedGraph, paths, bound: int) -> list[Cycle]:
    """Close each path with an edge between its ends."""
    iw = g.iw
    idx = g.edge_index
    found: dict[tuple[int, ...], int] = {}
    for seq, w in paths:
        if len(seq) < 3:
            continue
        a, b = seq[0], seq[-1]
        eid = idx.get((a, b) if a < b else (b, a))
        if eid is None or w + iw[eid] > bound:
            continue
        found.setdefault(canonical_cycle(seq), w + iw[eid])
    out = []
    for seq, w in found.items():
        keys = frozenset((min(x, y), max(x, y)) for x, y in zip(seq, seq[1:] + seq[:1]))
        out.append(Cycle(g.from_scaled(w), seq, keys))
    out.sort()
    return out


def candidate_cycles(g: WeightedGraph, ell, cap: int = DEFAULT_CAP) -> list[Cycle]:
    """Cycles of weight <= ell derived from the path census (overflow propagates)."""
    bound = _scaled_bound(g, ell)
    return _cycles_from_census(g, _census(g, bound, cap), bound)


# -- chords -----------------------------------------------------------------


@dataclass(frozen=True)
class ChordDecomposition:
    path: VertexPath
    cycle: Cycle
    chords: tuple[tuple[int, ...], ...]
    tails: tuple[tuple[int, ...], ...]
    shared_edges: frozenset
    endpoints: tuple[tuple[int, int], ...] = field(default=())

    def chord_positions(self, i: int) -> tuple[int, int]:
        return self.endpoints[i]


def chord_decompose(P: VertexPath, C: Cycle) -> ChordDecomposition:
    """Split P into chords, tails and shared edges relative to C.

    Chord endpoints are reported as positions (0-based) in C's canonical
    vertex sequence with ``s < t``.
    """
    pos = {v: i for i, v in enumerate(C.vertices)}
    seq = P.vertices
    on = [i for i, v in enumerate(seq) if v in pos]
    if not on:
        raise ValueError("path and cycle are disjoint")
    tails = []
    if on[0] > 0:
        tails.append(tuple(seq[: on[0] + 1]))
    if on[-1] < len(seq) - 1:
        tails.append(tuple(seq[on[-1]:]))
    chords = []
    ends = []
    shared = set()
    for a, b in zip(on, on[1:]):
        x, y = seq[a], seq[b]
        key = (min(x, y), max(x, y))
        if b == a + 1 and key in C.edges:
            shared.add(key)
            continue
        chords.append(tuple(seq[a : b + 1]))
        ends.append((min(pos[x], pos[y]), max(pos[x], pos[y])))
    return ChordDecomposition(P, C, tuple(chords), tuple(tails), frozenset(shared), tuple(ends))


def classify_chord_pair(a: tuple[int, int], b: tuple[int, int]) -> str:
    """Relation of two vertex-disjoint chords given as ``(s, t)`` position pairs."""
    if len({*a, *b}) != 4:
        raise ValueError("chords share an endpoint")
    (s1, t1), (s2, t2) = sorted([tuple(sorted(a)), tuple(sorted(b))])
    if t1 < s2:
        return "consecutive"
    if t1 < t2:
        return "crossing"
    return "parallel"


def _longest_monotone(seq: Sequence, increasing: bool) -> list[int]:
    """Indices of a longest strictly monotone subsequence (earliest predecessors)."""
    n = len(seq)
    if n == 0:
        return []
    better = (lambda x, y: x < y) if increasing else (lambda x, y: x > y)
    length = [1] * n
    for j in range(n):
        for i in range(j):
            if better(seq[i], seq[j]) and length[i] + 1 > length[j]:
                length[j] = length[i] + 1
    r = max(length)
    j = length.index(r)
    out = [j]
    need = r - 1
    while need:
        cur = out[-1]
        i = next(i for i in range(cur) if better(seq[i], seq[cur]) and length[i] >= need)
        out.append(i)
        need -= 1
    return out[::-1]


def _monotone_of_length(seq: Sequence, r: int, increasing: bool) -> list[int] | None:
    n = len(seq)
    better = (lambda x, y: x < y) if increasing else (lambda x, y: x > y)
    length = [1] * n
    for j in range(n):
        for i in range(j):
            if better(seq[i], seq[j]) and length[i] + 1 > length[j]:
                length[j] = length[i] + 1
    ends = [j for j in range(n) if length[j] >= r]
    if not ends:
        return None
    out = [ends[0]]
    need = r - 1
    while need:
        cur = out[-1]
        i = next(i for i in range(cur) if better(seq[i], seq[cur]) and length[i] >= need)
        out.append(i)
        need -= 1
    return out[::-1]


def monotone_subsequence(seq: Sequence, r: int) -> tuple | None:
    """An increasing, else decreasing, subsequence of length ``r`` (or None)."""
    if len(set(seq)) != len(seq):
        raise ValueError("sequence has duplicate entries")
    if r <= 0:
        return ()
    for inc in (True, False):
        idx = _monotone_of_length(seq, r, inc)
        if idx is not None:
            return tuple(seq[i] for i in idx)
    return None


def _thin(dec: ChordDecomposition) -> list[int]:
    """Pairwise vertex-disjoint chords, greedily along P.

    Only chords adjacent along P can share a vertex, so this keeps at least
    every second chord.
    """
    kept: list[int] = []
    for i, ch in enumerate(dec.chords):
        if kept and set(dec.chords[kept[-1]]) & set(ch):
            continue
        kept.append(i)
    return kept


def _consecutive_family(ends: list[tuple[int, int]], ids: list[int]) -> list[int]:
    out = []
    last_t = -1
    for i in sorted(ids, key=lambda i: ends[i][1]):
        s, t = ends[i]
        if s > last_t:
            out.append(i)
            last_t = t
    return out


def _straddling_family(ends, ids) -> tuple[str, list[int]]:
    """Best crossing or parallel family among chords straddling one position."""
    best: tuple[str, list[int]] = ("crossing", [])
    # probe just after each endpoint so chords with adjacent ends are seen
    positions = sorted({p + Fraction(1, 2) for i in ids for p in ends[i]})
    for x in positions:
        group = sorted((i for i in ids if ends[i][0] < x < ends[i][1]), key=lambda i: ends[i][0])
        if len(group) <= len(best[1]):
            continue
        ts = [ends[i][1] for i in group]
        for label, inc in (("crossing", True), ("parallel", False)):
            sel = _longest_monotone(ts, inc)
            if len(sel) > len(best[1]):
                best = (label, [group[j] for j in sel])
    return best


def _oriented(chord: tuple[int, ...], C: Cycle, s: int) -> tuple[int, ...]:
    return chord if chord[0] == C.vertices[s] else chord[::-1]


def _cycle_or_none(g: WeightedGraph, seq: list[int]) -> Cycle | None:
    try:
        return Cycle.from_vertices(g, seq)
    except (ValueError, KeyError):
        return None


def _build_cycles(g, dec: ChordDecomposition, label: str, fam: list[int]) -> list[Cycle]:
    C = dec.cycle
    ends = dec.endpoints
    out = []
    if label == "consecutive":
        for i in fam:
            s, t = ends[i]
            R = _oriented(dec.chords[i], C, s)
            arc = C.arc(s, t)
            cyc = _cycle_or_none(g, list(R) + list(arc[::-1][1:-1]))
            if cyc:
                out.append(cyc)
        return out
    fam = sorted(fam, key=lambda i: ends[i][0])
    for a, b in zip(fam[0::2], fam[1::2]):
        (sa, ta), (sb, tb) = ends[a], ends[b]
        A = _oriented(dec.chords[a], C, sa)
        B = _oriented(dec.chords[b], C, sb)
        if label == "crossing":
            far = C.arc(ta, tb)[1:]
        else:
            far = C.arc(tb, ta)[::-1][1:]
        near_back = C.arc(sa, sb)[::-1][1:-1]
        seq = list(A) + list(far) + list(B[::-1][1:]) + list(near_back)
        cyc = _cycle_or_none(g, seq)
        if cyc:
            out.append(cyc)
    return out


def extract_k_cycles_from_chords(
    g: WeightedGraph, P: VertexPath, C: Cycle, k: int, ell
) -> CyclePacking | None:
    """k vertex-disjoint cycles of total weight <= ell built from P's chords on C.

    Finds a family of at least 4k pairwise vertex-disjoint chords that are
    all consecutive, all crossing or all parallel, builds one cycle per chord
    (consecutive) or per chord pair (crossing/parallel) and keeps the k
    shortest. For k = 1 a single chord plus the cheaper of its two arcs is
    accepted as well.
    """
    ell = Fraction(ell)
    if P.weight > ell or C.weight > ell:
        raise ValueError("path and cycle must have weight <= ell")
    dec = chord_decompose(P, C)
    ids = _thin(dec)
    ends = list(dec.endpoints)
    families: list[tuple[str, list[int]]] = [("consecutive", _consecutive_family(ends, ids))]
    families.append(_straddling_family(ends, ids))
    for label, fam in families:
        if len(fam) < 4 * k:
            continue
        cycles = sorted(_build_cycles(g, dec, label, fam))[:k]
        if len(cycles) == k:
            packing = CyclePacking(tuple(cycles), VERTEX)
            if packing.total_weight <= ell:
                return packing
    if k == 1:
        best = None
        for i in ids:
            s, t = ends[i]
            R = _oriented(dec.chords[i], C, s)
            for arc in (C.arc(s, t), C.arc(t, s + len(C))[::-1]):
                cyc = _cycle_or_none(g, list(R) + list(arc[::-1][1:-1]))
                if cyc and cyc.weight <= ell and (best is None or cyc < best):
                    best = cyc
        if best is not None:
            return CyclePacking((best,), VERTEX)
    return None


def path_cover_components(P: VertexPath, cover: Sequence[Cycle]) -> int:
    """Connected components of P intersected with the union of the cover cycles."""
    vs = set().union(*(c.vertex_set for c in cover)) if cover else set()
    es = set().union(*(c.edges for c in cover)) if cover else set()
    seq = P.vertices
    comps = 0
    prev_in = False
    for i, v in enumerate(seq):
        if v not in vs:
            prev_in = False
            continue
        if prev_in and (min(seq[i - 1], v), max(seq[i - 1], v)) in es:
            continue
        comps += 1
        prev_in = True
    return comps


# -- greedy cover -------------------------------------------------------------


def greedy_short_cycle_cover(g: WeightedGraph, k: int, ell) -> list[Cycle]:
    """Vertex-disjoint cycles of weight <= ell/k, cheapest first, stopping at k."""
    limit = Fraction(ell) / k
    out: list[Cycle] = []
    cur = g
    while len(out) < k:
        c = shortest_cycle(cur)
        if c is None or c.weight > limit:
            break
        out.append(c)
        cur = cur.without_vertices(c.vertices)
    return out


# -- k-subset search ------------------------------------------------------------


def _masks(g: WeightedGraph, cycles: Sequence[Cycle], mode: str) -> list[int]:
    if mode == VERTEX:
        return [sum(1 << v for v in c.vertices) for c in cycles]
    idx = g.edge_index
    return [sum(1 << idx[e] for e in c.edges) for c in cycles]


def cheapest_packing(
    g: WeightedGraph, cycles: Sequence[Cycle], k: int, mode: str, bound: Fraction | None = None
) -> list[Cycle] | None:
    """Minimum-total k-packing among ``cycles`` (sorted ascending), total <= bound."""
    cycles = sorted(cycles)
    masks = _masks(g, cycles, mode)
    ws = [c.weight for c in cycles]
    n = len(cycles)
    best_w = [bound]
    best_pick: list = [None]
    chosen: list[int] = []

    def rec(start: int, need: int, used: int, total: Fraction) -> None:
        if need == 0:
            if best_w[0] is None or total < best_w[0] or (best_pick[0] is None and total == best_w[0]):
                best_w[0] = total
                best_pick[0] = list(chosen)
            return
        for i in range(start, n - need + 1):
            lb = total + ws[i] * need
            if best_w[0] is not None and (lb > best_w[0] or (lb == best_w[0] and best_pick[0] is not None)):
                return
            if masks[i] & used:
                continue
            chosen.append(i)
            rec(i + 1, need - 1, used | masks[i], total + ws[i])
            chosen.pop()

    rec(0, k, 0, Fraction(0))
    if best_pick[0] is None:
        return None
    return [cycles[i] for i in best_pick[0]]


def _cycles_within(g: WeightedGraph, ell, cap: int) -> list[Cycle]:
    bound = _scaled_bound(g, ell)
    try:
        return _cycles_from_census(g, _census(g, bound, cap), bound)
    except CensusOverflow:
        log.info("path census overflow at cap %d; enumerating cycles directly", cap)
        return cycles_up_to_scaled(g, bound)


def solve_minsum(g: WeightedGraph, k: int, ell, mode: str = VERTEX, cap: int = DEFAULT_CAP) -> CyclePacking | None:
    """k mode-disjoint cycles of minimum total weight, if that total is <= ell."""
    if k < 1:
        raise ValueError("k must be at least 1")
    ell = Fraction(ell)
    if ell < 0:
        raise ValueError("ell must be non-negative")
    cap = formula_cap(len(g.vertices), k, cap)
    bound = _scaled_bound(g, ell)
    try:
        cycles = _cycles_from_census(g, _census(g, bound, cap), bound)
    except CensusOverflow:
        log.info("census overflow (cap %d); trying greedy cover witness", cap)
        cover = greedy_short_cycle_cover(g, k, ell)
        seed_bound = ell
        if len(cover) == k:
            seed_bound = sum((c.weight for c in cover), Fraction(0))
        cycles = [c for c in cycles_up_to_scaled(g, bound) if c.weight <= seed_bound]
        if len(cover) == k and not cycles:
            cycles = cover
    pick = cheapest_packing(g, cycles, k, mode, ell)
    if pick is None:
        return None
    reason = verify_packing(g, pick, mode)
    if reason:
        raise AssertionError(f"internal witness check failed: {reason}")
    return CyclePacking(tuple(pick), mode)


def solve_minvector(g: WeightedGraph, budgets: Sequence, mode: str = VERTEX, cap: int = DEFAULT_CAP) -> CyclePacking | None:
    """k mode-disjoint cycles with cycle i of weight <= budgets[i] (after reordering).

    Branches on the cycle taking the smallest remaining budget, removes it
    and recurses; the returned cycles are listed in the order of ``budgets``.
    """
    budgets = [Fraction(b) for b in budgets]
    if not budgets or any(b <= 0 for b in budgets):
        raise ValueError("budgets must be positive")
    k = len(budgets)
    cap = formula_cap(len(g.vertices), k, cap)
    order = sorted(range(k), key=lambda i: budgets[i])
    sb = [budgets[i] for i in order]
    memo: dict = {}

    def cycles_in(removed: frozenset, j: int) -> list[Cycle]:
        key = (removed, sb[j])
        if key not in memo:
            h = g.without_vertices(removed) if mode == VERTEX else g.without_edges(removed)
            memo[key] = _cycles_within(h, sb[j], cap)
        return memo[key]

    def rec(removed: frozenset, j: int, floor) -> list[Cycle] | None:
        if j == k:
            return []
        for c in cycles_in(removed, j):
            if floor is not None and c <= floor:
                continue
            items = c.vertex_set if mode == VERTEX else c.edges
            nxt_floor = c if j + 1 < k and sb[j + 1] == sb[j] else None
            rest = rec(removed | items, j + 1, nxt_floor)
            if rest is not None:
                return [c] + rest
        return None

    pick = rec(frozenset(), 0, None)
    if pick is None:
        return None
    by_slot = [None] * k
    for slot, c in zip(order, pick):
        by_slot[slot] = c
    reason = verify_packing(g, by_slot, mode)
    if reason:
        raise AssertionError(f"internal witness check failed: {reason}")
    return CyclePacking(tuple(by_slot), mode)
