"""Instance generators for the hardness reductions, plus random planar fixtures.

Each generator builds its target instance exactly as the construction
describes and asserts the structural facts the construction promises
(maximum degree, girth, factor lengths, min-cut weight).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx
import numpy as np

from .graph import WeightedGraph, girth

BLANK = "_"


class _Builder:
    """Incremental unit-weight graph with named vertices."""

    def __init__(self):
        self.ids: dict = {}
        self.edges: list[tuple[int, int, Fraction]] = []

    def v(self, name) -> int:
        if name not in self.ids:
            self.ids[name] = len(self.ids)
        return self.ids[name]

    def fresh(self) -> int:
        return self.v(("anon", len(self.ids)))

    def edge(self, a, b, w=1) -> None:
        self.edges.append((self.v(a) if not isinstance(a, int) else a,
                           self.v(b) if not isinstance(b, int) else b, Fraction(w)))

    def path(self, a: int, b: int, length: int) -> None:
        """Unit path of ``length`` edges between existing vertices a and b."""
        if length < 1:
            raise ValueError("path length must be positive")
        prev = a
        for _ in range(length - 1):
            x = self.fresh()
            self.edges.append((prev, x, Fraction(1)))
            prev = x
        self.edges.append((prev, b, Fraction(1)))

    def graph(self) -> WeightedGraph:
        return WeightedGraph(len(self.ids), tuple(self.edges))


def max_degree(g: WeightedGraph) -> int:
    return max((len(g.adj[v]) for v in g.vertices), default=0)


# -- multicolored clique -> min-sum cycle packing ---------------------------------


@dataclass(frozen=True)
class MccReduction:
    graph: WeightedGraph
    k: int
    L: int
    gamma: int
    nu: int
    delta: int


def gen_mcc_to_minsum(g: WeightedGraph, classes: Sequence[Sequence[int]]) -> MccReduction:
    """Min-sum cycle packing instance equivalent to a multicolored clique instance.

    ``classes`` must partition the vertices of ``g``. Classes smaller than
    ``nu`` get padding slots (their ring segments are built but carry no
    edge gadgets); ``nu`` and the maximum degree are raised to at least 2
    and 1 so the chord length ``gamma`` is positive.
    """
    flat = [v for cl in classes for v in cl]
    if sorted(flat) != sorted(g.vertices) or len(set(flat)) != len(flat):
        raise ValueError("classes do not partition the vertex set")
    ell = len(classes)
    nu = max(2, max(len(c) for c in classes))
    delta = max(1, max_degree(g))
    seg = 3 * delta + 1
    # ring distance from w of block p to u of block p + nu - 1
    gamma = (nu - 1) * seg + 1
    enc = math.ceil(Fraction(8 * gamma, 5))
    b = _Builder()
    color_of = {}
    slot_of = {}
    for i, cl in enumerate(classes):
        for a, v in enumerate(sorted(cl)):
            color_of[v] = i
            slot_of[v] = a
    for i in range(ell):
        ring = []
        for j in range(3):
            for a in range(nu):
                ring.append(("w", i, j, a))
                ring.append(("u", i, j, a))
                ring.extend(("v", i, j, a, x) for x in range(1, 3 * delta))
        for x, y in zip(ring, ring[1:] + ring[:1]):
            b.edge(x, y)
        blocks = [(j, a) for j in range(3) for a in range(nu)]
        for p, (j, a) in enumerate(blocks):
            q = blocks[(p + nu - 1) % len(blocks)]
            b.path(b.v(("w", i, j, a)), b.v(("u", i, *q)), 2 * gamma)
    for v in g.vertices:
        nbrs = sorted(u for u, _ in g.adj[v])
        for f, u in enumerate(nbrs, 1):
            if v < u and color_of[v] != color_of[u]:
                fu = sorted(x for x, _ in g.adj[u]).index(v) + 1
                i, a = color_of[v], slot_of[v]
                j, c = color_of[u], slot_of[u]
                b.path(b.v(("v", i, 0, a, 3 * f - 2)), b.v(("v", j, 0, c, 3 * fu - 2)), enc)
                b.path(b.v(("v", i, 0, a, 3 * f - 1)), b.v(("v", j, 0, c, 3 * fu - 1)), enc)
    out = b.graph()
    k = 3 * ell + math.comb(ell, 2)
    L = 9 * ell * gamma + math.comb(ell, 2) * 2 * (enc + 1)
    assert max_degree(out) <= 3, "construction must be subcubic"
    return MccReduction(out, k, L, gamma, nu, delta)


# -- independent set -> min-cut packing ------------------------------------------


def gen_is_to_mincutpack(g: WeightedGraph, k: int) -> tuple[WeightedGraph, int, int]:
    """Graph whose k disjoint minimum cuts correspond to k independent vertices.

    Returns ``(H, k, min_cut_weight)`` with min cut weight ``2*Delta + 1``.
    """
    verts = list(g.vertices)
    pos = {v: i for i, v in enumerate(verts)}
    delta = max_degree(g)
    usize = 2 * delta + 3
    n = len(verts)
    U = list(range(n, n + usize))
    edges = [(pos[u], pos[v], Fraction(1)) for u, v, _ in g.edges]
    edges += [(a, b, Fraction(1)) for a, b in itertools.combinations(U, 2)]
    for v in verts:
        need = 2 * delta + 1 - len(g.adj[v])
        edges += [(pos[v], U[i], Fraction(1)) for i in range(need)]
    H = WeightedGraph(n + usize, tuple(edges))
    nxg = nx.Graph()
    nxg.add_edges_from((a, b) for a, b, _ in edges)
    cut, _ = nx.stoer_wagner(nxg)
    assert cut == 2 * delta + 1, "minimum cut must isolate one original vertex"
    return H, k, 2 * delta + 1


# -- 3,4-SAT -> disjoint shortest factors -------------------------------------------


@dataclass(frozen=True)
class DsfInstance:
    word: tuple[str, ...]
    alphabet: tuple[str, ...]

    def __post_init__(self):
        if BLANK not in self.alphabet:
            object.__setattr__(self, "alphabet", tuple(self.alphabet) + (BLANK,))
        if set(self.word) - set(self.alphabet):
            raise ValueError("word uses letters outside the alphabet")

    def __len__(self) -> int:
        return len(self.word)

    def factor_lengths(self) -> dict[str, int | None]:
        out = {}
        for a in self.alphabet:
            pos = [i for i, x in enumerate(self.word) if x == a]
            gaps = [q - p for p, q in zip(pos, pos[1:])]
            out[a] = min(gaps) if gaps else None
        return out

    def shape(self) -> tuple:
        return (len(self.word), tuple(sorted(self.factor_lengths().items(), key=lambda x: x[0])))

    def to_text(self) -> str:
        return "a " + " ".join(self.alphabet) + "\nw " + " ".join(self.word) + "\n"

    @classmethod
    def from_text(cls, text: str) -> DsfInstance:
        alpha = word = None
        for line in text.splitlines():
            toks = line.split()
            if not toks or toks[0] == "c":
                continue
            if toks[0] == "a":
                alpha = tuple(toks[1:])
            elif toks[0] == "w":
                word = tuple(toks[1:])
            else:
                raise ValueError(f"bad DSF line {line!r}")
        if alpha is None or word is None:
            raise ValueError("DSF text needs 'a' and 'w' lines")
        return cls(word, alpha)


def _check_cnf(clauses: Sequence[Sequence[int]], nvars: int) -> None:
    occ = [0] * (nvars + 1)
    for cl in clauses:
        if len(cl) != 3:
            raise ValueError("every clause needs exactly 3 literals")
        for lit in cl:
            if lit == 0 or abs(lit) > nvars:
                raise ValueError(f"bad literal {lit}")
            occ[abs(lit)] += 1
    if max(occ) > 4:
        raise ValueError("a variable occurs more than 4 times")


def gen_sat34_to_dsf(clauses: Sequence[Sequence[int]], nvars: int) -> DsfInstance:
    """DSF word for a CNF with 3 literal slots per clause and <= 4 occurrences per variable.

    Literal slot q (1..3) of clause j (1..m) is the position letter
    ``p<3(j-1)+q>``; variable i is the letter ``x<i>``. A clause may repeat
    a literal; each slot still gets its own letter.
    """
    _check_cnf(clauses, nvars)
    m = len(clauses)
    word: list[str] = []
    for j in range(m):
        block = [f"p{3 * j + q}" for q in (1, 2, 3)]
        word += block * 3
    word += [BLANK, BLANK]
    pos_occ: dict[int, list[str]] = {i: [] for i in range(1, nvars + 1)}
    neg_occ: dict[int, list[str]] = {i: [] for i in range(1, nvars + 1)}
    for j, cl in enumerate(clauses):
        for q, lit in enumerate(cl, 1):
            (pos_occ if lit > 0 else neg_occ)[abs(lit)].append(f"p{3 * j + q}")
    for i in range(1, nvars + 1):
        x = f"x{i}"
        ps = pos_occ[i] + [BLANK] * (4 - len(pos_occ[i]))
        ns = neg_occ[i] + [BLANK] * (4 - len(neg_occ[i]))
        block = [x]
        for side in (ps, ns):
            for t in range(4):
                block += [side[t], BLANK, BLANK, side[t]]
            block.append(x)
        assert len(block) == 35
        word += block
    alphabet = tuple(f"p{t}" for t in range(1, 3 * m + 1)) + tuple(f"x{i}" for i in range(1, nvars + 1)) + (BLANK,)
    inst = DsfInstance(tuple(word), alphabet)
    lengths = inst.factor_lengths()
    for t in range(1, 3 * m + 1):
        assert lengths[f"p{t}"] == 3, "position factors must have length 3"
    for i in range(1, nvars + 1):
        assert lengths[f"x{i}"] == 17, "variable factors must have length 17"
    assert len(word) == 9 * m + 2 + 35 * nvars
    return inst


def compose_dsf_or(instances: Sequence[DsfInstance]) -> DsfInstance:
    """One DSF instance that is a yes-instance iff some input is.

    All inputs must share length, alphabet and per-letter shortest factor
    lengths. The count is padded to a power of two by repeating the first
    instance; odd lengths get one trailing blank.
    """
    if not instances:
        raise ValueError("need at least one instance")
    shape = instances[0].shape()
    alpha = set(instances[0].alphabet)
    for d in instances:
        if d.shape() != shape or set(d.alphabet) != alpha:
            raise ValueError("instances differ in shape")
    words = [list(d.word) for d in instances]
    if len(words[0]) % 2:
        words = [w + [BLANK] for w in words]
    size = 1
    while size < len(words):
        size *= 2
    words += [list(words[0]) for _ in range(size - len(words))]
    rounds = 0
    letters = sorted(alpha)
    while len(words) > 1:
        rounds += 1
        c = f"c{rounds}"
        while c in alpha:
            c += "'"
        letters.append(c)
        n_prev = len(words[0])
        half = [BLANK] * (n_prev // 2)
        nxt = []
        for w1, w2 in zip(words[0::2], words[1::2]):
            w = [c] + w1 + half + [c] + half + w2 + [c, BLANK]
            assert len(w) == 3 * n_prev + 4
            nxt.append(w)
        words = nxt
    return DsfInstance(tuple(words[0]), tuple(letters))


# -- DSF -> shortest cycle packing -------------------------------------------------


@dataclass(frozen=True)
class DsfScpReduction:
    graph: WeightedGraph
    k: int
    word: tuple[str, ...]
    girth: int


def pad_word(d: DsfInstance) -> DsfInstance:
    """Prefix blank pairs: always one, then more until the word has length >= 10."""
    word = [BLANK, BLANK] + list(d.word)
    while len(word) < 10:
        word = [BLANK, BLANK] + word
    return DsfInstance(tuple(word), d.alphabet)


def gen_dsf_to_scp(d: DsfInstance) -> DsfScpReduction:
    """Shortest cycle packing instance equivalent to a DSF instance.

    The word is first padded with leading blank pairs. Only non-blank
    letters get a hub, so k counts the non-blank letters. When no non-blank
    letter repeats the hub graph would be a forest; then the blank gets a
    hub too (its padded factor is always available) and k = |alphabet|.
    """
    d = pad_word(d)
    n = len(d.word)
    lengths = d.factor_lengths()
    letters = [a for a in d.alphabet if a != BLANK]
    if all(lengths[a] is None for a in letters):
        letters = list(d.alphabet)
    b = _Builder()
    spine = [b.v(("u", i)) for i in range(1, 2 * n + 1)]
    for x, y in zip(spine, spine[1:]):
        b.edges.append((x, y, Fraction(1)))
    for a in letters:
        hub = b.v(("hub", a))
        da = lengths[a] if lengths[a] is not None else n
        for i, x in enumerate(d.word, 1):
            if x == a:
                b.path(hub, spine[2 * i - 1], 3 * n - da)
    g = b.graph()
    gi = girth(g)
    assert gi == 6 * n, f"girth {gi} != {6 * n}"
    return DsfScpReduction(g, len(letters), d.word, 6 * n)


# -- random planar fixtures ---------------------------------------------------------


def gen_random_planar(n: int, density: float = 0.7, weight_range: tuple[int, int] = (1, 1), seed: int = 0) -> WeightedGraph:
    """Connected planar graph: a grid prefix with random cell diagonals and deletions.

    Vertices are laid out row-major on a ``rows x cols`` grid (the first n
    cells). Each full cell gets one diagonal with probability ``density``;
    then every edge is deleted with probability ``1 - density`` as long as
    the graph stays connected. Weights are uniform integers in
    ``weight_range``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    rows = max(1, math.isqrt(n))
    cols = math.ceil(n / rows)
    cell = lambda r, c: r * cols + c
    edges: list[tuple[int, int]] = []
    for v in range(n):
        r, c = divmod(v, cols)
        if c + 1 < cols and v + 1 < n:
            edges.append((v, v + 1))
        if v + cols < n:
            edges.append((v, v + cols))
    for r in range(rows):
        for c in range(cols - 1):
            if cell(r + 1, c + 1) < n and rng.random() < density:
                if rng.random() < 0.5:
                    edges.append((cell(r, c), cell(r + 1, c + 1)))
                else:
                    edges.append((cell(r, c + 1), cell(r + 1, c)))
    order = rng.permutation(len(edges))
    alive = set(range(len(edges)))
    for i in order:
        if rng.random() < 1 - density:
            alive.discard(int(i))
            if not _connected(n, [edges[j] for j in alive]):
                alive.add(int(i))
    lo, hi = weight_range
    kept = sorted(alive)
    ws = rng.integers(lo, hi + 1, size=len(kept))
    return WeightedGraph(n, tuple((*edges[j], Fraction(int(w))) for j, w in zip(kept, ws)))


def _connected(n: int, edges) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n
    for u, v in edges:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            comps -= 1
    return comps == 1


# -- seeded source instances ---------------------------------------------------------


def sample_graph(n: int, p: float, seed: int) -> WeightedGraph:
    """G(n, p) with unit weights."""
    rng = np.random.default_rng(seed)
    edges = [(u, v, 1) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return WeightedGraph(n, tuple(edges))


def sample_mcc(ell: int, nu: int, p: float, seed: int) -> tuple[WeightedGraph, list[list[int]]]:
    """Random multicolored clique instance: ``ell`` classes of 1..nu vertices."""
    rng = np.random.default_rng(seed)
    sizes = [int(rng.integers(1, nu + 1)) for _ in range(ell)]
    classes, start = [], 0
    for s in sizes:
        classes.append(list(range(start, start + s)))
        start += s
    color = {v: i for i, cl in enumerate(classes) for v in cl}
    edges = [
        (u, v, 1)
        for u, v in itertools.combinations(range(start), 2)
        if color[u] != color[v] and rng.random() < p
    ]
    return WeightedGraph(start, tuple(edges)), classes


UNSAT_CORE34 = ((1, 1, 1), (-1, 2, 2), (-2, -2, 3), (-3, -3, -3))


def sample_cnf34(nvars: int, nclauses: int, seed: int, unsat: bool = False) -> list[tuple[int, int, int]]:
    """Random CNF with 3 literal slots per clause and each variable used at most 4 times.

    With ``unsat`` the first four clauses are a renamed copy of
    ``UNSAT_CORE34`` (random variables, signs and slot order), so the
    formula is unsatisfiable; the remaining clauses use the other variables.
    """
    rng = np.random.default_rng(seed)
    clauses: list[tuple[int, ...]] = []
    free = list(range(1, nvars + 1))
    if unsat:
        if nvars < 3 or nclauses < 4:
            raise ValueError("the unsatisfiable core needs 3 variables and 4 clauses")
        core_vars = [int(x) for x in rng.choice(free, size=3, replace=False)]
        sign = [1 if rng.random() < 0.5 else -1 for _ in range(3)]
        for cl in UNSAT_CORE34:
            lits = [sign[abs(l) - 1] * (1 if l > 0 else -1) * core_vars[abs(l) - 1] for l in cl]
            clauses.append(tuple(lits[int(i)] for i in rng.permutation(3)))
        free = [v for v in free if v not in core_vars]
    rest = nclauses - len(clauses)
    slots = [v for v in free for _ in range(4)]
    if 3 * rest > len(slots):
        raise ValueError("too many clauses for the occurrence bound")
    pick = rng.permutation(len(slots))[: 3 * rest]
    lits = [slots[i] * (1 if rng.random() < 0.5 else -1) for i in pick]
    clauses += [tuple(lits[3 * j : 3 * j + 3]) for j in range(rest)]
    order = rng.permutation(len(clauses))
    return [tuple(clauses[int(i)]) for i in order]


def sample_dsf(length: int, letters: int, seed: int) -> DsfInstance:
    """Random word over ``letters`` letters plus the blank."""
    rng = np.random.default_rng(seed)
    alpha = tuple(chr(ord("a") + i) for i in range(letters)) + (BLANK,)
    word = tuple(alpha[int(i)] for i in rng.integers(0, len(alpha), size=length))
    return DsfInstance(word, alpha)
