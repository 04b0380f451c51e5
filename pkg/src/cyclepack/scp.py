"""Shortest cycle packing on planar graphs by random separation over S-node paths.

Outline: clean the graph, embed it with a shortest outer face, build the
LSCT, colour the paths of small S-nodes, splice the red non-tree cycles
into a star tree and run the recursive branching on it.

Two colourings that splice the same non-tree cycles build the same star
tree, so the solver works on *signatures* (the set of spliced
``(s_node, i, j)`` triples) and runs the branching once per signature.
Extra splices never hurt: the star tree properties hold for every
colouring, so a No under a signature also rules out all of its subsets.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .graph import VERTEX, Cycle, CyclePacking, WeightedGraph, clean, girth, verify_packing
from .lsct import SNODE, LsctTree, build_lsct, pair_cycle
from .planar import MapGraph, PlaneEmbedding, map_independent_set

LARGE = "large"
SMALL = "small"
CHUNK = 4096


def formula_trials(k: int) -> int:
    """ceil((81(k+1)/16)^(2k)), computed exactly."""
    x = Fraction(81 * (k + 1), 16) ** (2 * k)
    return math.ceil(x)


@dataclass(frozen=True)
class SeparationConfig:
    k: int
    rng_seed: int = 0
    max_trials: int = 200_000
    exhaustive_mode: bool = False
    exhaustive_bound: int = 1 << 16

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("seed must be a 64-bit value")

    @property
    def red_probability(self) -> Fraction:
        return Fraction(2, 3 * self.k + 3)

    @property
    def trials(self) -> int:
        return min(formula_trials(self.k), self.max_trials)

    def failure_bound(self, trials: int) -> float:
        """Chance that ``trials`` colourings all miss a fixed colourful solution."""
        q = (Fraction(16, 81 * (self.k + 1)) ** (2 * self.k))
        return math.exp(trials * math.log1p(-float(q)))


# -- colourings ---------------------------------------------------------------------


def classify_s_nodes(t: LsctTree, k: int) -> dict[int, str]:
    return {
        nid: (LARGE if len(t.nodes[nid].paths) - 1 >= 3 * k + 3 else SMALL)
        for nid in t.s_nodes()
    }


def path_family(t: LsctTree, k: int) -> list[tuple[int, int]]:
    """All (s_node, path index) pairs over small S-nodes, in node order."""
    cls = classify_s_nodes(t, k)
    return [(nid, i) for nid in sorted(cls) if cls[nid] == SMALL for i in range(len(t.nodes[nid].paths))]


def coloring_chunk(size: int, cfg: SeparationConfig, chunk: int) -> np.ndarray:
    """Red/blue matrix for trials ``chunk*CHUNK .. chunk*CHUNK+CHUNK-1``."""
    rng = np.random.default_rng([cfg.rng_seed, chunk])
    return rng.random((CHUNK, size)) < float(cfg.red_probability)


def color_paths(family: Sequence, cfg: SeparationConfig, trial: int = 0) -> tuple[bool, ...]:
    """Colouring number ``trial`` (True = red); reproducible per (seed, trial)."""
    chunk, row = divmod(trial, CHUNK)
    return tuple(bool(x) for x in coloring_chunk(len(family), cfg, chunk)[row])


def all_colorings(family: Sequence) -> Iterator[tuple[bool, ...]]:
    return itertools.product((False, True), repeat=len(family))


def splice_options(t: LsctTree, host: WeightedGraph, k: int) -> dict[int, list[tuple[int, int]]]:
    """Non-tree path pairs per small S-node (pairs equal to an existing node are dropped)."""
    cls = classify_s_nodes(t, k)
    out = {}
    for nid in sorted(cls):
        if cls[nid] != SMALL:
            continue
        pairs = [p for p in t.non_tree_pairs(nid) if pair_cycle(host, t, nid, *p).edges not in t.by_cycle]
        if pairs:
            out[nid] = pairs
    return out


def signature_of(t: LsctTree, family: Sequence[tuple[int, int]], coloring: Sequence[bool],
                 options: dict[int, list[tuple[int, int]]]) -> tuple[tuple[int, int, int], ...]:
    """Splices a colouring triggers: S-nodes with exactly two red paths forming a non-tree cycle."""
    red: dict[int, list[int]] = {}
    for (nid, i), c in zip(family, coloring):
        if c:
            red.setdefault(nid, []).append(i)
    sig = []
    for nid, idx in sorted(red.items()):
        if len(idx) == 2 and tuple(idx) in options.get(nid, ()):
            sig.append((nid, idx[0], idx[1]))
    return tuple(sig)


def _chunk_signatures(mat: np.ndarray, family, options) -> list[tuple[tuple[int, int, int], ...]]:
    """Vectorised ``signature_of`` over the rows of a colouring matrix."""
    rows = mat.shape[0]
    cols_of: dict[int, list[int]] = {}
    for col, (nid, i) in enumerate(family):
        cols_of.setdefault(nid, []).append(col)
    codes = np.zeros((rows, len(options)), dtype=np.int32)
    order = sorted(options)
    for slot, nid in enumerate(order):
        cols = cols_of[nid]
        sub = mat[:, cols]
        cnt = sub.sum(axis=1)
        first = np.argmax(sub, axis=1)
        last = len(cols) - 1 - np.argmax(sub[:, ::-1], axis=1)
        code_of = {p: n + 1 for n, p in enumerate(options[nid])}
        width = len(cols)
        lut = np.zeros(width * width, dtype=np.int32)
        for (i, j), c in code_of.items():
            lut[i * width + j] = c
        two = cnt == 2
        codes[two, slot] = lut[first[two] * width + last[two]]
    out = []
    for r in range(rows):
        out.append(tuple((order[s], *options[order[s]][c - 1]) for s, c in enumerate(codes[r]) if c))
    return out


# -- star tree ------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StarTree:
    base: LsctTree
    inserted: tuple[tuple[int, int, int], ...]
    cycles: dict[int, Cycle]
    parent: dict[int, int | None]
    children: dict[int, tuple[int, ...]]
    root: int = 0

    @property
    def node_ids(self) -> list[int]:
        return sorted(self.cycles)

    def leaves(self) -> list[int]:
        return [x for x in self.node_ids if not self.children[x]]

    def descendants(self, x: int) -> Iterator[int]:
        stack = [x]
        while stack:
            y = stack.pop()
            yield y
            stack.extend(self.children[y])

    def is_descendant(self, a: int, b: int) -> bool:
        while a is not None:
            if a == b:
                return True
            a = self.parent[a]
        return False

    def pruned_below(self, x: int) -> StarTree:
        """Remove the proper descendants of ``x``."""
        gone = set(self.descendants(x)) - {x}
        return StarTree(
            self.base,
            self.inserted,
            {i: c for i, c in self.cycles.items() if i not in gone},
            {i: p for i, p in self.parent.items() if i not in gone},
            {i: (() if i == x else ch) for i, ch in self.children.items() if i not in gone},
            self.root,
        )


def build_star_tree(t: LsctTree, host: WeightedGraph, signature: Iterable[tuple[int, int, int]]) -> StarTree:
    """Splice the non-tree cycle ``P_i + P_j`` under S-node ``nid`` for each triple."""
    cycles = {n.id: n.cycle for n in t.nodes}
    parent = {n.id: n.parent for n in t.nodes}
    children = {n.id: list(n.children) for n in t.nodes}
    sig = tuple(sorted(signature))
    nxt = len(t.nodes)
    for nid, i, j in sig:
        node = t.nodes[nid]
        if node.kind != SNODE or not (0 <= i and j < len(node.paths) and j >= i + 2):
            raise ValueError(f"bad splice {(nid, i, j)}")
        c = pair_cycle(host, t, nid, i, j)
        if c.edges in t.by_cycle:
            continue
        # child h-1 of an S-node is P_{h-1} + P_h; those with i < h <= j lie inside
        moved = list(node.children[i:j])
        cycles[nxt] = c
        parent[nxt] = nid
        children[nxt] = moved
        for m in moved:
            parent[m] = nxt
        children[nid] = [x for x in children[nid] if x not in moved]
        children[nid].insert(i, nxt)
        nxt += 1
    return StarTree(t, sig, cycles, parent, {x: tuple(v) for x, v in children.items()}, t.root)


def plain_star_tree(t: LsctTree) -> StarTree:
    return StarTree(
        t, (), {n.id: n.cycle for n in t.nodes}, {n.id: n.parent for n in t.nodes},
        {n.id: n.children for n in t.nodes}, t.root,
    )


# -- branching --------------------------------------------------------------------------


@dataclass
class _Search:
    gir: Fraction
    trace: list[str] | None
    memo: dict = field(default_factory=dict)

    def log(self, line: str) -> None:
        if self.trace is not None:
            self.trace.append(line)

    def shortest_faces(self, emb: PlaneEmbedding) -> list[int]:
        return [f for f, c in enumerate(emb.face_cycles) if c is not None and c.weight == self.gir]

    def inner_packing(self, emb: PlaneEmbedding, s: Cycle, r: int) -> list[Cycle] | None:
        """r vertex-disjoint shortest facial cycles strictly inside ``s`` not touching it."""
        on = s.vertex_set
        faces = [
            f for f in sorted(emb.interior(s).faces)
            if (c := emb.face_cycles[f]) is not None and c.weight == self.gir and not (c.vertex_set & on)
        ]
        got = map_independent_set(MapGraph(emb, tuple(faces)), r)
        return None if got is None else [emb.face_cycles[f] for f in got]

    def run(self, emb: PlaneEmbedding, k: int, star: StarTree) -> list[Cycle] | None:
        key = (frozenset(star.cycles), k)
        if key in self.memo:
            return self.memo[key]
        res = self._run(emb, k, star)
        self.memo[key] = res
        return res

    def _run(self, emb: PlaneEmbedding, k: int, star: StarTree) -> list[Cycle] | None:
        faces = self.shortest_faces(emb)
        got = map_independent_set(MapGraph(emb, tuple(faces)), k)
        if got is not None:
            return [emb.face_cycles[f] for f in got]
        leaves = [x for x in star.leaves() if x != star.root]
        marked = set()
        for x in star.node_ids:
            vs = star.cycles[x].vertex_set
            if any(
                y != x and star.is_descendant(y, x) and not (star.cycles[y].vertex_set & vs)
                for y in leaves
            ):
                marked.add(x)
        if not marked:
            return None
        kids = {x: [c for c in star.children[x] if c in marked] for x in marked}
        alpha_leaves = [x for x in marked if not kids[x]]
        assert len(alpha_leaves) < k, "marked subtree has k leaves although the facial check failed"
        U = {star.root} | set(alpha_leaves) | {x for x in marked if len(kids[x]) >= 2}
        chains = []
        for u in sorted(U):
            for c in kids.get(u, []):
                chain = [u, c]
                while chain[-1] not in U:
                    chain.append(kids[chain[-1]][0])
                chains.append(chain)
        chains.sort()
        for chain in chains:
            for r in range(1, k):
                pick = None
                for s in reversed(chain):
                    inner = self.inner_packing(emb, star.cycles[s], r)
                    if inner is not None:
                        pick = (s, inner)
                        break
                if pick is None:
                    continue
                s, inner = pick
                self.log(f"branch P={chain[0]}-{chain[-1]} r={r} S*={s}")
                if r == k - 1:
                    return [star.cycles[s]] + inner
                rest = self.run(emb.delete_interior(star.cycles[s]), k - r, star.pruned_below(s))
                if rest is not None:
                    return rest + inner
        return None


def branching(emb: PlaneEmbedding, k: int, star: StarTree, gir: Fraction, trace: list[str] | None = None) -> list[Cycle] | None:
    """The recursive branching on a fixed star tree."""
    return _Search(gir, trace).run(emb, k, star)


# -- driver ------------------------------------------------------------------------------


@dataclass(frozen=True)
class ScpResult:
    packing: CyclePacking | None
    exact: bool
    trials: int
    signatures: int
    failure_bound: float
    seed: int

    @property
    def answer(self) -> bool:
        return self.packing is not None


def _run_signature(args) -> tuple[list[Cycle] | None, list[str]]:
    emb, tree, host, k, gir, sig, want_trace = args
    trace: list[str] | None = [] if want_trace else None
    star = build_star_tree(tree, host, sig)
    return branching(emb, k, star, gir, trace), trace or []


def _covered_parts(sig, k: int) -> Iterator[tuple]:
    for r in range(0, min(k, len(sig)) + 1):
        yield from itertools.combinations(sig, r)


def _partial_space(options: dict, k: int, cap: int) -> set | None:
    """All splice sets of size <= k using at most one pair per S-node, or None if over cap."""
    nodes = sorted(options)
    total = 0
    for r in range(0, min(k, len(nodes)) + 1):
        for combo in itertools.combinations(nodes, r):
            total += math.prod(len(options[x]) for x in combo)
            if total > cap:
                return None
    out = set()
    for r in range(0, min(k, len(nodes)) + 1):
        for combo in itertools.combinations(nodes, r):
            for picks in itertools.product(*(options[x] for x in combo)):
                out.add(tuple((x, *p) for x, p in zip(combo, picks)))
    return out


def solve_scp_planar(
    g: WeightedGraph,
    k: int,
    cfg: SeparationConfig | None = None,
    trace: list[str] | None = None,
    jobs: int = 1,
    progress: Callable[[int], None] | None = None,
) -> ScpResult:
    """Decide whether ``g`` has k vertex-disjoint shortest cycles.

    In exhaustive mode every distinct star tree a colouring can produce is
    tried and the answer is exact. In randomized mode up to ``cfg.trials``
    colourings are drawn; the run stops early when every splice set of at
    most k non-tree cycles has been covered, which also makes it exact.
    """
    seed = cfg.rng_seed if cfg else 0
    if k <= 0:
        return ScpResult(CyclePacking((), VERTEX), True, 0, 0, 0.0, seed)
    cfg = cfg or SeparationConfig(k)
    if cfg.k != k:
        cfg = SeparationConfig(k, cfg.rng_seed, cfg.max_trials, cfg.exhaustive_mode, cfg.exhaustive_bound)
    c = clean(g)
    if not c.edges:
        return ScpResult(None, True, 0, 0, 0.0, seed)
    emb, tree = build_lsct(c)
    gir = tree.girth
    options = splice_options(tree, c, k)
    family = [(nid, i) for nid in sorted(options) for i in range(len(tree.nodes[nid].paths))]

    done: list[tuple] = []
    found: list[Cycle] | None = None
    trials = 0

    def dominated(sig) -> bool:
        s = set(sig)
        return any(s <= set(d) for d in done)

    def attempt(sigs: list[tuple]) -> list[Cycle] | None:
        todo = [s for s in sigs if not dominated(s)]
        if jobs > 1 and len(todo) > 1:
            args = [(emb, tree, c, k, gir, s, trace is not None) for s in todo]
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                futs = [ex.submit(_run_signature, a) for a in args]
                for s, fu in zip(todo, futs):
                    res, lines = fu.result()
                    _record(s, lines)
                    if res is not None:
                        for f in futs:
                            f.cancel()
                        return res
            return None
        for s in todo:
            res, lines = _run_signature((emb, tree, c, k, gir, s, trace is not None))
            _record(s, lines)
            if res is not None:
                return res
        return None

    def _record(sig, lines) -> None:
        done.append(sig)
        if trace is not None:
            trace.append(f"signature {len(done)} splices={_fmt_sig(sig)}")
            trace.extend(lines)

    exact = True
    if cfg.exhaustive_mode:
        if 2 ** len(family) <= cfg.exhaustive_bound:
            seen: dict = {}
            for col in all_colorings(family):
                seen.setdefault(signature_of(tree, family, col, options), None)
            sigs = sorted(seen, key=lambda s: (-len(s), s))
            trials = 2 ** len(family)
        else:
            # the maximal splice sets dominate every colouring
            nodes = sorted(options)
            space = math.prod(len(options[x]) for x in nodes)
            if space > cfg.exhaustive_bound:
                raise ValueError(f"exhaustive mode needs {space} star trees, over the bound {cfg.exhaustive_bound}")
            sigs = [tuple((x, *p) for x, p in zip(nodes, picks)) for picks in itertools.product(*(options[x] for x in nodes))]
            trials = len(sigs)
        found = attempt(sigs)
        bound = 0.0
    else:
        pending = _partial_space(options, k, 100_000)
        total = cfg.trials
        chunk = 0
        while trials < total:
            mat = coloring_chunk(len(family), cfg, chunk)
            rows = min(CHUNK, total - trials)
            sigs = _chunk_signatures(mat[:rows], family, options) if options else [()] * rows
            firsts: dict = {}
            for r, s in enumerate(sigs):
                firsts.setdefault(s, r)
            stop = None
            for s, r in sorted(firsts.items(), key=lambda x: x[1]):
                if dominated(s):
                    continue
                found = attempt([s])
                if pending is not None:
                    pending.difference_update(_covered_parts(s, k))
                if found is not None or (pending is not None and not pending):
                    stop = r
                    break
            if stop is not None:
                trials += stop + 1
                break
            trials += rows
            chunk += 1
            if progress:
                progress(trials)
        covered = pending is not None and not pending
        exact = found is not None or covered
        bound = 0.0 if exact else cfg.failure_bound(trials)
    if found is None:
        return ScpResult(None, exact, trials, len(done), bound, seed)
    packing = CyclePacking(tuple(sorted(found)), VERTEX)
    _check_witness(g, packing, k, gir)
    return ScpResult(packing, True, trials, len(done), 0.0, seed)


def _fmt_sig(sig) -> str:
    return ",".join(f"{n}:{i}-{j}" for n, i, j in sig) or "-"


def _check_witness(g: WeightedGraph, packing: CyclePacking, k: int, gir) -> None:
    why = verify_packing(g, packing.cycles, VERTEX)
    assert why is None, why
    assert len(packing.cycles) == k, "wrong number of cycles"
    assert all(c.weight == gir for c in packing.cycles), "a witness cycle is not shortest"
    assert gir == girth(g), "girth changed under cleaning"
