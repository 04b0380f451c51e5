"""The ten acceptance criteria, each at its stated scale and tolerance.

Every test records one ``criterion N: PASS|FAIL ...`` line; the lines are
printed at the end of the pytest run (see conftest.py) and when this file is
run directly with ``python tests/test_acceptance.py``.
"""

import itertools
import math
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from cyclepack.edkernel import (
    KERNEL,
    YES,
    chain_witness,
    facial_cycles,
    kernelize_ed,
    leaf_shortcut,
    mark_cycles,
    solve_min_cut_packing_planar,
)
from cyclepack.graph import EDGE, VERTEX, Cycle, VertexPath, all_shortest_cycles, clean, girth
from cyclepack.instance import ProblemInstance, Solution, format_instance
from cyclepack.lsct import build_lsct, covers
from cyclepack.oracle import (
    best_packing,
    disjoint_min_cuts,
    dsf_brute,
    graph_independent_set,
    multicolored_clique,
    sat_brute,
    verify_solution,
)
from cyclepack.planar import cycle_le, cycle_order, dual, embed
from cyclepack.reductions import (
    compose_dsf_or,
    gen_dsf_to_scp,
    gen_is_to_mincutpack,
    gen_mcc_to_minsum,
    gen_random_planar,
    gen_sat34_to_dsf,
    max_degree,
    sample_cnf34,
    sample_dsf,
    sample_graph,
    sample_mcc,
)
from cyclepack.scp import SeparationConfig, solve_scp_planar
from cyclepack.xp import count_paths, enumerate_paths, extract_k_cycles_from_chords, solve_minsum, solve_minvector

from fixtures import chord_fixture, nested_theta, planar_clean, random_weighted

RESULTS: dict[int, str] = {}


def record(n: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({detail})"
    RESULTS[n] = line
    print(line)
    assert ok, line


def total(cycles) -> Fraction:
    return sum((c.weight for c in cycles), Fraction(0))


def budget_for(g, opt, seed) -> Fraction:
    """Exactly the optimum, one below it, or a loose bound, by seed."""
    loose = total([]) + sum((w for _, _, w in g.edges), Fraction(0)) + 1
    if opt is None:
        return loose
    return (opt, opt - 1, loose)[seed % 3]


# -- 1, 2: oracle equivalence ---------------------------------------------------------


def _minsum_protocol(mode: str) -> tuple[int, int, float]:
    t0 = time.perf_counter()
    bad = 0
    for s in range(300):
        g = random_weighted(s)
        k = 1 + s % 3
        ref = best_packing(g, k, mode, "min-total")
        opt = None if ref is None else total(ref)
        ell = budget_for(g, opt, s)
        got = solve_minsum(g, k, ell, mode)
        want = opt is not None and opt <= ell
        if (got is not None) != want or (got is not None and got.total_weight != opt):
            bad += 1
    return bad, 300, time.perf_counter() - t0


def test_criterion_01_vertex_oracle_equivalence():
    bad, n, secs = _minsum_protocol(VERTEX)
    record(1, "min-sum vertex-disjoint vs oracle", bad == 0 and secs < 300, f"{n - bad}/{n} match, {secs:.1f}s")


def test_criterion_02_edge_and_vector_oracle_equivalence():
    bad_ed, n, _ = _minsum_protocol(EDGE)
    bad_vec = 0
    for s in range(300):
        g = random_weighted(s)
        k = 1 + s % 3
        rng = random.Random(1000 + s)
        budgets = [rng.randint(3, 12) for _ in range(k)]
        for mode in (VERTEX, EDGE):
            want = best_packing(g, k, mode, "vector", budgets=budgets) is not None
            got = solve_minvector(g, budgets, mode)
            if (got is not None) != want:
                bad_vec += 1
    ok = bad_ed == 0 and bad_vec == 0
    record(2, "min-sum edge-disjoint and min-vector vs oracle", ok,
           f"minsum-ed {n - bad_ed}/{n}, minvec {600 - bad_vec}/600")


# -- 3: path census laws ----------------------------------------------------------------


def test_criterion_03_path_census_laws():
    uniq_bad = boost_bad = checks = 0
    for s in range(300):
        g = random_weighted(s)
        gi = girth(g)
        ell = Fraction(4 * g.m + 1) if gi == math.inf else gi - Fraction(1, 2)
        seen: dict = {}
        for p in enumerate_paths(g, ell / 2):
            if len(p) > 1:
                key = frozenset((p.vertices[0], p.vertices[-1]))
                seen[key] = seen.get(key, 0) + 1
        uniq_bad += any(c > 1 for c in seen.values())
        for ell0, c in ((1, 2), (1, 3), (2, 2), (2, 3)):
            checks += 1
            if count_paths(g, c * ell0) > count_paths(g, ell0) ** c:
                boost_bad += 1
    record(3, "path-census laws", uniq_bad == 0 and boost_bad == 0,
           f"pair uniqueness violations {uniq_bad}/300, boosting violations {boost_bad}/{checks}")


# -- 4: chord extractor -------------------------------------------------------------------


def test_criterion_04_chord_extractor():
    bad = 0
    for s in range(100):
        relation = ("consecutive", "crossing", "parallel")[s % 3]
        k = 1 + (s // 3) % 3
        g, pv, cv = chord_fixture(s, relation, k)
        P = VertexPath.from_vertices(g, pv)
        C = Cycle.from_vertices(g, cv)
        ell = max(P.weight, C.weight)
        res = extract_k_cycles_from_chords(g, P, C, k, ell)
        if res is None or len(res.cycles) != k:
            bad += 1
            continue
        allowed = set(C.edges) | {tuple(sorted(e)) for e in zip(pv, pv[1:])}
        sol = Solution(True, tuple(c.vertices for c in res.cycles), (), None)
        ok, _ = verify_solution("minsum", g, k, [ell], sol)
        if not ok or any(not c.edges <= allowed for c in res.cycles):
            bad += 1
    record(4, "chord extractor on synthetic (P, C) fixtures", bad == 0, f"{100 - bad}/100 verified")


# -- 5: LSCT --------------------------------------------------------------------------------


def test_criterion_05_lsct_completeness():
    bad = pairs = 0
    for s in range(100):
        g = planar_clean(s)
        emb, tree = build_lsct(g)
        if not all(covers(tree, g, c) for c in all_shortest_cycles(g)):
            bad += 1
            continue
        for a, b in itertools.product(tree.nodes, repeat=2):
            pairs += 1
            if a.id != b.id and cycle_order(emb, a.cycle, b.cycle) == "crossing":
                bad += 1
            elif tree.is_descendant(a.id, b.id) != cycle_le(emb, a.cycle, b.cycle):
                bad += 1
    record(5, "LSCT coverage, laminarity, descendant iff <=", bad == 0, f"100 fixtures, {pairs} node pairs, {bad} violations")


# -- 6: planar SCP ------------------------------------------------------------------------------


def scp_fixture(s: int):
    return planar_clean(s) if s % 4 else gen_random_planar(8 + s % 22, seed=s, weight_range=(1, 2))


def test_criterion_06_planar_scp():
    ex_bad = fp = fn = yes_runs = 0
    for s in range(100):
        g = scp_fixture(s)
        k = 1 + s % 4
        want = best_packing(g, k, VERTEX, "shortest-only") is not None
        if solve_scp_planar(g, k, SeparationConfig(k, exhaustive_mode=True)).answer != want:
            ex_bad += 1
        for seed in range(20):
            got = solve_scp_planar(g, k, SeparationConfig(k, rng_seed=seed)).answer
            fp += got and not want
            if want:
                yes_runs += 1
                fn += not got
    rate = fn / yes_runs if yes_runs else 0.0
    ok = ex_bad == 0 and fp == 0 and rate <= 0.10
    record(6, "planar SCP exhaustive and randomized vs oracle", ok,
           f"exhaustive {100 - ex_bad}/100, false positives {fp}, false negatives {fn}/{yes_runs} = {rate:.1%}")


# -- 7: kernel ----------------------------------------------------------------------------------


def kernel_fixture(s: int):
    if s % 3 == 0:
        return gen_random_planar(10 + s % 31, seed=s, density=0.5)
    if s % 3 == 1:
        return nested_theta(s, max_n=40)
    return planar_clean(s)


def test_criterion_07_kernel_guarantees():
    a = b = c = d = 0
    kernels = shortcuts = 0
    for s in range(100):
        g = kernel_fixture(s)
        k = 4 if s % 2 else 1 + s % 4
        want = best_packing(g, k, EDGE, "shortest-only") is not None
        res = kernelize_ed(g, k)
        if res.kind == KERNEL:
            kernels += 1
            kg = res.kernel.graph
            got = best_packing(kg, res.kernel.k, EDGE, "shortest-only") is not None
            simple = all(kg.degree(v) >= 3 for v in kg.vertices) and len({(u, v) for u, v, _ in kg.edges}) == kg.m
            simple = simple and all(u != v for u, v, _ in kg.edges)
            if kg.n > 200 * res.kernel.k ** 2 or not simple:
                b += 1
        else:
            got = res.kind == YES
        a += got != want
        cg = clean(g)
        if not cg.m:
            continue
        emb, tree = build_lsct(cg)
        if len(facial_cycles(tree)) >= 4 * k:
            shortcuts += 1
            pack = leaf_shortcut(tree, k)
            sol = Solution(True, tuple(x.vertices for x in pack.cycles), (), None) if pack else None
            if sol is None or not verify_solution("scp-ed", g, k, [], sol)[0]:
                d += 1
        else:
            m = mark_cycles(emb, tree, k)
            if chain_witness(m, k) is None and len(m.all) > 52 * k * k:
                c += 1
    ok = a == b == c == d == 0
    record(7, "edge-disjoint kernel", ok,
           f"(a) verdict mismatches {a}/100, (b) size/shape violations {b}/{kernels} kernels, "
           f"(c) marked-size violations {c}, (d) shortcut failures {d}/{shortcuts}")


# -- 8: duality -----------------------------------------------------------------------------------


def test_criterion_08_duality():
    bad = 0
    for s in range(50):
        g = gen_random_planar(4 + s % 11, seed=s, weight_range=(1, 3))
        k = 1 + s % 3
        got = solve_min_cut_packing_planar(g, k)
        want = disjoint_min_cuts(g, k) is not None
        if (got is not None) != want:
            bad += 1
        elif got is not None:
            dg = girth(dual(embed(g)).graph)
            weights = {sum((g.weight(u, v) for u, v in cut), Fraction(0)) for cut in got.cuts}
            bad += weights != {dg}
    record(8, "min-cut packing via the dual", bad == 0, f"{50 - bad}/50 match")


# -- 9: reductions ----------------------------------------------------------------------------------


def test_criterion_09_reduction_soundness():
    counts = {}
    bad = {}
    structural = 0

    def tally(name, ok):
        counts[name] = counts.get(name, 0) + 1
        bad[name] = bad.get(name, 0) + (not ok)

    for s in range(50):
        g, classes = sample_mcc(2, 1 + s % 2, 0.3, s)
        r = gen_mcc_to_minsum(g, classes)
        structural += max_degree(r.graph) > 3 or r.k != 3 * 2 + math.comb(2, 2)
        got = best_packing(r.graph, r.k, VERTEX, "min-total", bound=r.L, total_bound=r.L) is not None
        tally("mcc->minsum", got == (multicolored_clique(g, classes) is not None))
    for s in range(50):
        g = sample_graph(2 + s % 5, 0.5, s)
        H, k, lam = gen_is_to_mincutpack(g, 1 + s % 3)
        structural += lam != 2 * max_degree(g) + 1
        tally("is->mincut", (graph_independent_set(g, k) is not None) == (disjoint_min_cuts(H, k) is not None))
    for s in range(50):
        unsat = s % 2 == 0
        nv = 3 + (s // 2) % 3 if unsat else 3 + s % 3
        m = (4 if nv == 3 else 5) if unsat else 1 + s % 4
        cnf = sample_cnf34(nv, m, s, unsat=unsat)
        d = gen_sat34_to_dsf(cnf, nv)
        lengths = d.factor_lengths()
        structural += any(lengths[f"p{t}"] != 3 for t in range(1, 3 * m + 1))
        structural += any(lengths[f"x{i}"] != 17 for i in range(1, nv + 1))
        tally("sat->dsf", (sat_brute(cnf, nv) is not None) == (dsf_brute(d.word, d.alphabet) is not None))
    for s in range(50):
        cnfs = [sample_cnf34(3, 4, 2 * s + j, unsat=bool((s >> j) & 1)) for j in range(2)]
        parts = [gen_sat34_to_dsf(c, 3) for c in cnfs]
        d = compose_dsf_or(parts)
        n0 = len(parts[0]) + len(parts[0]) % 2
        structural += len(d) != 3 * n0 + 4
        want = any(sat_brute(c, 3) is not None for c in cnfs)
        tally("dsf-or", want == (dsf_brute(d.word, d.alphabet) is not None))
    for s in range(50):
        d = sample_dsf(2 + s % 9, 1 + s % 3, s)
        r = gen_dsf_to_scp(d)
        structural += girth(r.graph) != 6 * len(r.word)
        got = best_packing(r.graph, r.k, VERTEX, "shortest-only") is not None
        tally("dsf->scp", got == (dsf_brute(d.word, d.alphabet) is not None))
    ok = structural == 0 and not any(bad.values()) and all(n >= 50 for n in counts.values())
    detail = ", ".join(f"{name} {counts[name] - bad[name]}/{counts[name]}" for name in counts)
    record(9, "reduction soundness", ok, f"{detail}; structural violations {structural}")


# -- 10: determinism ----------------------------------------------------------------------------------


def test_criterion_10_cli_determinism(tmp_path):
    from fixtures import theta, two_triangles, cycle_graph

    inst = {}
    for name, problem, g, k, budgets in (
        ("ms", "minsum", two_triangles(), 2, (6,)),
        ("mv", "minvec", two_triangles(), 2, (3, 4)),
        ("scp", "scp", gen_random_planar(24, seed=3), 3, ()),
        ("ed", "scp-ed", theta(5, 2), 2, ()),
        ("mc", "mincut-pack", cycle_graph(6), 2, ()),
    ):
        p = tmp_path / f"{name}.txt"
        p.write_text(format_instance(ProblemInstance(problem, g, k, tuple(Fraction(b) for b in budgets))))
        inst[name] = str(p)
    sol = tmp_path / "ms.sol"
    sol.write_text("RESULT yes\nc 0 1 2\nc 3 4 5\ntotal 6\n")
    commands = [
        ["solve", inst["ms"]],
        ["solve", inst["mv"]],
        ["solve", inst["scp"], "--seed", "7", "--trace"],
        ["solve", inst["scp"], "--exhaustive"],
        ["solve", inst["ed"]],
        ["solve", inst["mc"]],
        ["kernelize", inst["ed"]],
        ["lsct", inst["ed"]],
        ["lsct", inst["ed"], "--dot"],
        ["verify", inst["ms"], str(sol)],
    ]
    for red in ("mcc-minsum", "is-mincut", "sat-dsf", "dsf-or", "dsf-scp", "random-planar"):
        commands.append(["generate", "--reduction", red, "--seed", "5"])
    differ = []
    for cmd in commands:
        outs = set()
        for _ in range(3):
            run = subprocess.run([sys.executable, "-m", "cyclepack.cli", *cmd], capture_output=True, text=True)
            outs.add((run.returncode, run.stdout, run.stderr))
        if len(outs) != 1:
            differ.append(cmd[0])
    record(10, "CLI determinism", not differ, f"{len(commands) - len(differ)}/{len(commands)} commands byte-identical over 3 runs")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
