import math

import pytest

from cyclepack.graph import VERTEX, girth
from cyclepack.instance import format_instance, ProblemInstance
from cyclepack.oracle import (
    best_packing,
    disjoint_min_cuts,
    dsf_brute,
    graph_independent_set,
    multicolored_clique,
    sat_brute,
)
from cyclepack.planar import embed
from cyclepack.reductions import (
    UNSAT_CORE34,
    DsfInstance,
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

from fixtures import g_of


# -- MCC -> min-sum --------------------------------------------------------------


def test_mcc_single_edge():
    r = gen_mcc_to_minsum(g_of(2, [(0, 1)]), [[0], [1]])
    assert r.k == 7
    assert max_degree(r.graph) <= 3
    enc = math.ceil(8 * r.gamma / 5)
    assert r.L == 9 * 2 * r.gamma + 2 * (enc + 1)


def test_mcc_rejects_bad_classes():
    with pytest.raises(ValueError):
        gen_mcc_to_minsum(g_of(3, [(0, 1)]), [[0], [1]])


@pytest.mark.parametrize("seed", range(6))
def test_mcc_soundness_sample(seed):
    g, classes = sample_mcc(2, 1 + seed % 2, 0.3, seed)
    r = gen_mcc_to_minsum(g, classes)
    assert max_degree(r.graph) <= 3
    assert r.k == 3 * 2 + 1
    got = best_packing(r.graph, r.k, VERTEX, "min-total", bound=r.L, total_bound=r.L)
    assert (got is not None) == (multicolored_clique(g, classes) is not None)


# -- IS -> min-cut packing ---------------------------------------------------------


def test_is_single_edge():
    H, k, lam = gen_is_to_mincutpack(g_of(2, [(0, 1)]), 1)
    assert lam == 3 and k == 1
    assert H.n == 2 + 5
    assert all(H.degree(v) == 3 for v in (0, 1))


def test_is_edgeless_pair_packs_two_cuts():
    H, k, lam = gen_is_to_mincutpack(g_of(2, []), 2)
    assert disjoint_min_cuts(H, 2) is not None


@pytest.mark.parametrize("seed", range(10))
def test_is_soundness_sample(seed):
    g = sample_graph(2 + seed % 5, 0.5, seed)
    k = 1 + seed % 3
    H, k, lam = gen_is_to_mincutpack(g, k)
    assert lam == 2 * max_degree(g) + 1
    assert (graph_independent_set(g, k) is not None) == (disjoint_min_cuts(H, k) is not None)


# -- 3,4-SAT -> DSF ------------------------------------------------------------------


def test_sat_single_clause_lengths():
    d = gen_sat34_to_dsf([(1, 2, 3)], 3)
    lengths = d.factor_lengths()
    assert {lengths[f"p{q}"] for q in (1, 2, 3)} == {3}
    assert {lengths[f"x{i}"] for i in (1, 2, 3)} == {17}
    assert len(d) == 9 + 2 + 35 * 3
    assert dsf_brute(d.word, d.alphabet) is not None


def test_sat_unsat_core():
    assert sat_brute(UNSAT_CORE34, 3) is None
    d = gen_sat34_to_dsf(UNSAT_CORE34, 3)
    assert dsf_brute(d.word, d.alphabet) is None


def test_sat_rejects_bad_formulas():
    with pytest.raises(ValueError):
        gen_sat34_to_dsf([(1, 2)], 2)
    with pytest.raises(ValueError):
        gen_sat34_to_dsf([(1, 1, 1), (1, 1, 2)], 2)


@pytest.mark.parametrize("seed", range(8))
def test_sat_soundness_sample(seed):
    unsat = seed % 2 == 0
    nv = 3 + seed % 3
    m = 4 + (nv > 3) if unsat else 1 + seed % 4
    cnf = sample_cnf34(nv, m, seed, unsat=unsat)
    d = gen_sat34_to_dsf(cnf, nv)
    assert (sat_brute(cnf, nv) is not None) == (dsf_brute(d.word, d.alphabet) is not None)


# -- OR composition -------------------------------------------------------------------


def _pair(seed, flags):
    out = []
    for j, un in enumerate(flags):
        cnf = sample_cnf34(3, 4, 2 * seed + j, unsat=un)
        out.append(gen_sat34_to_dsf(cnf, 3))
    return out


@pytest.mark.parametrize("flags,want", [((False, False), True), ((False, True), True), ((True, True), False)])
def test_or_composition_examples(flags, want):
    ins = _pair(1, flags)
    d = compose_dsf_or(ins)
    n_prev = len(ins[0]) + len(ins[0]) % 2
    assert len(d) == 3 * n_prev + 4
    assert (dsf_brute(d.word, d.alphabet) is not None) == want


def test_or_composition_size_recurrence():
    ins = _pair(2, (False, False)) * 2
    d = compose_dsf_or(ins)
    n0 = len(ins[0]) + len(ins[0]) % 2
    n1 = 3 * n0 + 4
    assert len(d) == 3 * n1 + 4


def test_or_rejects_mixed_shapes():
    with pytest.raises(ValueError):
        compose_dsf_or([DsfInstance(("a", "a"), ("a",)), DsfInstance(("a", "_", "a"), ("a",))])


# -- DSF -> SCP -----------------------------------------------------------------------


def test_dsf_scp_aa():
    r = gen_dsf_to_scp(DsfInstance(("a", "a"), ("a",)))
    assert len(r.word) == 10 and r.girth == 60 and r.k == 1
    assert girth(r.graph) == 60
    assert best_packing(r.graph, r.k, VERTEX, "shortest-only") is not None


@pytest.mark.parametrize("seed", range(10))
def test_dsf_scp_soundness_sample(seed):
    d = sample_dsf(2 + seed % 9, 1 + seed % 3, seed)
    r = gen_dsf_to_scp(d)
    assert girth(r.graph) == 6 * len(r.word)
    want = dsf_brute(d.word, d.alphabet) is not None
    assert (best_packing(r.graph, r.k, VERTEX, "shortest-only") is not None) == want


def test_dsf_text_round_trip():
    d = sample_dsf(7, 2, 3)
    assert DsfInstance.from_text(d.to_text()) == d


# -- random planar ----------------------------------------------------------------------


def test_random_planar_is_reproducible_and_planar():
    a = gen_random_planar(16, seed=7, weight_range=(1, 3))
    b = gen_random_planar(16, seed=7, weight_range=(1, 3))
    assert format_instance(ProblemInstance("scp", a, 1, ())) == format_instance(ProblemInstance("scp", b, 1, ()))
    emb = embed(a)
    assert emb.euler_ok()
    assert len(a.components()) == 1


@pytest.mark.parametrize("density", [0.3, 0.6, 0.9])
def test_girth_at_most_shortest_face(density):
    g = gen_random_planar(14, density=density, seed=3, weight_range=(1, 4))
    emb = embed(g)
    faces = [c.weight for c in emb.face_cycles if c is not None]
    if faces:
        assert girth(g) <= min(faces)
