import re
from fractions import Fraction

import numpy as np
import pytest

from cyclepack.graph import VERTEX, clean, girth, verify_packing
from cyclepack.lsct import build_lsct
from cyclepack.oracle import best_packing
from cyclepack.reductions import gen_random_planar
from cyclepack.scp import (
    LARGE,
    SMALL,
    SeparationConfig,
    all_colorings,
    branching,
    build_star_tree,
    classify_s_nodes,
    color_paths,
    coloring_chunk,
    formula_trials,
    path_family,
    plain_star_tree,
    signature_of,
    solve_scp_planar,
    splice_options,
)

from fixtures import g_of, planar_clean, planted_nontree, theta, triangle, two_triangles


def oracle(g, k):
    return best_packing(g, k, VERTEX, "shortest-only") is not None


def test_config_values():
    assert SeparationConfig(1).red_probability == Fraction(1, 3)
    assert SeparationConfig(3).red_probability == Fraction(1, 6)
    assert formula_trials(1) == 103  # (162/16)^2 = 102.52
    assert SeparationConfig(4).trials == 200_000
    with pytest.raises(ValueError):
        SeparationConfig(0)
    with pytest.raises(ValueError):
        SeparationConfig(1, rng_seed=-1)


def test_classify_s_nodes_boundary():
    _, tree = build_lsct(theta(7, 2))
    assert classify_s_nodes(tree, 1) == {tree.root: LARGE}
    _, tree = build_lsct(theta(6, 2))
    assert classify_s_nodes(tree, 1) == {tree.root: SMALL}
    _, tree = build_lsct(theta())
    assert classify_s_nodes(tree, 1) == {tree.root: SMALL}


def test_red_frequency_for_k1():
    cfg = SeparationConfig(1, rng_seed=5)
    mat = np.vstack([coloring_chunk(8, cfg, c) for c in range(10)])
    assert abs(mat.mean() - 1 / 3) < 0.01


def test_colorings_are_reproducible_and_exhaustive():
    cfg = SeparationConfig(2, rng_seed=11)
    fam = list(range(6))
    assert [color_paths(fam, cfg, t) for t in range(20)] == [color_paths(fam, cfg, t) for t in range(20)]
    assert len(set(all_colorings(range(3)))) == 8


def test_star_tree_splices_one_pair():
    g = theta(4, 2)
    _, tree = build_lsct(g)
    fam = path_family(tree, 1)
    opts = splice_options(tree, g, 1)
    red = [(i in (0, 2)) for _, i in fam]
    sig = signature_of(tree, fam, red, opts)
    assert sig == ((tree.root, 0, 2),)
    star = build_star_tree(tree, g, sig)
    new = [x for x in star.node_ids if x >= len(tree.nodes)]
    assert len(new) == 1 and len(star.children[new[0]]) == 2
    assert signature_of(tree, fam, [False] * len(fam), opts) == ()
    assert signature_of(tree, fam, [i < 3 for _, i in fam], opts) == ()


def test_star_tree_keeps_order_and_leaves():
    g = theta(5, 2)
    emb, tree = build_lsct(g)
    star = build_star_tree(tree, g, [(tree.root, 1, 3)])
    plain = plain_star_tree(tree)
    assert sorted(star.leaves()) == sorted(plain.leaves())
    for a in star.node_ids:
        for b in star.node_ids:
            from cyclepack.planar import cycle_le

            assert star.is_descendant(a, b) == cycle_le(emb, star.cycles[a], star.cycles[b])


def test_solver_examples():
    assert solve_scp_planar(two_triangles(), 2).answer
    assert not solve_scp_planar(theta(), 2).answer
    assert not solve_scp_planar(g_of(3, [(0, 1), (1, 2)]), 1).answer
    assert solve_scp_planar(triangle(), 0).answer


def test_planted_non_tree_cycle_needs_a_splice():
    g = planted_nontree()
    emb, tree = build_lsct(clean(g))
    assert branching(emb, 4, plain_star_tree(tree), tree.girth) is None
    res = solve_scp_planar(g, 4, SeparationConfig(4, exhaustive_mode=True))
    assert res.answer and res.exact
    assert oracle(g, 4)
    res = solve_scp_planar(g, 4, SeparationConfig(4, rng_seed=3))
    assert res.answer


def test_trace_lines():
    trace: list[str] = []
    solve_scp_planar(planted_nontree(), 4, SeparationConfig(4, exhaustive_mode=True), trace=trace)
    branches = [l for l in trace if l.startswith("branch")]
    assert branches
    assert all(re.fullmatch(r"branch P=\d+-\d+ r=\d+ S\*=\d+", l) for l in branches)


def test_randomized_run_is_deterministic():
    g = gen_random_planar(20, seed=4)
    a = solve_scp_planar(g, 3, SeparationConfig(3, rng_seed=9))
    b = solve_scp_planar(g, 3, SeparationConfig(3, rng_seed=9))
    assert a == b


def test_parallel_jobs_agree():
    g = planted_nontree()
    cfg = SeparationConfig(4, exhaustive_mode=True)
    one = solve_scp_planar(g, 4, cfg)
    two = solve_scp_planar(g, 4, cfg, jobs=2)
    assert one.answer == two.answer


@pytest.mark.parametrize("seed", range(24))
def test_exhaustive_matches_oracle(seed):
    g = planar_clean(seed) if seed % 4 else gen_random_planar(8 + seed, seed=seed, weight_range=(1, 2))
    k = 1 + seed % 4
    res = solve_scp_planar(g, k, SeparationConfig(k, exhaustive_mode=True))
    assert res.answer == oracle(g, k)
    if res.answer:
        assert verify_packing(g, list(res.packing.cycles), VERTEX) is None
        assert all(c.weight == girth(g) for c in res.packing.cycles)


@pytest.mark.parametrize("seed", range(8))
def test_randomized_never_false_positive(seed):
    g = planar_clean(seed + 100)
    k = 2 + seed % 3
    want = oracle(g, k)
    for s in range(3):
        res = solve_scp_planar(g, k, SeparationConfig(k, rng_seed=s))
        assert not res.answer or want
        if not res.exact:
            assert 0 < res.failure_bound <= 1
