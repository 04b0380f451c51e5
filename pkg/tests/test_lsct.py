import itertools

import pytest

from cyclepack.graph import Cycle, all_shortest_cycles, girth
from cyclepack.lsct import (
    LEAF,
    SNODE,
    UNODE,
    build_lsct,
    covers,
    find_poles,
    s_node_paths,
    touch_classify,
    u_node_children,
)
from cyclepack.planar import cycle_le, cycle_order, embed, reroot_outer
from cyclepack.xp import enumerate_paths

from fixtures import g_of, k4, nested_theta, planar_clean, rings, theta, triangle, two_triangles


def closed_sub(emb, c):
    vs, es = emb.closed_interior(c)
    g = emb.host
    return g.subgraph([g.edge_id(a, b) for a, b in es], vs)


def brute_poles(emb, c):
    """Every antipodal pair on c joined by a third half-weight path inside c."""
    half = c.weight / 2
    sub = closed_sub(emb, c)
    paths = enumerate_paths(sub, half)
    out = []
    for s, t in itertools.combinations(c.vertices, 2):
        hits = [p for p in paths if {p.vertices[0], p.vertices[-1]} == {s, t} and p.weight == half]
        arcs = [p for p in hits if set(zip(p.vertices, p.vertices[1:])) <= {e for e in _darts(c)}]
        if len(arcs) == 2 and len(hits) > 2:
            out.append(tuple(sorted((s, t))))
    return out


def _darts(c):
    vs = c.vertices
    return {(a, b) for a, b in zip(vs, vs[1:] + vs[:1])} | {(b, a) for a, b in zip(vs, vs[1:] + vs[:1])}


def brute_maximal(emb, c):
    below = [x for x in all_shortest_cycles(emb.host) if x.edges != c.edges and cycle_le(emb, x, c)]
    return sorted(x for x in below if not any(y.edges != x.edges and cycle_le(emb, x, y) for y in below))


# -- touching ----------------------------------------------------------------


def test_touch_classify_examples():
    emb = embed(theta())
    inner = [emb.face_cycle(f) for f in range(3) if f != emb.outer_face]
    t = touch_classify(theta(), *inner)
    assert t.kind == "touching" and len(t.path) == 3
    tt = two_triangles()
    assert touch_classify(tt, Cycle.from_vertices(tt, [0, 1, 2]), Cycle.from_vertices(tt, [3, 4, 5])).kind == "disjoint"
    g = k4()
    t = touch_classify(g, Cycle.from_vertices(g, [0, 1, 2]), Cycle.from_vertices(g, [0, 1, 3]))
    assert t.kind == "touching" and set(t.path) == {0, 1}


def test_touch_classify_two_pole_crossing():
    # two 4-cycles through poles 0 and 1 with no common edge
    g = theta(4, 2)
    a = Cycle.from_vertices(g, [0, 2, 1, 4])
    b = Cycle.from_vertices(g, [0, 3, 1, 5])
    t = touch_classify(g, a, b)
    assert t.kind == "crossing" and t.poles == (0, 1) and len(t.paths) == 4


def test_touch_classify_rejects_non_shortest_pairs():
    g = g_of(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 1)])
    with pytest.raises(ValueError):
        touch_classify(g, Cycle.from_vertices(g, [0, 1, 2]), Cycle.from_vertices(g, [1, 2, 3, 4]))


# -- poles and paths -----------------------------------------------------------


def test_find_poles_examples():
    emb, tree = build_lsct(theta())
    root = tree.node(tree.root)
    assert set(find_poles(emb, root.cycle)) == {0, 1}
    for f in range(emb.face_count):
        if f != emb.outer_face:
            assert find_poles(emb, emb.face_cycle(f)) is None


def test_s_node_paths_examples():
    emb, tree = build_lsct(theta())
    root = tree.node(tree.root)
    paths = s_node_paths(emb, root.cycle, *root.poles)
    assert len(paths) == 3 and all(p.weight == 2 for p in paths)
    emb, tree = build_lsct(theta(5, 2))
    root = tree.node(tree.root)
    assert root.kind == SNODE and len(root.paths) == 5 and len(root.children) == 4
    with pytest.raises(ValueError):
        s_node_paths(emb, root.cycle, 0, root.paths[0].vertices[1])


def test_u_node_children_match_maximal_filter():
    seen = 0
    for seed in range(1, 40, 3):
        g = rings(seed)
        emb, tree = build_lsct(g)
        for node in tree.nodes:
            if node.kind == UNODE:
                seen += 1
                assert u_node_children(emb, node.cycle) == brute_maximal(emb, node.cycle)
    assert seen > 0


# -- tree --------------------------------------------------------------------


def test_build_lsct_examples():
    emb, tree = build_lsct(triangle())
    assert len(tree.nodes) == 1 and tree.node(0).kind == LEAF
    emb, tree = build_lsct(theta())
    root = tree.node(tree.root)
    assert root.kind == SNODE and len(root.children) == 2
    assert all(tree.node(c).kind == LEAF for c in root.children)
    assert emb.face_cycle(emb.outer_face).edges == root.cycle.edges


def test_build_lsct_rejects_unclean_input():
    with pytest.raises(ValueError):
        build_lsct(g_of(4, [(0, 1), (1, 2), (2, 0), (2, 3)]))
    with pytest.raises(ValueError):
        build_lsct(g_of(3, []))


def test_nested_shape():
    # poles 0,1 with three unit paths of length 2; the middle face gets a
    # second pole pair of its own
    g = g_of(7, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1), (2, 5), (5, 4), (2, 6), (6, 4)])
    emb, tree = build_lsct(g)
    kinds = sorted(n.kind for n in tree.nodes)
    assert kinds.count(SNODE) == 2 and kinds.count(LEAF) == 4


def test_non_tree_pairs_skip_children_and_root():
    emb, tree = build_lsct(theta(5, 2))
    assert tree.non_tree_pairs(tree.root) == [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]


def test_exports_list_every_node():
    emb, tree = build_lsct(theta(4, 2))
    assert tree.to_dot().count("label=") == len(tree.nodes)
    assert len(tree.to_jsonl(emb.host).splitlines()) == len(tree.nodes)


@pytest.mark.parametrize("seed", range(30))
def test_tree_invariants_on_corpus(seed):
    g = planar_clean(seed)
    emb, tree = build_lsct(g)
    gi = girth(g)
    for c in all_shortest_cycles(g):
        assert covers(tree, g, c)
    for a in tree.nodes:
        assert a.cycle.weight == gi
        if a.kind == LEAF:
            assert emb.is_facial(a.cycle)
        if a.kind == SNODE:
            assert brute_poles(emb, a.cycle) == [tuple(sorted(a.poles))]
            assert all(p.weight == gi / 2 for p in a.paths)
            inner = [set(p.vertices[1:-1]) for p in a.paths]
            assert all(not (x & y) for x, y in itertools.combinations(inner, 2))
            assert a.paths[0].edges | a.paths[-1].edges == a.cycle.edges
        for b in tree.nodes:
            if a.id != b.id:
                assert cycle_order(emb, a.cycle, b.cycle) != "crossing"
            assert tree.is_descendant(a.id, b.id) == cycle_le(emb, a.cycle, b.cycle)
    leaves = {tree.node(i).cycle.edges for i in tree.leaves()}
    internal_short_faces = {
        c.edges for f, c in enumerate(emb.face_cycles)
        if c is not None and f != emb.outer_face and c.weight == gi
    }
    assert leaves == internal_short_faces
