"""Shared graph fixtures for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from cyclepack.graph import WeightedGraph, graph_from_edges

F = Fraction


def g_of(n, edges):
    return graph_from_edges(n, edges)


def triangle():
    return g_of(3, [(0, 1), (1, 2), (2, 0)])


def two_triangles():
    return g_of(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])


def k4():
    return g_of(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def theta(paths: int = 3, length: int = 2):
    """Two poles 0 and 1 joined by ``paths`` internally disjoint unit paths."""
    edges = []
    n = 2
    for _ in range(paths):
        prev = 0
        for _ in range(length - 1):
            edges.append((prev, n))
            prev = n
            n += 1
        edges.append((prev, 1))
    return g_of(n, edges)


def cycle_graph(n, w=1):
    return g_of(n, [(i, (i + 1) % n, w) for i in range(n)])


def nested_theta(seed: int, max_n: int = 30) -> WeightedGraph:
    """Random plane graph rich in splittable shortest cycles.

    Start from a theta whose s-t paths all have ``L`` unit edges, then
    repeatedly pick a face (a cycle of ``2L`` edges) and join two antipodal
    vertices of it by one or more new paths of ``L`` edges drawn inside.
    """
    rng = random.Random(seed)
    L = rng.choice([2, 2, 3, 3, 4])
    edges: list[tuple[int, int]] = []
    n = 2

    def add_path(a, b):
        nonlocal n
        seq = [a]
        for _ in range(L - 1):
            seq.append(n)
            n += 1
        seq.append(b)
        edges.extend(zip(seq, seq[1:]))
        return seq

    p = rng.randint(2, 4)
    paths = [add_path(0, 1) for _ in range(p)]
    # faces as vertex cycles: consecutive path pairs, the last pair is the outer one
    faces = [paths[i] + paths[i + 1][-2:0:-1] for i in range(p - 1)]
    while n + L - 1 <= max_n and faces and rng.random() < 0.85:
        f = faces.pop(rng.randrange(len(faces)))
        i = rng.randrange(len(f))
        x, y = f[i], f[(i + L) % len(f)]
        arc1 = [f[(i + j) % len(f)] for j in range(L + 1)]
        arc2 = [f[(i + L + j) % len(f)] for j in range(L + 1)]
        q = rng.randint(1, 2)
        if n + q * (L - 1) > max_n:
            q = 1
        new = [add_path(x, y) for _ in range(q)]
        walks = [arc1] + new + [arc2[::-1]]
        for a, b in zip(walks, walks[1:]):
            faces.append(a + b[-2:0:-1])
    return g_of(n, edges)


def random_weighted(seed: int, n_max: int = 12, max_w: int = 4) -> WeightedGraph:
    """Sparse-ish G(n, p) with integer weights, for the general solvers."""
    rng = random.Random(seed)
    n = rng.randint(4, n_max)
    p = rng.uniform(0.2, 0.45)
    edges = [
        (u, v, rng.randint(1, max_w))
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return g_of(n, edges)


def planted_nontree():
    """Five 4-edge paths between 0 and 1; paths 0, 2, 4 get a 6-edge bridge
    between their positions 1 and 3. The only 4-packing uses the non-tree
    cycle formed by paths 1 and 3."""
    edges = []
    n = 2
    inner = []
    for _ in range(5):
        seq = [0] + list(range(n, n + 3)) + [1]
        n += 3
        edges.extend(zip(seq, seq[1:]))
        inner.append(seq)
    for p in (0, 2, 4):
        a, b = inner[p][1], inner[p][3]
        seq = [a] + list(range(n, n + 5)) + [b]
        n += 5
        edges.extend(zip(seq, seq[1:]))
    return g_of(n, edges)


def onion(k: int):
    """Theta with 2k paths: P_{k-1}+P_k, P_{k-2}+P_{k+1}, ... are k nested
    edge-disjoint shortest cycles."""
    return theta(2 * k, 2)


def grid(rows: int, cols: int):
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return g_of(rows * cols, edges)


def chord_fixture(seed: int, relation: str, k: int):
    """A cycle C and a path P with 4k pairwise ``relation`` chords on C.

    Returns ``(g, P_vertices, C_vertices)``. Consecutive chords are linked
    along C; crossing and parallel chords are linked by extra off-cycle
    connector chords, which the extractor has to thin away.
    """
    rng = random.Random(seed)
    r = 4 * k + rng.randint(0, 2)
    m = 2 * r + rng.randint(0, r)
    pos = sorted(rng.sample(range(m), 2 * r))
    edges = {}
    for i in range(m):
        edges[(i, (i + 1) % m)] = rng.randint(1, 3)
    n = m

    def detour(a, b):
        nonlocal n
        seq = [a] + list(range(n, n + rng.randint(1, 2))) + [b]
        n = max(n, max(seq) + 1)
        for x, y in zip(seq, seq[1:]):
            edges[(x, y)] = rng.randint(1, 3)
        return seq

    if relation == "consecutive":
        ends = [(pos[2 * i], pos[2 * i + 1]) for i in range(r)]
    elif relation == "crossing":
        ends = [(pos[i], pos[r + i]) for i in range(r)]
    elif relation == "parallel":
        ends = [(pos[i], pos[2 * r - 1 - i]) for i in range(r)]
    else:
        raise ValueError(relation)
    P: list[int] = []
    for i, (s, t) in enumerate(ends):
        ch = detour(s, t)
        P.extend(ch if not P else ch[1:])
        if i + 1 < len(ends):
            nxt = ends[i + 1][0]
            if relation == "consecutive":
                P.extend(range(t + 1, nxt + 1))
            else:
                P.extend(detour(t, nxt)[1:])
    g = g_of(n, [(u, v, w) for (u, v), w in edges.items()])
    return g, P, list(range(m))


def rings(seed: int, max_n: int = 30):
    """Concentric unit polygons joined by spokes; some spokes are dropped.

    The inner ring polygons are shortest cycles that are neither facial nor
    splittable, so they show up as U-nodes.
    """
    from cyclepack.graph import clean

    rng = random.Random(seed)
    m = rng.choice([3, 4, 4, 5])
    r = rng.randint(2, max(2, max_n // m))
    edges = []
    for i in range(r):
        for j in range(m):
            edges.append((i * m + j, i * m + (j + 1) % m))
            if i + 1 < r and (j == 0 or rng.random() < 0.8):
                edges.append((i * m + j, (i + 1) * m + j))
    return clean(g_of(r * m, edges))


def holey_grid(seed: int, max_n: int = 30):
    """Unit grid with a few deleted edges, cleaned."""
    from cyclepack.graph import clean

    rng = random.Random(seed)
    rows = rng.randint(3, 5)
    cols = min(rng.randint(3, 6), max_n // rows)
    g = grid(rows, cols)
    keep = [(u, v) for u, v, _ in g.edges if rng.random() < 0.85]
    return clean(g_of(rows * cols, keep))


def planar_clean(seed: int):
    """Clean planar fixtures with n <= 30, mixing three families."""
    return (nested_theta, rings, holey_grid)[seed % 3](seed)
