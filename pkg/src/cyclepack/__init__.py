"""Exact and parameterized solvers for cycle packing problems on weighted graphs."""

from .graph import (
    EDGE,
    VERTEX,
    Cycle,
    CyclePacking,
    VertexPath,
    WeightedGraph,
    all_shortest_cycles,
    clean,
    girth,
    graph_from_edges,
    shortest_cycle_through_edge,
)

__all__ = [
    "EDGE",
    "VERTEX",
    "Cycle",
    "CyclePacking",
    "VertexPath",
    "WeightedGraph",
    "all_shortest_cycles",
    "clean",
    "girth",
    "graph_from_edges",
    "shortest_cycle_through_edge",
]
