"""Consumers of the random stream: walks, PageRank, and min cut."""

from .graphs import (
    Graph,
    Web,
    brute_force_min_cut,
    generate_graph,
    generate_web,
    is_connected,
    pagerank_power,
    rankings_from_scores,
    read_edges_csv,
    write_edges_csv,
)
from .mincut import default_iteration_budget, karger_min_cut, write_convergence_csv
from .pagerank import pagerank_walk, rbo
from .source import RandomSource, draw_uniform
from .walks import mean_squared_displacement, random_walk_3d, write_walks_csv

__all__ = [
    "Graph",
    "RandomSource",
    "Web",
    "brute_force_min_cut",
    "default_iteration_budget",
    "draw_uniform",
    "generate_graph",
    "generate_web",
    "is_connected",
    "karger_min_cut",
    "mean_squared_displacement",
    "pagerank_power",
    "pagerank_walk",
    "random_walk_3d",
    "rankings_from_scores",
    "rbo",
    "read_edges_csv",
    "write_edges_csv",
    "write_convergence_csv",
    "write_walks_csv",
]
