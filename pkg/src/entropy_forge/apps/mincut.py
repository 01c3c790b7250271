"""Randomized min cut by repeated uniform edge contraction."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ParameterError, ValidationError
from .graphs import Graph, is_connected
from .source import RandomSource


def default_iteration_budget(n_nodes: int) -> int:
    """ceil(N(N-1)/2 * ln N): the classic budget for ~1/N failure odds."""
    return math.ceil(n_nodes * (n_nodes - 1) / 2 * math.log(n_nodes))


def _contract_once(edges: np.ndarray, n_nodes: int, src: RandomSource) -> int:
    """One full contraction down to two super-nodes; returns the cut size."""
    parent = np.arange(n_nodes, dtype=np.int64)

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, int(parent[x])
        return root

    alive = edges
    for _ in range(n_nodes - 2):
        pick = src.draw(alive.shape[0])
        u = find(int(alive[pick, 0]))
        v = find(int(alive[pick, 1]))
        parent[u] = v
        roots_u = np.fromiter((find(int(a)) for a in alive[:, 0]), np.int64)
        roots_v = np.fromiter((find(int(b)) for b in alive[:, 1]), np.int64)
        keep = roots_u != roots_v
        alive = np.stack([roots_u[keep], roots_v[keep]], axis=1)
    return int(alive.shape[0])


def karger_min_cut(
    graph: Graph, src: RandomSource, iterations: int | None = None
) -> tuple[int, np.ndarray]:
    """Best cut over repeated contractions, plus the per-iteration sizes.

    Each contraction picks an edge uniformly from the surviving
    multi-edge list via the stream.  Returns (best cut size, array of
    per-iteration cut sizes); np.minimum.accumulate of the trace gives
    the convergence curve.
    """
    if graph.n_nodes < 2:
        raise ParameterError("graph needs at least 2 nodes")
    if not is_connected(graph):
        raise ValidationError("graph must be connected")
    if iterations is None:
        iterations = default_iteration_budget(graph.n_nodes)
    if iterations < 1:
        raise ParameterError("iterations must be >= 1")
    cuts = np.empty(iterations, dtype=np.int64)
    for i in range(iterations):
        cuts[i] = _contract_once(graph.edges, graph.n_nodes, src)
    return int(cuts.min()), cuts


def write_convergence_csv(path, cuts: np.ndarray) -> None:
    running = np.minimum.accumulate(cuts)
    with open(path, "w") as fh:
        fh.write("iteration,cut,running_min\n")
        for i, (c, r) in enumerate(zip(cuts.tolist(), running.tolist()), start=1):
            fh.write(f"{i},{c},{r}\n")
