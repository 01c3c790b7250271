"""Seeded random graphs/webs, exact PageRank, and the exact min cut."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import ConvergenceError, ParameterError, ValidationError


@dataclass(frozen=True)
class Web:
    """Directed link graph; every node keeps out-degree >= 1."""

    n_nodes: int
    edges: np.ndarray  # (E, 2) of (from, to)

    def __post_init__(self):
        edges = np.ascontiguousarray(self.edges, dtype=np.int64).reshape(-1, 2)
        # Canonical order so identical edge sets always serialize alike.
        order = np.lexsort((edges[:, 1], edges[:, 0]))
        object.__setattr__(self, "edges", edges[order])
        if self.n_nodes < 2:
            raise ParameterError("web needs at least 2 nodes")
        if edges.size:
            if edges.min() < 0 or edges.max() >= self.n_nodes:
                raise ValidationError("edge endpoints out of range")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValidationError("self-loops are not allowed")
        outdeg = np.bincount(self.edges[:, 0], minlength=self.n_nodes)
        if np.any(outdeg == 0):
            raise ValidationError("every node must have out-degree >= 1")

    def out_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 0], minlength=self.n_nodes)

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, targets) with targets grouped by source node."""
        outdeg = self.out_degrees()
        indptr = np.concatenate(([0], np.cumsum(outdeg)))
        return indptr.astype(np.int64), self.edges[:, 1].copy()


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph for cut computations."""

    n_nodes: int
    edges: np.ndarray  # (E, 2), u < v per row; duplicates are parallel edges

    def __post_init__(self):
        edges = np.ascontiguousarray(self.edges, dtype=np.int64).reshape(-1, 2)
        edges = np.sort(edges, axis=1)
        order = np.lexsort((edges[:, 1], edges[:, 0]))
        object.__setattr__(self, "edges", edges[order])
        if self.n_nodes < 2:
            raise ParameterError("graph needs at least 2 nodes")
        if edges.size == 0:
            raise ValidationError("graph needs at least one edge")
        if edges.min() < 0 or edges.max() >= self.n_nodes:
            raise ValidationError("edge endpoints out of range")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise ValidationError("self-loops are not allowed")

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]


def is_connected(graph: Graph) -> bool:
    parent = list(range(graph.n_nodes))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in graph.edges.tolist():
        parent[find(u)] = find(v)
    root = find(0)
    return all(find(i) == root for i in range(graph.n_nodes))


def generate_web(n_nodes: int, edge_prob: float, seed: int) -> Web:
    """Random directed web; dangling nodes get one uniform out-edge."""
    if n_nodes < 2:
        raise ParameterError("n_nodes must be >= 2")
    if not 0.0 <= edge_prob <= 1.0:
        raise ParameterError("edge_prob must be in [0, 1]")
    rng = np.random.default_rng(seed)
    adj = rng.random((n_nodes, n_nodes)) < edge_prob
    np.fill_diagonal(adj, False)
    for i in range(n_nodes):
        if not adj[i].any():
            j = int(rng.integers(0, n_nodes - 1))
            if j >= i:
                j += 1
            adj[i, j] = True
    src, dst = np.nonzero(adj)
    return Web(n_nodes=n_nodes, edges=np.stack([src, dst], axis=1))


def generate_graph(n_nodes: int, edge_prob: float, seed: int) -> Graph:
    """Random undirected graph, made connected by spanning-tree seeding."""
    if n_nodes < 2:
        raise ParameterError("n_nodes must be >= 2")
    if not 0.0 <= edge_prob <= 1.0:
        raise ParameterError("edge_prob must be in [0, 1]")
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n_nodes, n_nodes)) < edge_prob, k=1)
    u, v = np.nonzero(upper)
    edges = list(zip(u.tolist(), v.tolist()))

    parent = list(range(n_nodes))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    components: dict[int, list[int]] = {}
    for i in range(n_nodes):
        components.setdefault(find(i), []).append(i)
    comps = sorted(components.values(), key=lambda c: c[0])
    merged = comps[0]
    for comp in comps[1:]:
        a = int(merged[rng.integers(0, len(merged))])
        b = int(comp[rng.integers(0, len(comp))])
        edges.append((min(a, b), max(a, b)))
        merged = merged + comp
    return Graph(n_nodes=n_nodes, edges=np.asarray(edges, dtype=np.int64))


def pagerank_power(web: Web, damping: float = 0.85, tol: float = 1e-10,
                   max_iter: int = 100_000) -> np.ndarray:
    """Exact ranks by power iteration to an L1 tolerance."""
    if not 0.0 <= damping <= 1.0:
        raise ParameterError("damping must be in [0, 1]")
    n = web.n_nodes
    outdeg = web.out_degrees().astype(np.float64)
    src = web.edges[:, 0]
    dst = web.edges[:, 1]
    rank = np.full(n, 1.0 / n)
    for iteration in range(1, max_iter + 1):
        flow = rank[src] / outdeg[src]
        new_rank = damping * np.bincount(dst, weights=flow, minlength=n)
        new_rank += (1.0 - damping) / n
        delta = float(np.abs(new_rank - rank).sum())
        rank = new_rank
        if delta < tol:
            return rank
    raise ConvergenceError(
        f"power iteration did not reach tol={tol} in {max_iter} iterations",
        iterations=max_iter,
    )


def brute_force_min_cut(graph: Graph) -> int:
    """Exact minimum cut by enumerating all nontrivial bipartitions."""
    n = graph.n_nodes
    if n > 20:
        raise ParameterError(f"brute force is limited to 20 nodes, got {n}")
    masks = np.arange(1, 1 << (n - 1), dtype=np.int64)  # node n-1 stays at side 0
    crossings = np.zeros(masks.size, dtype=np.int64)
    for u, v in graph.edges.tolist():
        side_u = (masks >> u) & 1
        side_v = (masks >> v) & 1
        crossings += side_u != side_v
    return int(crossings.min())


def rankings_from_scores(scores: np.ndarray) -> list[int]:
    """Node ids sorted by descending score, ties broken by node id."""
    order = np.lexsort((np.arange(scores.size), -scores))
    return [int(i) for i in order]


def write_edges_csv(path, obj: Web | Graph) -> None:
    """Edge list CSV preceded by a one-line JSON header comment."""
    directed = isinstance(obj, Web)
    header = {"nodes": obj.n_nodes, "directed": directed}
    with open(path, "w") as fh:
        fh.write("# " + json.dumps(header, sort_keys=True) + "\n")
        fh.write("from,to\n" if directed else "u,v\n")
        for a, b in obj.edges.tolist():
            fh.write(f"{a},{b}\n")


def read_edges_csv(path) -> Web | Graph:
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("#"):
            raise ParameterError(f"{path}: missing JSON header line")
        header = json.loads(first[1:].strip())
        fh.readline()  # column names
        rows = [tuple(int(x) for x in line.strip().split(",")) for line in fh if line.strip()]
    edges = np.asarray(rows, dtype=np.int64).reshape(-1, 2)
    if header["directed"]:
        return Web(n_nodes=int(header["nodes"]), edges=edges)
    return Graph(n_nodes=int(header["nodes"]), edges=edges)
