"""Visit-frequency PageRank from a single damped walk, plus RBO."""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError, SourceExhaustedError, ValidationError
from ._walk_kernels import STATUS_EXHAUSTED, pagerank_walk_kernel
from .graphs import Web
from .source import RandomSource

# 16-bit quantization of the damping coin; the follow-vs-teleport
# probability is round(damping * 65536) / 65536.
_COIN_BITS = 16


def pagerank_walk(
    web: Web, src: RandomSource, n_steps: int, damping: float = 0.85
) -> np.ndarray:
    """Estimate ranks as visit frequencies of one long random walk.

    With probability `damping` the walk follows a uniform out-edge,
    otherwise it teleports to a uniform node; the first step is a
    teleport.  Returns visit counts divided by n_steps.
    """
    if n_steps < 1:
        raise ParameterError(f"n_steps must be >= 1, got {n_steps}")
    if not 0.0 <= damping <= 1.0:
        raise ParameterError("damping must be in [0, 1]")
    indptr, targets = web.csr()
    counts = np.zeros(web.n_nodes, dtype=np.int64)
    threshold = int(round(damping * (1 << _COIN_BITS)))
    cursor, status = pagerank_walk_kernel(
        src.bits,
        src.cursor,
        indptr,
        targets,
        web.n_nodes,
        n_steps,
        threshold,
        counts,
    )
    src._advance(cursor)
    if status == STATUS_EXHAUSTED:
        raise SourceExhaustedError(
            f"stream exhausted after {int(counts.sum())} of {n_steps} steps"
        )
    return counts / n_steps


def rbo(list_a, list_b, p: float = 0.9) -> float:
    """Extrapolated rank-biased overlap of two duplicate-free rankings.

    Top-weighted: agreement at depth d is discounted by p**(d-1), and
    the tail beyond the shorter list is extrapolated at the final
    agreement level.
    """
    if not 0.0 < p < 1.0:
        raise ParameterError("p must be in (0, 1)")
    a = list(list_a)
    b = list(list_b)
    if len(set(a)) != len(a):
        raise ValidationError("first ranking contains duplicates")
    if len(set(b)) != len(b):
        raise ValidationError("second ranking contains duplicates")
    depth = min(len(a), len(b))
    if depth == 0:
        raise ValidationError("rankings must be non-empty")

    seen_a: set = set()
    seen_b: set = set()
    overlap = 0
    weighted_sum = 0.0
    weight = 1.0  # p**(d-1)
    agreement = 0.0
    for d in range(depth):
        x, y = a[d], b[d]
        if x == y:
            overlap += 1
        else:
            if x in seen_b:
                overlap += 1
            if y in seen_a:
                overlap += 1
            seen_a.add(x)
            seen_b.add(y)
        agreement = overlap / (d + 1)
        weighted_sum += weight * agreement
        weight *= p
    return (1.0 - p) * weighted_sum + (p ** depth) * agreement
