"""Numba kernel for the visit-counting PageRank walk.

The walk is strictly sequential over the bit stream, so the hot loop
lives here.  Draws replicate RandomSource.draw exactly: rejection
sampling on ceil(log2 m)-bit words read MSB-first.
"""

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_EXHAUSTED = 1


@njit(cache=True, nogil=True, inline="always")
def _width(m):
    w = 0
    x = m - 1
    while x > 0:
        w += 1
        x >>= 1
    return w


@njit(cache=True, nogil=True, inline="always")
def _take_word(bits, cursor, width):
    if cursor + width > bits.size:
        return -1, cursor
    v = 0
    for i in range(width):
        v = (v << 1) | bits[cursor + i]
    return v, cursor + width


@njit(cache=True, nogil=True, inline="always")
def _draw(bits, cursor, m):
    if m == 1:
        return 0, cursor
    width = _width(m)
    while True:
        v, cursor = _take_word(bits, cursor, width)
        if v < 0:
            return -1, cursor
        if v < m:
            return v, cursor


@njit(cache=True, nogil=True)
def pagerank_walk_kernel(bits, cursor, indptr, targets, n_nodes, steps,
                         damping_threshold, counts):
    """Count node visits along one long damped walk.

    Each step: a 16-bit coin below damping_threshold follows a uniform
    out-edge, otherwise the walk teleports to a uniform node.  The first
    step is always a teleport.  Returns (cursor, status).
    """
    node = -1
    for _step in range(steps):
        if node < 0:
            node, cursor = _draw(bits, cursor, n_nodes)
            if node < 0:
                return cursor, STATUS_EXHAUSTED
        else:
            coin, cursor = _take_word(bits, cursor, 16)
            if coin < 0:
                return cursor, STATUS_EXHAUSTED
            if coin < damping_threshold:
                degree = indptr[node + 1] - indptr[node]
                j, cursor = _draw(bits, cursor, degree)
                if j < 0:
                    return cursor, STATUS_EXHAUSTED
                node = targets[indptr[node] + j]
            else:
                node, cursor = _draw(bits, cursor, n_nodes)
                if node < 0:
                    return cursor, STATUS_EXHAUSTED
        counts[node] += 1
    return cursor, STATUS_OK
