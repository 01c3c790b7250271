"""Numba kernels for the order-sensitive test statistics.

The same kernel evaluates the original ordering and every shuffle, so
any convention choice (tie handling, segment accounting) cancels out of
the permutation ranks.  Kernels hold no state and release the GIL.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def stats_vector(s, mean, median, k, lags, out):
    """Fill out[0:8+2*len(lags)] with the order-sensitive statistics.

    Layout: excursion, number/length of directional runs, increases vs
    decreases, number/length of median runs, average/maximum collision,
    periodicity per lag, covariance per lag.
    """
    length = s.size

    # Excursion: largest deviation of the running sum from the mean line.
    running = 0.0
    excursion = 0.0
    for i in range(length):
        running += s[i] - mean
        dev = abs(running)
        if dev > excursion:
            excursion = dev
    out[0] = excursion

    # Directional runs on the L-1 step signs (ties count as increases).
    if length >= 2:
        n_runs = 1
        max_run = 1
        cur = 1
        n_up = 1 if s[1] >= s[0] else 0
        prev_up = s[1] >= s[0]
        for i in range(2, length):
            up = s[i] >= s[i - 1]
            if up:
                n_up += 1
            if up == prev_up:
                cur += 1
                if cur > max_run:
                    max_run = cur
            else:
                n_runs += 1
                cur = 1
            prev_up = up
        n_down = (length - 1) - n_up
        out[1] = n_runs
        out[2] = max_run
        out[3] = n_up if n_up > n_down else n_down
    else:
        out[1] = 0.0
        out[2] = 0.0
        out[3] = 0.0

    # Runs above/below the median over all L samples.
    n_runs_m = 1
    max_run_m = 1
    cur = 1
    prev_hi = s[0] >= median
    for i in range(1, length):
        hi = s[i] >= median
        if hi == prev_hi:
            cur += 1
            if cur > max_run_m:
                max_run_m = cur
        else:
            n_runs_m += 1
            cur = 1
        prev_hi = hi
    out[4] = n_runs_m
    out[5] = max_run_m

    # Collision segments: scan until a value repeats, record the segment
    # length including the repeat, restart after it.
    seen = np.zeros(k, dtype=np.int64)
    epoch = 1
    seg_start = 0
    total_len = 0
    n_segments = 0
    max_len = 0
    for i in range(length):
        v = s[i]
        if seen[v] == epoch:
            seg_len = i - seg_start + 1
            total_len += seg_len
            n_segments += 1
            if seg_len > max_len:
                max_len = seg_len
            epoch += 1
            seg_start = i + 1
        else:
            seen[v] = epoch
    out[6] = total_len / n_segments if n_segments > 0 else 0.0
    out[7] = max_len

    # Periodicity (equal pairs) and covariance (dot product) per lag.
    for li in range(lags.size):
        p = lags[li]
        matches = 0
        cov = np.int64(0)
        for i in range(length - p):
            a = np.int64(s[i])
            b = np.int64(s[i + p])
            if a == b:
                matches += 1
            cov += a * b
        out[8 + li] = matches
        out[8 + lags.size + li] = float(cov)
