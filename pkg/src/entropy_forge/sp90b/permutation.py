"""Permutation (shuffle-rank) tests for the IID assumption.

Each statistic is computed on the original ordering and on n_perm
Fisher-Yates shuffles drawn from a counter-based generator keyed by
(seed, iteration).  A statistic fails when the original value sits at
an extreme rank of the shuffle distribution.  Iterations are
independent, so they can run on a thread pool; the C0/C1 counters merge
by exact summation and never depend on worker count.
"""

from __future__ import annotations

import bz2
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError
from ..utils import resolve_workers
from . import conformance
from ._kernels import stats_vector
from .types import Dataset

_LAGS = np.asarray(conformance.PERIODICITY_LAGS, dtype=np.int64)

STATISTIC_NAMES: tuple[str, ...] = (
    "excursion",
    "n_directional_runs",
    "len_directional_runs",
    "n_increases_decreases",
    "n_median_runs",
    "len_median_runs",
    "avg_collision",
    "max_collision",
    *(f"periodicity_lag_{p}" for p in conformance.PERIODICITY_LAGS),
    *(f"covariance_lag_{p}" for p in conformance.PERIODICITY_LAGS),
    "compression",
)

_N_KERNEL_STATS = 8 + 2 * len(conformance.PERIODICITY_LAGS)


@dataclass(frozen=True)
class PermutationTestOutcome:
    statistic_name: str
    original_value: float
    counter_higher: int  # shuffles with a strictly larger statistic (C0)
    counter_equal: int   # shuffles tying the original (C1)
    passed: bool


def _compression_length(data: Dataset, values: np.ndarray) -> int:
    if data.n <= 8:
        payload = values.tobytes()
    else:
        payload = values.astype("<u2").tobytes()
    return len(bz2.compress(payload, conformance.COMPRESSION_LEVEL))


def compute_statistics(data: Dataset, values: np.ndarray | None = None) -> np.ndarray:
    """All order-sensitive statistics for one ordering of the dataset."""
    if values is None:
        values = data.samples
    mean = float(np.mean(data.samples))
    median = float(np.median(data.samples))
    out = np.empty(_N_KERNEL_STATS, dtype=np.float64)
    stats_vector(values, mean, median, data.alphabet_size, _LAGS, out)
    return np.concatenate([out, [float(_compression_length(data, values))]])


def _iteration_seed_key(seed: int, iteration: int) -> np.ndarray:
    return np.array([seed & 0xFFFFFFFFFFFFFFFF, iteration], dtype=np.uint64)


def _run_chunk(data, original, mean, median, seed, start, stop):
    c0 = np.zeros(original.size, dtype=np.int64)
    c1 = np.zeros(original.size, dtype=np.int64)
    k = data.alphabet_size
    kern = np.empty(_N_KERNEL_STATS, dtype=np.float64)
    stats = np.empty(original.size, dtype=np.float64)
    for j in range(start, stop):
        rng = np.random.Generator(np.random.Philox(key=_iteration_seed_key(seed, j)))
        shuffled = rng.permutation(data.samples)
        stats_vector(shuffled, mean, median, k, _LAGS, kern)
        stats[:_N_KERNEL_STATS] = kern
        stats[-1] = float(_compression_length(data, shuffled))
        c0 += stats > original
        c1 += stats == original
    return c0, c1


def permutation_test_suite(
    data: Dataset,
    n_perm: int = conformance.PERMUTATION_COUNT_DEFAULT,
    seed: int = 0,
    workers: int | None = None,
) -> list[PermutationTestOutcome]:
    """Run the full shuffle-rank battery; see STATISTIC_NAMES for order."""
    if len(data) == 0:
        raise ParameterError("dataset is empty")
    if n_perm < conformance.PERMUTATION_COUNT_MIN:
        raise ParameterError(
            f"n_perm must be >= {conformance.PERMUTATION_COUNT_MIN}, got {n_perm}"
        )
    mean = float(np.mean(data.samples))
    median = float(np.median(data.samples))
    original = compute_statistics(data)

    n_workers = resolve_workers(workers)
    bounds = np.linspace(0, n_perm, min(n_workers, n_perm) * 4 + 1, dtype=np.int64)
    c0 = np.zeros(original.size, dtype=np.int64)
    c1 = np.zeros(original.size, dtype=np.int64)
    if n_workers == 1:
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            part0, part1 = _run_chunk(data, original, mean, median, seed, int(lo), int(hi))
            c0 += part0
            c1 += part1
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            futures = [
                pool.submit(
                    _run_chunk, data, original, mean, median, seed, int(lo), int(hi)
                )
                for lo, hi in zip(bounds[:-1], bounds[1:])
            ]
            for fut in futures:
                part0, part1 = fut.result()
                c0 += part0
                c1 += part1

    cutoff = conformance.extreme_rank_cutoff(n_perm)
    outcomes = []
    for idx, name in enumerate(STATISTIC_NAMES):
        ge_rank = int(c0[idx] + c1[idx])  # shuffles at or above the original
        extreme = ge_rank <= cutoff or ge_rank >= n_perm - cutoff
        outcomes.append(
            PermutationTestOutcome(
                statistic_name=name,
                original_value=float(original[idx]),
                counter_higher=int(c0[idx]),
                counter_equal=int(c1[idx]),
                passed=not extreme,
            )
        )
    return outcomes


def suite_passed(outcomes: list[PermutationTestOutcome]) -> bool:
    return all(o.passed for o in outcomes)
