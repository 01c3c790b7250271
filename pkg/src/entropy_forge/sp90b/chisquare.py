"""Chi-square and longest-repeated-substring checks on symbol data.

Three order/distribution checks complement the shuffle-rank battery:
pair-frequency independence, ten-slice goodness of fit against the
global symbol proportions, and a bound on the longest substring that
appears twice.  Degenerate inputs (fewer than two distinct values, or
too few bins for a valid chi-square) are reported as failures rather
than certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chi2

from ..errors import InsufficientDataError, ParameterError
from . import conformance
from .types import Dataset

_HASH_BASE = np.uint64(1099511628211)  # odd, so invertible mod 2**64
_HASH_BASE_INV = np.uint64(pow(1099511628211, -1, 1 << 64))


@dataclass(frozen=True)
class ChiSquareOutcome:
    name: str
    statistic: float
    threshold: float
    passed: bool
    detail: dict = field(default_factory=dict)


def _support(data: Dataset) -> tuple[np.ndarray, np.ndarray]:
    counts = np.bincount(data.samples, minlength=data.alphabet_size)
    values = np.flatnonzero(counts)
    return values, counts[values]


def _greedy_bins(sorted_probs: np.ndarray, total: float, min_expected: float):
    """Group descending probabilities into bins of expected count >= 5.

    Returns an array mapping each sorted position to a bin id.  A
    trailing under-filled bin is merged into its predecessor.
    """
    bin_ids = np.empty(sorted_probs.size, dtype=np.int64)
    current = 0.0
    bin_id = 0
    start = 0
    for i, pr in enumerate(sorted_probs):
        current += pr
        bin_ids[i] = bin_id
        if current * total >= min_expected:
            bin_id += 1
            current = 0.0
            start = i + 1
    if start < sorted_probs.size:
        # Leftover tail never filled a bin: merge into the previous one.
        if bin_id > 0:
            bin_ids[start:] = bin_id - 1
        else:
            bin_ids[:] = 0
    return bin_ids


def chi_square_independence(data: Dataset) -> ChiSquareOutcome:
    """Pair-frequency independence test on non-overlapping sample pairs."""
    length = len(data)
    if length < 2 * int(conformance.MIN_EXPECTED_BIN):
        raise InsufficientDataError(
            f"independence test needs at least {2 * int(conformance.MIN_EXPECTED_BIN)} samples"
        )
    values, counts = _support(data)
    m = values.size
    if m < 2:
        return ChiSquareOutcome(
            name="chi_square_independence",
            statistic=float("nan"),
            threshold=float("nan"),
            passed=False,
            detail={"degenerate": "fewer than two distinct symbol values"},
        )
    if m * m > 20_000_000:
        raise ParameterError(
            "independence test's pair table is impractical for this alphabet; "
            "use symbols of at most ~10 bits"
        )
    p = counts / length
    n_pairs = length // 2
    pair_probs = np.outer(p, p).ravel()

    lookup = np.full(data.alphabet_size, -1, dtype=np.int64)
    lookup[values] = np.arange(m)
    a = lookup[data.samples[0: 2 * n_pairs: 2]]
    b = lookup[data.samples[1: 2 * n_pairs: 2]]
    observed_codes = np.bincount(a * m + b, minlength=m * m)

    order = np.argsort(-pair_probs, kind="stable")
    bin_of_sorted = _greedy_bins(pair_probs[order], n_pairs, conformance.MIN_EXPECTED_BIN)
    bin_of_code = np.empty(m * m, dtype=np.int64)
    bin_of_code[order] = bin_of_sorted
    n_bins = int(bin_of_sorted.max()) + 1

    observed = np.bincount(bin_of_code, weights=observed_codes, minlength=n_bins)
    expected = np.bincount(bin_of_code, weights=pair_probs, minlength=n_bins) * n_pairs
    statistic = float(((observed - expected) ** 2 / expected).sum())
    dof = n_bins - m
    if dof < 1:
        return ChiSquareOutcome(
            name="chi_square_independence",
            statistic=statistic,
            threshold=float("nan"),
            passed=False,
            detail={"degenerate": f"{n_bins} bins for {m} values leaves no dof"},
        )
    threshold = float(chi2.ppf(1.0 - conformance.CHI_SQUARE_SIGNIFICANCE, dof))
    return ChiSquareOutcome(
        name="chi_square_independence",
        statistic=statistic,
        threshold=threshold,
        passed=statistic <= threshold,
        detail={"dof": dof, "bins": n_bins},
    )


def chi_square_goodness_of_fit(data: Dataset) -> ChiSquareOutcome:
    """Stability of the symbol distribution across ten equal slices."""
    length = len(data)
    slices = conformance.GOF_SLICES
    slice_len = length // slices
    if slice_len < int(conformance.MIN_EXPECTED_BIN):
        raise InsufficientDataError(
            f"goodness-of-fit needs at least {slices * int(conformance.MIN_EXPECTED_BIN)} samples"
        )
    values, counts = _support(data)
    m = values.size
    if m < 2:
        return ChiSquareOutcome(
            name="chi_square_goodness_of_fit",
            statistic=float("nan"),
            threshold=float("nan"),
            passed=False,
            detail={"degenerate": "fewer than two distinct symbol values"},
        )
    p = counts / length
    order = np.argsort(-p, kind="stable")
    bin_of_sorted = _greedy_bins(p[order], slice_len, conformance.MIN_EXPECTED_BIN)
    n_bins = int(bin_of_sorted.max()) + 1
    if n_bins < 2:
        return ChiSquareOutcome(
            name="chi_square_goodness_of_fit",
            statistic=float("nan"),
            threshold=float("nan"),
            passed=False,
            detail={"degenerate": "all probability mass pooled into one bin"},
        )
    bin_of_value_idx = np.empty(m, dtype=np.int64)
    bin_of_value_idx[order] = bin_of_sorted
    lookup = np.full(data.alphabet_size, -1, dtype=np.int64)
    lookup[values] = bin_of_value_idx

    expected = np.bincount(bin_of_sorted, weights=p[order], minlength=n_bins) * slice_len
    statistic = 0.0
    for s in range(slices):
        chunk = data.samples[s * slice_len: (s + 1) * slice_len]
        observed = np.bincount(lookup[chunk], minlength=n_bins)
        statistic += float(((observed - expected) ** 2 / expected).sum())
    dof = (slices - 1) * (n_bins - 1)
    threshold = float(chi2.ppf(1.0 - conformance.CHI_SQUARE_SIGNIFICANCE, dof))
    return ChiSquareOutcome(
        name="chi_square_goodness_of_fit",
        statistic=statistic,
        threshold=threshold,
        passed=statistic <= threshold,
        detail={"dof": dof, "bins": n_bins},
    )


def _window_hashes(prefix: np.ndarray, inv_powers: np.ndarray, w: int) -> np.ndarray:
    count = prefix.size - 1 - w + 1
    return (prefix[w: w + count] - prefix[:count]) * inv_powers[:count]


def _has_repeat(samples: np.ndarray, prefix, inv_powers, w: int) -> bool:
    hashes = _window_hashes(prefix, inv_powers, w)
    order = np.argsort(hashes, kind="stable")
    h_sorted = hashes[order]
    dup = np.flatnonzero(h_sorted[1:] == h_sorted[:-1])
    if dup.size == 0:
        return False
    # Verify candidates: hash collisions are ~2^-64 but the result must
    # be exact, so compare the actual substrings.
    for d in dup.tolist():
        i = int(order[d])
        j = int(order[d + 1])
        if np.array_equal(samples[i: i + w], samples[j: j + w]):
            return True
    return False


def longest_repeated_substring(data: Dataset) -> int:
    """Length of the longest substring occurring at two distinct starts."""
    s = data.samples
    length = s.size
    if length < 2:
        return 0
    powers = np.empty(length, dtype=np.uint64)
    powers[0] = 1
    np.multiply.accumulate(
        np.full(length - 1, _HASH_BASE, dtype=np.uint64), out=powers[1:]
    )
    inv_powers = np.empty(length, dtype=np.uint64)
    inv_powers[0] = 1
    np.multiply.accumulate(
        np.full(length - 1, _HASH_BASE_INV, dtype=np.uint64), out=inv_powers[1:]
    )
    prefix = np.zeros(length + 1, dtype=np.uint64)
    np.cumsum(s.astype(np.uint64) * powers, out=prefix[1:])

    if not _has_repeat(s, prefix, inv_powers, 1):
        return 0
    known_true = 1
    known_false = length  # a repeat of the full length is impossible
    w = 2
    while w < known_false and _has_repeat(s, prefix, inv_powers, w):
        known_true = w
        w *= 2
    if w < known_false:
        known_false = w
    while known_false - known_true > 1:
        mid = (known_true + known_false) // 2
        if _has_repeat(s, prefix, inv_powers, mid):
            known_true = mid
        else:
            known_false = mid
    return known_true


def longest_repeated_substring_test(data: Dataset) -> ChiSquareOutcome:
    """Is the longest observed repeat plausible under the IID hypothesis?"""
    length = len(data)
    if length < 2:
        raise InsufficientDataError("repeated-substring test needs >= 2 samples")
    values, counts = _support(data)
    p = counts / length
    p_col = float((p * p).sum())
    w = longest_repeated_substring(data)
    if w == 0 or p_col >= 1.0:
        prob = 1.0
    else:
        n_pairs = (length - w + 1) * (length - w) / 2.0
        log_pw = w * math.log(p_col)
        if log_pw < -700.0:
            prob = min(1.0, n_pairs * math.exp(log_pw))
        else:
            prob = -math.expm1(n_pairs * math.log1p(-math.exp(log_pw)))
    passed = prob >= conformance.CHI_SQUARE_SIGNIFICANCE
    return ChiSquareOutcome(
        name="longest_repeated_substring",
        statistic=float(w),
        threshold=conformance.CHI_SQUARE_SIGNIFICANCE,
        passed=passed,
        detail={"match_probability": prob, "collision_probability": p_col},
    )


def chi_square_tests(data: Dataset) -> list[ChiSquareOutcome]:
    """Independence, goodness of fit, and longest-repeated-substring."""
    return [
        chi_square_independence(data),
        chi_square_goodness_of_fit(data),
        longest_repeated_substring_test(data),
    ]
