"""Most-common-value min-entropy estimation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientDataError
from . import conformance
from .types import Dataset


@dataclass(frozen=True)
class McvEstimate:
    p_hat: float    # proportion of the most frequent value
    p_upper: float  # 99.5% upper confidence bound on that proportion
    h_min: float    # -log2(p_upper), bits per symbol

    def __post_init__(self):
        if not (0.0 < self.p_hat <= self.p_upper <= 1.0):
            raise ValueError("estimates must satisfy 0 < p_hat <= p_upper <= 1")


def mcv_estimate(data: Dataset) -> McvEstimate:
    """Upper-bounded most-common-value estimate of min-entropy."""
    n_samples = len(data)
    if n_samples < 2:
        raise InsufficientDataError("mcv estimate needs at least 2 samples")
    counts = np.bincount(data.samples, minlength=data.alphabet_size)
    p_hat = float(counts.max()) / n_samples
    spread = conformance.MCV_Z_CRITICAL * math.sqrt(
        p_hat * (1.0 - p_hat) / (n_samples - 1)
    )
    p_upper = min(1.0, p_hat + spread)
    return McvEstimate(p_hat=p_hat, p_upper=p_upper, h_min=-math.log2(p_upper))


@dataclass(frozen=True)
class SequentialEntropy:
    h_symbol: float            # bits per symbol, on the symbol stream
    h_bitstring: float         # bits per bit, on the expanded bitstring
    min_entropy: float         # min(h_symbol, n * h_bitstring)


def sequential_entropy(data: Dataset) -> SequentialEntropy:
    """Per-symbol and per-bit estimates, combined conservatively."""
    h_symbol = mcv_estimate(data).h_min
    h_bitstring = mcv_estimate(data.bit_dataset()).h_min
    return SequentialEntropy(
        h_symbol=h_symbol,
        h_bitstring=h_bitstring,
        min_entropy=min(h_symbol, data.n * h_bitstring),
    )


def min_entropy(data: Dataset) -> float:
    """Sequential-stage min-entropy in bits per symbol."""
    return sequential_entropy(data).min_entropy
