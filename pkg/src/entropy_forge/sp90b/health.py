"""Continuous health tests: repetition count and adaptive proportion.

Both are restartable state machines: feed() consumes a chunk of symbols
and returns the absolute positions of any alarms, carrying partial runs
and partial windows over to the next call.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import binom

from ..errors import ParameterError
from . import conformance


class RepetitionCountTest:
    """Alarms when one symbol repeats back to back too many times.

    The cutoff C = 1 + ceil(-log2(alpha) / h_min): a run of C identical
    symbols has probability below alpha under the claimed min-entropy.
    The run counter resets after each alarm, so a run of 2C raises two.
    """

    def __init__(self, h_min: float, alpha: float = conformance.HEALTH_ALPHA):
        if h_min <= 0:
            raise ParameterError(f"h_min must be > 0, got {h_min}")
        if not 0 < alpha < 1:
            raise ParameterError(f"alpha must be in (0, 1), got {alpha}")
        self.h_min = h_min
        self.alpha = alpha
        self.cutoff = 1 + math.ceil(-math.log2(alpha) / h_min)
        self.reset()

    def reset(self) -> None:
        self._last = None
        self._run = 0
        self._position = 0

    def feed(self, symbols: np.ndarray) -> np.ndarray:
        symbols = np.asarray(symbols)
        if symbols.size == 0:
            return np.empty(0, dtype=np.int64)
        c = self.cutoff
        base = self._position

        change = np.flatnonzero(symbols[1:] != symbols[:-1]) + 1
        starts = np.concatenate(([0], change))
        lengths = np.diff(np.concatenate((starts, [symbols.size])))
        carries = np.zeros_like(lengths)
        if self._last is not None and symbols[0] == self._last:
            carries[0] = self._run

        totals = carries + lengths
        alarms: list[np.ndarray] = []
        for seg in np.flatnonzero(totals >= c).tolist():
            n_alarms = int(totals[seg] // c)
            first = starts[seg] - carries[seg] + c - 1
            alarms.append(base + first + c * np.arange(n_alarms, dtype=np.int64))

        self._last = symbols[-1]
        self._run = int(totals[-1] % c) if totals[-1] >= c else int(totals[-1])
        self._position += symbols.size
        if alarms:
            return np.concatenate(alarms)
        return np.empty(0, dtype=np.int64)


class AdaptiveProportionTest:
    """Alarms when a window's first symbol recurs too often inside it.

    The cutoff is the exact binomial (1 - alpha) quantile at the success
    probability 2**-h_min over the window length; the count includes the
    reference symbol itself.
    """

    def __init__(
        self,
        h_min: float,
        window: int = conformance.ADAPTIVE_WINDOW_DEFAULT,
        alpha: float = conformance.HEALTH_ALPHA,
    ):
        if h_min <= 0:
            raise ParameterError(f"h_min must be > 0, got {h_min}")
        if window < 2:
            raise ParameterError(f"window must be >= 2, got {window}")
        if not 0 < alpha < 1:
            raise ParameterError(f"alpha must be in (0, 1), got {alpha}")
        self.h_min = h_min
        self.window = window
        self.alpha = alpha
        self.cutoff = int(binom.ppf(1.0 - alpha, window, 2.0 ** (-h_min)))
        self.reset()

    def reset(self) -> None:
        self._pending = None
        self._position = 0

    def feed(self, symbols: np.ndarray) -> np.ndarray:
        symbols = np.asarray(symbols)
        if self._pending is not None and self._pending.size:
            symbols = np.concatenate((self._pending, symbols))
            start_base = self._position - self._pending.size
        else:
            start_base = self._position

        w = self.window
        n_windows = symbols.size // w
        alarms = np.empty(0, dtype=np.int64)
        if n_windows:
            windows = symbols[: n_windows * w].reshape(n_windows, w)
            counts = (windows == windows[:, :1]).sum(axis=1)
            hits = np.flatnonzero(counts > self.cutoff).astype(np.int64)
            alarms = start_base + hits * w
        self._pending = symbols[n_windows * w:].copy()
        self._position = start_base + symbols.size
        return alarms


def repetition_count_health(
    symbols: np.ndarray, h_min: float, alpha: float = conformance.HEALTH_ALPHA
) -> np.ndarray:
    """One-shot repetition-count scan; returns alarm positions."""
    test = RepetitionCountTest(h_min=h_min, alpha=alpha)
    return test.feed(symbols)


def adaptive_proportion_health(
    symbols: np.ndarray,
    h_min: float,
    window: int = conformance.ADAPTIVE_WINDOW_DEFAULT,
    alpha: float = conformance.HEALTH_ALPHA,
) -> np.ndarray:
    """One-shot adaptive-proportion scan; returns window-start positions."""
    test = AdaptiveProportionTest(h_min=h_min, window=window, alpha=alpha)
    return test.feed(symbols)
