"""First-line statistical characterization of a symbol stream."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import binom, chi2

from .errors import InsufficientDataError, ParameterError
from .extraction import SymbolStream, to_bits

GRAYSCALE_MAX = 255


@dataclass(frozen=True)
class SymbolHistogram:
    """Per-symbol occurrence counts over an alphabet of size 2**n."""

    counts: np.ndarray
    total: int

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        object.__setattr__(self, "counts", counts)
        if counts.ndim != 1 or counts.size < 2:
            raise ParameterError("counts must be 1-D with at least 2 entries")
        if counts.size & (counts.size - 1):
            raise ParameterError("alphabet size must be a power of two")
        if np.any(counts < 0):
            raise ParameterError("counts must be non-negative")
        if int(counts.sum()) != self.total:
            raise ParameterError("total must equal sum(counts)")

    @classmethod
    def from_stream(cls, stream: SymbolStream) -> "SymbolHistogram":
        counts = np.bincount(stream.symbols, minlength=stream.alphabet_size)
        return cls(counts=counts.astype(np.int64), total=int(len(stream)))

    @property
    def n(self) -> int:
        return int(self.counts.size).bit_length() - 1


@dataclass(frozen=True)
class EntropyReport:
    shannon_bits_per_symbol: float
    shannon_bits_per_bit: float
    n: int


def shannon_entropy(hist: SymbolHistogram) -> EntropyReport:
    """H = -sum p log2 p over symbols with p > 0."""
    if hist.total <= 0:
        raise InsufficientDataError("empty histogram")
    p = hist.counts[hist.counts > 0] / hist.total
    h = float(-(p * np.log2(p)).sum())
    n = hist.n
    return EntropyReport(
        shannon_bits_per_symbol=h, shannon_bits_per_bit=h / n, n=n
    )


def bit_block_ones(
    bits: np.ndarray, block_len: int = 100
) -> tuple[np.ndarray, np.ndarray]:
    """Histogram of ones per block, plus the unbiased binomial reference.

    Returns (counts over {0..block_len}, expected counts for an unbiased
    Binomial(block_len, 1/2) source with the same number of blocks).
    Trailing bits that do not fill a block are discarded.
    """
    if block_len < 1:
        raise ParameterError(f"block_len must be >= 1, got {block_len}")
    bits = np.asarray(bits, dtype=np.uint8)
    n_blocks = bits.size // block_len
    if n_blocks == 0:
        raise InsufficientDataError(
            f"need at least {block_len} bits, got {bits.size}"
        )
    ones = bits[: n_blocks * block_len].reshape(n_blocks, block_len).sum(axis=1)
    counts = np.bincount(ones, minlength=block_len + 1).astype(np.int64)
    expected = n_blocks * binom.pmf(np.arange(block_len + 1), block_len, 0.5)
    return counts, expected


def grayscale_map(stream: SymbolStream, rows: int, cols: int) -> np.ndarray:
    """Reshape the head of an 8-bit stream into a rows x cols intensity map."""
    if stream.n != 8:
        raise ParameterError("grayscale map requires an 8-bit stream")
    if rows < 1 or cols < 1:
        raise ParameterError("rows and cols must both be >= 1")
    need = rows * cols
    if len(stream) < need:
        raise InsufficientDataError(
            f"need {need} symbols for a {rows}x{cols} map, got {len(stream)}"
        )
    return stream.symbols[:need].astype(np.uint8).reshape(rows, cols)


def write_pgm(path, image: np.ndarray) -> None:
    """Write a binary PGM (P5, maxval 255)."""
    image = np.asarray(image, dtype=np.uint8)
    if image.ndim != 2:
        raise ParameterError("image must be 2-D")
    rows, cols = image.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n{GRAYSCALE_MAX}\n".encode("ascii"))
        fh.write(image.tobytes())


def lag_pairs(stream: SymbolStream, lag: int) -> np.ndarray:
    """Exact (x_t, x_{t+lag}) pairs, shape (N-lag, 2)."""
    if lag < 1:
        raise ParameterError(f"lag must be >= 1, got {lag}")
    if len(stream) <= lag:
        raise InsufficientDataError(
            f"need more than {lag} symbols, got {len(stream)}"
        )
    x = stream.symbols.astype(np.int64)
    return np.stack([x[:-lag], x[lag:]], axis=1)


def difference_series(stream: SymbolStream) -> np.ndarray:
    """Exact successive differences x_{t+1} - x_t."""
    if len(stream) < 2:
        raise InsufficientDataError("need at least 2 symbols")
    return np.diff(stream.symbols.astype(np.int64))


def stats_report(stream: SymbolStream, block_len: int = 100) -> dict:
    """JSON-ready summary: entropy, symbol histogram, bit-block ones."""
    hist = SymbolHistogram.from_stream(stream)
    entropy = shannon_entropy(hist)
    bits = to_bits(stream)
    report: dict = {
        "schema_version": 1,
        "n_bits": stream.n,
        "symbol_count": int(len(stream)),
        "dropped_blocks": int(stream.dropped_blocks),
        "shannon_bits_per_symbol": entropy.shannon_bits_per_symbol,
        "shannon_bits_per_bit": entropy.shannon_bits_per_bit,
        "symbol_counts": hist.counts.tolist(),
    }
    if bits.size >= block_len:
        counts, expected = bit_block_ones(bits, block_len)
        report["bit_block_len"] = block_len
        report["bit_block_ones_counts"] = counts.tolist()
        report["bit_block_ones_expected"] = [float(e) for e in expected]
    else:
        report["bit_block_len"] = block_len
        report["bit_block_ones_counts"] = None
        report["bit_block_ones_expected"] = None
    return report


def chi_square_uniform(counts: np.ndarray) -> tuple[float, float]:
    """Chi-square statistic and p-value of counts against a uniform law."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise InsufficientDataError("empty histogram")
    expected = total / counts.size
    stat = float(((counts - expected) ** 2 / expected).sum())
    pvalue = float(chi2.sf(stat, counts.size - 1))
    return stat, pvalue


def write_pairs_csv(path, pairs: np.ndarray, header: str) -> None:
    np.savetxt(path, pairs, fmt="%d", delimiter=",", header=header, comments="")


def block_ones_chi_square(
    counts: np.ndarray, block_len: int = 100, min_expected: float = 5.0
) -> tuple[float, float]:
    """Chi-square of an ones-per-block histogram against Binomial(m, 1/2).

    Bins with expected count below min_expected are pooled from both tails
    inward, the usual validity fix for tail-light binomial references.
    """
    counts = np.asarray(counts, dtype=np.float64)
    if counts.size != block_len + 1:
        raise ParameterError("counts must cover {0..block_len}")
    n_blocks = counts.sum()
    if n_blocks <= 0:
        raise InsufficientDataError("no blocks")
    expected = n_blocks * binom.pmf(np.arange(block_len + 1), block_len, 0.5)

    # Pool tail bins until every pooled bin clears min_expected.
    lo = 0
    hi = block_len
    while lo < hi and expected[lo: hi + 1].size > 2:
        if expected[lo] < min_expected:
            expected[lo + 1] += expected[lo]
            counts_pool = counts[lo]
            counts = counts.copy()
            counts[lo + 1] += counts_pool
            lo += 1
        elif expected[hi] < min_expected:
            expected[hi - 1] += expected[hi]
            counts = counts.copy()
            counts[hi - 1] += counts[hi]
            hi -= 1
        else:
            break
    o = counts[lo: hi + 1]
    e = expected[lo: hi + 1]
    stat = float(((o - e) ** 2 / e).sum())
    pvalue = float(chi2.sf(stat, o.size - 1))
    return stat, pvalue
