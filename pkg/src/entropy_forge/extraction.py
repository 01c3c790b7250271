"""Time-bin symbol extraction from a voltage trace.

The chain is: one-pole high-pass (DC removal) -> threshold edge detection
with a dead time -> time-bin indexing inside repeating blocks of 2**n
bins.  A block containing exactly one detected edge emits the index of
the bin holding it; empty blocks emit nothing; blocks with two or more
edges are discarded and counted.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .device import VoltageTrace
from .errors import InsufficientDataError, ParameterError

# Fraction of a bin by which an event time may undershoot a bin boundary
# and still be snapped up; absorbs float rounding of times that sit
# exactly on the sample grid.
_BIN_SNAP = 1e-9

DEFAULT_DEAD_TIME_SAMPLES = 4
DEFAULT_CUTOFF_FRACTION = 0.25  # of the sample rate
DEFAULT_THRESHOLD_SIGMAS = 4.0
DEFAULT_NOISE_HEAD = 50_000  # samples used to estimate the noise floor


@dataclass(frozen=True)
class EventTrain:
    """Detected edge times (strictly increasing) and polarities (+1/-1)."""

    times: np.ndarray
    polarities: np.ndarray
    source_dt: float

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        pol = np.asarray(self.polarities, dtype=np.int8)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "polarities", pol)
        if times.shape != pol.shape or times.ndim != 1:
            raise ParameterError("times and polarities must be 1-D and same length")
        if self.source_dt <= 0:
            raise ParameterError("source_dt must be > 0")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ParameterError("event times must be strictly increasing")

    def __len__(self) -> int:
        return self.times.size


@dataclass(frozen=True)
class SymbolStream:
    """n-bit time-bin indices, the raw random output."""

    n: int
    symbols: np.ndarray
    dropped_blocks: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= 16:
            raise ParameterError(f"n must be in [1, 16], got {self.n}")
        symbols = np.asarray(self.symbols, dtype=np.uint16)
        object.__setattr__(self, "symbols", symbols)
        if symbols.ndim != 1:
            raise ParameterError("symbols must be 1-D")
        if symbols.size and int(symbols.max()) >= (1 << self.n):
            raise ParameterError(f"symbol values must be < 2**{self.n}")
        if self.dropped_blocks < 0:
            raise ParameterError("dropped_blocks must be >= 0")

    @property
    def alphabet_size(self) -> int:
        return 1 << self.n

    def __len__(self) -> int:
        return self.symbols.size


def highpass(trace: VoltageTrace, cutoff: float) -> VoltageTrace:
    """One-pole high-pass filter; removes DC bias before edge detection."""
    fs = trace.sample_rate
    if not 0 < cutoff < fs / 2:
        raise ParameterError(
            f"cutoff must be in (0, fs/2) = (0, {fs / 2}), got {cutoff}"
        )
    tau = 1.0 / (2.0 * math.pi * cutoff)
    a = tau / (tau + trace.dt)
    x = trace.samples
    # y[i] = a * (y[i-1] + x[i] - x[i-1]); start from rest at x[0].
    zi = np.array([-a * x[0]])
    y, _ = lfilter([a, -a], [1.0, -a], x, zi=zi)
    return VoltageTrace(samples=y, dt=trace.dt, meta=trace.meta)


def estimate_threshold(
    trace: VoltageTrace,
    sigmas: float = DEFAULT_THRESHOLD_SIGMAS,
    head: int = DEFAULT_NOISE_HEAD,
) -> float:
    """Detection threshold from the filtered noise floor.

    Uses a MAD estimate over the head segment so occasional edges in the
    head do not inflate the result.
    """
    if head < 2:
        raise ParameterError("head must be >= 2 samples")
    seg = trace.samples[: min(head, len(trace))]
    mad = float(np.median(np.abs(seg - np.median(seg))))
    sigma = 1.4826 * mad
    if sigma == 0.0:
        # Noiseless trace: fall back to a fraction of the signal swing.
        swing = float(seg.max() - seg.min())
        if swing == 0.0:
            raise InsufficientDataError(
                "cannot estimate a threshold from a constant head segment"
            )
        return 0.5 * swing
    return sigmas * sigma


def detect_edges(
    trace: VoltageTrace, threshold: float, dead_time: float | None = None
) -> EventTrain:
    """Threshold the (already filtered) trace into an event train.

    Emits an event at the first sample whose magnitude reaches the
    threshold; further candidates within dead_time of the last emitted
    event are suppressed.
    """
    if threshold <= 0:
        raise ParameterError(f"threshold must be > 0, got {threshold}")
    if dead_time is None:
        dead_time = DEFAULT_DEAD_TIME_SAMPLES * trace.dt
    if dead_time < 0:
        raise ParameterError(f"dead_time must be >= 0, got {dead_time}")

    x = trace.samples
    candidates = np.flatnonzero(np.abs(x) >= threshold)
    dead_samples = dead_time / trace.dt
    kept: list[int] = []
    last = -math.inf
    for idx in candidates.tolist():
        if idx - last >= dead_samples:
            kept.append(idx)
            last = idx
    kept_idx = np.asarray(kept, dtype=np.int64)
    times = kept_idx * trace.dt
    polarities = np.where(x[kept_idx] > 0, 1, -1).astype(np.int8)
    return EventTrain(times=times, polarities=polarities, source_dt=trace.dt)


def symbolize(events: EventTrain, bin_width: float, n: int) -> SymbolStream:
    """Map event times to bin indices inside repeating 2**n-bin blocks."""
    if bin_width <= 0:
        raise ParameterError(f"bin_width must be > 0, got {bin_width}")
    if not 1 <= n <= 16:
        raise ParameterError(f"n must be in [1, 16], got {n}")
    k = 1 << n
    if len(events) == 0:
        return SymbolStream(n=n, symbols=np.empty(0, dtype=np.uint16), dropped_blocks=0)

    q = events.times / bin_width
    bins_abs = np.floor(q).astype(np.int64)
    # Snap up values that fall a hair short of a bin boundary.
    snap = (q - bins_abs) > (1.0 - _BIN_SNAP)
    bins_abs[snap] += 1
    blocks = bins_abs // k
    bins = bins_abs - blocks * k

    # Count events per block; keep only single-event blocks.
    uniq_blocks, first_pos, counts = np.unique(
        blocks, return_index=True, return_counts=True
    )
    single = counts == 1
    symbols = bins[first_pos[single]].astype(np.uint16)
    dropped = int(np.count_nonzero(~single))
    return SymbolStream(n=n, symbols=symbols, dropped_blocks=dropped)


def to_bits(stream: SymbolStream) -> np.ndarray:
    """Expand symbols to bits, most-significant bit first."""
    if len(stream) == 0:
        return np.empty(0, dtype=np.uint8)
    shifts = np.arange(stream.n - 1, -1, -1, dtype=np.uint16)
    bits = (stream.symbols[:, None] >> shifts[None, :]) & 1
    return bits.astype(np.uint8).ravel()


def bits_to_symbols(bits: np.ndarray, n: int) -> np.ndarray:
    """Regroup a bit sequence into n-bit words (MSB first).

    Trailing bits that do not fill a word are discarded.
    """
    if not 1 <= n <= 16:
        raise ParameterError(f"n must be in [1, 16], got {n}")
    bits = np.asarray(bits, dtype=np.uint16)
    count = bits.size // n
    if count == 0:
        return np.empty(0, dtype=np.uint16)
    words = bits[: count * n].reshape(count, n)
    weights = (1 << np.arange(n - 1, -1, -1, dtype=np.uint16)).astype(np.uint16)
    return (words * weights).sum(axis=1).astype(np.uint16)


def write_stream(path, stream: SymbolStream) -> None:
    """Write a symbol stream: raw bytes for n=8, packed bits otherwise.

    A JSON sidecar <path>.json records {n, count, dropped_blocks}.
    """
    if stream.n == 8:
        payload = stream.symbols.astype(np.uint8).tobytes()
    else:
        bits = to_bits(stream)
        payload = np.packbits(bits).tobytes()
    with open(path, "wb") as fh:
        fh.write(payload)
    sidecar = {
        "n": stream.n,
        "count": int(len(stream)),
        "dropped_blocks": int(stream.dropped_blocks),
    }
    with open(str(path) + ".json", "w") as fh:
        json.dump(sidecar, fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_stream(path) -> SymbolStream:
    """Read a symbol stream file; without a sidecar, assumes n=8 bytes."""
    try:
        with open(str(path) + ".json") as fh:
            sidecar = json.load(fh)
    except FileNotFoundError:
        sidecar = None
    with open(path, "rb") as fh:
        payload = fh.read()
    if sidecar is None or sidecar.get("n") == 8:
        symbols = np.frombuffer(payload, dtype=np.uint8).astype(np.uint16)
        dropped = 0 if sidecar is None else int(sidecar["dropped_blocks"])
        return SymbolStream(n=8, symbols=symbols, dropped_blocks=dropped)
    n = int(sidecar["n"])
    count = int(sidecar["count"])
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8))
    if bits.size < count * n:
        raise ParameterError(f"{path}: payload shorter than sidecar count")
    symbols = bits_to_symbols(bits[: count * n], n)
    return SymbolStream(
        n=n, symbols=symbols, dropped_blocks=int(sidecar["dropped_blocks"])
    )
