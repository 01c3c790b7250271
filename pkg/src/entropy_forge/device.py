"""Phenomenological charge-trap telegraph-noise device simulator.

The junction is modelled as a continuous-time Markov chain over the number
of trapped electrons m in {0..M}.  Captures occur at rate (M-m) * lc and
releases at rate m * lr, where both lc and lr grow exponentially with the
bias current.  Each trapped electron lowers the output voltage by one
level step; the ideal staircase is optionally smoothed by a first-order
RC stage and sampled with additive Gaussian noise.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass, asdict, replace

import numpy as np
from scipy.signal import lfilter

from .errors import InsufficientDataError, ParameterError, RateOverflowError

_VTRC_MAGIC = b"VTRC"
_VTRC_VERSION = 1
_VTRC_HEADER = struct.Struct("<4sHHd")  # magic, version, reserved, dt

# Chunk length for sample-wise noise generation; fixed so that traces are
# reproducible independent of memory pressure.
_NOISE_CHUNK = 1 << 24


def effective_rate(base_rate: float, bias_current: float, bias_scale: float) -> float:
    """Event rate under bias: base_rate * exp(bias_current / bias_scale)."""
    if base_rate < 0:
        raise ParameterError(f"base_rate must be >= 0, got {base_rate}")
    if bias_scale <= 0:
        raise ParameterError(f"bias_scale must be > 0, got {bias_scale}")
    if base_rate == 0.0:
        return 0.0
    rate = base_rate * math.exp(bias_current / bias_scale)
    if not math.isfinite(rate):
        raise RateOverflowError(
            "effective rate overflows: "
            f"base_rate={base_rate}, bias_current={bias_current}, bias_scale={bias_scale}"
        )
    return rate


@dataclass(frozen=True)
class DeviceParams:
    """Full parameter set for one simulated capture.

    Rates are in events/s, voltages in volts, times in seconds.  The RC
    stage is skipped when rc_time_constant == 0.  The same seed always
    reproduces the same trace bit for bit.
    """

    max_trapped: int = 1
    capture_rate_base: float = 3906.25
    release_rate_base: float = 3906.25
    bias_current: float = 0.0
    bias_scale: float = 20e-9
    level_step: float = 1.0
    baseline: float = 0.0
    noise_sigma: float = 0.02
    rc_time_constant: float = 0.0
    sample_rate: float = 1e6
    duration: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if self.max_trapped < 1:
            raise ParameterError(f"max_trapped must be >= 1, got {self.max_trapped}")
        if self.capture_rate_base < 0 or self.release_rate_base < 0:
            raise ParameterError("base rates must be >= 0")
        if self.bias_scale <= 0:
            raise ParameterError("bias_scale must be > 0")
        if self.bias_current < 0:
            raise ParameterError("bias_current must be >= 0")
        if self.level_step <= 0:
            raise ParameterError("level_step must be > 0")
        if self.noise_sigma < 0:
            raise ParameterError("noise_sigma must be >= 0")
        if self.rc_time_constant < 0:
            raise ParameterError("rc_time_constant must be >= 0")
        if self.sample_rate <= 0:
            raise ParameterError("sample_rate must be > 0")
        if self.duration <= 0:
            raise ParameterError("duration must be > 0")
        if self.sample_count < 1:
            raise ParameterError(
                "sample_rate * duration must yield at least one sample"
            )
        # Raises RateOverflowError when the bias point is not representable.
        effective_rate(self.capture_rate_base, self.bias_current, self.bias_scale)
        effective_rate(self.release_rate_base, self.bias_current, self.bias_scale)

    @property
    def sample_count(self) -> int:
        return int(self.sample_rate * self.duration)

    @property
    def capture_rate(self) -> float:
        return effective_rate(self.capture_rate_base, self.bias_current, self.bias_scale)

    @property
    def release_rate(self) -> float:
        return effective_rate(self.release_rate_base, self.bias_current, self.bias_scale)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "DeviceParams":
        return cls(**d)

    def with_(self, **kwargs) -> "DeviceParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class VoltageTrace:
    """Uniformly sampled output-voltage series."""

    samples: np.ndarray
    dt: float
    meta: dict | None = None

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", samples)
        if self.dt <= 0:
            raise ParameterError(f"dt must be > 0, got {self.dt}")
        if samples.ndim != 1 or samples.size < 1:
            raise ParameterError("trace requires a 1-D array with at least one sample")
        if not np.all(np.isfinite(samples)):
            raise ParameterError("trace samples must all be finite")

    @property
    def sample_rate(self) -> float:
        return 1.0 / self.dt

    @property
    def duration(self) -> float:
        return self.samples.size * self.dt

    def __len__(self) -> int:
        return self.samples.size


def simulate_jumps(params: DeviceParams) -> tuple[np.ndarray, np.ndarray]:
    """Gillespie jump chain of the trap occupancy.

    Returns (event_times, occupancy_after_event) covering [0, duration).
    Occupancy starts at 0 (empty island).  For a single trap the state
    strictly alternates, so waiting times can be drawn in bulk; the
    general chain falls back to an explicit event loop.
    """
    rng = np.random.default_rng(params.seed)
    m_max = params.max_trapped
    lc = params.capture_rate
    lr = params.release_rate
    duration = params.duration

    if m_max == 1:
        if lc == 0.0:
            return np.empty(0), np.empty(0, dtype=np.int64)
        if lr == 0.0:
            # Single capture, then the trap is stuck.
            first = rng.exponential(1.0 / lc)
            if first < duration:
                return np.array([first]), np.array([1], dtype=np.int64)
            return np.empty(0), np.empty(0, dtype=np.int64)
        # Strict 0/1 alternation: bulk-draw exp(lc), exp(lr) waits.
        mean_rate = 2.0 / (1.0 / lc + 1.0 / lr)
        parts: list[np.ndarray] = []
        total_events = 0
        t = 0.0
        while t < duration:
            n_est = max(64, int(1.2 * (duration - t) * mean_rate))
            waits = np.empty(n_est)
            first_scale, second_scale = (
                (1.0 / lc, 1.0 / lr) if total_events % 2 == 0 else (1.0 / lr, 1.0 / lc)
            )
            waits[0::2] = rng.exponential(first_scale, size=(n_est + 1) // 2)
            waits[1::2] = rng.exponential(second_scale, size=n_est // 2)
            chunk = t + np.cumsum(waits)
            stop = int(np.searchsorted(chunk, duration))
            parts.append(chunk[:stop])
            total_events += stop
            if stop < chunk.size:
                break
            t = chunk[-1]
        event_times = np.concatenate(parts) if parts else np.empty(0)
        occ = np.empty(event_times.size, dtype=np.int64)
        occ[0::2] = 1
        occ[1::2] = 0
        return event_times, occ

    times_list: list[float] = []
    occ_list: list[int] = []
    t = 0.0
    m = 0
    while True:
        rate_c = (m_max - m) * lc
        rate_r = m * lr
        total = rate_c + rate_r
        if total == 0.0:
            break
        t += rng.exponential(1.0 / total)
        if t >= duration:
            break
        if rng.random() * total < rate_c:
            m += 1
        else:
            m -= 1
        times_list.append(t)
        occ_list.append(m)
    return np.asarray(times_list), np.asarray(occ_list, dtype=np.int64)


def _occupancy_per_sample(event_times, occupancies, n_samples, dt):
    """Zero-order-hold occupancy at sample instants t_i = i * dt."""
    if event_times.size == 0:
        return np.zeros(n_samples, dtype=np.int64)
    # First sample index at/after each event.
    first_idx = np.ceil(event_times / dt).astype(np.int64)
    np.clip(first_idx, 0, n_samples, out=first_idx)
    boundaries = np.concatenate(([0], first_idx, [n_samples]))
    counts = np.diff(boundaries)
    levels = np.concatenate(([0], occupancies))
    return np.repeat(levels, counts)


def simulate_trace(params: DeviceParams) -> VoltageTrace:
    """Simulate one device capture and sample it at params.sample_rate."""
    n = params.sample_count
    dt = 1.0 / params.sample_rate
    event_times, occupancies = simulate_jumps(params)
    occ = _occupancy_per_sample(event_times, occupancies, n, dt)
    v = params.baseline - params.level_step * occ.astype(np.float64)

    if params.rc_time_constant > 0.0:
        alpha = 1.0 - math.exp(-dt / params.rc_time_constant)
        # One-pole low pass started from the first ideal level (no turn-on
        # transient).
        zi = np.array([(1.0 - alpha) * v[0]])
        v, _ = lfilter([alpha], [1.0, -(1.0 - alpha)], v, zi=zi)

    if params.noise_sigma > 0.0:
        rng = np.random.default_rng((params.seed, 0x6E6F6973))
        for start in range(0, n, _NOISE_CHUNK):
            stop = min(start + _NOISE_CHUNK, n)
            v[start:stop] += params.noise_sigma * rng.standard_normal(stop - start)

    return VoltageTrace(samples=v, dt=dt, meta=params.to_dict())


def edge_frequency(trace: VoltageTrace, threshold: float) -> float:
    """Rate of sample-to-sample level changes larger than threshold."""
    if threshold <= 0:
        raise ParameterError(f"threshold must be > 0, got {threshold}")
    if len(trace) < 2:
        raise InsufficientDataError("edge_frequency needs at least 2 samples")
    jumps = np.abs(np.diff(trace.samples)) > threshold
    return float(np.count_nonzero(jumps) / trace.duration)


def write_trace(path, trace: VoltageTrace) -> None:
    """Write a trace file: 16-byte header then little-endian f64 samples."""
    with open(path, "wb") as fh:
        fh.write(_VTRC_HEADER.pack(_VTRC_MAGIC, _VTRC_VERSION, 0, trace.dt))
        fh.write(trace.samples.astype("<f8", copy=False).tobytes())
    meta = trace.meta if trace.meta is not None else {"source": "import"}
    with open(str(path) + ".json", "w") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_trace(path) -> VoltageTrace:
    with open(path, "rb") as fh:
        header = fh.read(_VTRC_HEADER.size)
        if len(header) != _VTRC_HEADER.size:
            raise ParameterError(f"{path}: truncated trace header")
        magic, version, _reserved, dt = _VTRC_HEADER.unpack(header)
        if magic != _VTRC_MAGIC:
            raise ParameterError(f"{path}: bad magic {magic!r}")
        if version != _VTRC_VERSION:
            raise ParameterError(f"{path}: unsupported version {version}")
        samples = np.frombuffer(fh.read(), dtype="<f8")
    meta = None
    try:
        with open(str(path) + ".json") as fh:
            meta = json.load(fh)
    except FileNotFoundError:
        pass
    return VoltageTrace(samples=samples.copy(), dt=dt, meta=meta)
