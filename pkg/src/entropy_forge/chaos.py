"""Hidden-determinism diagnostics for symbol streams.

Uses time-delay embedding with the Chebyshev (max-coordinate) metric:
correlation integrals, the correlation dimension extracted from their
power-law growth, an order-2 dynamical entropy estimate from ratios of
correlation sums at successive embedding dimensions, and recurrence
index pairs.  A Lorenz-63 integrator provides the finite-entropy,
low-dimensional reference signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InsufficientDataError,
    IntegrationError,
    ParameterError,
    ScalingRegionError,
)

_CHUNK_ROWS = 256
SLOPE_TOLERANCE = 0.20  # relative spread allowed inside a scaling region
MIN_REGION_SLOPES = 3   # local slopes; a region spans at least 4 grid points

LORENZ_SIGMA = 10.0
LORENZ_RHO = 28.0
LORENZ_BETA = 8.0 / 3.0
LORENZ_DEFAULT_TRANSIENT = 1000


@dataclass(frozen=True)
class EmbeddedSeries:
    """Delay-embedded, min-max normalized trajectory."""

    points: np.ndarray
    d: int
    lag: int

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64)
        object.__setattr__(self, "points", points)
        if points.ndim != 2 or points.shape[1] != self.d:
            raise ParameterError("points must have shape (P, d)")
        if self.d < 1 or self.lag < 1:
            raise ParameterError("d and lag must both be >= 1")

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class K2Curve:
    """Entropy estimates per distance threshold (thresholds descending)."""

    epsilons: np.ndarray
    k2_values: np.ndarray
    unit: str = "nats/step"

    def __post_init__(self):
        eps = np.asarray(self.epsilons, dtype=np.float64)
        vals = np.asarray(self.k2_values, dtype=np.float64)
        object.__setattr__(self, "epsilons", eps)
        object.__setattr__(self, "k2_values", vals)
        if eps.shape != vals.shape:
            raise ParameterError("epsilons and k2_values must match in length")
        if np.any(eps <= 0):
            raise ParameterError("epsilons must be > 0")


@dataclass(frozen=True)
class CorrDimCurve:
    dims: np.ndarray
    nus: np.ndarray
    fit_ranges: list[tuple[float, float]]


def embed(series: np.ndarray, d: int, lag: int) -> EmbeddedSeries:
    """Min-max normalize to [0, 1], then form d-tuples at the given lag."""
    s = np.asarray(series, dtype=np.float64)
    if s.ndim != 1:
        raise ParameterError("series must be 1-D")
    if d < 1 or lag < 1:
        raise ParameterError("d and lag must both be >= 1")
    n = s.size
    if n <= (d - 1) * lag:
        raise InsufficientDataError(
            f"series of length {n} too short for d={d}, lag={lag}"
        )
    lo = s.min()
    hi = s.max()
    s = np.zeros_like(s) if hi == lo else (s - lo) / (hi - lo)
    count = n - (d - 1) * lag
    points = np.empty((count, d))
    for j in range(d):
        points[:, j] = s[j * lag: j * lag + count]
    return EmbeddedSeries(points=points, d=d, lag=lag)


def _pair_counts(points: np.ndarray, eps_ascending: np.ndarray, theiler: int):
    """#{i<j, j-i > theiler : chebyshev(p_i, p_j) <= eps} per threshold.

    Returns (counts per eps, total valid pair count).  Exact: identical
    float comparisons to a direct O(P^2) enumeration.
    """
    p_count, dims = points.shape
    counts = np.zeros(eps_ascending.size, dtype=np.int64)
    total_pairs = 0
    for start in range(0, p_count, _CHUNK_ROWS):
        stop = min(start + _CHUNK_ROWS, p_count)
        block = points[start:stop]
        # Running max over coordinates keeps peak memory at one (c, P) array.
        dist = np.abs(block[:, 0][:, None] - points[:, 0][None, :])
        for dim in range(1, dims):
            np.maximum(
                dist,
                np.abs(block[:, dim][:, None] - points[:, dim][None, :]),
                out=dist,
            )
        i_idx = np.arange(start, stop)[:, None]
        j_idx = np.arange(p_count)[None, :]
        valid = j_idx > (i_idx + theiler)
        flat = dist[valid]
        total_pairs += flat.size
        if flat.size:
            first_ge = np.searchsorted(eps_ascending, flat, side="left")
            bc = np.bincount(first_ge, minlength=eps_ascending.size + 1)
            counts += np.cumsum(bc[:-1])
    return counts, total_pairs


def correlation_integral(emb: EmbeddedSeries, radius: float, theiler: int = 0) -> float:
    """Mean probability for two trajectory points to be within radius."""
    if radius <= 0:
        raise ParameterError(f"radius must be > 0, got {radius}")
    if theiler < 0:
        raise ParameterError("theiler must be >= 0")
    p_count = len(emb)
    if p_count < 2:
        raise InsufficientDataError("need at least 2 embedded points")
    counts, total = _pair_counts(emb.points, np.array([radius]), theiler)
    if total < 1:
        raise InsufficientDataError("fewer than 2 usable ordered pairs")
    return float(2.0 * counts[0] / (p_count * (p_count - 1)))


def correlation_integral_curve(
    emb: EmbeddedSeries, radii: np.ndarray, theiler: int = 0
) -> np.ndarray:
    """Correlation integral evaluated on an ascending radius grid."""
    radii = np.asarray(radii, dtype=np.float64)
    if np.any(radii <= 0):
        raise ParameterError("radii must be > 0")
    if np.any(np.diff(radii) <= 0):
        raise ParameterError("radii must be strictly increasing")
    p_count = len(emb)
    if p_count < 2:
        raise InsufficientDataError("need at least 2 embedded points")
    counts, total = _pair_counts(emb.points, radii, theiler)
    if total < 1:
        raise InsufficientDataError("fewer than 2 usable ordered pairs")
    return 2.0 * counts / (p_count * (p_count - 1))


def _longest_stable_window(slopes: np.ndarray) -> tuple[int, int] | None:
    """Longest contiguous slope window with relative spread < tolerance."""
    n = slopes.size
    best = None
    best_len = 0
    for i in range(n):
        if not np.isfinite(slopes[i]):
            continue
        for j in range(i + MIN_REGION_SLOPES - 1, n):
            window = slopes[i: j + 1]
            if not np.all(np.isfinite(window)):
                break
            mean = window.mean()
            if mean <= 0:
                break
            if (window.max() - window.min()) > SLOPE_TOLERANCE * mean:
                break
            if j - i + 1 > best_len:
                best_len = j - i + 1
                best = (i, j)
    return best


def correlation_dimension(
    emb: EmbeddedSeries, r_grid: np.ndarray, theiler: int = 0
) -> tuple[float, tuple[float, float]]:
    """Power-law exponent of the correlation integral.

    The scaling region is chosen automatically: the longest contiguous
    stretch of the grid whose local log-log slopes stay within 20% of
    each other.  Grid points where CI saturates (0 or 1) are excluded.
    """
    r = np.asarray(r_grid, dtype=np.float64)
    if r.size < 10:
        raise ParameterError("r_grid needs at least 10 values")
    ci = correlation_integral_curve(emb, r, theiler)
    if ci[0] >= 1.0:
        # Every pair already inside the smallest radius: dimension zero.
        return 0.0, (float(r[0]), float(r[-1]))

    usable = (ci > 0.0) & (ci < 1.0)
    log_r = np.log(r)
    log_ci = np.where(usable, np.log(np.where(usable, ci, 1.0)), np.nan)
    slopes = np.full(r.size - 1, np.nan)
    for i in range(r.size - 1):
        if usable[i] and usable[i + 1]:
            slopes[i] = (log_ci[i + 1] - log_ci[i]) / (log_r[i + 1] - log_r[i])

    window = _longest_stable_window(slopes)
    if window is None:
        raise ScalingRegionError(
            "no scaling region with stable local slopes",
            diagnostics={
                "r_grid": r.tolist(),
                "ci": ci.tolist(),
                "local_slopes": slopes.tolist(),
            },
        )
    i, j = window
    sel = slice(i, j + 2)  # slopes i..j span grid points i..j+1
    coeffs = np.polyfit(log_r[sel], log_ci[sel], 1)
    nu = float(coeffs[0])
    return nu, (float(r[i]), float(r[j + 1]))


def correlation_dimension_curve(
    series: np.ndarray,
    dims: range | list[int],
    r_grid: np.ndarray,
    lag: int = 1,
    theiler: int = 0,
) -> CorrDimCurve:
    """Correlation dimension as a function of embedding dimension."""
    nus = []
    ranges = []
    dims_arr = np.asarray(list(dims), dtype=np.int64)
    for d in dims_arr:
        nu, fit_range = correlation_dimension(
            embed(series, int(d), lag), r_grid, theiler
        )
        nus.append(nu)
        ranges.append(fit_range)
    return CorrDimCurve(dims=dims_arr, nus=np.asarray(nus), fit_ranges=ranges)


def k2_estimate(
    series: np.ndarray,
    d_range: range | list[int],
    eps_grid: np.ndarray,
    lag: int = 1,
    theiler: int = 0,
) -> K2Curve:
    """Order-2 entropy from correlation-sum ratios.

    K2(eps) = (1/lag) * mean over d of ln[CI_d(eps) / CI_{d+1}(eps)],
    in nats per step.  Thresholds where either correlation integral
    vanishes are reported as NaN rather than failing the whole curve.
    """
    dims = list(d_range)
    if len(dims) < 2 or any(b - a != 1 for a, b in zip(dims, dims[1:])):
        raise ParameterError("d_range must be contiguous with at least 2 dims")
    eps = np.asarray(eps_grid, dtype=np.float64)
    if eps.size < 2 or np.any(np.diff(eps) >= 0):
        raise ParameterError("eps_grid must be strictly descending")
    eps_asc = eps[::-1].copy()

    ci_by_dim = {}
    for d in dims + [dims[-1] + 1]:
        ci_by_dim[d] = correlation_integral_curve(embed(series, d, lag), eps_asc, theiler)

    ratios = np.full((len(dims), eps_asc.size), np.nan)
    for row, d in enumerate(dims):
        num = ci_by_dim[d]
        den = ci_by_dim[d + 1]
        ok = (num > 0) & (den > 0)
        ratios[row, ok] = np.log(num[ok] / den[ok])
    k2_asc = np.nanmean(ratios, axis=0) / lag
    # Any dim with a vanished CI leaves NaN via nanmean only if all rows
    # are NaN; mark eps unusable when no ratio was computable.
    all_nan = np.all(np.isnan(ratios), axis=0)
    k2_asc[all_nan] = np.nan
    return K2Curve(epsilons=eps, k2_values=k2_asc[::-1].copy())


def recurrence_matrix(emb: EmbeddedSeries, eps: float) -> np.ndarray:
    """Index pairs (i, j) with chebyshev distance <= eps.

    Symmetric and including the diagonal; returned as an (M, 2) array
    sorted lexicographically.
    """
    if eps <= 0:
        raise ParameterError(f"eps must be > 0, got {eps}")
    points = emb.points
    p_count = len(emb)
    pairs = [np.stack([np.arange(p_count)] * 2, axis=1)]  # diagonal
    for start in range(0, p_count, _CHUNK_ROWS):
        stop = min(start + _CHUNK_ROWS, p_count)
        block = points[start:stop]
        dist = np.abs(block[:, 0][:, None] - points[:, 0][None, :])
        for dim in range(1, points.shape[1]):
            np.maximum(
                dist,
                np.abs(block[:, dim][:, None] - points[:, dim][None, :]),
                out=dist,
            )
        i_rel, j = np.nonzero(
            (dist <= eps)
            & (np.arange(p_count)[None, :] > np.arange(start, stop)[:, None])
        )
        if i_rel.size:
            upper = np.stack([i_rel + start, j], axis=1)
            pairs.append(upper)
            pairs.append(upper[:, ::-1])
    out = np.concatenate(pairs, axis=0)
    order = np.lexsort((out[:, 1], out[:, 0]))
    return out[order]


def lorenz_series(
    steps: int,
    dt: float = 0.01,
    initial: tuple[float, float, float] = (1.0, 1.0, 1.0),
    transient: int = LORENZ_DEFAULT_TRANSIENT,
) -> np.ndarray:
    """x-component of a Lorenz-63 trajectory via fixed-step RK4.

    Classic parameters (sigma=10, rho=28, beta=8/3); the first
    ``transient`` steps are integrated but discarded.
    """
    if steps < 1:
        raise ParameterError(f"steps must be >= 1, got {steps}")
    if not 0 < dt <= 0.05:
        raise ParameterError(f"dt must be in (0, 0.05], got {dt}")
    if transient < 0:
        raise ParameterError("transient must be >= 0")

    def deriv(x, y, z):
        return (
            LORENZ_SIGMA * (y - x),
            x * (LORENZ_RHO - z) - y,
            x * y - LORENZ_BETA * z,
        )

    x, y, z = (float(v) for v in initial)
    out = np.empty(steps)
    for i in range(transient + steps):
        k1 = deriv(x, y, z)
        k2 = deriv(x + 0.5 * dt * k1[0], y + 0.5 * dt * k1[1], z + 0.5 * dt * k1[2])
        k3 = deriv(x + 0.5 * dt * k2[0], y + 0.5 * dt * k2[1], z + 0.5 * dt * k2[2])
        k4 = deriv(x + dt * k3[0], y + dt * k3[1], z + dt * k3[2])
        x += dt * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]) / 6.0
        y += dt * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]) / 6.0
        z += dt * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]) / 6.0
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            raise IntegrationError(f"non-finite state at step {i}")
        if i >= transient:
            out[i - transient] = x
    return out
