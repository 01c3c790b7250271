"""Restart tests: entropy stability across independent source restarts."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from ..errors import ParameterError
from . import conformance
from .estimators import McvEstimate, mcv_estimate
from .types import Dataset


@dataclass(frozen=True)
class RestartMatrix:
    """r restarts by c samples-per-restart, one restart per row."""

    data: np.ndarray
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= 16:
            raise ParameterError(f"n must be in [1, 16], got {self.n}")
        dtype = np.uint8 if self.n <= 8 else np.uint16
        data = np.ascontiguousarray(self.data, dtype=dtype)
        object.__setattr__(self, "data", data)
        if data.ndim != 2:
            raise ParameterError("restart data must be a 2-D matrix")
        if data.size and int(data.max()) >= (1 << self.n):
            raise ParameterError(f"sample values must be < 2**{self.n}")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def conformant_dims(self) -> bool:
        return (
            self.rows == conformance.RESTART_DIM_CONFORMANT
            and self.cols == conformance.RESTART_DIM_CONFORMANT
        )


@dataclass(frozen=True)
class RestartOutcome:
    sanity_passed: bool
    row_cutoff: int
    col_cutoff: int
    max_row_count: int
    max_col_count: int
    rows_estimate: McvEstimate
    cols_estimate: McvEstimate
    alpha_per_line: float


def _max_value_count_per_line(lines: np.ndarray, alphabet: int) -> int:
    """Maximum occurrence count of any single value within any one line."""
    n_lines, line_len = lines.shape
    offsets = (np.arange(n_lines, dtype=np.int64) * alphabet)[:, None]
    flat = (lines.astype(np.int64) + offsets).ravel()
    counts = np.bincount(flat, minlength=n_lines * alphabet)
    return int(counts.max())


def sanity_cutoff(line_len: int, p: float, alpha: float) -> int:
    """Smallest count whose exceedance probability is below alpha."""
    return int(binom.ppf(1.0 - alpha, line_len, p))


def restart_tests(matrix: RestartMatrix, h_claim: float) -> RestartOutcome:
    """Sanity check plus row/column entropy estimates.

    The sanity check fails when any symbol occurs in a single row or
    column more often than a Binomial(line length, 2**-h_claim) model
    allows at the pinned per-line false-positive rate.
    """
    if h_claim <= 0:
        raise ParameterError(f"h_claim must be > 0, got {h_claim}")
    if matrix.data.size == 0:
        raise ParameterError("restart matrix is empty")
    p = 2.0 ** (-h_claim)
    alpha = conformance.RESTART_SANITY_FAMILY_ALPHA / (matrix.rows + matrix.cols)
    row_cutoff = sanity_cutoff(matrix.cols, p, alpha)
    col_cutoff = sanity_cutoff(matrix.rows, p, alpha)

    max_row = _max_value_count_per_line(matrix.data, 1 << matrix.n)
    max_col = _max_value_count_per_line(
        np.ascontiguousarray(matrix.data.T), 1 << matrix.n
    )
    sanity = max_row <= row_cutoff and max_col <= col_cutoff

    rows_est = mcv_estimate(Dataset(samples=matrix.data.ravel(), n=matrix.n))
    cols_est = mcv_estimate(Dataset(samples=matrix.data.T.ravel(), n=matrix.n))
    return RestartOutcome(
        sanity_passed=bool(sanity),
        row_cutoff=row_cutoff,
        col_cutoff=col_cutoff,
        max_row_count=max_row,
        max_col_count=max_col,
        rows_estimate=rows_est,
        cols_estimate=cols_est,
        alpha_per_line=alpha,
    )


def write_matrix(path, matrix: RestartMatrix) -> None:
    """Row-major binary matrix with a JSON sidecar {rows, cols, n}."""
    if matrix.n <= 8:
        payload = matrix.data.astype(np.uint8).tobytes()
    else:
        payload = matrix.data.astype("<u2").tobytes()
    with open(path, "wb") as fh:
        fh.write(payload)
    sidecar = {"rows": matrix.rows, "cols": matrix.cols, "n": matrix.n}
    with open(str(path) + ".json", "w") as fh:
        json.dump(sidecar, fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_matrix(path) -> RestartMatrix:
    try:
        with open(str(path) + ".json") as fh:
            sidecar = json.load(fh)
    except FileNotFoundError as exc:
        raise ParameterError(f"{path}: restart matrix requires a JSON sidecar") from exc
    rows = int(sidecar["rows"])
    cols = int(sidecar["cols"])
    n = int(sidecar["n"])
    dtype = "u1" if n <= 8 else "<u2"
    with open(path, "rb") as fh:
        data = np.frombuffer(fh.read(), dtype=dtype)
    if data.size != rows * cols:
        raise ParameterError(
            f"{path}: expected {rows * cols} samples, found {data.size}"
        )
    return RestartMatrix(data=data.reshape(rows, cols).copy(), n=n)
