"""Full assessment pipeline: IID battery, entropy stages, restart tests."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParameterError
from ..utils import canonical_json_bytes
from . import conformance
from .chisquare import ChiSquareOutcome, chi_square_tests
from .estimators import sequential_entropy
from .permutation import PermutationTestOutcome, permutation_test_suite, suite_passed
from .restart import RestartMatrix, RestartOutcome, restart_tests
from .types import Dataset

REPORT_SCHEMA_VERSION = 1

STATUS_COMPLETE = "complete"
STATUS_NON_IID = "incomplete: non-IID, estimation requires the non-IID track"
STATUS_RESTART_FAILED = "failed: restart sanity check"


@dataclass(frozen=True)
class AssessmentReport:
    schema_version: int
    sample_count: int
    n_bits: int
    seed: int
    n_perm: int
    desk_scale: bool
    conformance_flags: dict
    permutation_outcomes: list[PermutationTestOutcome]
    chi_square_outcomes: list[ChiSquareOutcome]
    iid_verdict: bool
    h_symbol: float | None
    h_bitstring: float | None
    restart: RestartOutcome | None
    restart_dims: tuple[int, int] | None
    min_entropy: float | None
    status: str

    def to_dict(self) -> dict:
        perm = [
            {
                "statistic": o.statistic_name,
                "original_value": o.original_value,
                "counter_higher": o.counter_higher,
                "counter_equal": o.counter_equal,
                "passed": o.passed,
            }
            for o in self.permutation_outcomes
        ]
        chi = [
            {
                "name": o.name,
                "statistic": None if o.statistic != o.statistic else o.statistic,
                "threshold": None if o.threshold != o.threshold else o.threshold,
                "passed": o.passed,
                "detail": o.detail,
            }
            for o in self.chi_square_outcomes
        ]
        restart = None
        if self.restart is not None:
            restart = {
                "sanity_passed": self.restart.sanity_passed,
                "row_cutoff": self.restart.row_cutoff,
                "col_cutoff": self.restart.col_cutoff,
                "max_row_count": self.restart.max_row_count,
                "max_col_count": self.restart.max_col_count,
                "rows_h_min": self.restart.rows_estimate.h_min,
                "cols_h_min": self.restart.cols_estimate.h_min,
                "alpha_per_line": self.restart.alpha_per_line,
                "rows": self.restart_dims[0],
                "cols": self.restart_dims[1],
            }
        return {
            "schema_version": self.schema_version,
            "sample_count": self.sample_count,
            "n_bits": self.n_bits,
            "seed": self.seed,
            "n_perm": self.n_perm,
            "desk_scale": self.desk_scale,
            "conformance_flags": self.conformance_flags,
            "permutation_tests": perm,
            "chi_square_tests": chi,
            "iid_verdict": self.iid_verdict,
            "h_symbol_bits_per_symbol": self.h_symbol,
            "h_bitstring_bits_per_bit": self.h_bitstring,
            "restart": restart,
            "min_entropy_bits_per_symbol": self.min_entropy,
            "status": self.status,
        }

    def to_json_bytes(self) -> bytes:
        return canonical_json_bytes(self.to_dict())


def run_assessment(
    data: Dataset,
    restart: RestartMatrix | None = None,
    seed: int = 0,
    n_perm: int = conformance.PERMUTATION_COUNT_DEFAULT,
    desk_scale: bool = False,
    workers: int | None = None,
) -> AssessmentReport:
    """Assess a sequential dataset, optionally with a restart matrix.

    Entropy estimates are produced only when the IID battery passes; the
    non-IID estimator track is out of scope and reported as incomplete.
    """
    sequential_ok = len(data) >= conformance.SEQUENTIAL_FLOOR
    if not sequential_ok and not desk_scale:
        raise ParameterError(
            f"sequential dataset has {len(data)} samples "
            f"(< {conformance.SEQUENTIAL_FLOOR}); enable desk_scale to proceed"
        )
    restart_ok = None if restart is None else restart.conformant_dims
    if restart is not None and restart.n != data.n:
        raise ParameterError("restart matrix and dataset must share the symbol width")

    flags = {
        "sequential_size_conformant": sequential_ok,
        "n_perm_conformant": n_perm >= conformance.PERMUTATION_COUNT_DEFAULT,
        "restart_dims_conformant": restart_ok,
    }

    perm_outcomes = permutation_test_suite(data, n_perm=n_perm, seed=seed, workers=workers)
    chi_outcomes = chi_square_tests(data)
    iid = suite_passed(perm_outcomes) and all(o.passed for o in chi_outcomes)

    h_symbol = None
    h_bitstring = None
    min_entropy = None
    restart_outcome = None
    status = STATUS_NON_IID
    if iid:
        seq = sequential_entropy(data)
        h_symbol = seq.h_symbol
        h_bitstring = seq.h_bitstring
        min_entropy = seq.min_entropy
        status = STATUS_COMPLETE
        if restart is not None:
            restart_outcome = restart_tests(restart, h_claim=min_entropy)
            min_entropy = min(
                min_entropy,
                restart_outcome.rows_estimate.h_min,
                restart_outcome.cols_estimate.h_min,
            )
            if not restart_outcome.sanity_passed:
                status = STATUS_RESTART_FAILED

    return AssessmentReport(
        schema_version=REPORT_SCHEMA_VERSION,
        sample_count=len(data),
        n_bits=data.n,
        seed=seed,
        n_perm=n_perm,
        desk_scale=desk_scale,
        conformance_flags=flags,
        permutation_outcomes=perm_outcomes,
        chi_square_outcomes=chi_outcomes,
        iid_verdict=iid,
        h_symbol=h_symbol,
        h_bitstring=h_bitstring,
        restart=restart_outcome,
        restart_dims=None if restart is None else (restart.rows, restart.cols),
        min_entropy=min_entropy,
        status=status,
    )
