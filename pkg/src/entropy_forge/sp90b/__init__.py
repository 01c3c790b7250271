"""Entropy-source assessment pipeline: IID battery, MCV estimation,
restart tests, and continuous health tests."""

from .assess import (
    STATUS_COMPLETE,
    STATUS_NON_IID,
    STATUS_RESTART_FAILED,
    AssessmentReport,
    run_assessment,
)
from .chisquare import (
    ChiSquareOutcome,
    chi_square_tests,
    longest_repeated_substring,
)
from .estimators import McvEstimate, mcv_estimate, min_entropy, sequential_entropy
from .health import (
    AdaptiveProportionTest,
    RepetitionCountTest,
    adaptive_proportion_health,
    repetition_count_health,
)
from .permutation import (
    STATISTIC_NAMES,
    PermutationTestOutcome,
    compute_statistics,
    permutation_test_suite,
    suite_passed,
)
from .restart import (
    RestartMatrix,
    RestartOutcome,
    read_matrix,
    restart_tests,
    write_matrix,
)
from .types import Dataset

__all__ = [
    "AssessmentReport",
    "AdaptiveProportionTest",
    "ChiSquareOutcome",
    "Dataset",
    "McvEstimate",
    "PermutationTestOutcome",
    "RepetitionCountTest",
    "RestartMatrix",
    "RestartOutcome",
    "STATISTIC_NAMES",
    "STATUS_COMPLETE",
    "STATUS_NON_IID",
    "STATUS_RESTART_FAILED",
    "adaptive_proportion_health",
    "chi_square_tests",
    "compute_statistics",
    "longest_repeated_substring",
    "mcv_estimate",
    "min_entropy",
    "permutation_test_suite",
    "read_matrix",
    "repetition_count_health",
    "restart_tests",
    "run_assessment",
    "sequential_entropy",
    "suite_passed",
    "write_matrix",
]
