"""Pinned constants for the entropy-assessment pipeline.

Every value here is documented in docs/sp800-90b-conformance.md and
asserted by tests/test_conformance.py.  Changing one is a conformance
decision, not a refactor.
"""

from __future__ import annotations

# Sequential dataset floor for a standard assessment; shorter datasets
# require desk-scale mode and are flagged non-conformant in reports.
SEQUENTIAL_FLOOR = 1_000_000

# Restart matrix dimensions for a standard assessment.
RESTART_DIM_CONFORMANT = 1000

# Permutation testing.
PERMUTATION_COUNT_DEFAULT = 10_000
PERMUTATION_COUNT_MIN = 100
EXTREME_RANK_CUTOFF_CONFORMANT = 5  # at 10,000 permutations
PERIODICITY_LAGS = (1, 2, 8, 16, 32)

# Compression statistic: bz2 at this level over the raw little-endian
# symbol bytes (1 byte/symbol for n <= 8, 2 bytes otherwise).  bz2 is a
# block-sorting compressor with deterministic output for a fixed level.
COMPRESSION_LEVEL = 9

# Chi-square battery.
CHI_SQUARE_SIGNIFICANCE = 0.001
GOF_SLICES = 10
MIN_EXPECTED_BIN = 5.0

# Most-common-value estimator: critical z value for the 99.5% one-sided
# upper confidence bound.
MCV_Z_CRITICAL = 2.576

# Restart sanity check: family-wise false-positive budget split evenly
# over every row and column line (0.01 / 2000 = 5e-6 at standard dims).
RESTART_SANITY_FAMILY_ALPHA = 0.01

# Continuous health tests.
HEALTH_ALPHA = 2.0 ** -20
ADAPTIVE_WINDOW_DEFAULT = 512


def extreme_rank_cutoff(n_perm: int) -> int:
    """Extreme-rank cutoff scaled to the permutation count.

    Equals 5 at the standard 10,000 permutations; desk-scale runs with
    fewer permutations shrink it proportionally (floor), keeping the
    per-statistic false-positive rate at or below the standard's.
    """
    return (EXTREME_RANK_CUTOFF_CONFORMANT * n_perm) // PERMUTATION_COUNT_DEFAULT
