"""Constants for the polymer endpoint library."""

from __future__ import annotations

from typing import Final

# Domain
DOMAIN: Final = "polymer_endpoint"
SCHEMA_VERSION: Final = "1"
THREADS_ENV_VAR: Final = "POLYMER_ENDPOINT_THREADS"

# Quadrature defaults
DEFAULT_QUAD_N: Final = 80  # nodes per interval
DEFAULT_TOL: Final = 1e-10
DEFAULT_TRUNC_PAD: Final = 1.0  # in kernel argument units
DEFAULT_M_WINDOW: Final = (-8.0, 25.0)
DEFAULT_M_PANEL_WIDTH: Final = 1.0
DEFAULT_M_PANEL_NODES: Final = 12
DEFAULT_T_MAX: Final = 3.5
DEFAULT_T_PANEL_WIDTH: Final = 0.25
DEFAULT_T_PANEL_NODES: Final = 10
TRUNCATION_TOL: Final = 1e-16  # envelope ratio used for kernel domains
MAX_DOUBLINGS: Final = 1  # beyond the n -> 2n comparison

# Validation ranges
MIN_QUAD_N: Final = 20
MAX_QUAD_N: Final = 2000
MIN_GL_NODES: Final = 1
MAX_TOL: Final = 1e-2
MIN_TRUNC_PAD: Final = 0.0
MAX_TRUNC_PAD: Final = 20.0
MIN_T_MAX: Final = 3.0
MAX_GRID_COUNT: Final = 100_000

# Domain ranges of the distribution-level operations
JOINT_T_RANGE: Final = (-3.0, 3.0)
JOINT_M_RANGE: Final = (-6.0, 20.0)
TAIL_T_RANGE: Final = (0.0, 2.75)
TAIL_FLOOR: Final = 1e-14
SUP_T_RANGE: Final = (0.25, 3.0)
SUP_A_RANGE: Final = (-2.0, 10.0)
TWO_TIME_T_RANGE: Final = (0.5, 2.0)
TWO_TIME_S_RANGE: Final = (0.5, 2.0)
TWO_TIME_LEVEL_RANGE: Final = (0.0, 30.0)
MIN_TIME_GAP: Final = 0.05
MATRIX_ROUTE_MIN_BETA: Final = 3.0
DEFAULT_BETA: Final = 4.0
DEFAULT_ALPHAS: Final = (0.25, 0.5, 1.0, 2.0)

# Check rows of the two-time law
STATIONARITY_SHIFT: Final = 5.0
STATIONARITY_TOL: Final = 1e-8
MARGINAL_LEVEL: Final = 12.0  # first constraint is vacuous at this level
MARGINAL_TOL: Final = 1e-6

# Airy values at the origin
AI_ZERO: Final = 0.35502805388781723926
AIP_ZERO: Final = -0.25881940379280679840

# Golden determinant values, frozen from two Nystrom resolutions
GUE_AT_ZERO: Final = 0.969372828355
GOLDEN_TOL: Final = 1e-10
AIRY_MAX_ABS_ARG: Final = 200.0

# Figure statistics of the endpoint law
ENDPOINT_VARIANCE: Final = 0.2409
ENDPOINT_EXCESS_KURTOSIS: Final = -0.2374

# Tail envelopes
KAPPA_CRITICAL: Final = 32.0 / 3.0
DEFAULT_KAPPA: Final = 10.7
DEFAULT_C32: Final = 2.0
MAX_C32: Final = 4.0
ASYMPTOTIC_MIN_ARG: Final = 4.0
FIT_MIN_RECORDS: Final = 4
FIT_MIN_PROB: Final = 1e-13

# Last passage percolation
DEFAULT_Q: Final = 0.5
DEFAULT_N_STEPS: Final = 100
DEFAULT_SAMPLES: Final = 10_000
DEFAULT_SEED: Final = 0
LATTICE_SITE_BUDGET: Final = 1_000_000_000
SCALE_AUTO: Final = "auto"

# Output
CSV_DIGITS: Final = 12
JSON_DIGITS: Final = 17
FORMAT_CSV: Final = "csv"
FORMAT_JSON: Final = "json"

# Exit codes
EXIT_OK: Final = 0
EXIT_SELFTEST_FAILED: Final = 1
EXIT_USAGE: Final = 2
EXIT_NOT_CONVERGED: Final = 3

# Self-test levels
SELFTEST_QUICK: Final = "quick"
SELFTEST_FULL: Final = "full"

# Endpoint law tabulation
ENDPOINT_T_LIMIT: Final = 4.0
CDF_PANEL_WIDTH: Final = 0.1
CDF_PANEL_NODES: Final = 6
