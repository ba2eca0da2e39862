"""Validation functions and schemas for the polymer endpoint library.

Uses helpers for generic numeric checks, adds library-specific ranges.
"""

from __future__ import annotations

import logging
from typing import Any

import voluptuous as vol

from .const import (
    DEFAULT_M_PANEL_NODES,
    DEFAULT_M_PANEL_WIDTH,
    DEFAULT_M_WINDOW,
    DEFAULT_N_STEPS,
    DEFAULT_Q,
    DEFAULT_QUAD_N,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TOL,
    DEFAULT_TRUNC_PAD,
    ENDPOINT_VARIANCE,
    FORMAT_CSV,
    FORMAT_JSON,
    LATTICE_SITE_BUDGET,
    MAX_QUAD_N,
    MAX_TOL,
    MAX_TRUNC_PAD,
    MIN_QUAD_N,
    MIN_TRUNC_PAD,
    SCALE_AUTO,
    SELFTEST_FULL,
    SELFTEST_QUICK,
)
from .helpers.grid import parse_grid_string
from .helpers.numeric_validation import (
    validate_finite,
    validate_in_range,
    validate_interval,
)

_LOGGER = logging.getLogger(__name__)


def validate_tol(tol: float) -> bool:
    """Validate a convergence tolerance lies in (0, MAX_TOL].

    Args:
        tol: Tolerance to validate

    Returns:
        True if valid, False otherwise
    """
    return validate_in_range(tol, 0.0, MAX_TOL) and tol > 0.0


def validate_window(window: tuple[float, float]) -> bool:
    """Validate a marginalization window (lo, hi).

    Args:
        window: Window to validate

    Returns:
        True if lo < hi and both finite
    """
    return validate_interval(window[0], window[1])


def validate_budget(n_steps: int, samples: int) -> bool:
    """Validate an LPP run against the lattice-site budget.

    Args:
        n_steps: Path length N
        samples: Number of independent samples

    Returns:
        True if n_steps * samples is within budget
    """
    return n_steps * samples <= LATTICE_SITE_BUDGET


def validate_grid(spec: str) -> bool:
    """Validate a lo:hi:count grid string.

    Args:
        spec: Grid string

    Returns:
        True if the string parses, False otherwise
    """
    try:
        parse_grid_string(spec)
        return True
    except ValueError:
        return False


def _ordered_pair(value: Any) -> tuple[float, float]:
    pair = (float(value[0]), float(value[1]))
    if not validate_window(pair):
        raise vol.Invalid(f"window must satisfy lo < hi, got {pair}")
    return pair


def _grid_string(value: Any) -> str:
    text = str(value)
    if not validate_grid(text):
        raise vol.Invalid(f"invalid grid {text!r}, expected lo:hi:count")
    return text


def _finite(value: float) -> float:
    if not validate_finite(value):
        raise vol.Invalid(f"value must be finite, got {value}")
    return value


def _scale(value: Any) -> str | float:
    if value == SCALE_AUTO:
        return SCALE_AUTO
    try:
        scale = float(value)
    except (TypeError, ValueError) as err:
        raise vol.Invalid(
            f"scale must be 'auto' or a positive number: {value}"
        ) from err
    if not scale > 0.0:
        raise vol.Invalid(f"scale must be positive, got {scale}")
    return scale


POSITIVE_FLOAT = vol.All(vol.Coerce(float), vol.Range(min=0.0, min_included=False))
FINITE_FLOAT = vol.All(vol.Coerce(float), _finite)

# Schemas for library configuration
SCHEMA_NUMERICS = vol.Schema(
    {
        vol.Required("quad_n", default=DEFAULT_QUAD_N): vol.All(
            vol.Coerce(int),
            vol.Range(min=MIN_QUAD_N, max=MAX_QUAD_N),
        ),
        vol.Required("tol", default=DEFAULT_TOL): vol.All(
            vol.Coerce(float),
            vol.Range(min=0.0, max=MAX_TOL, min_included=False),
        ),
        vol.Required("trunc_pad", default=DEFAULT_TRUNC_PAD): vol.All(
            vol.Coerce(float),
            vol.Range(min=MIN_TRUNC_PAD, max=MAX_TRUNC_PAD),
        ),
        vol.Required("m_window", default=list(DEFAULT_M_WINDOW)): vol.All(
            vol.ExactSequence([vol.Coerce(float), vol.Coerce(float)]),
            _ordered_pair,
        ),
        vol.Required("m_panel_width", default=DEFAULT_M_PANEL_WIDTH): vol.All(
            vol.Coerce(float),
            vol.Range(min=0.05, max=10.0),
        ),
        vol.Required("m_panel_nodes", default=DEFAULT_M_PANEL_NODES): vol.All(
            vol.Coerce(int),
            vol.Range(min=4, max=64),
        ),
        vol.Optional("threads", default=None): vol.Any(
            None,
            vol.All(vol.Coerce(int), vol.Range(min=1, max=1024)),
        ),
    }
)

SCHEMA_LPP = vol.Schema(
    {
        vol.Required("n_steps", default=DEFAULT_N_STEPS): vol.All(
            vol.Coerce(int), vol.Range(min=1)
        ),
        vol.Required("q", default=DEFAULT_Q): vol.All(
            vol.Coerce(float),
            vol.Range(min=0.0, max=1.0, min_included=False, max_included=False),
        ),
        vol.Required("samples", default=DEFAULT_SAMPLES): vol.All(
            vol.Coerce(int), vol.Range(min=1)
        ),
        vol.Required("seed", default=DEFAULT_SEED): vol.All(
            vol.Coerce(int), vol.Range(min=0, max=2**64 - 1)
        ),
        vol.Required("scale", default=SCALE_AUTO): _scale,
        vol.Required("target_variance", default=ENDPOINT_VARIANCE): POSITIVE_FLOAT,
    }
)

# Schemas for command parameters
SCHEMA_OUTPUT = vol.Schema(
    {
        vol.Required("format", default=FORMAT_CSV): vol.In([FORMAT_CSV, FORMAT_JSON]),
        vol.Optional("out", default=None): vol.Any(None, str),
    },
    extra=vol.ALLOW_EXTRA,
)

SCHEMA_TW = vol.Schema(
    {
        vol.Required("kind"): vol.In(["gue", "goe"]),
        vol.Required("grid"): _grid_string,
    },
    extra=vol.ALLOW_EXTRA,
)

SCHEMA_ENDPOINT = vol.Schema(
    {
        vol.Required("sub"): vol.In(["density", "tail", "moments", "joint"]),
        vol.Optional("grid", default="0:0:1"): _grid_string,
        vol.Optional("m_grid", default="0:0:1"): _grid_string,
        vol.Optional("t", default=None): vol.Any(None, [FINITE_FLOAT]),
        vol.Optional("t_max", default=None): vol.Any(None, POSITIVE_FLOAT),
        vol.Optional("route", default="trace"): vol.In(["trace", "det_difference"]),
    },
    extra=vol.ALLOW_EXTRA,
)

SCHEMA_TWOTIME = vol.Schema(
    {
        vol.Required("mode"): vol.In(["sup", "extended", "decorrelation"]),
        vol.Optional("route", default="both"): vol.In(["scalar", "matrix", "both"]),
        vol.Optional("t", default=1.0): FINITE_FLOAT,
        vol.Optional("s", default=1.0): FINITE_FLOAT,
        vol.Optional("a", default=4.0): FINITE_FLOAT,
        vol.Optional("b", default=4.0): FINITE_FLOAT,
        vol.Optional("beta", default=None): vol.Any(None, FINITE_FLOAT),
        vol.Optional("t0", default=0.0): FINITE_FLOAT,
        vol.Optional("x0", default=0.0): FINITE_FLOAT,
        vol.Optional("t1", default=1.0): FINITE_FLOAT,
        vol.Optional("x1", default=0.0): FINITE_FLOAT,
    },
    extra=vol.ALLOW_EXTRA,
)

SCHEMA_SELFTEST = vol.Schema(
    {
        vol.Required("level", default=SELFTEST_QUICK): vol.In(
            [SELFTEST_QUICK, SELFTEST_FULL]
        ),
    },
    extra=vol.ALLOW_EXTRA,
)
