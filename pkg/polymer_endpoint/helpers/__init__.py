"""Reusable numerical helpers.

These helpers do not depend on the polymer endpoint modules and can be reused
by any numerics package.
"""

from __future__ import annotations

from .grid import GridSpec, grid_values, parse_grid_string
from .numeric_validation import (
    validate_all_finite,
    validate_finite,
    validate_in_range,
    validate_interval,
    validate_probability,
)
from .output import EnvelopeWriter, OutputEnvelope
from .refinement import RefinementResult, RefinementStrategy

__all__ = [
    "EnvelopeWriter",
    "GridSpec",
    "OutputEnvelope",
    "RefinementResult",
    "RefinementStrategy",
    "grid_values",
    "parse_grid_string",
    "validate_all_finite",
    "validate_finite",
    "validate_in_range",
    "validate_interval",
    "validate_probability",
]
