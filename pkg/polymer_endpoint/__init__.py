"""Fredholm determinant numerics for the endpoint law of the Airy2 polymer."""

from __future__ import annotations

from .config import LppConfig, NumericsConfig
from .exceptions import (
    BelowResolutionError,
    CalibrationError,
    ConfigurationError,
    FitError,
    NumericalDomainError,
    PolymerEndpointError,
    SingularOperatorError,
)
from .fredholm import DetResult, KernelFn, det_block2, det_fredholm
from .polymer_dist import (
    endpoint_cdf,
    endpoint_density,
    endpoint_moments,
    endpoint_tail,
    f_goe,
    f_gue,
    joint_density,
    joint_sup_point_cdf,
    one_sided_sup_cdf,
    two_time_cdf,
)

__version__ = "0.1.0"

__all__ = [
    "BelowResolutionError",
    "CalibrationError",
    "ConfigurationError",
    "DetResult",
    "FitError",
    "KernelFn",
    "LppConfig",
    "NumericalDomainError",
    "NumericsConfig",
    "PolymerEndpointError",
    "SingularOperatorError",
    "det_block2",
    "det_fredholm",
    "endpoint_cdf",
    "endpoint_density",
    "endpoint_moments",
    "endpoint_tail",
    "f_goe",
    "f_gue",
    "joint_density",
    "joint_sup_point_cdf",
    "one_sided_sup_cdf",
    "two_time_cdf",
]
