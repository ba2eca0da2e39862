"""Generic numeric validation utilities.

Predicates return booleans and log the reason at debug level; callers decide
whether a failed check is an error.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import ArrayLike

_LOGGER = logging.getLogger(__name__)


def validate_finite(value: float) -> bool:
    """Validate that a scalar is finite.

    Args:
        value: Value to validate

    Returns:
        True if value is neither NaN nor infinite
    """
    if not math.isfinite(value):
        _LOGGER.debug("Value %r is not finite", value)
        return False
    return True


def validate_all_finite(values: ArrayLike) -> bool:
    """Validate that every entry of an array is finite.

    Args:
        values: Array to validate

    Returns:
        True if all entries are finite
    """
    arr = np.asarray(values, dtype=float)
    ok = bool(np.all(np.isfinite(arr)))
    if not ok:
        _LOGGER.debug(
            "%d of %d entries are not finite", int(np.sum(~np.isfinite(arr))), arr.size
        )
    return ok


def validate_in_range(
    value: float,
    lo: float,
    hi: float,
    inclusive: bool = True,
) -> bool:
    """Validate that a value lies in [lo, hi] (or (lo, hi) when not inclusive).

    Args:
        value: Value to validate
        lo: Lower bound
        hi: Upper bound
        inclusive: Whether the bounds belong to the range

    Returns:
        True if value is finite and within range
    """
    if not validate_finite(value):
        return False
    ok = lo <= value <= hi if inclusive else lo < value < hi
    if not ok:
        _LOGGER.debug("Value %r outside range [%r, %r]", value, lo, hi)
    return ok


def validate_interval(lo: float, hi: float) -> bool:
    """Validate that (lo, hi) is a non-empty finite interval.

    Args:
        lo: Lower endpoint
        hi: Upper endpoint

    Returns:
        True if both endpoints are finite and lo < hi
    """
    if not (validate_finite(lo) and validate_finite(hi)):
        return False
    if lo >= hi:
        _LOGGER.debug("Empty interval (%r, %r)", lo, hi)
        return False
    return True


def validate_probability(value: float, slack: float = 0.0) -> bool:
    """Validate that a value is a probability up to a numerical slack.

    Args:
        value: Value to validate
        slack: Allowed excursion below 0 and above 1

    Returns:
        True if value lies in [-slack, 1 + slack]
    """
    return validate_in_range(value, -slack, 1.0 + slack)
