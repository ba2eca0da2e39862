"""Airy function Ai and its derivative on the real line.

Scalar entry points return AiryValue pairs (plain and exponentially scaled);
the array functions feed kernel assembly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from .exceptions import NumericalDomainError

FloatArray = NDArray[np.float64]

# Window for the convolution identity check: Ai(25) is below 1e-37
_CONVOLUTION_REACH = 25.0
_CONVOLUTION_PANEL = 1.0
_CONVOLUTION_NODES = 20


@dataclass(frozen=True)
class AiryValue:
    """Ai or Ai' at a point, with its scaled form.

    log_scaled equals value * exp((2/3) x^{3/2}) for x > 0 and value otherwise.
    """

    value: float
    log_scaled: float


def _check_finite(x: float, name: str) -> float:
    xf = float(x)
    if not math.isfinite(xf):
        raise NumericalDomainError(f"{name} needs a finite argument", entry=name, x=xf)
    return xf


def airy_ai(x: float) -> AiryValue:
    """Evaluate Ai(x).

    Raises:
        NumericalDomainError: If x is not finite
    """
    xf = _check_finite(x, "Ai")
    ai, _, _, _ = special.airy(xf)
    if xf > 0.0:
        eai, _, _, _ = special.airye(xf)
        return AiryValue(value=float(ai), log_scaled=float(eai))
    return AiryValue(value=float(ai), log_scaled=float(ai))


def airy_ai_prime(x: float) -> AiryValue:
    """Evaluate Ai'(x).

    Raises:
        NumericalDomainError: If x is not finite
    """
    xf = _check_finite(x, "Ai'")
    _, aip, _, _ = special.airy(xf)
    if xf > 0.0:
        _, eaip, _, _ = special.airye(xf)
        return AiryValue(value=float(aip), log_scaled=float(eaip))
    return AiryValue(value=float(aip), log_scaled=float(aip))


def ai(x: ArrayLike) -> FloatArray:
    """Ai on an array."""
    values, _, _, _ = special.airy(np.asarray(x, dtype=float))
    return np.asarray(values, dtype=float)


def ai_pair(x: ArrayLike) -> tuple[FloatArray, FloatArray]:
    """Ai and Ai' on an array."""
    values, primes, _, _ = special.airy(np.asarray(x, dtype=float))
    return np.asarray(values, dtype=float), np.asarray(primes, dtype=float)


def scaled_ai_pair(x: ArrayLike) -> tuple[FloatArray, FloatArray, FloatArray]:
    """Scaled Ai, scaled Ai' and the scaling exponent on an array.

    Returns (eai, eaip, zeta) with Ai = eai * exp(-zeta), Ai' = eaip * exp(-zeta),
    zeta = (2/3) x^{3/2} for x > 0 and 0 otherwise.
    """
    arr = np.asarray(x, dtype=float)
    positive = arr > 0.0
    # airye is NaN on the negative real axis; evaluate each side on its own
    eai, eaip, _, _ = special.airye(np.where(positive, arr, 1.0))
    ai_neg, aip_neg, _, _ = special.airy(np.where(positive, 0.0, arr))
    zeta = (2.0 / 3.0) * np.power(np.clip(arr, 0.0, None), 1.5)
    return (
        np.asarray(np.where(positive, eai, ai_neg), dtype=float),
        np.asarray(np.where(positive, eaip, aip_neg), dtype=float),
        zeta,
    )


def weighted_ai(x: ArrayLike, log_weight: ArrayLike) -> FloatArray:
    """exp(log_weight) * Ai(x) without forming either factor separately."""
    eai, _, zeta = scaled_ai_pair(x)
    return np.asarray(eai * np.exp(np.asarray(log_weight, dtype=float) - zeta))


def weighted_ai_pair(
    x: ArrayLike, log_weight: ArrayLike
) -> tuple[FloatArray, FloatArray]:
    """exp(log_weight) times Ai(x) and Ai'(x), in log-scaled pieces."""
    eai, eaip, zeta = scaled_ai_pair(x)
    factor = np.exp(np.asarray(log_weight, dtype=float) - zeta)
    return np.asarray(eai * factor), np.asarray(eaip * factor)


def airy_convolution_check(a: float, b: float) -> float:
    """Residual of the convolution identity for Ai.

    Returns |int Ai(a+u) Ai(b-u) du - 2^{-1/3} Ai(2^{-1/3}(a+b))|, the integral
    taken by panel Gauss-Legendre quadrature over the window where either
    factor exceeds Ai(25).
    """
    from .quadrature import composite_rule

    af = _check_finite(a, "Ai")
    bf = _check_finite(b, "Ai")
    lo = bf - _CONVOLUTION_REACH
    hi = _CONVOLUTION_REACH - af
    integral = 0.0
    if hi > lo:
        rule = composite_rule(lo, hi, _CONVOLUTION_PANEL, _CONVOLUTION_NODES)
        u = rule.nodes
        integral = float(np.sum(rule.weights * ai(af + u) * ai(bf - u)))
    c = 2.0 ** (-1.0 / 3.0)
    return abs(integral - c * airy_ai(c * (af + bf)).value)
