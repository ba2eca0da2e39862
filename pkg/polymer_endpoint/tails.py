"""Tail envelopes of the endpoint law and Tracy-Widom right-tail shapes.

All envelope arithmetic happens in log space; exponentials are taken only
when a value is returned.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .const import (
    ASYMPTOTIC_MIN_ARG,
    DEFAULT_C32,
    DEFAULT_KAPPA,
    FIT_MIN_PROB,
    FIT_MIN_RECORDS,
    KAPPA_CRITICAL,
    MAX_C32,
)
from .exceptions import ConfigurationError, FitError

_LOGGER = logging.getLogger(__name__)


def log_upper_envelope(t: float, c: float = 1.0, c32: float = DEFAULT_C32) -> float:
    """log(c) - (4/3) t^3 + 2 t^2 + c32 t^{3/2}.

    Raises:
        ConfigurationError: If t <= 0, c <= 0 or c32 outside [0, MAX_C32]
    """
    if t <= 0.0 or c <= 0.0:
        raise ConfigurationError(
            f"Upper envelope needs t > 0 and c > 0, got t={t}, c={c}"
        )
    if not 0.0 <= c32 <= MAX_C32:
        raise ConfigurationError(f"c32 must be in [0, {MAX_C32}], got {c32}")
    return math.log(c) - (4.0 / 3.0) * t**3 + 2.0 * t * t + c32 * t**1.5


def upper_envelope(t: float, c: float = 1.0, c32: float = DEFAULT_C32) -> float:
    """c exp(-(4/3) t^3 + 2 t^2 + c32 t^{3/2})."""
    return math.exp(log_upper_envelope(t, c, c32))


def log_lower_envelope(t: float, kappa: float = DEFAULT_KAPPA) -> float:
    """-kappa t^3.

    Raises:
        ConfigurationError: If kappa <= 32/3 or t < 0
    """
    if kappa <= KAPPA_CRITICAL:
        raise ConfigurationError(
            f"Lower envelope needs kappa > 32/3 = {KAPPA_CRITICAL:.6f}, got {kappa}"
        )
    if t < 0.0:
        raise ConfigurationError(f"Lower envelope needs t >= 0, got {t}")
    return -kappa * t**3


def lower_envelope(t: float, kappa: float = DEFAULT_KAPPA) -> float:
    """exp(-kappa t^3)."""
    return math.exp(log_lower_envelope(t, kappa))


def _log_right_tail_shape(x: float, name: str) -> float:
    if x < ASYMPTOTIC_MIN_ARG:
        raise ConfigurationError(
            f"{name} right-tail shape needs argument >= {ASYMPTOTIC_MIN_ARG:g}, got {x}"
        )
    return -(4.0 / 3.0) * x**1.5 - 1.5 * math.log(x)


def gue_right_tail_asymptotic(s: float) -> float:
    """Shape s^{-3/2} exp(-(4/3) s^{3/2}) of 1 - F_GUE(s), unit constant."""
    return math.exp(_log_right_tail_shape(s, "GUE"))


def goe_right_tail_asymptotic(m: float) -> float:
    """Shape m^{-3/2} exp(-(4/3) m^{3/2}) of 1 - F_GOE(4^{1/3} m), unit constant."""
    return math.exp(_log_right_tail_shape(m, "GOE"))


@dataclass(frozen=True)
class TailRecord:
    """P(|T| > t) with both envelopes at t."""

    t: float
    prob: float
    log_prob: float
    upper_env: float
    lower_env: float
    converged: bool = True

    @classmethod
    def from_probability(
        cls,
        t: float,
        prob: float,
        c: float = 1.0,
        c32: float = DEFAULT_C32,
        kappa: float = DEFAULT_KAPPA,
        converged: bool = True,
    ) -> TailRecord:
        """Build a record, evaluating the envelopes at t.

        Raises:
            ConfigurationError: If prob is outside (0, 1]
        """
        if not 0.0 < prob <= 1.0:
            raise ConfigurationError(f"Tail probability must be in (0, 1], got {prob}")
        upper = upper_envelope(t, c, c32) if t > 0.0 else math.inf
        return cls(
            t=t,
            prob=prob,
            log_prob=math.log(prob),
            upper_env=upper,
            lower_env=lower_envelope(t, kappa),
            converged=converged,
        )

    @property
    def within_lower(self) -> bool:
        """True if the lower envelope holds."""
        return self.lower_env <= self.prob


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit -log p = cubic t^3 + quadratic t^2 + intercept."""

    cubic_coeff: float
    quadratic_coeff: float
    intercept: float
    residual: float
    t_range: tuple[float, float]

    def __str__(self) -> str:
        """String representation of the fit."""
        return (
            f"-log p = {self.cubic_coeff:.4f} t^3 + {self.quadratic_coeff:.4f} t^2 "
            f"+ {self.intercept:.4f} on t in [{self.t_range[0]:g}, {self.t_range[1]:g}]"
        )


def fit_decay(records: Sequence[TailRecord]) -> DecayFit:
    """Fit the decay exponent of a tail from its records.

    Args:
        records: At least FIT_MIN_RECORDS records with distinct positive t
            and prob above FIT_MIN_PROB

    Returns:
        DecayFit with RMS residual

    Raises:
        FitError: If the records cannot determine the fit
    """
    if len(records) < FIT_MIN_RECORDS:
        raise FitError(f"Need at least {FIT_MIN_RECORDS} records, got {len(records)}")
    t = np.array([r.t for r in records], dtype=float)
    if np.any(t <= 0.0):
        raise FitError("Tail fit needs positive t values")
    if np.unique(t).size != t.size:
        raise FitError("Tail fit needs distinct t values")
    if any(r.prob <= FIT_MIN_PROB for r in records):
        raise FitError(f"Tail fit needs probabilities above {FIT_MIN_PROB:g}")

    target = -np.array([r.log_prob for r in records], dtype=float)
    design = np.column_stack([t**3, t**2, np.ones_like(t)])
    coeffs, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < design.shape[1]:
        raise FitError(f"Degenerate tail fit design (rank {rank})")
    residual = float(np.sqrt(np.mean((design @ coeffs - target) ** 2)))
    fit = DecayFit(
        cubic_coeff=float(coeffs[0]),
        quadratic_coeff=float(coeffs[1]),
        intercept=float(coeffs[2]),
        residual=residual,
        t_range=(float(t.min()), float(t.max())),
    )
    _LOGGER.debug("Tail fit: %s", fit)
    return fit


def fit_upper_constant(
    records: Sequence[TailRecord], c32: float = DEFAULT_C32
) -> float:
    """Smallest c with prob <= upper_envelope(t, c, c32) for every record."""
    if not records:
        raise FitError("No records to bound")
    return max(
        math.exp(r.log_prob - log_upper_envelope(r.t, 1.0, c32)) for r in records
    )
