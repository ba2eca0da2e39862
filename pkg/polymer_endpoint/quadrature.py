"""Gauss-Legendre rules, affine maps and truncation of semi-infinite domains."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import brentq

from .const import DEFAULT_TRUNC_PAD, MAX_QUAD_N, MAX_TOL, MIN_GL_NODES
from .exceptions import ConfigurationError
from .helpers.numeric_validation import validate_interval

_LOGGER = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]

_NEWTON_MAX_ITER = 100


def _frozen(values: FloatArray) -> FloatArray:
    arr = np.array(values, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights realizing an integral over (lo, hi).

    panels counts the equal-width Gauss-Legendre panels the nodes fill.
    """

    nodes: FloatArray
    weights: FloatArray
    interval: tuple[float, float]
    panels: int = 1

    def __post_init__(self) -> None:
        """Freeze the arrays."""
        object.__setattr__(self, "nodes", _frozen(self.nodes))
        object.__setattr__(self, "weights", _frozen(self.weights))

    @property
    def n(self) -> int:
        """Number of nodes."""
        return int(self.nodes.size)

    def integrate(self, values: FloatArray) -> float:
        """Apply the rule to samples on its nodes."""
        return float(np.dot(self.weights, values))


@dataclass(frozen=True)
class DecayEnvelope:
    """Envelope E(x) = exp(growth*x - coeff*(x + shift)^{3/2}) for x + shift >= 0."""

    growth: float = 0.0
    coeff: float = 4.0 / 3.0
    shift: float = 0.0

    def log_value(self, x: float) -> float:
        """log E(x)."""
        return self.growth * x - self.coeff * max(x + self.shift, 0.0) ** 1.5

    def stationary_point(self) -> float:
        """Maximizer of log E over x + shift >= 0."""
        if self.growth <= 0.0:
            return -self.shift
        return (2.0 * self.growth / (3.0 * self.coeff)) ** 2 - self.shift


@dataclass(frozen=True)
class TruncationSpec:
    """Finite interval [lo, hi] standing in for [lo, infinity)."""

    lo: float
    hi: float
    decay_rate_hint: float
    pad: float = field(default=0.0)

    def __post_init__(self) -> None:
        """Validate the interval."""
        if not validate_interval(self.lo, self.hi):
            raise ConfigurationError(
                f"Truncation needs lo < hi, got ({self.lo}, {self.hi})"
            )
        if self.pad < 0.0:
            raise ConfigurationError(f"Truncation pad must be >= 0, got {self.pad}")

    def rule(self, n: int) -> QuadratureRule:
        """n-point Gauss-Legendre rule on [lo, hi]."""
        return map_rule(gauss_legendre(n), self.lo, self.hi)


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule on (-1, 1).

    Nodes are Newton-refined roots of P_n started from the asymptotic
    guesses cos(pi (4k - 1) / (4n + 2)).

    Raises:
        ConfigurationError: If n is outside [1, MAX_QUAD_N]
    """
    if not isinstance(n, (int, np.integer)) or not MIN_GL_NODES <= n <= MAX_QUAD_N:
        raise ConfigurationError(
            f"Gauss-Legendre order must be in [{MIN_GL_NODES}, {MAX_QUAD_N}], got {n}"
        )
    n = int(n)
    k = np.arange(1, n + 1, dtype=float)
    x = np.cos(np.pi * (4.0 * k - 1.0) / (4.0 * n + 2.0))
    x *= 1.0 - (n - 1.0) / (8.0 * n**3)

    dp = np.ones_like(x)
    for _ in range(_NEWTON_MAX_ITER):
        p_prev = np.ones_like(x)
        p = x.copy()
        for j in range(2, n + 1):
            p_prev, p = p, ((2.0 * j - 1.0) * x * p - (j - 1.0) * p_prev) / j
        dp = n * (x * p - p_prev) / (x * x - 1.0)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) <= 4.0 * np.finfo(float).eps:
            break

    # One more derivative evaluation at the converged nodes
    p_prev = np.ones_like(x)
    p = x.copy()
    for j in range(2, n + 1):
        p_prev, p = p, ((2.0 * j - 1.0) * x * p - (j - 1.0) * p_prev) / j
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)

    order = np.argsort(x)
    x, w = x[order], w[order]
    # Exact symmetry about 0
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(nodes=x, weights=w, interval=(-1.0, 1.0))


def map_rule(rule: QuadratureRule, lo: float, hi: float) -> QuadratureRule:
    """Affine image of a rule on (lo, hi).

    Raises:
        ConfigurationError: If lo >= hi or either bound is not finite
    """
    if not validate_interval(lo, hi):
        raise ConfigurationError(f"Cannot map a rule to ({lo}, {hi})")
    a, b = rule.interval
    if (a, b) == (lo, hi):
        return rule
    scale = (hi - lo) / (b - a)
    return QuadratureRule(
        nodes=lo + (rule.nodes - a) * scale,
        weights=rule.weights * scale,
        interval=(float(lo), float(hi)),
        panels=rule.panels,
    )


def panel_rule(lo: float, hi: float, panels: int, n_per_panel: int) -> QuadratureRule:
    """n_per_panel Gauss-Legendre nodes on each of panels equal pieces of (lo, hi)."""
    edges = np.linspace(lo, hi, panels + 1)
    base = gauss_legendre(n_per_panel)
    mapped = [map_rule(base, edges[i], edges[i + 1]) for i in range(panels)]
    return QuadratureRule(
        nodes=np.concatenate([r.nodes for r in mapped]),
        weights=np.concatenate([r.weights for r in mapped]),
        interval=(float(lo), float(hi)),
        panels=panels,
    )


def composite_rule(
    lo: float, hi: float, panel_width: float, n_per_panel: int
) -> QuadratureRule:
    """Gauss-Legendre panels of equal width at most panel_width covering (lo, hi)."""
    if not validate_interval(lo, hi):
        raise ConfigurationError(f"Cannot build panels on ({lo}, {hi})")
    if panel_width <= 0.0:
        raise ConfigurationError(f"Panel width must be positive, got {panel_width}")
    panels = max(1, math.ceil((hi - lo) / panel_width - 1e-12))
    return panel_rule(lo, hi, panels, n_per_panel)


def choose_truncation(
    kernel_decay: DecayEnvelope,
    tol: float,
    lo: float = 0.0,
    pad: float = DEFAULT_TRUNC_PAD,
) -> TruncationSpec:
    """Cutoff beyond which the decay envelope is below tol times its maximum.

    Args:
        kernel_decay: Envelope of the integrand along one axis
        tol: Relative envelope level at the cutoff, in (0, MAX_TOL]
        lo: Left end of the domain
        pad: Extra length added past the root

    Returns:
        TruncationSpec on [lo, root + pad]

    Raises:
        ConfigurationError: If tol is out of range or the envelope does not decay
    """
    if not 0.0 < tol <= MAX_TOL:
        raise ConfigurationError(
            f"Truncation tolerance must be in (0, {MAX_TOL}], got {tol}"
        )
    if kernel_decay.coeff <= 0.0:
        raise ConfigurationError(f"Envelope does not decay: {kernel_decay}")

    x_min = max(lo, -kernel_decay.shift)
    x_peak = max(x_min, kernel_decay.stationary_point())
    level = kernel_decay.log_value(x_peak) + math.log(tol)

    def excess(x: float) -> float:
        return kernel_decay.log_value(x) - level

    step = 1.0
    right = x_peak + step
    while excess(right) > 0.0:
        step *= 2.0
        right = x_peak + step
    root = float(brentq(excess, x_peak, right, xtol=1e-12))
    rate = (
        1.5 * kernel_decay.coeff * math.sqrt(root + kernel_decay.shift)
        - kernel_decay.growth
    )
    _LOGGER.debug(
        "Truncation for %s at tol %.1e: peak %.4f, root %.4f",
        kernel_decay,
        tol,
        x_peak,
        root,
    )
    return TruncationSpec(lo=float(lo), hi=root + pad, decay_rate_hint=rate, pad=pad)
