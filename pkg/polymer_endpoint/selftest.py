"""Self-test runner for the polymer endpoint library.

Runs identity and cross-route checks that hold independently of any golden
table. The quick level finishes in about a minute; the full level adds the
acceptance-scale runs.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .airyfn import airy_ai, airy_ai_prime, airy_convolution_check
from .config import LppConfig, NumericsConfig
from .const import (
    AI_ZERO,
    AIP_ZERO,
    ENDPOINT_EXCESS_KURTOSIS,
    ENDPOINT_VARIANCE,
    GOLDEN_TOL,
    GUE_AT_ZERO,
    SELFTEST_FULL,
    SELFTEST_QUICK,
)
from .exceptions import ConfigurationError, PolymerEndpointError
from .kernels import ReflectionSpec, b_shift, factorized_shift_kernel, k_airy
from .lpp import simulate
from .polymer_dist import (
    M_SCALE,
    endpoint_moments,
    f_goe,
    f_gue,
    joint_density,
    joint_sup_point_cdf,
    one_sided_sup_cdf,
)
from .routes import ROUTE_DET_DIFFERENCE, ROUTE_MATRIX, ROUTE_SCALAR, ROUTE_TRACE

_LOGGER = logging.getLogger(__name__)

LPP_CHECK_SAMPLES = 30_000
LPP_CHECK_Q = 0.5


@dataclass
class CheckResult:
    """Outcome of one self-test check."""

    name: str
    passed: bool
    value: float
    threshold: float
    error: str | None = None


Check = Callable[[], tuple[float, float]]


class SelfTestRunner:
    """Runs the quick or full self-test suite.

    Each check returns (measured, threshold) and passes when
    measured <= threshold.
    """

    def __init__(self, cfg: NumericsConfig | None = None) -> None:
        """Initialize self-test runner.

        Args:
            cfg: Numerical configuration used by determinant checks
        """
        self.cfg = cfg or NumericsConfig()

    def checks(self, level: str) -> list[tuple[str, Check]]:
        """Checks of a level, in run order.

        Raises:
            ConfigurationError: For an unknown level
        """
        quick: list[tuple[str, Check]] = [
            ("airy_origin", self.check_airy_origin),
            ("airy_convolution", self.check_airy_convolution),
            ("k_airy_diagonal", self.check_k_airy_diagonal),
            ("reflection_idempotent", self.check_reflection_idempotent),
            ("shift_factorization", self.check_shift_factorization),
            ("gue_upper_limit", self.check_gue_upper_limit),
            ("gue_at_zero", self.check_gue_at_zero),
            ("goe_monotone", self.check_goe_monotone),
            ("joint_density_routes", self.check_joint_density_routes),
            ("lpp_single_step", self.check_lpp_single_step),
        ]
        if level == SELFTEST_QUICK:
            return quick
        if level == SELFTEST_FULL:
            return [
                *quick,
                ("joint_density_routes_grid", self.check_joint_density_grid),
                ("sup_law_limit", self.check_sup_law_limit),
                ("sup_point_routes", self.check_sup_point_routes),
                ("endpoint_moments", self.check_endpoint_moments),
            ]
        raise ConfigurationError(f"Unknown self-test level: {level}")

    def run(self, level: str = SELFTEST_QUICK) -> list[CheckResult]:
        """Run every check of a level; failures never stop the run."""
        results = []
        for name, check in self.checks(level):
            results.append(self._run_one(name, check))
        failed = [r.name for r in results if not r.passed]
        if failed:
            _LOGGER.error("Self-test %s failed: %s", level, ", ".join(failed))
        else:
            _LOGGER.info("Self-test %s passed (%d checks)", level, len(results))
        return results

    def _run_one(self, name: str, check: Check) -> CheckResult:
        _LOGGER.debug("Running self-test check %s", name)
        try:
            value, threshold = check()
        except PolymerEndpointError as err:
            _LOGGER.error("Self-test check %s raised: %s", name, err, exc_info=True)
            return CheckResult(
                name=name,
                passed=False,
                value=float("nan"),
                threshold=float("nan"),
                error=str(err),
            )
        passed = bool(np.isfinite(value) and value <= threshold)
        if not passed:
            _LOGGER.warning(
                "Self-test check %s: %.3e exceeds %.1e", name, value, threshold
            )
        return CheckResult(name=name, passed=passed, value=value, threshold=threshold)

    def check_airy_origin(self) -> tuple[float, float]:
        """Ai(0) and Ai'(0) against their closed forms."""
        error = max(
            abs(airy_ai(0.0).value - AI_ZERO),
            abs(airy_ai_prime(0.0).value - AIP_ZERO),
        )
        return error, 1e-14

    def check_airy_convolution(self) -> tuple[float, float]:
        """Convolution identity of Ai on a 5x5 grid."""
        points = np.linspace(-2.0, 2.0, 5)
        residual = max(airy_convolution_check(a, b) for a in points for b in points)
        return residual, 1e-8

    def check_k_airy_diagonal(self) -> tuple[float, float]:
        """K_Ai(0, 0) = Ai'(0)^2 through the diagonal series."""
        return abs(float(k_airy(0.0, 0.0)) - AIP_ZERO**2), 1e-12

    def check_reflection_idempotent(self) -> tuple[float, float]:
        """Q Q f = Q f for the sup reflection."""
        spec = ReflectionSpec(a=0.5, t=0.75)

        def f(x: np.ndarray) -> np.ndarray:
            return np.asarray(np.exp(-0.5 * (x - 1.0) ** 2))

        x = np.linspace(spec.edge + 1e-3, spec.edge + 6.0, 41)
        once = spec.apply(f, x)
        twice = spec.apply(lambda p: spec.apply(f, p), x)
        return float(np.max(np.abs(twice - once))), 1e-9

    def check_shift_factorization(self) -> tuple[float, float]:
        """B_{4^{1/3} m} against its lambda-integral factorization."""
        kernel = b_shift(M_SCALE * 0.5)
        error = max(
            abs(factorized_shift_kernel(0.5, x, y) - float(kernel(x, y)))
            for x, y in ((0.0, 0.0), (0.3, 1.1), (2.0, 0.7))
        )
        return error, 1e-10

    def check_gue_upper_limit(self) -> tuple[float, float]:
        """F_GUE(8) is one to double precision."""
        return abs(1.0 - f_gue(8.0, self.cfg).value), 1e-10

    def check_gue_at_zero(self) -> tuple[float, float]:
        """F_GUE(0) against its frozen value."""
        return abs(f_gue(0.0, self.cfg).value - GUE_AT_ZERO), GOLDEN_TOL

    def check_goe_monotone(self) -> tuple[float, float]:
        """F_GOE is nondecreasing on [-2, 2]; measures the largest drop."""
        values = np.array(
            [f_goe(m, self.cfg).value for m in np.linspace(-2.0, 2.0, 5)]
        )
        return float(max(0.0, -np.min(np.diff(values)))), 0.0

    def check_joint_density_routes(self) -> tuple[float, float]:
        """Trace and determinant-difference formulas at one point."""
        return self._route_gap([(0.5, 0.0)]), 1e-8

    def check_joint_density_grid(self) -> tuple[float, float]:
        """Trace and determinant-difference formulas on a 3x3 grid."""
        points = [(t, m) for t in (0.0, 0.5, 1.0) for m in (-1.0, 0.0, 1.0)]
        return self._route_gap(points), 1e-8

    def _route_gap(self, points: list[tuple[float, float]]) -> float:
        return max(
            abs(
                joint_density(t, m, self.cfg, ROUTE_TRACE)
                - joint_density(t, m, self.cfg, ROUTE_DET_DIFFERENCE)
            )
            for t, m in points
        )

    def check_lpp_single_step(self) -> tuple[float, float]:
        """N = 1 endpoint law: P(T_1 = +1) = (1 - q / (2 - q)) / 2."""
        cfg = LppConfig(
            n_steps=1, q=LPP_CHECK_Q, samples=LPP_CHECK_SAMPLES, seed=7, scale=1.0
        )
        dist = simulate(cfg, threads=self.cfg.threads)
        freq = float(np.mean(np.asarray(dist.raw_endpoints) == 1))
        exact = 0.5 * (1.0 - LPP_CHECK_Q / (2.0 - LPP_CHECK_Q))
        sigma = float(np.sqrt(exact * (1.0 - exact) / LPP_CHECK_SAMPLES))
        return abs(freq - exact), 5.0 * sigma

    def check_sup_law_limit(self) -> tuple[float, float]:
        """One-sided sup up to t = 3 against the two-sided law F_GOE(4^{1/3} a)."""
        gap = max(
            abs(
                one_sided_sup_cdf(3.0, a, self.cfg).value
                - f_goe(M_SCALE * a, self.cfg).value
            )
            for a in (-0.5, 0.0, 0.5)
        )
        return gap, 2e-4

    def check_sup_point_routes(self) -> tuple[float, float]:
        """Scalar and matrix routes of the sup/point law at t = s = 1, a = b = 4."""
        scalar = joint_sup_point_cdf(1.0, 1.0, 4.0, 4.0, self.cfg, ROUTE_SCALAR)
        matrix = joint_sup_point_cdf(1.0, 1.0, 4.0, 4.0, self.cfg, ROUTE_MATRIX)
        return abs(scalar.value - matrix.value), 1e-6

    def check_endpoint_moments(self) -> tuple[float, float]:
        """Variance and excess kurtosis of the endpoint law."""
        report = endpoint_moments(self.cfg)
        return max(
            abs(report.variance - ENDPOINT_VARIANCE) / 5e-4,
            abs(report.excess_kurtosis - ENDPOINT_EXCESS_KURTOSIS) / 1e-3,
        ), 1.0
