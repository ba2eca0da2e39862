"""Evaluation routes for quantities that have two equivalent formulas.

The joint density of (T, M) is computed either as a rank-one resolvent trace
or as a difference of two determinants; the sup/point law either as a scalar
determinant or as a 2x2 matrix-kernel determinant. Routes are interchangeable
strategies so the formulas can be cross-checked.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing import TYPE_CHECKING

import numpy as np

from .airyfn import ai_pair
from .const import MATRIX_ROUTE_MIN_BETA
from .exceptions import ConfigurationError
from .fredholm import (
    DetResult,
    KernelFn,
    NystromOperator,
    det_block2,
    det_fredholm,
    trace_norm_bound,
)
from .kernels import (
    CBRT2,
    psi,
    psi_vector,
    q_composed_kernels,
    scalar_route_kernel,
)
from .quadrature import gauss_legendre, map_rule

if TYPE_CHECKING:
    from .config import NumericsConfig
    from .polymer_dist import JointDensitySolver

_LOGGER = logging.getLogger(__name__)

ROUTE_TRACE = "trace"
ROUTE_DET_DIFFERENCE = "det_difference"
ROUTE_SCALAR = "scalar"
ROUTE_MATRIX = "matrix"


class JointDensityRoute(ABC):
    """Abstract base class for joint density formulas."""

    name: str

    @abstractmethod
    def evaluate(self, solver: JointDensitySolver, t: float, m: float, n: int) -> float:
        """Joint density f(t, m) with n quadrature nodes.

        Args:
            solver: Holder of the GOE factorizations
            t: Endpoint location
            m: Maximum value
            n: Number of Nystrom nodes

        Returns:
            Density value
        """
        raise NotImplementedError


class TraceRoute(JointDensityRoute):
    """2^{1/3} <psi_{-t}, (I - B)^{-1} psi_t> F_GOE(4^{1/3} m)."""

    name = ROUTE_TRACE

    def evaluate(self, solver: JointDensitySolver, t: float, m: float, n: int) -> float:
        """Rank-one trace against the shared factorization."""
        operator = solver.goe_operator(m, n)
        u = CBRT2 * psi_vector(t, m, operator.rule).samples
        v = psi_vector(-t, m, operator.rule).samples
        return operator.rank_one_trace(u, v) * operator.det()


class DetDifferenceRoute(JointDensityRoute):
    """det(I - B + Psi) - det(I - B) on the same grid."""

    name = ROUTE_DET_DIFFERENCE

    def evaluate(self, solver: JointDensitySolver, t: float, m: float, n: int) -> float:
        """Difference of two determinants."""
        operator = solver.goe_operator(m, n)
        shift = 4.0 ** (1.0 / 3.0) * m

        def perturbed(x: np.ndarray, y: np.ndarray) -> np.ndarray:
            values, _ = ai_pair(x + y + shift)
            rank_one = CBRT2 * psi(t, m, CBRT2 * x) * psi(-t, m, CBRT2 * y)
            return np.asarray(values - rank_one)

        kernel = KernelFn(
            evaluate=perturbed,
            domain=operator.kernel.domain,
            name=f"B-Psi(t={t:g},m={m:g})",
        )
        return NystromOperator(kernel, operator.rule).det() - operator.det()


def create_joint_density_route(route: str) -> JointDensityRoute:
    """Create the joint density route named by route.

    Raises:
        ConfigurationError: For an unknown route name
    """
    if route == ROUTE_TRACE:
        return TraceRoute()
    if route == ROUTE_DET_DIFFERENCE:
        return DetDifferenceRoute()
    raise ConfigurationError(f"Unknown joint density route: {route}")


class SupPointRoute(ABC):
    """Abstract base class for sup/point law formulas.

    The law is P(A2(x) - x^2 <= a for x <= t, A2(t+s) - (t+s)^2 <= b).
    """

    name: str

    @abstractmethod
    def evaluate(
        self, t: float, s: float, a: float, b: float, cfg: NumericsConfig
    ) -> DetResult:
        """Evaluate the determinant.

        Args:
            t: Right end of the sup window
            s: Time gap to the point constraint
            a: Level of the sup constraint
            b: Level of the point constraint
            cfg: Numerical configuration

        Returns:
            DetResult of the formula
        """
        raise NotImplementedError


class ScalarRoute(SupPointRoute):
    """Scalar determinant on L^2(0, inf)."""

    name = ROUTE_SCALAR

    def evaluate(
        self, t: float, s: float, a: float, b: float, cfg: NumericsConfig
    ) -> DetResult:
        """det(I - Z) for the reduced scalar kernel."""
        kernel = scalar_route_kernel(a, t, s, b, cfg.trunc_pad)
        rule = map_rule(gauss_legendre(cfg.quad_n), *kernel.domain)
        return det_fredholm(kernel, rule, cfg.tol)


class MatrixRoute(SupPointRoute):
    """Conjugated 2x2 matrix kernel.

    The conjugation keeps both diagonal blocks trace class only for
    a >= 3 t^2; below that level evaluate falls back to the scalar route.
    """

    name = ROUTE_MATRIX

    @staticmethod
    def supports(t: float, a: float) -> bool:
        """True if the conjugated kernel is usable at level a."""
        return a >= MATRIX_ROUTE_MIN_BETA * t * t

    def _check_levels(self, t: float, a: float) -> None:
        if not self.supports(t, a):
            raise ConfigurationError(
                f"Matrix route needs a >= {MATRIX_ROUTE_MIN_BETA:g} t^2, "
                f"got a={a}, t={t}"
            )

    def evaluate(
        self, t: float, s: float, a: float, b: float, cfg: NumericsConfig
    ) -> DetResult:
        """det(I - Gamma K Gamma^{-1}) on two shifted half-lines."""
        if not self.supports(t, a):
            _LOGGER.warning(
                "Matrix route needs a >= %g t^2 (a=%s, t=%s); using the scalar route",
                MATRIX_ROUTE_MIN_BETA,
                a,
                t,
            )
            return ScalarRoute().evaluate(t, s, a, b, cfg)
        block = q_composed_kernels(a, t, s, b, pad=cfg.trunc_pad)
        rules = tuple(
            map_rule(gauss_legendre(cfg.quad_n), *entry.domain)
            for entry in (block.entries[0][0], block.entries[1][1])
        )
        return det_block2(block, (rules[0], rules[1]), cfg.tol)

    def coupling_bound(
        self, t: float, s: float, a: float, b: float, cfg: NumericsConfig
    ) -> float:
        """Trace-norm bound on the product of the two off-diagonal blocks.

        Raises:
            ConfigurationError: If a < 3 t^2
        """
        self._check_levels(t, a)
        block = q_composed_kernels(a, t, s, b, pad=cfg.trunc_pad)
        upper, lower = block.entries[0][1], block.entries[1][0]
        first = map_rule(gauss_legendre(cfg.quad_n), *upper.domain)
        second = map_rule(gauss_legendre(cfg.quad_n), *upper.columns)
        return trace_norm_bound(upper, lower, first, second, first)


def create_sup_point_route(route: str) -> SupPointRoute:
    """Create the sup/point route named by route.

    Raises:
        ConfigurationError: For an unknown route name
    """
    if route == ROUTE_SCALAR:
        return ScalarRoute()
    if route == ROUTE_MATRIX:
        return MatrixRoute()
    raise ConfigurationError(f"Unknown sup/point route: {route}")
