"""Nystrom discretization of Fredholm determinants and resolvents.

Kernels are discretized with the symmetric weight convention
A_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j), so symmetric kernels give symmetric
matrices. Determinants come from an LU factorization with partial pivoting;
the sign is the pivot parity times the signs of the diagonal of U.
"""

from __future__ import annotations

import logging
import math
import warnings
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .const import MAX_DOUBLINGS, MAX_TOL
from .exceptions import ConfigurationError, NumericalDomainError, SingularOperatorError
from .helpers.refinement import RefinementStrategy
from .quadrature import DecayEnvelope, QuadratureRule, panel_rule

_LOGGER = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]
KernelEval = Callable[[FloatArray, FloatArray], FloatArray]


@dataclass(frozen=True)
class KernelFn:
    """Integral kernel (x, y) -> K(x, y) with its domain and decay metadata.

    evaluate must broadcast: a column of x against a row of y gives the
    kernel matrix.
    """

    evaluate: KernelEval
    domain: tuple[float, float]
    col_domain: tuple[float, float] | None = None
    decay: DecayEnvelope | None = None
    col_decay: DecayEnvelope | None = None
    symmetric: bool = False
    name: str = "kernel"

    @property
    def columns(self) -> tuple[float, float]:
        """Domain of the second argument."""
        return self.col_domain if self.col_domain is not None else self.domain

    def __call__(self, x: ArrayLike, y: ArrayLike) -> FloatArray | float:
        """Evaluate at points; scalars in, scalar out."""
        values = self.evaluate(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        if np.ndim(values) == 0:
            return float(values)
        return values

    def matrix(self, rows: FloatArray, cols: FloatArray | None = None) -> FloatArray:
        """Kernel matrix K(rows_i, cols_j), checked for finiteness.

        Raises:
            NumericalDomainError: On the first non-finite entry
        """
        same = cols is None
        cols_arr = rows if cols is None else cols
        values = np.asarray(
            self.evaluate(rows[:, None], cols_arr[None, :]), dtype=float
        )
        values = np.broadcast_to(values, (rows.size, cols_arr.size))
        bad = ~np.isfinite(values)
        if np.any(bad):
            i, j = np.argwhere(bad)[0]
            raise NumericalDomainError(
                "Non-finite kernel entry",
                entry=self.name,
                x=float(rows[i]),
                y=float(cols_arr[j]),
            )
        if self.symmetric and same:
            values = 0.5 * (values + values.T)
        return np.array(values)


@dataclass(frozen=True)
class DetResult:
    """Determinant value with convergence evidence."""

    value: float
    n_coarse: int
    n_fine: int
    delta: float
    converged: bool
    tol: float = 0.0

    def __str__(self) -> str:
        """String representation of determinant result."""
        state = "converged" if self.converged else "NOT converged"
        return (
            f"{self.value:.12g} ({state}, n={self.n_coarse}->{self.n_fine}, "
            f"delta={self.delta:.2e})"
        )


@dataclass(frozen=True)
class BlockKernel:
    """2x2 matrix kernel; entries[i][j] maps block j functions to block i."""

    entries: tuple[tuple[KernelFn, KernelFn], tuple[KernelFn, KernelFn]]
    name: str = "block"

    def __post_init__(self) -> None:
        """Check domain consistency between blocks."""
        (k11, k12), (k21, k22) = self.entries
        if k11.domain != k11.columns or k22.domain != k22.columns:
            raise ConfigurationError("Diagonal blocks need square domains")
        if k12.domain != k11.domain or k12.columns != k22.domain:
            raise ConfigurationError("Block (1,2) domains do not match the diagonal")
        if k21.domain != k22.domain or k21.columns != k11.domain:
            raise ConfigurationError("Block (2,1) domains do not match the diagonal")


def _check_tol(tol: float) -> None:
    if not 0.0 < tol <= MAX_TOL:
        raise ConfigurationError(f"Tolerance must be in (0, {MAX_TOL}], got {tol}")


def rule_of_size(rule: QuadratureRule, n: int) -> QuadratureRule:
    """Rule with n nodes on the panels of rule, n / panels Gauss-Legendre nodes each.

    Raises:
        ConfigurationError: If n is not a positive multiple of the panel count
    """
    if n == rule.n:
        return rule
    if n < rule.panels or n % rule.panels:
        raise ConfigurationError(f"{n} nodes do not split over {rule.panels} panels")
    return panel_rule(*rule.interval, rule.panels, n // rule.panels)


def coarse_size(rule: QuadratureRule) -> int:
    """Coarse node count of the n -> 2n pair that includes rule.

    Even per-panel counts are halved, so rule is the fine level; odd ones
    cannot be, so rule is the coarse level and the fine level doubles it.
    """
    per_panel = rule.n // rule.panels
    if per_panel % 2 == 0:
        return rule.n // 2
    return rule.n


def nystrom_matrix(
    kernel: KernelFn,
    rule: QuadratureRule,
    col_rule: QuadratureRule | None = None,
) -> FloatArray:
    """sqrt(w_i) K(x_i, y_j) sqrt(v_j) for row rule (x, w) and column rule (y, v)."""
    cols = rule if col_rule is None else col_rule
    k = kernel.matrix(rule.nodes, None if col_rule is None else cols.nodes)
    return np.sqrt(rule.weights)[:, None] * k * np.sqrt(cols.weights)[None, :]


def _factor(matrix: FloatArray, name: str) -> tuple[FloatArray, NDArray[np.int32]]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(matrix, check_finite=False)
    return lu, piv


def _det_from_lu(lu: FloatArray, piv: NDArray[np.int32], name: str) -> float:
    diag = np.diag(lu)
    if not np.all(np.isfinite(diag)):
        raise NumericalDomainError("Non-finite pivot in LU factorization", entry=name)
    if np.any(diag == 0.0):
        raise SingularOperatorError("Exact zero pivot: I - K is singular", entry=name)
    swaps = int(np.count_nonzero(piv != np.arange(piv.size)))
    sign = -1.0 if swaps % 2 else 1.0
    sign *= float(np.prod(np.sign(diag)))
    log_abs = float(np.sum(np.log(np.abs(diag))))
    return sign * math.exp(log_abs)


def det_of_identity_minus(matrix: FloatArray, name: str = "kernel") -> float:
    """det(I - A) for a Nystrom matrix A."""
    lu, piv = _factor(np.eye(matrix.shape[0]) - matrix, name)
    return _det_from_lu(lu, piv, name)


@dataclass
class NystromOperator:
    """I - K discretized on one rule, factored once and reused."""

    kernel: KernelFn
    rule: QuadratureRule
    _lu: tuple[FloatArray, NDArray[np.int32]] | None = field(default=None, repr=False)
    _matrix: FloatArray | None = field(default=None, repr=False)

    @property
    def matrix(self) -> FloatArray:
        """Weighted kernel matrix A."""
        if self._matrix is None:
            self._matrix = nystrom_matrix(self.kernel, self.rule)
        return self._matrix

    def _factored(self) -> tuple[FloatArray, NDArray[np.int32]]:
        if self._lu is None:
            self._lu = _factor(np.eye(self.rule.n) - self.matrix, self.kernel.name)
        return self._lu

    def det(self) -> float:
        """det(I - A)."""
        lu, piv = self._factored()
        return _det_from_lu(lu, piv, self.kernel.name)

    def solve(self, u: ArrayLike) -> FloatArray:
        """g with (I - K W) g = u at the nodes.

        Raises:
            SingularOperatorError: If the factorization has a zero pivot
        """
        lu, piv = self._factored()
        if np.any(np.diag(lu) == 0.0):
            raise SingularOperatorError(
                "Resolvent requested for a singular operator", entry=self.kernel.name
            )
        sqrt_w = np.sqrt(self.rule.weights)
        rhs = sqrt_w * np.asarray(u, dtype=float)
        h = lu_solve((lu, piv), rhs, check_finite=False)
        return np.asarray(h / sqrt_w)

    def rank_one_trace(self, u: ArrayLike, v: ArrayLike) -> float:
        """Quadrature inner product <v, (I - K)^{-1} u>."""
        g = self.solve(u)
        return float(np.sum(self.rule.weights * np.asarray(v, dtype=float) * g))


def det_fredholm(
    k: KernelFn,
    rule: QuadratureRule,
    tol: float,
    max_doublings: int = MAX_DOUBLINGS,
) -> DetResult:
    """det(I - K) on the rule, compared with the rule at half or twice the nodes.

    Each panel of a composite rule is refined on its own; see coarse_size.

    Raises:
        ConfigurationError: If tol is outside (0, MAX_TOL]
        NumericalDomainError: On a non-finite kernel entry
        SingularOperatorError: On LU breakdown
    """
    _check_tol(tol)

    def evaluate(n: int) -> float:
        return NystromOperator(k, rule_of_size(rule, n)).det()

    result = RefinementStrategy(_LOGGER).execute_with_refinement(
        evaluate,
        n=coarse_size(rule),
        tol=tol,
        max_doublings=max_doublings,
        label=f"det(I - {k.name})",
    )
    return DetResult(
        value=result.value,
        n_coarse=result.n_coarse,
        n_fine=result.n_fine,
        delta=result.delta,
        converged=result.converged,
        tol=tol,
    )


def resolvent_apply(k: KernelFn, rule: QuadratureRule, u: ArrayLike) -> FloatArray:
    """(I - K)^{-1} u at the nodes of rule."""
    return NystromOperator(k, rule).solve(u)


def rank_one_trace(
    k: KernelFn, u: ArrayLike, v: ArrayLike, rule: QuadratureRule
) -> float:
    """tr[(I - K)^{-1} u (x) v] = <v, (I - K)^{-1} u>."""
    return NystromOperator(k, rule).rank_one_trace(u, v)


def block_matrix(
    bk: BlockKernel, rules: tuple[QuadratureRule, QuadratureRule]
) -> FloatArray:
    """Nystrom matrix of a 2x2 block kernel with per-block rules."""
    (k11, k12), (k21, k22) = bk.entries
    r1, r2 = rules
    return np.block(
        [
            [nystrom_matrix(k11, r1), nystrom_matrix(k12, r1, r2)],
            [nystrom_matrix(k21, r2, r1), nystrom_matrix(k22, r2)],
        ]
    )


def det_block2(
    bk: BlockKernel,
    rules: tuple[QuadratureRule, QuadratureRule],
    tol: float,
    max_doublings: int = MAX_DOUBLINGS,
) -> DetResult:
    """det(I - K) for a 2x2 block kernel, refined like det_fredholm.

    Each block rule gets its own coarse_size; both are doubled together.
    """
    _check_tol(tol)
    r1, r2 = rules
    base1, base2 = coarse_size(r1), coarse_size(r2)

    def evaluate(n: int) -> float:
        factor = n // base1
        sized = (rule_of_size(r1, base1 * factor), rule_of_size(r2, base2 * factor))
        return det_of_identity_minus(block_matrix(bk, sized), bk.name)

    result = RefinementStrategy(_LOGGER).execute_with_refinement(
        evaluate,
        n=base1,
        tol=tol,
        max_doublings=max_doublings,
        label=f"det(I - {bk.name})",
    )
    scale = result.n_fine // base1
    return DetResult(
        value=result.value,
        n_coarse=(result.n_coarse // base1) * (base1 + base2),
        n_fine=scale * (base1 + base2),
        delta=result.delta,
        converged=result.converged,
        tol=tol,
    )


def hs_norm(
    k: KernelFn, rule: QuadratureRule, col_rule: QuadratureRule | None = None
) -> float:
    """Hilbert-Schmidt norm sqrt(sum_ij w_i v_j K(x_i, y_j)^2)."""
    return float(np.linalg.norm(nystrom_matrix(k, rule, col_rule)))


def trace_norm_bound(
    left: KernelFn,
    right: KernelFn,
    rule_x: QuadratureRule,
    rule_mid: QuadratureRule,
    rule_y: QuadratureRule,
) -> float:
    """Upper bound ||L R||_1 <= ||L||_2 ||R||_2 for a composed kernel."""
    return hs_norm(left, rule_x, rule_mid) * hs_norm(right, rule_mid, rule_y)


def compose_kernels(
    first: KernelFn, second: KernelFn, rule_mid: QuadratureRule, name: str = "product"
) -> KernelFn:
    """Nystrom composition (first o second)(x, y).

    Sum over k of w_k first(x, z_k) second(z_k, y).
    """
    z = rule_mid.nodes
    w = rule_mid.weights

    def evaluate(x: FloatArray, y: FloatArray) -> FloatArray:
        xb, yb = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        )
        left = first.evaluate(xb[..., None], z)
        right = second.evaluate(z, yb[..., None])
        return np.asarray(np.sum(left * right * w, axis=-1))

    return KernelFn(
        evaluate=evaluate,
        domain=first.domain,
        col_domain=second.columns,
        name=name,
    )
