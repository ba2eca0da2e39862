"""Distribution-level API: Tracy-Widom laws, the endpoint law and two-time laws.

The joint density of the endpoint T and the maximum M of A2(t) - t^2 is

    f(t, m) = 2^{1/3} <psi_{-t,m}, (I - B)^{-1} psi_{t,m}> F_GOE(4^{1/3} m)

with B = B_{4^{1/3} m} on L^2(0, inf). A JointDensitySolver factors I - B
once per m node and reuses it for every t.
"""

from __future__ import annotations

import logging
import math
import threading
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import TypeVar

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.interpolate import PchipInterpolator

from .config import NumericsConfig
from .const import (
    CDF_PANEL_NODES,
    CDF_PANEL_WIDTH,
    DEFAULT_ALPHAS,
    DEFAULT_BETA,
    DEFAULT_C32,
    DEFAULT_KAPPA,
    DEFAULT_T_MAX,
    DEFAULT_T_PANEL_NODES,
    DEFAULT_T_PANEL_WIDTH,
    ENDPOINT_T_LIMIT,
    JOINT_M_RANGE,
    JOINT_T_RANGE,
    MIN_T_MAX,
    MIN_TIME_GAP,
    SUP_A_RANGE,
    SUP_T_RANGE,
    TAIL_FLOOR,
    TAIL_T_RANGE,
    TWO_TIME_LEVEL_RANGE,
    TWO_TIME_S_RANGE,
    TWO_TIME_T_RANGE,
)
from .exceptions import BelowResolutionError, ConfigurationError, NumericalDomainError
from .fredholm import BlockKernel, DetResult, NystromOperator, det_block2, det_fredholm
from .helpers.numeric_validation import validate_finite, validate_in_range
from .helpers.refinement import RefinementResult, RefinementStrategy
from .kernels import (
    airy_domain,
    airy_kernel,
    b_shift,
    extended_kernel_block,
    one_sided_sup_kernel,
    psi_domain,
    shift_domain,
)
from .quadrature import QuadratureRule, composite_rule, gauss_legendre, map_rule
from .routes import (
    ROUTE_SCALAR,
    ROUTE_TRACE,
    create_joint_density_route,
    create_sup_point_route,
)
from .tails import TailRecord, upper_envelope

_LOGGER = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]
T = TypeVar("T")
R = TypeVar("R")

M_SCALE = 4.0 ** (1.0 / 3.0)


def parallel_map(
    fn: Callable[[T], R], items: Iterable[T], threads: int | None
) -> list[R]:
    """Map in a thread pool; results keep the order of items."""
    if threads == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(fn, items))


def _require_range(name: str, value: float, bounds: tuple[float, float]) -> None:
    if not validate_in_range(value, bounds[0], bounds[1]):
        raise ConfigurationError(
            f"{name} must be in [{bounds[0]}, {bounds[1]}], got {value}"
        )


def _check_cdf(result: DetResult, what: str) -> DetResult:
    """Reject CDF values outside [-10 tol, 1 + 10 tol] instead of clipping."""
    slack = 10.0 * result.tol
    if not validate_in_range(result.value, -slack, 1.0 + slack):
        raise NumericalDomainError(
            f"{what} = {result.value!r} is not a probability", entry=what
        )
    return result


def _gl_rule(cfg: NumericsConfig, domain: tuple[float, float]) -> QuadratureRule:
    return map_rule(gauss_legendre(cfg.quad_n), *domain)


def f_gue(s: float, cfg: NumericsConfig) -> DetResult:
    """F_GUE(s) = det(I - K_Ai) on L^2(s, inf).

    Raises:
        ConfigurationError: If s is not finite
    """
    if not validate_finite(s):
        raise ConfigurationError(f"GUE argument must be finite, got {s}")
    kernel = airy_kernel(airy_domain(s, cfg.trunc_pad))
    result = det_fredholm(kernel, _gl_rule(cfg, kernel.domain), cfg.tol)
    return _check_cdf(result, "F_GUE")


def f_goe(m: float, cfg: NumericsConfig) -> DetResult:
    """F_GOE(m) = det(I - P_0 B_m P_0).

    Raises:
        ConfigurationError: If m is not finite
    """
    if not validate_finite(m):
        raise ConfigurationError(f"GOE argument must be finite, got {m}")
    kernel = b_shift(m, shift_domain(m, cfg.trunc_pad))
    result = det_fredholm(kernel, _gl_rule(cfg, kernel.domain), cfg.tol)
    return _check_cdf(result, "F_GOE")


def sup_parabola_cdf(m: float, cfg: NumericsConfig) -> DetResult:
    """P(sup_t (A2(t) - t^2) <= m) = F_GOE(4^{1/3} m)."""
    return f_goe(M_SCALE * m, cfg)


def tracy_widom_table(
    kind: str, points: Sequence[float], cfg: NumericsConfig
) -> list[DetResult]:
    """F_GUE or F_GOE on a list of points, in point order."""
    if kind not in ("gue", "goe"):
        raise ConfigurationError(f"Unknown Tracy-Widom kind: {kind}")
    fn = f_gue if kind == "gue" else f_goe
    return parallel_map(lambda x: fn(float(x), cfg), points, cfg.threads)


@dataclass(frozen=True)
class DensityTable:
    """Density values on t nodes (and m nodes for the joint density)."""

    t_nodes: FloatArray
    values: FloatArray
    config: NumericsConfig
    converged: NDArray[np.bool_]
    deltas: FloatArray
    m_nodes: FloatArray | None = None

    @property
    def publishable(self) -> bool:
        """True if every value is finite and converged."""
        return bool(np.all(np.isfinite(self.values)) and np.all(self.converged))


@dataclass(frozen=True)
class MomentReport:
    """Moments of f_end restricted to [-t_max, t_max].

    The density is renormalized on the window; tail_remainder bounds the mass
    left outside it and is not folded into the moments.
    """

    total_mass: float
    variance: float
    excess_kurtosis: float
    odd_moment_1: float
    odd_moment_3: float
    tail_remainder: float
    t_max: float = DEFAULT_T_MAX
    converged: bool = True


@dataclass
class JointDensitySolver:
    """Joint density f(t, m) with one factorization of I - B per (m, n).

    Args:
        cfg: Numerical configuration
        t_max: Largest |t| the truncation of [0, inf) has to serve
        route: Joint density formula, "trace" or "det_difference"
    """

    cfg: NumericsConfig
    t_max: float = DEFAULT_T_MAX
    route: str = ROUTE_TRACE
    _operators: dict[tuple[float, int], NystromOperator] = field(
        default_factory=dict, init=False, repr=False
    )
    _endpoint: dict[float, RefinementResult[float]] = field(
        default_factory=dict, init=False, repr=False
    )
    _lock: threading.Lock = field(
        default_factory=threading.Lock, init=False, repr=False
    )

    def __post_init__(self) -> None:
        """Resolve the route strategy and the m marginalization rule."""
        self._strategy = create_joint_density_route(self.route)
        lo, hi = self.cfg.m_window
        self.m_rule = composite_rule(
            lo, hi, self.cfg.m_panel_width, self.cfg.m_panel_nodes
        )
        self._refinement = RefinementStrategy(_LOGGER)

    @property
    def base_n(self) -> int:
        """Coarse node count of the refinement pair; quad_n is one of the two."""
        n = self.cfg.quad_n
        return n // 2 if n % 2 == 0 else n

    def goe_operator(self, m: float, n: int) -> NystromOperator:
        """I - B_{4^{1/3} m} on [0, hi] with n nodes, shared between threads."""
        key = (float(m), int(n))
        with self._lock:
            operator = self._operators.get(key)
        if operator is not None:
            return operator
        hi = max(
            shift_domain(M_SCALE * m, self.cfg.trunc_pad)[1],
            psi_domain(m, self.t_max, self.cfg.trunc_pad),
        )
        kernel = b_shift(M_SCALE * m, (0.0, hi))
        operator = NystromOperator(kernel, map_rule(gauss_legendre(n), 0.0, hi))
        operator.det()
        with self._lock:
            return self._operators.setdefault(key, operator)

    def density(self, t: float, m: float) -> RefinementResult[float]:
        """f(t, m) at n and 2n nodes."""
        return self._refinement.execute_with_refinement(
            lambda n: self._strategy.evaluate(self, t, m, n),
            n=self.base_n,
            tol=self.cfg.tol,
            label=f"f(t={t:g}, m={m:g})",
        )

    def prefactor(self) -> None:
        """Factor I - B at every m node for both refinement levels."""
        sizes = (self.base_n, 2 * self.base_n)
        keys = [(float(m), n) for m in self.m_rule.nodes for n in sizes]
        parallel_map(lambda key: self.goe_operator(*key), keys, self.cfg.threads)

    def check_window(self) -> None:
        """Require the GOE mass outside the m window to be below tol.

        Raises:
            ConfigurationError: If either end of the window leaks more than tol
        """
        lo, hi = self.cfg.m_window
        below = f_goe(M_SCALE * lo, self.cfg).value
        above = 1.0 - f_goe(M_SCALE * hi, self.cfg).value
        if below > self.cfg.tol or above > self.cfg.tol:
            raise ConfigurationError(
                f"m window {self.cfg.m_window} too small: mass {below:.2e} below, "
                f"{above:.2e} above (tol {self.cfg.tol:.1e})"
            )

    def endpoint(self, t: float) -> RefinementResult[float]:
        """f_end(t) = int f(t, m) dm over the m window."""
        key = float(t)
        with self._lock:
            cached = self._endpoint.get(key)
        if cached is not None:
            return cached
        results = [self.density(t, float(m)) for m in self.m_rule.nodes]
        weights = self.m_rule.weights
        value = float(np.dot(weights, [r.value for r in results]))
        delta = float(np.dot(weights, [r.delta for r in results]))
        result = RefinementResult(
            converged=all(r.converged for r in results),
            value=value,
            n_coarse=min(r.n_coarse for r in results),
            n_fine=max(r.n_fine for r in results),
            delta=delta,
            doublings=max(r.doublings for r in results),
        )
        with self._lock:
            self._endpoint[key] = result
        return result


@lru_cache(maxsize=8)
def _solver(
    cfg: NumericsConfig, t_max: float, route: str = ROUTE_TRACE
) -> JointDensitySolver:
    solver = JointDensitySolver(cfg, t_max=t_max, route=route)
    solver.check_window()
    return solver


def _solver_for(
    cfg: NumericsConfig, t_values: Iterable[float], route: str = ROUTE_TRACE
) -> JointDensitySolver:
    reach = max((abs(float(t)) for t in t_values), default=0.0)
    t_max = DEFAULT_T_MAX if reach <= DEFAULT_T_MAX else ENDPOINT_T_LIMIT
    return _solver(cfg, t_max, route)


def joint_density(
    t: float, m: float, cfg: NumericsConfig, route: str = ROUTE_TRACE
) -> float:
    """Joint density f(t, m) of the endpoint and the maximum.

    Raises:
        ConfigurationError: If t or m is outside its tabulated range
    """
    _require_range("t", t, JOINT_T_RANGE)
    _require_range("m", m, JOINT_M_RANGE)
    return _solver_for(cfg, [t], route).density(t, m).value


def joint_density_table(
    t_nodes: Sequence[float],
    m_nodes: Sequence[float],
    cfg: NumericsConfig,
    route: str = ROUTE_TRACE,
) -> DensityTable:
    """f(t, m) on a tensor grid; rows follow t_nodes, columns m_nodes."""
    for t in t_nodes:
        _require_range("t", t, JOINT_T_RANGE)
    for m in m_nodes:
        _require_range("m", m, JOINT_M_RANGE)
    solver = _solver_for(cfg, t_nodes, route)
    pairs = [(float(t), float(m)) for t in t_nodes for m in m_nodes]
    results = parallel_map(lambda p: solver.density(*p), pairs, cfg.threads)
    shape = (len(t_nodes), len(m_nodes))
    _LOGGER.debug("Joint density table %dx%d done", *shape)
    return DensityTable(
        t_nodes=np.asarray(t_nodes, dtype=float),
        m_nodes=np.asarray(m_nodes, dtype=float),
        values=np.array([r.value for r in results]).reshape(shape),
        converged=np.array([r.converged for r in results]).reshape(shape),
        deltas=np.array([r.delta for r in results]).reshape(shape),
        config=cfg,
    )


def _endpoint_results(
    solver: JointDensitySolver, t_nodes: Sequence[float]
) -> list[RefinementResult[float]]:
    solver.prefactor()
    nodes = [float(t) for t in t_nodes]
    results = parallel_map(solver.endpoint, nodes, solver.cfg.threads)
    _LOGGER.debug("Endpoint density at %d nodes done", len(results))
    return results


def endpoint_density(t: float, cfg: NumericsConfig) -> float:
    """Endpoint density f_end(t), the m-marginal of the joint density.

    Raises:
        ConfigurationError: If |t| exceeds the tabulated range or the m window
            leaks more than tol
    """
    _require_range("t", t, (-ENDPOINT_T_LIMIT, ENDPOINT_T_LIMIT))
    return _solver_for(cfg, [t]).endpoint(t).value


def endpoint_density_table(
    t_nodes: Sequence[float], cfg: NumericsConfig
) -> DensityTable:
    """f_end on a list of t nodes, in node order."""
    for t in t_nodes:
        _require_range("t", t, (-ENDPOINT_T_LIMIT, ENDPOINT_T_LIMIT))
    results = _endpoint_results(_solver_for(cfg, t_nodes), t_nodes)
    return DensityTable(
        t_nodes=np.asarray(t_nodes, dtype=float),
        values=np.array([r.value for r in results]),
        converged=np.array([r.converged for r in results]),
        deltas=np.array([r.delta for r in results]),
        config=cfg,
    )


def endpoint_moments(cfg: NumericsConfig, t_max: float = DEFAULT_T_MAX) -> MomentReport:
    """Mass, variance, excess kurtosis and odd moments of f_end on [-t_max, t_max].

    Raises:
        ConfigurationError: If t_max is below MIN_T_MAX or above ENDPOINT_T_LIMIT
    """
    _require_range("t_max", t_max, (MIN_T_MAX, ENDPOINT_T_LIMIT))
    rule = composite_rule(-t_max, t_max, DEFAULT_T_PANEL_WIDTH, DEFAULT_T_PANEL_NODES)
    table = endpoint_density_table(list(rule.nodes), cfg)
    t = rule.nodes
    f = table.values
    mass = rule.integrate(f)
    mean = rule.integrate(t * f) / mass
    third = rule.integrate(t**3 * f) / mass
    centered = t - mean
    second = rule.integrate(centered**2 * f) / mass
    fourth = rule.integrate(centered**4 * f) / mass
    report = MomentReport(
        total_mass=mass,
        variance=second,
        excess_kurtosis=fourth / (second * second) - 3.0,
        odd_moment_1=mean,
        odd_moment_3=third,
        tail_remainder=2.0 * upper_envelope(t_max, 1.0, DEFAULT_C32),
        t_max=t_max,
        converged=table.publishable,
    )
    _LOGGER.info(
        "Endpoint moments: mass %.10f, variance %.6f, excess kurtosis %.6f",
        report.total_mass,
        report.variance,
        report.excess_kurtosis,
    )
    return report


def _half_line_integral(
    solver: JointDensitySolver, lo: float, hi: float
) -> tuple[float, bool]:
    rule = composite_rule(lo, hi, DEFAULT_T_PANEL_WIDTH, DEFAULT_T_PANEL_NODES)
    results = _endpoint_results(solver, list(rule.nodes))
    value = rule.integrate(np.array([r.value for r in results]))
    return value, all(r.converged for r in results)


def _endpoint_tail(t: float, cfg: NumericsConfig, t_max: float) -> tuple[float, bool]:
    _require_range("t", t, TAIL_T_RANGE)
    _require_range("t_max", t_max, (MIN_T_MAX, ENDPOINT_T_LIMIT))
    if t == 0.0:
        return 1.0, True
    solver = _solver_for(cfg, [t_max])
    total, total_ok = _half_line_integral(solver, 0.0, t_max)
    part, part_ok = _half_line_integral(solver, t, t_max)
    tail = part / total
    if tail < TAIL_FLOOR:
        raise BelowResolutionError(
            f"P(|T| > {t}) = {tail:.3e} is below {TAIL_FLOOR:g}",
            entry="endpoint_tail",
            x=t,
        )
    converged = total_ok and part_ok
    if not converged:
        _LOGGER.warning("P(|T| > %s) did not converge to tol %g", t, cfg.tol)
    return tail, converged


def endpoint_tail(t: float, cfg: NumericsConfig, t_max: float = DEFAULT_T_MAX) -> float:
    """P(|T| > t) as int_t^{t_max} f_end / int_0^{t_max} f_end.

    Raises:
        ConfigurationError: If t is outside TAIL_T_RANGE
        BelowResolutionError: If the tail is below TAIL_FLOOR
    """
    return _endpoint_tail(t, cfg, t_max)[0]


def endpoint_tail_record(
    t: float,
    cfg: NumericsConfig,
    c: float = 1.0,
    c32: float = DEFAULT_C32,
    kappa: float = DEFAULT_KAPPA,
) -> TailRecord:
    """endpoint_tail(t) with both envelopes at t and its convergence flag."""
    prob, converged = _endpoint_tail(t, cfg, DEFAULT_T_MAX)
    return TailRecord.from_probability(
        t, prob, c=c, c32=c32, kappa=kappa, converged=converged
    )


@dataclass(frozen=True)
class EndpointCdf:
    """Monotone interpolation of the endpoint CDF between panel edges."""

    edges: FloatArray
    values: FloatArray
    converged: bool = True
    _interp: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        """Build the interpolant."""
        object.__setattr__(
            self,
            "_interp",
            PchipInterpolator(self.edges, self.values, extrapolate=False),
        )

    @property
    def support(self) -> tuple[float, float]:
        """Interval the table covers."""
        return (float(self.edges[0]), float(self.edges[-1]))

    def __call__(self, x: ArrayLike) -> FloatArray:
        """CDF at x; 0 left of the support and 1 right of it."""
        xa = np.asarray(x, dtype=float)
        inside = np.asarray(self._interp(xa))
        lo, hi = self.support
        return np.where(xa < lo, 0.0, np.where(xa > hi, 1.0, inside))

    def quantile(self, p: ArrayLike) -> FloatArray:
        """Piecewise-linear inverse on the panel edges."""
        return np.asarray(np.interp(p, self.values, self.edges))

    def shifted(self, delta: float) -> EndpointCdf:
        """CDF of T + delta."""
        return EndpointCdf(
            edges=self.edges + delta, values=self.values, converged=self.converged
        )


def endpoint_cdf(cfg: NumericsConfig, t_max: float = DEFAULT_T_MAX) -> EndpointCdf:
    """Endpoint CDF on [-t_max, t_max] from panel integrals of f_end."""
    _require_range("t_max", t_max, (MIN_T_MAX, ENDPOINT_T_LIMIT))
    rule = composite_rule(-t_max, t_max, CDF_PANEL_WIDTH, CDF_PANEL_NODES)
    panels = rule.n // CDF_PANEL_NODES
    table = endpoint_density_table(list(rule.nodes), cfg)
    pieces = (rule.weights * table.values).reshape(panels, CDF_PANEL_NODES).sum(axis=1)
    cumulative = np.concatenate([[0.0], np.cumsum(pieces)])
    return EndpointCdf(
        edges=np.linspace(-t_max, t_max, panels + 1),
        values=cumulative / cumulative[-1],
        converged=table.publishable,
    )


def _one_sided_sup(t: float, a: float, cfg: NumericsConfig) -> DetResult:
    kernel = one_sided_sup_kernel(a, t, cfg.trunc_pad)
    return _check_cdf(
        det_fredholm(kernel, _gl_rule(cfg, kernel.domain), cfg.tol), "one-sided sup CDF"
    )


def one_sided_sup_cdf(t: float, a: float, cfg: NumericsConfig) -> DetResult:
    """P(A2(x) - x^2 <= a for all x <= t).

    Raises:
        ConfigurationError: If t or a is outside its range
    """
    _require_range("t", t, SUP_T_RANGE)
    _require_range("a", a, SUP_A_RANGE)
    return _one_sided_sup(t, a, cfg)


def _sup_point(
    t: float, s: float, a: float, b: float, cfg: NumericsConfig, route: str
) -> DetResult:
    result = create_sup_point_route(route).evaluate(t, s, a, b, cfg)
    return _check_cdf(result, f"sup/point CDF ({route})")


def joint_sup_point_cdf(
    t: float,
    s: float,
    a: float,
    b: float,
    cfg: NumericsConfig,
    route: str = ROUTE_SCALAR,
) -> DetResult:
    """P(A2(x) - x^2 <= a for x <= t, A2(t + s) - (t + s)^2 <= b).

    Raises:
        ConfigurationError: On parameters outside range or an unknown route
    """
    _require_range("t", t, TWO_TIME_T_RANGE)
    _require_range("s", s, TWO_TIME_S_RANGE)
    _require_range("a", a, TWO_TIME_LEVEL_RANGE)
    _require_range("b", b, TWO_TIME_LEVEL_RANGE)
    return _sup_point(t, s, a, b, cfg, route)


def two_time_cdf(
    t0: float, x0: float, t1: float, x1: float, cfg: NumericsConfig
) -> DetResult:
    """P(A2(t0) <= x0, A2(t1) <= x1) from the extended Airy kernel.

    Raises:
        ConfigurationError: If t1 - t0 < MIN_TIME_GAP or a level is not finite
    """
    if not (validate_finite(x0) and validate_finite(x1)):
        raise ConfigurationError(f"Levels must be finite, got {x0}, {x1}")
    if not t1 - t0 >= MIN_TIME_GAP:
        raise ConfigurationError(f"Need t1 - t0 >= {MIN_TIME_GAP}, got {t1 - t0}")
    first = airy_domain(x0, cfg.trunc_pad)
    second = airy_domain(x1, cfg.trunc_pad)
    block = BlockKernel(
        entries=(
            (airy_kernel(first), extended_kernel_block(t0, t1, first, second)),
            (extended_kernel_block(t1, t0, second, first), airy_kernel(second)),
        ),
        name=f"K_ext({t0:g},{t1:g})",
    )
    result = det_block2(block, (_gl_rule(cfg, first), _gl_rule(cfg, second)), cfg.tol)
    return _check_cdf(result, "two-time CDF")


@dataclass(frozen=True)
class DecorrelationRow:
    """Sup/point law against the product of its marginals at s = alpha t."""

    alpha: float
    s: float
    joint: float
    sup_marginal: float
    point_marginal: float
    ratio_minus_one: float
    converged: bool


def decorrelation_table(
    t: float,
    cfg: NumericsConfig,
    beta: float = DEFAULT_BETA,
    alphas: Sequence[float] = DEFAULT_ALPHAS,
    route: str = ROUTE_SCALAR,
) -> list[DecorrelationRow]:
    """joint / (sup marginal x point marginal) - 1 at a = b = beta t^2, s = alpha t."""
    if t <= 0.0 or beta < 0.0:
        raise ConfigurationError(
            f"Decorrelation needs t > 0 and beta >= 0, got {t}, {beta}"
        )
    level = beta * t * t
    sup = _one_sided_sup(t, level, cfg)

    def row(alpha: float) -> DecorrelationRow:
        if alpha <= 0.0:
            raise ConfigurationError(f"alpha must be positive, got {alpha}")
        s = alpha * t
        joint = _sup_point(t, s, level, level, cfg, route)
        point = f_gue(level + (t + s) ** 2, cfg)
        product = sup.value * point.value
        return DecorrelationRow(
            alpha=float(alpha),
            s=s,
            joint=joint.value,
            sup_marginal=sup.value,
            point_marginal=point.value,
            ratio_minus_one=joint.value / product - 1.0 if product > 0.0 else math.nan,
            converged=joint.converged and point.converged and sup.converged,
        )

    return parallel_map(row, list(alphas), cfg.threads)
