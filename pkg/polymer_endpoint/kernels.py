"""Integral kernels built from the Airy function.

Every kernel is exposed as a KernelFn whose evaluate broadcasts, so the same
code path serves pointwise checks and Nystrom assembly. Kernels containing
exponential weights take them as log weights folded into exponentially
scaled Airy values, so e^{cx} is never formed next to a tiny Ai.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .airyfn import ai_pair, weighted_ai, weighted_ai_pair
from .const import DEFAULT_TRUNC_PAD, TRUNCATION_TOL
from .exceptions import ConfigurationError, NumericalDomainError
from .fredholm import BlockKernel, KernelFn
from .quadrature import DecayEnvelope, QuadratureRule, choose_truncation, composite_rule

FloatArray = NDArray[np.float64]

CBRT2 = 2.0 ** (1.0 / 3.0)

# Below this separation K_Ai uses its diagonal expansion
_DIAGONAL_GAP = 1e-4
_LAMBDA_PANEL = 1.0
_LAMBDA_NODES = 16
# Ai(z) < 1e-16 for z beyond this point
_AIRY_NEGLIGIBLE = (1.5 * -math.log(TRUNCATION_TOL)) ** (2.0 / 3.0)


def _finite_output(values: FloatArray, name: str) -> FloatArray:
    if not np.all(np.isfinite(values)):
        raise NumericalDomainError("Non-finite intermediate value", entry=name)
    return values


def _scalar_or_array(values: FloatArray, scalar: bool) -> FloatArray | float:
    return float(values) if scalar else values


def _is_grid(x: FloatArray, y: FloatArray) -> bool:
    return x.ndim == 2 and y.ndim == 2 and x.shape[1] == 1 and y.shape[0] == 1


def _pair_integral(
    left: Callable[[FloatArray], FloatArray],
    right: Callable[[FloatArray], FloatArray],
    x: FloatArray,
    y: FloatArray,
) -> FloatArray:
    """sum_k left(x)_k right(y)_k, as a matrix product on a column/row grid."""
    if _is_grid(x, y):
        return np.asarray(left(x[:, 0]) @ right(y[0, :]).T)
    xb, yb = np.broadcast_arrays(x, y)
    flat = np.sum(left(xb.ravel()) * right(yb.ravel()), axis=1)
    return np.asarray(flat.reshape(xb.shape))


def _weighted_k_airy(
    x: FloatArray, y: FloatArray, log_wx: ArrayLike, log_wy: ArrayLike
) -> FloatArray:
    """exp(log_wx) K_Ai(x, y) exp(log_wy), weights folded into scaled Airy values."""
    ax, apx = weighted_ai_pair(x, log_wx)
    ay, apy = weighted_ai_pair(y, log_wy)
    diff = x - y
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.asarray((ax * apy - apx * ay) / diff)
    near = np.abs(diff) < _DIAGONAL_GAP
    if np.any(near):
        shape = np.broadcast(x, y).shape
        out = np.array(np.broadcast_to(out, shape))
        xb, yb = np.broadcast_arrays(x, y)
        lx = np.broadcast_to(np.asarray(log_wx, dtype=float), shape)[near]
        ly = np.broadcast_to(np.asarray(log_wy, dtype=float), shape)[near]
        out[near] = _diagonal_series(xb[near], yb[near]) * np.exp(lx + ly)
    return out


def _diagonal_series(x: FloatArray, y: FloatArray) -> FloatArray:
    """K_Ai near the diagonal to fourth order in x - y."""
    c = 0.5 * (x + y)
    d = 0.5 * (x - y)
    a, a1 = ai_pair(c)
    diag = a1 * a1 - c * a * a
    return np.asarray(diag + d * d * (a * a1 / 3.0 + (2.0 / 3.0) * c * diag))


def k_airy(x: ArrayLike, y: ArrayLike) -> FloatArray | float:
    """Airy kernel K_Ai(x, y) = int_0^inf Ai(x + l) Ai(y + l) dl.

    Closed form (Ai(x)Ai'(y) - Ai'(x)Ai(y)) / (x - y), with a series on the
    diagonal.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    ax, apx = ai_pair(xa)
    ay, apy = ai_pair(ya)
    diff = xa - ya
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.asarray((ax * apy - apx * ay) / diff)
    near = np.abs(diff) < _DIAGONAL_GAP
    if np.any(near):
        out = np.array(np.broadcast_to(out, np.broadcast(xa, ya).shape))
        xb, yb = np.broadcast_arrays(xa, ya)
        out[near] = _diagonal_series(xb[near], yb[near])
    return _scalar_or_array(out, out.ndim == 0)


def heat_kernel(s: float, x: ArrayLike, y: ArrayLike) -> FloatArray | float:
    """Kernel of e^{-sH}: int e^{s l} Ai(x + l) Ai(y + l) dl over the real line.

    Raises:
        ConfigurationError: If s <= 0
    """
    if s <= 0.0:
        raise ConfigurationError(f"Heat kernel needs s > 0, got {s}")
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    out = np.exp(_log_heat(s, xa, ya))
    return _scalar_or_array(out, out.ndim == 0)


def _log_heat(s: float, x: FloatArray, y: FloatArray) -> FloatArray:
    return np.asarray(
        -0.5 * math.log(4.0 * math.pi * s)
        - (x - y) ** 2 / (4.0 * s)
        - 0.5 * s * (x + y)
        + s**3 / 12.0
    )


def truncated_domain(
    lo: float,
    envelopes: list[DecayEnvelope],
    pad: float = DEFAULT_TRUNC_PAD,
) -> tuple[float, float]:
    """[lo, hi] with hi past the cutoff of every envelope."""
    hi = max(
        choose_truncation(env, TRUNCATION_TOL, lo=lo, pad=pad).hi for env in envelopes
    )
    return (float(lo), float(hi))


def airy_domain(lo: float, pad: float = DEFAULT_TRUNC_PAD) -> tuple[float, float]:
    """Truncation of [lo, inf) for K_Ai."""
    return truncated_domain(lo, [DecayEnvelope(coeff=4.0 / 3.0)], pad)


def airy_kernel(domain: tuple[float, float]) -> KernelFn:
    """K_Ai restricted to domain."""

    def evaluate(x: FloatArray, y: FloatArray) -> FloatArray:
        return np.asarray(k_airy(x, y))

    return KernelFn(
        evaluate=evaluate,
        domain=domain,
        decay=DecayEnvelope(coeff=4.0 / 3.0),
        symmetric=True,
        name="K_Ai",
    )


def shift_domain(m: float, pad: float = DEFAULT_TRUNC_PAD) -> tuple[float, float]:
    """Truncation of [0, inf) for B_m; the diagonal is Ai(2x + m)."""
    envelope = DecayEnvelope(coeff=(2.0 / 3.0) * 2.0**1.5, shift=0.5 * m)
    return truncated_domain(0.0, [envelope], pad)


def b_shift(m: float, domain: tuple[float, float] | None = None) -> KernelFn:
    """B_m(x, y) = Ai(x + y + m), by default on the truncation of [0, inf)."""
    if not math.isfinite(m):
        raise ConfigurationError(f"Shift must be finite, got {m}")

    def evaluate(x: FloatArray, y: FloatArray) -> FloatArray:
        values, _ = ai_pair(x + y + m)
        return values

    return KernelFn(
        evaluate=evaluate,
        domain=shift_domain(m) if domain is None else domain,
        decay=DecayEnvelope(coeff=(2.0 / 3.0) * 2.0**1.5, shift=0.5 * m),
        symmetric=True,
        name=f"B_{m:g}",
    )


def factorized_shift_kernel(m: float, x: float, y: float, eps: float = 1.0) -> float:
    """2^{1/3} int Q1(x, l) Q2(l, y) dl, which equals B_{4^{1/3} m}(x, y).

    Q1(x, l) = Ai(2^{1/3}x + m + l) e^{eps l / 2} and
    Q2(l, y) = e^{-eps l / 2} Ai(2^{1/3}y + m - l); eps only moves weight
    between the factors.
    """
    a = CBRT2 * x + m
    b = CBRT2 * y + m
    lo = -(_AIRY_NEGLIGIBLE + 10.0 - b)
    hi = _AIRY_NEGLIGIBLE + 10.0 - a
    if hi <= lo:
        return 0.0
    rule = composite_rule(lo, hi, _LAMBDA_PANEL, _LAMBDA_NODES)
    lam = rule.nodes
    q1 = weighted_ai(a + lam, 0.5 * eps * lam)
    q2 = weighted_ai(b - lam, -0.5 * eps * lam)
    return float(CBRT2 * np.sum(rule.weights * q1 * q2))


def _lambda_rule(growth: float, shift: float) -> QuadratureRule:
    """Panels on [0, L] for int_0^inf e^{growth l} Ai(x + l) Ai(y + l) dl."""
    envelope = DecayEnvelope(growth=growth, coeff=2.0 / 3.0, shift=shift)
    cut = choose_truncation(envelope, TRUNCATION_TOL, lo=0.0, pad=DEFAULT_TRUNC_PAD)
    return composite_rule(0.0, cut.hi, _LAMBDA_PANEL, _LAMBDA_NODES)


def _semigroup_part(
    x: FloatArray,
    y: FloatArray,
    rule: QuadratureRule,
    growth: float,
    log_wx: Callable[[FloatArray], FloatArray] | None = None,
    log_wy: Callable[[FloatArray], FloatArray] | None = None,
) -> FloatArray:
    """exp(log_wx) [int_0^L e^{growth l} Ai(x + l) Ai(y + l) dl] exp(log_wy)."""
    lam = rule.nodes
    log_lam = growth * lam + np.log(rule.weights)

    def left(points: FloatArray) -> FloatArray:
        extra = 0.0 if log_wx is None else log_wx(points)[:, None]
        return weighted_ai(points[:, None] + lam, log_lam + extra)

    def right(points: FloatArray) -> FloatArray:
        extra = 0.0 if log_wy is None else log_wy(points)[:, None]
        return weighted_ai(points[:, None] + lam, extra)

    return _pair_integral(left, right, x, y)


def semigroup_kernel(
    s: float,
    domain: tuple[float, float] = (-8.0, 20.0),
    col_domain: tuple[float, float] | None = None,
) -> KernelFn:
    """e^{sH}K_Ai for s > 0; for s < 0 the kernel of e^{-|s|H}(I - K_Ai).

    s > 0: int_0^inf e^{-s l} Ai(x + l) Ai(y + l) dl.
    s < 0: int_{-inf}^0 e^{|s| l} Ai(x + l) Ai(y + l) dl, computed as the heat
    kernel of e^{-|s|H} minus the half-line integral over (0, inf).

    Raises:
        ConfigurationError: If s is zero or not finite
    """
    if s == 0.0 or not math.isfinite(s):
        raise ConfigurationError(f"Semigroup time must be finite and nonzero, got {s}")
    cols = domain if col_domain is None else col_domain
    shift = max(domain[0], cols[0])
    rule = _lambda_rule(-s, shift)
    name = f"e^({s:g}H)K_Ai" if s > 0 else f"e^({s:g}H)(I-K_Ai)"

    def evaluate(x: FloatArray, y: FloatArray) -> FloatArray:
        half_line = _semigroup_part(x, y, rule, -s)
        if s > 0.0:
            return half_line
        return np.asarray(np.exp(_log_heat(-s, x, y)) - half_line)

    return KernelFn(
        evaluate=evaluate,
        domain=domain,
        col_domain=col_domain,
        symmetric=True,
        name=name,
    )


def extended_kernel(t: float, xi: float, t_prime: float, xi_prime: float) -> float:
    """Extended Airy kernel between times t and t'.

    int_0^inf e^{-l(t - t')} Ai(xi + l) Ai(xi' + l) dl for t >= t', and
    -int_{-inf}^0 e^{-l(t - t')} Ai(xi + l) Ai(xi' + l) dl for t < t'.
    """
    gap = t - t_prime
    if gap == 0.0:
        return float(k_airy(xi, xi_prime))
    lo = min(xi, xi_prime)
    kernel = semigroup_kernel(gap, domain=(lo, max(xi, xi_prime)))
    value = float(kernel(xi, xi_prime))
    return value if gap > 0.0 else -value


def extended_kernel_block(
    t: float,
    t_prime: float,
    domain: tuple[float, float],
    col_domain: tuple[float, float],
) -> KernelFn:
    """Extended Airy kernel from time t' functions to time t functions."""
    gap = t - t_prime
    if gap == 0.0:
        base = airy_kernel(domain)
        return KernelFn(base.evaluate, domain, col_domain, symmetric=True, name="K_Ai")
    kernel = semigroup_kernel(gap, domain=domain, col_domain=col_domain)
    if gap > 0.0:
        return kernel

    def evaluate(x: FloatArray, y: FloatArray) -> FloatArray:
        return -kernel.evaluate(x, y)

    return KernelFn(
        evaluate=evaluate,
        domain=domain,
        col_domain=col_domain,
        name=f"K_ext({t:g},{t_prime:g})",
    )


def psi(t: float, m: float, x: ArrayLike) -> FloatArray:
    """psi_{t,m}(x) = 2 e^{xt} [t Ai(x + m + t^2) + Ai'(x + m + t^2)]."""
    xa = np.asarray(x, dtype=float)
    value, prime = weighted_ai_pair(xa + m + t * t, t * xa)
    return np.asarray(2.0 * (t * value + prime))


@dataclass(frozen=True)
class PsiVector:
    """Samples of psi_{t,m}(2^{1/3} x) on the nodes of a rule."""

    t: float
    m: float
    samples: FloatArray
    nodes: FloatArray


def psi_vector(t: float, m: float, rule: QuadratureRule) -> PsiVector:
    """psi_{t,m}(2^{1/3} x_i) at the nodes x_i of rule."""
    samples = _finite_output(psi(t, m, CBRT2 * rule.nodes), "psi")
    return PsiVector(t=t, m=m, samples=samples, nodes=rule.nodes)


def psi_domain(m: float, t_max: float, pad: float = DEFAULT_TRUNC_PAD) -> float:
    """Cutoff in x for psi_{t,m}(2^{1/3} x)^2 over |t| <= t_max."""
    cut = 0.0
    for t in np.linspace(0.0, t_max, 4):
        envelope = DecayEnvelope(growth=2.0 * t, coeff=4.0 / 3.0, shift=m + t * t)
        root = choose_truncation(envelope, TRUNCATION_TOL, lo=0.0, pad=0.0).hi
        cut = max(cut, root / CBRT2)
    return cut + pad


@dataclass(frozen=True)
class ReflectionSpec:
    """Q = P_c (I + M rho) with edge c = a + t^2.

    (Q f)(x) = 1{x >= c} [f(x) + e^{2t(x - c)} f(2c - x)].
    """

    a: float
    t: float

    @property
    def edge(self) -> float:
        """Projection edge a + t^2."""
        return self.a + self.t * self.t

    def reflect(self, x: ArrayLike) -> FloatArray:
        """Mirror image 2c - x."""
        return np.asarray(2.0 * self.edge - np.asarray(x, dtype=float))

    def log_factor(self, x: ArrayLike) -> FloatArray:
        """Exponent 2t(x - c) of the reflected term."""
        return np.asarray(2.0 * self.t * (np.asarray(x, dtype=float) - self.edge))

    def apply(
        self, f: Callable[[FloatArray], FloatArray], x: ArrayLike
    ) -> FloatArray:
        """(Q f)(x)."""
        xa = np.asarray(x, dtype=float)
        inside = xa >= self.edge
        out = np.zeros_like(xa)
        xi = xa[inside]
        out[inside] = f(xi) + np.exp(self.log_factor(xi)) * f(self.reflect(xi))
        return out


def _log_phi(x: FloatArray) -> FloatArray:
    return np.asarray(0.5 * np.log1p(x * x))


def one_sided_sup_kernel(
    a: float, t: float, pad: float = DEFAULT_TRUNC_PAD
) -> KernelFn:
    """Kernel on [0, inf) whose determinant is P(A2(x) - x^2 <= a for x <= t).

    Reduction of det(I - K_Ai Q K_Ai) through K_Ai = B_0 P_0 B_0, conjugated by
    e^{tx}:

        e^{t(x-y)} [K_Ai(x+c, y+c) - J(x, y)] + 2^{-1/3} Ai(2^{-1/3}(x + y + 2a))

    with J(x, y) = int_{-inf}^0 e^{2tl} Ai(x+c+l) Ai(c+y-l) dl and c = a + t^2.
    """
    spec = ReflectionSpec(a, t)
    c = spec.edge
    domain = truncated_domain(
        0.0,
        [
            DecayEnvelope(growth=t, coeff=2.0 / 3.0, shift=c),
            DecayEnvelope(coeff=4.0 / 3.0, shift=a),
            DecayEnvelope(growth=-t, coeff=2.0 / 3.0, shift=2.0 * a - 2.0 * t * t),
        ],
        pad,
    )
    # Tail of J is bounded by Ai(c - l) times max_l e^{2tl} Ai(c + l)
    excess = max(0.0, (2.0 / 3.0) * t**3 - 2.0 * t * a)
    reach = (1.5 * (-math.log(TRUNCATION_TOL) + excess)) ** (2.0 / 3.0)
    j_rule = composite_rule(
        -(max(reach - c, 0.0) + pad), 0.0, _LAMBDA_PANEL, _LAMBDA_NODES
    )
    lam = j_rule.nodes
    log_lam = 2.0 * t * lam + np.log(j_rule.weights)

    def left(points: FloatArray) -> FloatArray:
        return weighted_ai(points[:, None] + c + lam, t * points[:, None] + log_lam)

    def right(points: FloatArray) -> FloatArray:
        return weighted_ai(c + points[:, None] - lam, -t * points[:, None])

    def evaluate(x: FloatArray, y: FloatArray) -> FloatArray:
        kernel = _weighted_k_airy(x + c, y + c, t * x, -t * y)
        j = _pair_integral(left, right, x, y)
        arg = (x + y + 2.0 * a) / CBRT2
        values, _ = ai_pair(arg)
        return np.asarray(kernel - j + values / CBRT2)

    return KernelFn(evaluate=evaluate, domain=domain, name=f"S(a={a:g},t={t:g})")


def scalar_route_kernel(
    a: float, t: float, s: float, b: float, pad: float = DEFAULT_TRUNC_PAD
) -> KernelFn:
    """Kernel on [0, inf) for the sup/point law via the scalar determinant.

    det(I - K_Ai X K_Ai) with X = Q - Q e^{-sH} P_2 e^{sH} + e^{-sH} P_2 e^{sH},
    reduced through K_Ai = B_0 P_0 B_0 and conjugated by e^{tx}. The middle
    term uses the heat kernel of e^{-sH} between the two projections.
    """
    if t <= 0.0 or s <= 0.0:
        raise ConfigurationError(f"Scalar route needs t, s > 0, got t={t}, s={s}")
    sup = one_sided_sup_kernel(a, t, pad)
    spec = ReflectionSpec(a, t)
    c = spec.edge
    r = b + (t + s) ** 2
    _, hi = truncated_domain(
        0.0,
        [DecayEnvelope(growth=s + t, coeff=2.0 / 3.0, shift=r)],
        pad,
    )
    domain = (0.0, max(hi, sup.domain[1]))

    z_hi = choose_truncation(
        DecayEnvelope(growth=2.0 * t, coeff=2.0 / 3.0), TRUNCATION_TOL, lo=c, pad=pad
    ).hi
    w_hi = choose_truncation(
        DecayEnvelope(coeff=2.0 / 3.0), TRUNCATION_TOL, lo=r, pad=pad
    ).hi
    z_rule = composite_rule(c, z_hi, _LAMBDA_PANEL, _LAMBDA_NODES)
    w_rule = composite_rule(r, w_hi, _LAMBDA_PANEL, _LAMBDA_NODES)
    z = z_rule.nodes
    w = w_rule.nodes
    direct = _log_heat(s, z[:, None], w[None, :])
    mirrored = _log_heat(s, spec.reflect(z)[:, None], w[None, :]) + spec.log_factor(
        z
    )[:, None]
    middle = _finite_output(
        (np.exp(direct) + np.exp(mirrored))
        * z_rule.weights[:, None]
        * w_rule.weights[None, :],
        "heat",
    )

    def left(points: FloatArray) -> FloatArray:
        rows = weighted_ai(points[:, None] + z, t * points[:, None])
        return np.asarray(rows @ middle)

    def right(points: FloatArray) -> FloatArray:
        return weighted_ai(points[:, None] + w, -(s + t) * points[:, None])

    def evaluate(x: FloatArray, y: FloatArray) -> FloatArray:
        first = sup.evaluate(x, y)
        second = -_pair_integral(left, right, x, y)
        third = _weighted_k_airy(x + r, y + r, (s + t) * x, -(s + t) * y)
        return np.asarray(first + second + third)

    return KernelFn(
        evaluate=evaluate,
        domain=domain,
        name=f"Z(a={a:g},t={t:g},s={s:g},b={b:g})",
    )


def q_block_domains(
    a: float, t: float, s: float, b: float, pad: float = DEFAULT_TRUNC_PAD
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Shifted domains [0, hi] for the two blocks of the matrix route."""
    c = a + t * t
    r = b + (t + s) ** 2
    first = truncated_domain(
        0.0, [DecayEnvelope(growth=2.0 * t, coeff=2.0 / 3.0, shift=c)], pad
    )
    second = truncated_domain(0.0, [DecayEnvelope(coeff=2.0 / 3.0, shift=r)], pad)
    return first, second


def q_composed_kernels(
    a: float,
    t: float,
    s: float,
    b: float,
    reflection: bool = True,
    pad: float = DEFAULT_TRUNC_PAD,
) -> BlockKernel:
    """Conjugated 2x2 kernel for the sup/point law.

    Entries, in variables shifted to the projection edges (x = c + u,
    y = r + v):

        G Q K_Ai P_1 G^{-1}        G Q e^{-sH}(K_Ai - I) P_2
        P_2 e^{sH} K_Ai P_1 G^{-1}  P_2 K_Ai P_2

    with G f(x) = e^{-2tx} (1 + x^2)^{-1/2} f(x) on the first block only.
    reflection=False replaces Q by P_1.
    """
    if t <= 0.0 or s <= 0.0:
        raise ConfigurationError(f"Matrix route needs t, s > 0, got t={t}, s={s}")
    spec = ReflectionSpec(a, t)
    c = spec.edge
    r = b + (t + s) ** 2
    dom1, dom2 = q_block_domains(a, t, s, b, pad)
    mirror = 1.0 if reflection else 0.0

    def k11(u: FloatArray, u2: FloatArray) -> FloatArray:
        x = c + u
        x2 = c + u2
        direct = _weighted_k_airy(
            x, x2, -2.0 * t * u - _log_phi(x), 2.0 * t * u2 + _log_phi(x2)
        )
        if not reflection:
            return direct
        mirrored = _weighted_k_airy(
            spec.reflect(x), x2, -_log_phi(x), 2.0 * t * u2 + _log_phi(x2)
        )
        return np.asarray(direct + mirror * mirrored)

    # (1,2): -(1/phi(x)) [e^{-2tx} L(x, y) + e^{-2tc} L(2c - x, y)], with
    # L = heat kernel minus its half-line part
    back_rule = _lambda_rule(s, r)

    def k12(u: FloatArray, v: FloatArray) -> FloatArray:
        x = c + u
        y = r + v
        x_mirror = spec.reflect(x)
        direct_log = -2.0 * t * x - _log_phi(x)
        mirror_log = -2.0 * t * c - _log_phi(x)
        heat = np.exp(_log_heat(s, x, y) + direct_log)
        half = _semigroup_part(
            x, y, back_rule, s, lambda p: -2.0 * t * p - _log_phi(p)
        )
        out = heat - half
        if reflection:
            heat_m = np.exp(_log_heat(s, x_mirror, y) + mirror_log)
            half_m = _semigroup_part(
                x_mirror,
                y,
                back_rule,
                s,
                lambda p: -2.0 * t * c - _log_phi(2.0 * c - p),
            )
            out = out + heat_m - half_m
        return np.asarray(-out)

    forward_rule = _lambda_rule(-s, min(c, r))

    def k21(v: FloatArray, u2: FloatArray) -> FloatArray:
        y = r + v
        x2 = c + u2
        return _semigroup_part(
            y, x2, forward_rule, -s, None, lambda p: 2.0 * t * p + _log_phi(p)
        )

    def k22(v: FloatArray, v2: FloatArray) -> FloatArray:
        return np.asarray(k_airy(r + v, r + v2))

    label = f"(a={a:g},t={t:g},s={s:g},b={b:g})"
    return BlockKernel(
        entries=(
            (
                KernelFn(k11, dom1, name=f"GQKP1G^-1{label}"),
                KernelFn(k12, dom1, col_domain=dom2, name=f"GQe^-sH(K-I)P2{label}"),
            ),
            (
                KernelFn(k21, dom2, col_domain=dom1, name=f"P2e^sHKP1G^-1{label}"),
                KernelFn(k22, dom2, symmetric=True, name=f"P2KP2{label}"),
            ),
        ),
        name=f"matrix{label}",
    )
