"""Tests for the distribution-level API."""

from __future__ import annotations

import math

import numpy as np
import pytest

from polymer_endpoint.const import (
    ENDPOINT_EXCESS_KURTOSIS,
    ENDPOINT_VARIANCE,
    GOLDEN_TOL,
    GUE_AT_ZERO,
)
from polymer_endpoint.exceptions import ConfigurationError, NumericalDomainError
from polymer_endpoint.fredholm import DetResult
from polymer_endpoint.polymer_dist import (
    M_SCALE,
    EndpointCdf,
    JointDensitySolver,
    _check_cdf,
    decorrelation_table,
    endpoint_density,
    endpoint_moments,
    endpoint_tail,
    endpoint_tail_record,
    f_goe,
    f_gue,
    joint_density,
    joint_density_table,
    joint_sup_point_cdf,
    one_sided_sup_cdf,
    parallel_map,
    sup_parabola_cdf,
    tracy_widom_table,
    two_time_cdf,
)
from polymer_endpoint.quadrature import composite_rule


class TestTracyWidom:
    """Tests for F_GUE and F_GOE."""

    def test_gue_limits(self, fast_cfg):
        """F_GUE is one far right and small far left."""
        assert f_gue(8.0, fast_cfg).value == pytest.approx(1.0, abs=1e-10)
        assert f_gue(-6.0, fast_cfg).value < 1e-5

    @pytest.mark.parametrize("quad_n", [40, 80])
    def test_gue_at_zero(self, fast_cfg, quad_n):
        """F_GUE(0) matches the frozen value at two resolutions."""
        result = f_gue(0.0, fast_cfg.with_overrides(quad_n=quad_n, tol=1e-12))
        assert result.converged
        assert result.value == pytest.approx(GUE_AT_ZERO, abs=GOLDEN_TOL)

    @pytest.mark.parametrize("fn", [f_gue, f_goe])
    def test_monotone(self, fast_cfg, fn):
        """CDFs are nondecreasing."""
        values = [fn(x, fast_cfg).value for x in np.linspace(-4.0, 3.0, 8)]
        assert np.all(np.diff(values) >= -1e-12)

    @pytest.mark.parametrize("x", [-3.0, -1.0, 0.5])
    def test_goe_squared_below_gue(self, fast_cfg, x):
        """F_GOE(x)^2 <= F_GUE(x)."""
        assert f_goe(x, fast_cfg).value ** 2 <= f_gue(x, fast_cfg).value + 1e-10

    @pytest.mark.parametrize("fn", [f_gue, f_goe])
    @pytest.mark.parametrize("x", [math.inf, -math.inf, math.nan])
    def test_non_finite_argument(self, fast_cfg, fn, x):
        """Arguments must be finite."""
        with pytest.raises(ConfigurationError):
            fn(x, fast_cfg)

    def test_sup_parabola_rescales_goe(self, fast_cfg):
        """P(sup (A2 - t^2) <= m) = F_GOE(4^{1/3} m)."""
        assert sup_parabola_cdf(-0.5, fast_cfg).value == pytest.approx(
            f_goe(M_SCALE * -0.5, fast_cfg).value, abs=1e-14
        )

    def test_table_keeps_point_order(self, fast_cfg):
        """Parallel evaluation returns rows in point order."""
        points = [1.0, -2.0, 0.0]
        table = tracy_widom_table("gue", points, fast_cfg)
        assert [r.value for r in table] == [f_gue(x, fast_cfg).value for x in points]

    def test_table_unknown_kind(self, fast_cfg):
        """Only gue and goe are tabulated."""
        with pytest.raises(ConfigurationError):
            tracy_widom_table("gse", [0.0], fast_cfg)


class TestCdfChecks:
    """Tests for probability range checks."""

    def test_rejects_value_above_one(self):
        """Values past 1 + 10 tol raise instead of being clipped."""
        result = DetResult(1.01, 10, 20, 0.0, True, tol=1e-8)
        with pytest.raises(NumericalDomainError):
            _check_cdf(result, "F")

    def test_accepts_small_overshoot(self):
        """Overshoot within 10 tol passes unchanged."""
        result = DetResult(1.0 + 5e-9, 10, 20, 0.0, True, tol=1e-8)
        assert _check_cdf(result, "F") is result


def test_parallel_map_order():
    """Results follow the input order for any thread count."""
    items = list(range(20))
    for threads in (None, 1, 4):
        assert parallel_map(lambda i: i * i, items, threads) == [i * i for i in items]


class TestJointDensity:
    """Tests for f(t, m) and the endpoint marginal."""

    @pytest.mark.parametrize(("t", "m"), [(3.5, 0.0), (0.0, -7.0), (0.0, 21.0)])
    def test_range_errors(self, fast_cfg, t, m):
        """t and m must be in their tabulated ranges."""
        with pytest.raises(ConfigurationError):
            joint_density(t, m, fast_cfg)

    def test_symmetric_in_t(self, fast_cfg):
        """f(t, m) = f(-t, m)."""
        assert joint_density(0.8, 0.5, fast_cfg) == pytest.approx(
            joint_density(-0.8, 0.5, fast_cfg), rel=1e-8
        )

    def test_routes_agree(self, fast_cfg):
        """Trace and determinant-difference values agree."""
        assert joint_density(0.5, 0.0, fast_cfg, "trace") == pytest.approx(
            joint_density(0.5, 0.0, fast_cfg, "det_difference"), abs=1e-8
        )

    def test_table_shape(self, fast_cfg):
        """Rows follow t nodes, columns m nodes."""
        table = joint_density_table([0.0, 1.0], [-1.0, 0.0, 1.0], fast_cfg)
        assert table.values.shape == (2, 3)
        assert table.m_nodes is not None
        assert table.values[0, 1] == pytest.approx(joint_density(0.0, 0.0, fast_cfg))
        assert np.all(table.values > 0.0)

    def test_window_too_small(self, fast_cfg):
        """A window that drops GOE mass is rejected."""
        cfg = fast_cfg.with_overrides(m_window=(-1.0, 2.0))
        with pytest.raises(ConfigurationError):
            JointDensitySolver(cfg).check_window()

    @pytest.mark.parametrize(("quad_n", "base"), [(60, 30), (21, 21)])
    def test_solver_refinement_pair(self, fast_cfg, quad_n, base):
        """quad_n is always one level of the n -> 2n pair."""
        solver = JointDensitySolver(fast_cfg.with_overrides(quad_n=quad_n))
        assert solver.base_n == base

    @pytest.mark.slow
    @pytest.mark.timeout(1800)
    @pytest.mark.parametrize("m", [-0.5, 0.0, 0.5])
    def test_t_marginal_is_goe_density(self, fast_cfg, m):
        """Integrating f(t, m) over t gives d/dm F_GOE(4^{1/3} m)."""
        cfg = fast_cfg.with_overrides(tol=1e-10)
        solver = JointDensitySolver(cfg)
        rule = composite_rule(-3.0, 3.0, 0.5, 10)
        marginal = rule.integrate(
            np.array([solver.density(float(t), m).value for t in rule.nodes])
        )
        h = 0.05

        def goe(x: float) -> float:
            return sup_parabola_cdf(x, cfg).value

        derivative = (
            goe(m - 2 * h) - 8 * goe(m - h) + 8 * goe(m + h) - goe(m + 2 * h)
        ) / (12 * h)
        assert marginal == pytest.approx(derivative, rel=1e-5)

    def test_endpoint_density_symmetric_and_decreasing(self, fast_cfg):
        """f_end is even and decreasing in |t|."""
        values = [endpoint_density(t, fast_cfg) for t in (0.0, 0.7, 1.5)]
        assert endpoint_density(-0.7, fast_cfg) == pytest.approx(values[1], rel=1e-8)
        assert values[0] > values[1] > values[2] > 0.0

    def test_endpoint_density_range(self, fast_cfg):
        """|t| beyond the tabulation limit is rejected."""
        with pytest.raises(ConfigurationError):
            endpoint_density(4.5, fast_cfg)

    def test_endpoint_tail_at_zero(self, fast_cfg):
        """P(|T| > 0) = 1 without any quadrature."""
        assert endpoint_tail(0.0, fast_cfg) == 1.0

    @pytest.mark.parametrize("t", [-0.5, 3.0])
    def test_endpoint_tail_range(self, fast_cfg, t):
        """t must be in [0, 2.75]."""
        with pytest.raises(ConfigurationError):
            endpoint_tail(t, fast_cfg)

    def test_tail_record_carries_convergence(self, fast_cfg, mocker):
        """An unconverged half-line integral marks the record."""
        mocker.patch("polymer_endpoint.polymer_dist._solver_for")
        mocker.patch(
            "polymer_endpoint.polymer_dist._half_line_integral",
            side_effect=[(0.5, True), (0.125, False)],
        )
        record = endpoint_tail_record(1.0, fast_cfg)
        assert record.prob == pytest.approx(0.25)
        assert not record.converged
        assert endpoint_tail_record(0.0, fast_cfg).converged

    @pytest.mark.slow
    @pytest.mark.timeout(1800)
    def test_moments(self, default_cfg):
        """Mass, variance, excess kurtosis and odd moments of f_end."""
        report = endpoint_moments(default_cfg)
        assert report.converged
        assert report.total_mass == pytest.approx(1.0, abs=1e-6)
        assert report.t_max == 3.5
        assert report.tail_remainder < 1e-6
        assert report.variance == pytest.approx(ENDPOINT_VARIANCE, abs=5e-4)
        assert report.excess_kurtosis == pytest.approx(
            ENDPOINT_EXCESS_KURTOSIS, abs=1e-3
        )
        assert abs(report.odd_moment_1) < 1e-10
        assert abs(report.odd_moment_3) < 1e-10


class TestEndpointCdf:
    """Tests for the interpolated endpoint CDF."""

    @pytest.fixture
    def cdf(self) -> EndpointCdf:
        """Uniform law on [-1, 1]."""
        return EndpointCdf(
            edges=np.array([-1.0, 0.0, 1.0]), values=np.array([0.0, 0.5, 1.0])
        )

    def test_values(self, cdf):
        """0 left of the support, 1 right of it, table values on edges."""
        np.testing.assert_allclose(cdf(np.array([-2.0, 0.0, 2.0])), [0.0, 0.5, 1.0])

    def test_quantile(self, cdf):
        """Inverse on the panel edges."""
        np.testing.assert_allclose(cdf.quantile([0.25, 0.5]), [-0.5, 0.0])

    def test_shifted(self, cdf):
        """Shift moves the support."""
        moved = cdf.shifted(1.0)
        assert moved.support == (0.0, 2.0)
        assert float(moved(1.0)) == pytest.approx(0.5)


class TestSupLaws:
    """Tests for the sup constraints and two-time laws."""

    @pytest.mark.parametrize(("t", "a"), [(0.1, 0.0), (3.5, 0.0), (1.0, 11.0)])
    def test_one_sided_range(self, fast_cfg, t, a):
        """t and a must be in range."""
        with pytest.raises(ConfigurationError):
            one_sided_sup_cdf(t, a, fast_cfg)

    def test_one_sided_monotone(self, fast_cfg):
        """Increasing in the level, decreasing in the window."""
        low = one_sided_sup_cdf(1.0, 0.0, fast_cfg).value
        high = one_sided_sup_cdf(1.0, 1.0, fast_cfg).value
        longer = one_sided_sup_cdf(2.0, 0.0, fast_cfg).value
        assert 0.0 < low < high <= 1.0
        assert longer <= low + 1e-8

    def test_one_sided_above_two_sided(self, fast_cfg):
        """The one-sided sup constrains less than the sup over the line."""
        one_sided = one_sided_sup_cdf(1.0, 0.0, fast_cfg).value
        assert one_sided >= sup_parabola_cdf(0.0, fast_cfg).value - 1e-8

    @pytest.mark.slow
    @pytest.mark.timeout(600)
    @pytest.mark.parametrize("a", [-0.5, 0.0, 0.5])
    def test_one_sided_large_window_limit(self, default_cfg, a):
        """Up to t = 3 the one-sided law is the two-sided one."""
        assert one_sided_sup_cdf(3.0, a, default_cfg).value == pytest.approx(
            sup_parabola_cdf(a, default_cfg).value, abs=2e-4
        )

    def test_two_time_frechet_bounds(self, fast_cfg):
        """max(F0 + F1 - 1, 0) <= P(both) <= min(F0, F1)."""
        joint = two_time_cdf(0.0, -1.0, 0.5, 0.0, fast_cfg).value
        first = f_gue(-1.0, fast_cfg).value
        second = f_gue(0.0, fast_cfg).value
        assert max(first + second - 1.0, 0.0) - 1e-8 <= joint
        assert joint <= min(first, second) + 1e-8

    def test_two_time_decorrelates(self, fast_cfg):
        """Far apart times approach the product of marginals."""
        near = two_time_cdf(0.0, -1.0, 0.2, -1.0, fast_cfg).value
        far = two_time_cdf(0.0, -1.0, 3.0, -1.0, fast_cfg).value
        product = f_gue(-1.0, fast_cfg).value ** 2
        assert abs(far - product) < abs(near - product)

    def test_two_time_gap(self, fast_cfg):
        """Times closer than the minimum gap are rejected."""
        with pytest.raises(ConfigurationError):
            two_time_cdf(0.0, 0.0, 0.01, 0.0, fast_cfg)

    def test_two_time_stationary(self, fast_cfg):
        """Shifting both times together leaves the law unchanged."""
        base = two_time_cdf(0.0, 0.3, 1.0, -0.2, fast_cfg).value
        moved = two_time_cdf(5.0, 0.3, 6.0, -0.2, fast_cfg).value
        assert moved == pytest.approx(base, abs=1e-8)

    def test_two_time_high_level_marginal(self, fast_cfg):
        """At x0 = 12 the first constraint is vacuous."""
        joint = two_time_cdf(0.0, 12.0, 1.0, 0.0, fast_cfg).value
        assert joint == pytest.approx(f_gue(0.0, fast_cfg).value, abs=1e-6)

    def test_sup_point_range(self, fast_cfg):
        """Parameters of the sup/point law must be in range."""
        with pytest.raises(ConfigurationError):
            joint_sup_point_cdf(0.1, 1.0, 1.0, 1.0, fast_cfg)
        with pytest.raises(ConfigurationError):
            joint_sup_point_cdf(1.0, 1.0, -1.0, 1.0, fast_cfg)

    def test_sup_point_below_marginals(self, fast_cfg):
        """The joint law sits below both of its marginals."""
        joint = joint_sup_point_cdf(1.0, 1.0, 1.0, 1.0, fast_cfg).value
        sup = one_sided_sup_cdf(1.0, 1.0, fast_cfg).value
        point = f_gue(1.0 + 4.0, fast_cfg).value
        assert 0.0 < joint <= min(sup, point) + 1e-8


class TestDecorrelation:
    """Tests for the decorrelation table."""

    def test_rows(self, fast_cfg):
        """One row per alpha with ratio = joint / product - 1."""
        rows = decorrelation_table(1.0, fast_cfg, beta=0.5, alphas=(0.5, 1.0))
        assert [row.alpha for row in rows] == [0.5, 1.0]
        assert rows[0].sup_marginal == rows[1].sup_marginal
        for row in rows:
            product = row.sup_marginal * row.point_marginal
            assert row.ratio_minus_one == pytest.approx(row.joint / product - 1.0)
            assert row.s == pytest.approx(row.alpha)

    def test_decorrelates_with_gap(self, fast_cfg):
        """The ratio moves towards one as s grows."""
        rows = decorrelation_table(1.0, fast_cfg, beta=0.5, alphas=(0.5, 2.0))
        assert abs(rows[1].ratio_minus_one) < abs(rows[0].ratio_minus_one)

    @pytest.mark.parametrize(("t", "beta"), [(0.0, 1.0), (1.0, -1.0)])
    def test_bad_parameters(self, fast_cfg, t, beta):
        """t must be positive and beta nonnegative."""
        with pytest.raises(ConfigurationError):
            decorrelation_table(t, fast_cfg, beta=beta)

    def test_bad_alpha(self, fast_cfg):
        """alpha must be positive."""
        with pytest.raises(ConfigurationError):
            decorrelation_table(1.0, fast_cfg, beta=0.5, alphas=(0.0,))
