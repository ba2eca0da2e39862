"""Tests for geometric last passage percolation."""

from __future__ import annotations

import csv
import itertools
from dataclasses import replace

import numpy as np
import pytest

from polymer_endpoint.config import LppConfig
from polymer_endpoint.const import ENDPOINT_T_LIMIT
from polymer_endpoint.exceptions import CalibrationError, ConfigurationError
from polymer_endpoint.lpp import (
    SAMPLE_COLUMNS,
    EmpiricalDist,
    endpoint_of,
    geometric_rows,
    ks_distance,
    passage_times,
    rescale,
    sample_generator,
    simulate,
    write_samples_csv,
)
from polymer_endpoint.polymer_dist import EndpointCdf, endpoint_cdf


def brute_force(rows) -> dict[int, int]:
    """Best weight ending at each site j, by enumerating every path."""
    n_steps = len(rows) - 1
    best: dict[int, int] = {}
    for steps in itertools.product((-1, 1), repeat=n_steps):
        j = 0
        total = int(rows[0][0])
        for i, step in enumerate(steps, start=1):
            j += step
            total += int(rows[i][(j + i) // 2])
        best[j] = max(best.get(j, total), total)
    return best


def make_dist(endpoints, n_steps=4) -> EmpiricalDist:
    """Unscaled distribution with given endpoints."""
    return EmpiricalDist(
        raw_endpoints=tuple(endpoints),
        passage_times=tuple(0 for _ in endpoints),
        rescaled=(),
        scale_used=float("nan"),
        n_steps=n_steps,
        q=0.5,
        seed=0,
    )


class TestPassageTimes:
    """Tests for the light cone recursion."""

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_matches_brute_force(self, seed):
        """Recursion agrees with enumeration of all 2^N paths."""
        rows = geometric_rows(sample_generator(seed, 0), 6, 0.3)
        last = passage_times(rows)
        best = brute_force(rows)
        for k, value in enumerate(last):
            assert value == best[-6 + 2 * k]

    def test_row_sizes(self):
        """Row i of the cone has i + 1 sites."""
        rows = geometric_rows(sample_generator(0, 0), 5, 0.5)
        assert [len(row) for row in rows] == [1, 2, 3, 4, 5, 6]
        assert all(np.all(row >= 0) for row in rows)

    def test_geometric_mean(self):
        """E w = (1 - q) / q."""
        rows = geometric_rows(sample_generator(3, 0), 400, 0.25)
        weights = np.concatenate(rows)
        assert weights.mean() == pytest.approx(3.0, rel=0.02)

    def test_malformed_rows(self):
        """Rows must grow by one site each."""
        with pytest.raises(ConfigurationError):
            passage_times([np.array([1]), np.array([1, 2, 3])])
        with pytest.raises(ConfigurationError):
            passage_times([])

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_monotone_coupling(self, seed):
        """Adding 1 to every weight adds N + 1 to every L(N, j)."""
        rows = geometric_rows(sample_generator(seed, 0), 30, 0.5)
        last = passage_times(rows)
        raised = passage_times([row + 1 for row in rows])
        np.testing.assert_array_equal(raised, last + 31)
        assert endpoint_of(raised) == endpoint_of(last)
        np.testing.assert_array_equal(
            np.flatnonzero(raised == raised.max()), np.flatnonzero(last == last.max())
        )

    def test_endpoint_is_leftmost_maximizer(self):
        """Ties resolve to the smallest j."""
        assert endpoint_of(np.array([3, 5, 5])) == 0
        assert endpoint_of(np.array([7, 1, 7, 2])) == -3


class TestSimulate:
    """Tests for simulate."""

    def test_parity_and_range(self, lpp_cfg):
        """Endpoints have the parity of N and |T_N| <= N."""
        dist = simulate(lpp_cfg, threads=2)
        assert dist.samples == lpp_cfg.samples
        for endpoint in dist.raw_endpoints:
            assert abs(endpoint) <= lpp_cfg.n_steps
            assert endpoint % 2 == lpp_cfg.n_steps % 2

    def test_deterministic_across_threads(self, lpp_cfg):
        """Per-sample streams make output independent of the thread count."""
        single = simulate(lpp_cfg, threads=1)
        many = simulate(lpp_cfg, threads=4)
        assert single == many

    def test_seed_changes_sample(self, lpp_cfg):
        """Different seeds give different samples."""
        other = LppConfig(**{**lpp_cfg.as_dict(), "seed": lpp_cfg.seed + 1})
        assert simulate(lpp_cfg).raw_endpoints != simulate(other).raw_endpoints

    def test_single_step_law(self):
        """P(T_1 = +1) = (1 - q / (2 - q)) / 2 with ties sent left."""
        cfg = LppConfig(n_steps=1, q=0.5, samples=20_000, seed=11, scale=1.0)
        dist = simulate(cfg, threads=2)
        freq = np.mean(np.asarray(dist.raw_endpoints) == 1)
        exact = 1.0 / 3.0
        sigma = np.sqrt(exact * (1.0 - exact) / cfg.samples)
        assert abs(freq - exact) < 5.0 * sigma

    def test_endpoint_mean_symmetric(self):
        """Midpoint of the extreme maximizers has mean zero within four errors."""
        n_steps = 40
        midpoints = []
        for index in range(10_000):
            rows = geometric_rows(sample_generator(5, index), n_steps, 0.5)
            last = passage_times(rows)
            rightmost = n_steps - 2 * int(np.argmax(last[::-1]))
            midpoints.append(0.5 * (endpoint_of(last) + rightmost))
        values = np.asarray(midpoints)
        assert abs(values.mean()) <= 4.0 * values.std(ddof=1) / np.sqrt(values.size)

    def test_lattice_budget(self):
        """Runs above the lattice-site budget are rejected."""
        with pytest.raises(ConfigurationError):
            simulate(LppConfig(n_steps=100_000, samples=100_000, scale=1.0))

    def test_impossible_endpoint(self):
        """Parity violations are rejected."""
        with pytest.raises(ConfigurationError):
            make_dist([1], n_steps=4)


class TestRescale:
    """Tests for rescale."""

    def test_fixed_scale(self):
        """raw / (scale N^{2/3})."""
        dist = rescale(make_dist([-2, 0, 2], n_steps=8), scale=2.0)
        np.testing.assert_allclose(dist.rescaled, [-0.25, 0.0, 0.25])
        assert dist.scale_used == 2.0

    def test_auto_scale_matches_target_variance(self):
        """Auto calibration fixes the sample variance."""
        dist = rescale(make_dist([-4, -2, 0, 2, 4, 0]), target_variance=0.25)
        assert np.var(dist.rescaled, ddof=1) == pytest.approx(0.25)

    def test_zero_variance(self):
        """Constant samples cannot be calibrated."""
        with pytest.raises(CalibrationError):
            rescale(make_dist([0, 0, 0]))

    def test_errors(self):
        """Empty samples and non-positive scales are rejected."""
        with pytest.raises(ConfigurationError):
            rescale(make_dist([]))
        with pytest.raises(ConfigurationError):
            rescale(make_dist([0, 2]), scale=0.0)


class TestKsDistance:
    """Tests for ks_distance."""

    @pytest.fixture
    def uniform(self) -> EndpointCdf:
        """Uniform law on [-1, 1]."""
        return EndpointCdf(edges=np.linspace(-1.0, 1.0, 5), values=np.linspace(0, 1, 5))

    def test_value(self, uniform):
        """A single point at 0 is at distance 1/2."""
        dist = rescale(make_dist([0, 0, 2, -2]), scale=2.0 * 4.0 ** (1.0 / 3.0))
        assert 0.0 <= ks_distance(dist, uniform) <= 1.0
        single = rescale(make_dist([0]), scale=1.0)
        assert ks_distance(single, uniform) == pytest.approx(0.5)

    def test_outside_support(self, uniform):
        """Samples outside the tabulated support are rejected."""
        dist = rescale(make_dist([-4, 4]), scale=0.5)
        with pytest.raises(ConfigurationError):
            ks_distance(dist, uniform)

    @pytest.mark.parametrize("shift", [-0.3, 0.75])
    def test_shift_invariant(self, uniform, shift):
        """Shifting sample and model by the same constant keeps the distance."""
        dist = rescale(make_dist([-2, 0, 0, 2], n_steps=8), scale=1.0)
        moved = replace(dist, rescaled=tuple(v + shift for v in dist.rescaled))
        assert ks_distance(moved, uniform.shifted(shift)) == pytest.approx(
            ks_distance(dist, uniform), abs=1e-12
        )

    def test_needs_rescaled_sample(self, uniform):
        """Unscaled samples are rejected."""
        with pytest.raises(ConfigurationError):
            ks_distance(make_dist([0]), uniform)


def test_write_samples_csv(tmp_path, lpp_cfg):
    """One row per sample under the fixed header."""
    dist = simulate(lpp_cfg)
    path = write_samples_csv(dist, tmp_path / "samples.csv")
    with path.open(encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    assert tuple(rows[0]) == SAMPLE_COLUMNS
    assert len(rows) == lpp_cfg.samples + 1
    assert int(rows[1][1]) == dist.raw_endpoints[0]
    assert int(rows[1][2]) == dist.passage_times[0]


@pytest.mark.slow
@pytest.mark.timeout(7200)
def test_ks_distance_shrinks_with_n(default_cfg):
    """Median KS distance over five seeds falls from N = 100 to N = 1600."""
    model = endpoint_cdf(default_cfg, ENDPOINT_T_LIMIT)

    def median_ks(n_steps: int) -> float:
        distances = [
            ks_distance(
                simulate(LppConfig(n_steps=n_steps, q=0.5, samples=10_000, seed=seed)),
                model,
            )
            for seed in range(5)
        ]
        return float(np.median(distances))

    coarse, fine = median_ks(100), median_ks(1600)
    assert fine < coarse
    assert fine <= 0.05
