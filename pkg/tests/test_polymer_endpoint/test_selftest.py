"""Tests for the self-test runner."""

from __future__ import annotations

import math

import pytest

from polymer_endpoint.const import SELFTEST_FULL, SELFTEST_QUICK
from polymer_endpoint.exceptions import ConfigurationError, SingularOperatorError
from polymer_endpoint.selftest import SelfTestRunner


@pytest.fixture
def runner(fast_cfg) -> SelfTestRunner:
    """Runner on coarse numerics."""
    return SelfTestRunner(fast_cfg)


class TestLevels:
    """Tests for check selection."""

    def test_full_extends_quick(self, runner):
        """The full level runs every quick check first."""
        quick = [name for name, _ in runner.checks(SELFTEST_QUICK)]
        full = [name for name, _ in runner.checks(SELFTEST_FULL)]
        assert full[: len(quick)] == quick
        assert len(full) > len(quick)
        assert len(set(full)) == len(full)

    def test_unknown_level(self, runner):
        """Unknown levels raise."""
        with pytest.raises(ConfigurationError):
            runner.checks("nightly")


class TestRunOne:
    """Tests for the pass/fail logic of a single check."""

    def test_pass(self, runner):
        """Measured value at or below threshold passes."""
        result = runner._run_one("c", lambda: (1e-12, 1e-10))
        assert result.passed
        assert result.error is None

    def test_fail(self, runner):
        """Measured value above threshold fails."""
        assert not runner._run_one("c", lambda: (1e-3, 1e-10)).passed

    def test_nan_fails(self, runner):
        """Non-finite measurements fail."""
        assert not runner._run_one("c", lambda: (math.nan, 1.0)).passed

    def test_library_error_recorded(self, runner):
        """Library errors fail the check without stopping the run."""

        def broken() -> tuple[float, float]:
            raise SingularOperatorError("singular")

        result = runner._run_one("c", broken)
        assert not result.passed
        assert result.error == "singular"

    def test_run_continues_after_failure(self, runner, mocker):
        """Every check runs even when an earlier one fails."""
        mocker.patch.object(
            runner,
            "checks",
            return_value=[("bad", lambda: (1.0, 0.0)), ("good", lambda: (0.0, 0.0))],
        )
        results = runner.run(SELFTEST_QUICK)
        assert [(r.name, r.passed) for r in results] == [("bad", False), ("good", True)]


class TestIdentityChecks:
    """The closed-form checks pass on their own."""

    @pytest.mark.parametrize(
        "check",
        [
            "check_airy_origin",
            "check_airy_convolution",
            "check_k_airy_diagonal",
            "check_reflection_idempotent",
            "check_shift_factorization",
        ],
    )
    def test_identity(self, runner, check):
        """Measured error below threshold."""
        value, threshold = getattr(runner, check)()
        assert value <= threshold

    def test_lpp_single_step(self, runner):
        """Empirical N = 1 law within five standard errors."""
        value, threshold = runner.check_lpp_single_step()
        assert value <= threshold


@pytest.mark.slow
@pytest.mark.timeout(1800)
def test_quick_level_passes(default_cfg):
    """The quick suite passes at default numerics."""
    results = SelfTestRunner(default_cfg).run(SELFTEST_QUICK)
    assert [r.name for r in results if not r.passed] == []
