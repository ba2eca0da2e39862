"""Tests for grid specifications."""

from __future__ import annotations

import numpy as np
import pytest

from polymer_endpoint.helpers.grid import GridSpec, grid_values, parse_grid_string


class TestParseGridString:
    """Tests for parse_grid_string."""

    def test_valid_grid(self):
        """Plain lo:hi:count."""
        spec = parse_grid_string("-2:2:5")
        assert spec == GridSpec(lo=-2.0, hi=2.0, count=5)

    def test_whitespace_tolerated(self):
        """Surrounding whitespace is stripped."""
        assert parse_grid_string("  0:1:3 ").count == 3

    def test_negative_zero_normalized(self):
        """-0 and 0 describe the same point."""
        spec = parse_grid_string("-0:-0:1")
        assert str(spec) == "0:0:1"
        assert not np.signbit(spec.values()[0])

    @pytest.mark.parametrize(
        "spec",
        ["", "1:2", "1:2:3:4", "a:2:3", "1:2:x", "2:1:3", "0:1:0", "0:1:1", "nan:1:2"],
    )
    def test_invalid_grids(self, spec):
        """Malformed or empty grids raise ValueError."""
        with pytest.raises(ValueError):
            parse_grid_string(spec)


class TestGridValues:
    """Tests for grid_values."""

    def test_single_point(self):
        """count == 1 yields lo."""
        assert list(grid_values(GridSpec(8.0, 8.0, 1))) == [8.0]

    def test_endpoints_included(self):
        """Evenly spaced, both ends included."""
        values = GridSpec.from_string("-2:2:5").values()
        np.testing.assert_allclose(values, [-2.0, -1.0, 0.0, 1.0, 2.0])

    def test_string_round_trip(self):
        """str() parses back to the same spec."""
        spec = GridSpec(-1.5, 3.25, 7)
        assert GridSpec.from_string(str(spec)) == spec
