"""Generic one-dimensional grid specifications.

Grids are written as "lo:hi:count" on command lines and configuration files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Final

import numpy as np

# Separator between grid fields
GRID_SEPARATOR: Final = ":"


@dataclass(frozen=True)
class GridSpec:
    """Evenly spaced grid from lo to hi (inclusive) with count points."""

    lo: float
    hi: float
    count: int

    @classmethod
    def from_string(cls, spec: str) -> GridSpec:
        """Create grid spec from a "lo:hi:count" string."""
        return parse_grid_string(spec)

    def values(self) -> np.ndarray:
        """Grid points as a float array."""
        return grid_values(self)

    def __str__(self) -> str:
        """Round-trippable string form."""
        return f"{self.lo:g}{GRID_SEPARATOR}{self.hi:g}{GRID_SEPARATOR}{self.count}"


def parse_grid_string(spec: str) -> GridSpec:
    """Parse grid string in lo:hi:count format.

    Args:
        spec: Grid string (e.g., "-2:2:5")

    Returns:
        GridSpec

    Raises:
        ValueError: If the string is malformed or describes an empty grid
    """
    parts = spec.strip().split(GRID_SEPARATOR)
    if len(parts) != 3:
        raise ValueError(f"Invalid grid format: {spec}. Expected lo:hi:count")
    try:
        lo = float(parts[0])
        hi = float(parts[1])
        count = int(parts[2])
    except ValueError as err:
        raise ValueError(
            f"Invalid grid format: {spec}. Expected lo:hi:count"
        ) from err

    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError(f"Grid bounds must be finite: {spec}")
    if count < 1:
        raise ValueError(f"Grid count must be at least 1: {spec}")
    if lo > hi:
        raise ValueError(f"Grid lower bound exceeds upper bound: {spec}")
    if count == 1 and lo != hi:
        raise ValueError(f"Single-point grid needs lo == hi: {spec}")
    # "-0" and "0" denote the same point
    return GridSpec(lo=lo + 0.0, hi=hi + 0.0, count=count)


def grid_values(spec: GridSpec) -> np.ndarray:
    """Evaluate grid points.

    Args:
        spec: Grid specification

    Returns:
        Array of count points from lo to hi inclusive
    """
    if spec.count == 1:
        return np.array([spec.lo])
    return np.linspace(spec.lo, spec.hi, spec.count)
