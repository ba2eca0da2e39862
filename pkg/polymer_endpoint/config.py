"""Configuration objects for the polymer endpoint library.

Raw mappings (command-line flags, environment) are validated against the
voluptuous schemas in validation.py and frozen into dataclasses.
"""

from __future__ import annotations

import logging
import os
from collections.abc import Mapping
from dataclasses import asdict, dataclass, replace
from typing import Any

import voluptuous as vol

from .const import (
    DEFAULT_M_PANEL_NODES,
    DEFAULT_M_PANEL_WIDTH,
    DEFAULT_M_WINDOW,
    DEFAULT_N_STEPS,
    DEFAULT_Q,
    DEFAULT_QUAD_N,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TOL,
    DEFAULT_TRUNC_PAD,
    ENDPOINT_VARIANCE,
    SCALE_AUTO,
    THREADS_ENV_VAR,
)
from .exceptions import ConfigurationError
from .validation import SCHEMA_LPP, SCHEMA_NUMERICS

_LOGGER = logging.getLogger(__name__)


def validated(
    schema: vol.Schema, data: Mapping[str, Any], what: str
) -> dict[str, Any]:
    """Run a schema, translating vol.Invalid into ConfigurationError."""
    try:
        result: dict[str, Any] = schema(dict(data))
    except vol.Invalid as err:
        raise ConfigurationError(f"Invalid {what} configuration: {err}") from err
    return result


def threads_from_env(environ: Mapping[str, str] | None = None) -> int | None:
    """Read the thread cap from the environment.

    Args:
        environ: Mapping to read from (defaults to os.environ)

    Returns:
        Thread count, or None when unset

    Raises:
        ConfigurationError: If the variable is set but not a positive integer
    """
    env = os.environ if environ is None else environ
    raw = env.get(THREADS_ENV_VAR)
    if raw is None or raw.strip() == "":
        return None
    try:
        threads = int(raw)
    except ValueError as err:
        raise ConfigurationError(
            f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}"
        ) from err
    if threads < 1:
        raise ConfigurationError(f"{THREADS_ENV_VAR} must be positive, got {threads}")
    return threads


@dataclass(frozen=True)
class NumericsConfig:
    """Discretization settings shared by all determinant evaluations."""

    quad_n: int = DEFAULT_QUAD_N
    tol: float = DEFAULT_TOL
    trunc_pad: float = DEFAULT_TRUNC_PAD
    m_window: tuple[float, float] = DEFAULT_M_WINDOW
    m_panel_width: float = DEFAULT_M_PANEL_WIDTH
    m_panel_nodes: int = DEFAULT_M_PANEL_NODES
    threads: int | None = None

    def __post_init__(self) -> None:
        """Validate field ranges."""
        data = asdict(self)
        data["m_window"] = list(self.m_window)
        validated(SCHEMA_NUMERICS, data, "numerics")

    @classmethod
    def from_dict(
        cls,
        data: Mapping[str, Any],
        environ: Mapping[str, str] | None = None,
    ) -> NumericsConfig:
        """Create config from a mapping, filling defaults and the env thread cap."""
        values = validated(SCHEMA_NUMERICS, data, "numerics")
        if values.get("threads") is None:
            values["threads"] = threads_from_env(environ)
        values["m_window"] = tuple(values["m_window"])
        return cls(**values)

    def with_overrides(self, **changes: Any) -> NumericsConfig:
        """Copy with some fields replaced (validated again)."""
        if "m_window" in changes:
            changes["m_window"] = tuple(changes["m_window"])
        return replace(self, **changes)

    def as_dict(self) -> dict[str, Any]:
        """Plain dictionary for config echoes."""
        data = asdict(self)
        data["m_window"] = list(self.m_window)
        return data


@dataclass(frozen=True)
class LppConfig:
    """Settings of a last-passage-percolation experiment."""

    n_steps: int = DEFAULT_N_STEPS
    q: float = DEFAULT_Q
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    scale: str | float = SCALE_AUTO
    target_variance: float = ENDPOINT_VARIANCE

    def __post_init__(self) -> None:
        """Validate field ranges."""
        validated(SCHEMA_LPP, asdict(self), "lpp")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> LppConfig:
        """Create config from a mapping, filling defaults."""
        return cls(**validated(SCHEMA_LPP, data, "lpp"))

    def as_dict(self) -> dict[str, Any]:
        """Plain dictionary for config echoes."""
        return asdict(self)
