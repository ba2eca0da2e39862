"""Pytest configuration and fixtures."""

from __future__ import annotations

import pytest

from polymer_endpoint.config import LppConfig, NumericsConfig


@pytest.fixture
def fast_cfg() -> NumericsConfig:
    """Coarse numerics for unit tests."""
    return NumericsConfig(
        quad_n=60,
        tol=1e-8,
        trunc_pad=1.0,
        m_window=(-6.0, 12.0),
        m_panel_width=1.0,
        m_panel_nodes=10,
        threads=2,
    )


@pytest.fixture
def default_cfg() -> NumericsConfig:
    """Library defaults, used by acceptance-scale tests."""
    return NumericsConfig()


@pytest.fixture
def lpp_cfg() -> LppConfig:
    """Small seeded LPP experiment."""
    return LppConfig(n_steps=20, q=0.5, samples=200, seed=1234, scale=1.0)
