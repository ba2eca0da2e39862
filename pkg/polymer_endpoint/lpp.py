"""Geometric last passage percolation and its point-to-line endpoint.

Paths are +-1 walks started at the origin; site (i, j) of the light cone
|j| <= i, j = i (mod 2) carries an i.i.d. geometric weight with
P(w = k) = q (1 - q)^k. Row i of the cone is stored as an array of length
i + 1 whose entry k is the site j = -i + 2k.
"""

from __future__ import annotations

import csv
import logging
from collections.abc import Sequence
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from scipy import stats

from .config import LppConfig
from .const import ENDPOINT_VARIANCE, SCALE_AUTO
from .exceptions import CalibrationError, ConfigurationError
from .polymer_dist import EndpointCdf, parallel_map
from .validation import validate_budget

_LOGGER = logging.getLogger(__name__)

IntArray = NDArray[np.int64]

SAMPLE_COLUMNS = ("sample_index", "endpoint", "passage_time")


@dataclass(frozen=True)
class EmpiricalDist:
    """Endpoints of independent samples and their rescaling."""

    raw_endpoints: tuple[int, ...]
    passage_times: tuple[int, ...]
    rescaled: tuple[float, ...]
    scale_used: float
    n_steps: int
    q: float
    seed: int

    def __post_init__(self) -> None:
        """Check the walk parity of every endpoint."""
        for endpoint in self.raw_endpoints:
            if abs(endpoint) > self.n_steps or (endpoint - self.n_steps) % 2:
                raise ConfigurationError(
                    f"Endpoint {endpoint} impossible after {self.n_steps} steps"
                )

    @property
    def samples(self) -> int:
        """Number of samples."""
        return len(self.raw_endpoints)


def sample_generator(seed: int, index: int) -> np.random.Generator:
    """Philox stream of one sample, keyed by (seed, index)."""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(sequence))


def geometric_rows(rng: np.random.Generator, n_steps: int, q: float) -> list[IntArray]:
    """Weights of the light cone rows 0..n_steps, by inversion of the CDF."""
    sizes = np.arange(1, n_steps + 2)
    uniforms = 1.0 - rng.random(int(sizes.sum()))
    weights = np.floor(np.log(uniforms) / np.log1p(-q)).astype(np.int64)
    return np.split(weights, np.cumsum(sizes)[:-1])


def passage_times(rows: Sequence[IntArray]) -> IntArray:
    """Point-to-point passage times L(N, j) for the last row of the cone.

    L(i, j) = w(i, j) + max(L(i-1, j-1), L(i-1, j+1)) with L(0, 0) = w(0, 0).
    """
    if not rows or len(rows[0]) != 1:
        raise ConfigurationError("Light cone rows must start with a single site")
    current = np.asarray(rows[0], dtype=np.int64)
    for i, row in enumerate(rows[1:], start=1):
        if len(row) != i + 1:
            raise ConfigurationError(f"Row {i} must have {i + 1} sites, got {len(row)}")
        best = np.empty(i + 1, dtype=np.int64)
        best[0] = current[0]
        best[-1] = current[-1]
        best[1:-1] = np.maximum(current[:-1], current[1:])
        current = best + row
    return current


def endpoint_of(last_row: IntArray) -> int:
    """Leftmost maximizer j of the last row of passage times."""
    n_steps = len(last_row) - 1
    return int(-n_steps + 2 * int(np.argmax(last_row)))


def _run_sample(cfg: LppConfig, index: int) -> tuple[int, int]:
    rows = geometric_rows(sample_generator(cfg.seed, index), cfg.n_steps, cfg.q)
    last = passage_times(rows)
    return endpoint_of(last), int(last.max())


def simulate(cfg: LppConfig, threads: int | None = None) -> EmpiricalDist:
    """Sample point-to-line endpoints T_N and rescale them per cfg.scale.

    Raises:
        ConfigurationError: If n_steps * samples exceeds the lattice budget
    """
    if not validate_budget(cfg.n_steps, cfg.samples):
        raise ConfigurationError(
            f"n_steps * samples = {cfg.n_steps * cfg.samples} "
            "exceeds the lattice budget"
        )
    _LOGGER.info(
        "Simulating %d samples of N=%d, q=%g, seed=%d",
        cfg.samples,
        cfg.n_steps,
        cfg.q,
        cfg.seed,
    )
    results = parallel_map(
        lambda index: _run_sample(cfg, index), range(cfg.samples), threads
    )
    dist = EmpiricalDist(
        raw_endpoints=tuple(r[0] for r in results),
        passage_times=tuple(r[1] for r in results),
        rescaled=(),
        scale_used=float("nan"),
        n_steps=cfg.n_steps,
        q=cfg.q,
        seed=cfg.seed,
    )
    return rescale(dist, cfg.scale, cfg.target_variance)


def rescale(
    dist: EmpiricalDist,
    scale: str | float = SCALE_AUTO,
    target_variance: float = ENDPOINT_VARIANCE,
) -> EmpiricalDist:
    """Rescale endpoints as raw / (scale N^{2/3}).

    With scale "auto" the scale is chosen so the rescaled sample variance
    equals target_variance.

    Raises:
        ConfigurationError: On an empty sample or a non-positive scale
        CalibrationError: If auto calibration meets a zero-variance sample
    """
    if not dist.raw_endpoints:
        raise ConfigurationError("Cannot rescale an empty sample")
    raw = np.asarray(dist.raw_endpoints, dtype=float)
    unit = float(dist.n_steps) ** (2.0 / 3.0)
    if scale == SCALE_AUTO:
        variance = float(np.var(raw / unit, ddof=1)) if raw.size > 1 else 0.0
        if variance <= 0.0:
            raise CalibrationError("Zero-variance sample: auto scale is undefined")
        factor = float(np.sqrt(variance / target_variance))
    else:
        factor = float(scale)
        if factor <= 0.0:
            raise ConfigurationError(f"Scale must be positive, got {scale}")
    _LOGGER.debug("Rescaling N=%d endpoints with scale %.6f", dist.n_steps, factor)
    return replace(
        dist,
        rescaled=tuple(float(v) for v in raw / (factor * unit)),
        scale_used=factor,
    )


def ks_distance(dist: EmpiricalDist, cdf: EndpointCdf) -> float:
    """Kolmogorov-Smirnov distance between the rescaled sample and the model CDF.

    Raises:
        ConfigurationError: If the sample is empty or leaves the CDF support
    """
    if not dist.rescaled:
        raise ConfigurationError("KS distance needs a rescaled sample")
    lo, hi = cdf.support
    values = np.asarray(dist.rescaled, dtype=float)
    if values.min() < lo or values.max() > hi:
        raise ConfigurationError(
            f"Sample range [{values.min():.4g}, {values.max():.4g}] "
            f"outside CDF support [{lo:.4g}, {hi:.4g}]"
        )
    return float(stats.kstest(values, cdf).statistic)


def write_samples_csv(dist: EmpiricalDist, path: str | Path) -> Path:
    """Dump samples as CSV with columns sample_index, endpoint, passage_time."""
    target = Path(path)
    with target.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(SAMPLE_COLUMNS)
        for index, (endpoint, passage) in enumerate(
            zip(dist.raw_endpoints, dist.passage_times, strict=True)
        ):
            writer.writerow((index, endpoint, passage))
    _LOGGER.info("Wrote %d samples to %s", dist.samples, target)
    return target
