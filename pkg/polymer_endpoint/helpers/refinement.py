"""Generic grid-refinement strategy for discretized quantities.

This module provides reusable n -> 2n refinement logic for any computation
whose accuracy is controlled by a node count (quadrature, Nystrom matrices,
finite sums).
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Generic, TypeVar, cast

_LOGGER = logging.getLogger(__name__)

T = TypeVar("T")


def _scalar_distance(coarse: float, fine: float) -> float:
    return abs(fine - coarse)


@dataclass
class RefinementResult(Generic[T]):
    """Result of a refinement run."""

    converged: bool
    value: T
    n_coarse: int
    n_fine: int
    delta: float
    doublings: int = 0
    history: list[tuple[int, float]] = field(default_factory=list)

    def __str__(self) -> str:
        """String representation of refinement result."""
        if self.converged:
            return (
                f"Converged at n={self.n_fine} (delta={self.delta:.3e}, "
                f"{self.doublings} extra doubling(s))"
            )
        return (
            f"Not converged after {self.doublings} extra doubling(s): "
            f"delta={self.delta:.3e} at n={self.n_fine}"
        )


class RefinementStrategy:
    """Successive-doubling refinement with a bounded number of extra steps."""

    def __init__(
        self,
        logger: logging.Logger | None = None,
    ) -> None:
        """Initialize refinement strategy.

        Args:
            logger: Optional logger for refinement steps
        """
        self.logger = logger or _LOGGER

    def execute_with_refinement(
        self,
        evaluate: Callable[[int], T],
        n: int,
        tol: float,
        max_doublings: int = 1,
        distance: Callable[[T, T], float] | None = None,
        label: str = "quantity",
    ) -> RefinementResult[T]:
        """Evaluate at n and 2n nodes, doubling further while delta > tol.

        Args:
            evaluate: Callable returning the quantity at a given node count
            n: Coarse node count
            tol: Convergence threshold on the coarse/fine distance
            max_doublings: Extra doublings allowed after the first comparison
            distance: Distance between two evaluations (default |fine - coarse|)
            label: Name used in log messages

        Returns:
            RefinementResult holding the finest value and convergence evidence
        """
        if n < 1:
            raise ValueError(f"Node count must be positive, got {n}")
        if tol <= 0:
            raise ValueError(f"Tolerance must be positive, got {tol}")

        dist = distance or cast(Callable[[T, T], float], _scalar_distance)
        n_coarse, n_fine = n, 2 * n
        coarse = evaluate(n_coarse)
        fine = evaluate(n_fine)
        delta = float(dist(coarse, fine))
        history = [(n_fine, delta)]
        doublings = 0

        while delta > tol and doublings < max_doublings:
            doublings += 1
            self.logger.warning(
                "%s not converged at n=%d (delta=%.3e > %.1e), doubling to n=%d",
                label,
                n_fine,
                delta,
                tol,
                2 * n_fine,
            )
            n_coarse, n_fine = n_fine, 2 * n_fine
            coarse = fine
            fine = evaluate(n_fine)
            delta = float(dist(coarse, fine))
            history.append((n_fine, delta))

        converged = delta <= tol
        if not converged:
            self.logger.error(
                "%s failed to converge: delta=%.3e at n=%d after %d doubling(s)",
                label,
                delta,
                n_fine,
                doublings,
            )
        elif doublings > 0:
            self.logger.info(
                "%s converged after %d extra doubling(s)", label, doublings
            )

        return RefinementResult(
            converged=converged,
            value=fine,
            n_coarse=n_coarse,
            n_fine=n_fine,
            delta=delta,
            doublings=doublings,
            history=history,
        )
