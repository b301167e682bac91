"""Quadratic-time reference engine.

Works on any support and any luck function, including the ratio luck function. The \
other engines are tested against it.
"""

import numpy as np
from numpy.typing import NDArray

from ..kernels import IdentityKernel, Kernel
from ..luck import LuckFunction, outcome_likelihood
from ..models import Distribution
from .engine import BaseEngine, posterior_from_likelihood


def naive_likelihood(
    luck: LuckFunction, rho_a: Distribution, rho_b: Distribution, score: float
) -> NDArray[np.float64]:
    table = luck(rho_a.support[:, None], rho_b.support[None, :])
    return outcome_likelihood(table, score) @ rho_b.weights


def posterior_naive[D: Distribution](
    luck: LuckFunction, rho_a: D, rho_b: Distribution, score: float
) -> D:
    """Update a belief after a match by direct summation over the opponent support.

    The likelihood of `x` is `Σ_k ρ_B(x_k) Λ(x, x_k)^θ (1 - Λ(x, x_k))^(1 - θ)`.

    Args:
        luck: Luck function.
        rho_a: Belief about the player being updated.
        rho_b: Belief about their opponent, before the match.
        score: Score of the player being updated.

    Returns:
        The posterior belief on the support of `rho_a`.

    Raises:
        ImpossibleOutcomeError: If the outcome has zero probability.
    """
    return posterior_from_likelihood(
        rho_a, naive_likelihood(luck, rho_a, rho_b, score)
    )


def kernel_naive[D: Distribution](
    kernel: Kernel, rho: D, *, per_source: bool = False
) -> D:
    """Smooth a belief by direct summation of `ρ(x_k) G(x - x_k)`.

    Args:
        kernel: Difference kernel.
        rho: Belief to smooth.
        per_source: Normalize the kernel row of each source point over the support \
            before summing, instead of only normalizing the result.

    Returns:
        The smoothed belief on the same support.
    """
    if isinstance(kernel, IdentityKernel):
        return rho
    table = kernel(rho.support[:, None] - rho.support[None, :])
    if per_source:
        totals = table.sum(axis=0, keepdims=True)
        table = np.divide(table, totals, out=np.zeros_like(table), where=totals > 0)
    return rho.with_weights(table @ rho.weights)


class NaiveEngine(BaseEngine):
    def likelihood(
        self, rho_a: Distribution, rho_b: Distribution, score: float
    ) -> NDArray[np.float64]:
        return naive_likelihood(self._luck, rho_a, rho_b, score)

    def smooth[D: Distribution](self, rho: D) -> D:
        return kernel_naive(self._kernel, rho)
