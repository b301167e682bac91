"""Scan engine for Laplace mixtures on arbitrary supports.

Sums of Laplace densities or distribution functions centered on the support points \
of a belief are evaluated at sorted query points with two sweeps. The ascending \
sweep carries `L(y) = Σ_{x_k <= y} ρ(x_k) exp(-(y - x_k) / b)`, the descending one \
`R(y) = Σ_{x_k > y} ρ(x_k) exp(-(x_k - y) / b)`. Between two consecutive points the \
accumulators are only ever multiplied by `exp(-Δ / b)` with `Δ >= 0`.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from math import exp

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..exceptions import (
    InvalidParameterError,
    UnsupportedKernelError,
    UnsupportedLuckFunctionError,
)
from ..kernels import IdentityKernel, Kernel, LaplaceMixKernel
from ..luck import LaplaceMix, LuckFunction
from ..models import Distribution, GridDistribution, PointDistribution
from .engine import BaseEngine, posterior_from_likelihood
from .fft_engine import fft_likelihood
from .naive_engine import naive_likelihood


@dataclass(frozen=True, eq=False)
class _Sweeps:
    left: NDArray[np.float64]
    right: NDArray[np.float64]
    mass: NDArray[np.float64]


def _merged_order(
    support: NDArray[np.float64], queries: NDArray[np.float64]
) -> NDArray[np.intp]:
    # indices below support.size are support points, the others are queries
    n, m = support.size, queries.size
    if m == 0 or np.all(queries[1:] >= queries[:-1]):
        order = np.empty(n + m, dtype=np.intp)
        slots = np.arange(m) + np.searchsorted(support, queries, side="right")
        is_query = np.zeros(n + m, dtype=bool)
        is_query[slots] = True
        order[slots] = n + np.arange(m)
        order[~is_query] = np.arange(n)
        return order
    coordinates = np.concatenate([support, queries])
    is_query = np.concatenate([np.zeros(n, dtype=bool), np.ones(m, dtype=bool)])
    return np.lexsort((is_query, coordinates))


def _sweep(rho: Distribution, scale: float, queries: NDArray[np.float64]) -> _Sweeps:
    if not scale > 0:
        msg = f"Laplace scale must be positive, got {scale}"
        raise InvalidParameterError(msg)
    support = rho.support
    n, m = support.size, queries.size
    order = _merged_order(support, queries).tolist()
    coordinates = np.concatenate([support, queries]).tolist()
    weights = rho.weights.tolist()
    left, right, mass = np.empty(m), np.empty(m), np.empty(m)

    accumulator, cumulative = 0.0, 0.0
    previous = coordinates[order[0]] if order else 0.0
    for index in order:
        current = coordinates[index]
        gap = current - previous
        assert gap >= 0
        accumulator *= exp(-gap / scale)
        previous = current
        if index < n:
            accumulator += weights[index]
            cumulative += weights[index]
        else:
            left[index - n] = accumulator
            mass[index - n] = cumulative

    accumulator = 0.0
    previous = coordinates[order[-1]] if order else 0.0
    for index in reversed(order):
        current = coordinates[index]
        gap = previous - current
        assert gap >= 0
        accumulator *= exp(-gap / scale)
        previous = current
        if index < n:
            accumulator += weights[index]
        else:
            right[index - n] = accumulator
    return _Sweeps(left=left, right=right, mass=mass)


def _queries(queries: ArrayLike) -> NDArray[np.float64]:
    array = np.asarray(queries, dtype=np.float64)
    if array.ndim != 1 or not np.all(np.isfinite(array)):
        msg = "queries must be a finite one dimensional sequence"
        raise InvalidParameterError(msg)
    return array


def laplace_pdf_scan(
    rho: Distribution, scale: float, queries: ArrayLike
) -> NDArray[np.float64]:
    """Evaluate `Q(y) = Σ_k ρ(x_k) f(y - x_k | b)` with `f` the Laplace density.

    Args:
        rho: Weights and their support.
        scale: Laplace scale `b`.
        queries: Points `y` where `Q` is evaluated, in any order.

    Returns:
        One value per query.
    """
    queries = _queries(queries)
    sweeps = _sweep(rho, scale, queries)
    return (sweeps.left + sweeps.right) / (2 * scale)


def laplace_cdf_scan(
    rho: Distribution, scale: float, queries: ArrayLike
) -> NDArray[np.float64]:
    """Evaluate `T(y) = Σ_k ρ(x_k) F(y - x_k | b)` with `F` the Laplace CDF.

    Points `x_k <= y` contribute `ρ(x_k)(1 - exp(-(y - x_k) / b) / 2)`, the others \
    `ρ(x_k) exp(-(x_k - y) / b) / 2`.

    Args:
        rho: Weights and their support.
        scale: Laplace scale `b`.
        queries: Points `y` where `T` is evaluated, in any order.

    Returns:
        One value per query.
    """
    queries = _queries(queries)
    sweeps = _sweep(rho, scale, queries)
    return sweeps.mass - sweeps.left / 2 + sweeps.right / 2


def _laplace_luck(luck: LuckFunction) -> LaplaceMix:
    if not isinstance(luck, LaplaceMix):
        msg = f"the laplace engine needs a Laplace mixture luck function, got {luck}"
        raise UnsupportedLuckFunctionError(msg)
    return luck


def laplace_likelihood(
    luck: LuckFunction, rho_a: Distribution, rho_b: Distribution, score: float
) -> NDArray[np.float64]:
    luck = _laplace_luck(luck)
    if score not in (0.0, 1.0):
        msg = f"the laplace scans only handle scores of 0 or 1, got {score}"
        raise InvalidParameterError(msg)
    spread = np.zeros(rho_a.support.size)
    for component in luck.components:
        spread += component.weight * laplace_cdf_scan(
            rho_b, component.scale, rho_a.support
        )
    total = rho_b.total
    if score == 1.0:
        return (1 - luck.beta) / 2 * total + luck.beta * spread
    return (1 + luck.beta) / 2 * total - luck.beta * spread


def posterior_laplace[D: Distribution](
    luck: LuckFunction, rho_a: D, rho_b: Distribution, score: float
) -> D:
    """Update a belief after a win or a loss with one scan per mixture component.

    Args:
        luck: Laplace mixture luck function.
        rho_a: Belief about the player being updated.
        rho_b: Belief about their opponent, on any support.
        score: 1 for a win of the player being updated, 0 for a loss.

    Returns:
        The posterior belief on the support of `rho_a`.

    Raises:
        UnsupportedLuckFunctionError: If the luck function is not a Laplace mixture.
        InvalidParameterError: If the score is fractional.
    """
    return posterior_from_likelihood(
        rho_a, laplace_likelihood(luck, rho_a, rho_b, score)
    )


def kernel_laplace(
    kernel: Kernel, rho: Distribution, output_support: Sequence[float] | ArrayLike
) -> PointDistribution:
    """Smooth a belief with a mixture of Laplace densities.

    Args:
        kernel: Laplace mixture kernel.
        rho: Belief to smooth.
        output_support: Strictly increasing points of the smoothed belief.

    Returns:
        The smoothed belief on `output_support`.

    Raises:
        UnsupportedKernelError: If the kernel is not a Laplace mixture.
        InvalidParameterError: If the output support is empty.
    """
    if not isinstance(kernel, LaplaceMixKernel):
        msg = f"the laplace engine needs a Laplace mixture kernel, got {kernel}"
        raise UnsupportedKernelError(msg)
    points = _queries(output_support)
    if points.size == 0:
        msg = "output support cannot be empty"
        raise InvalidParameterError(msg)
    smoothed = np.zeros(points.size)
    for component in kernel.components:
        smoothed += component.weight * laplace_pdf_scan(rho, component.scale, points)
    return PointDistribution.from_weights(points, smoothed)


class LaplaceEngine(BaseEngine):
    """Laplace scans on any support, with a fallback for draws.

    Fractional scores are not Laplace mixtures, they are handled by the fft engine on \
    grid beliefs and by the naive engine otherwise.
    """

    def __init__(self, luck: LuckFunction, kernel: Kernel) -> None:
        if not isinstance(kernel, LaplaceMixKernel | IdentityKernel):
            msg = f"the laplace engine needs a Laplace mixture kernel, got {kernel}"
            raise UnsupportedKernelError(msg)
        super().__init__(luck=_laplace_luck(luck), kernel=kernel)

    def likelihood(
        self, rho_a: Distribution, rho_b: Distribution, score: float
    ) -> NDArray[np.float64]:
        if score in (0.0, 1.0):
            return laplace_likelihood(self._luck, rho_a, rho_b, score)
        if isinstance(rho_a, GridDistribution) and isinstance(
            rho_b, GridDistribution
        ):
            self._logger.debug("Score %s handled by the fft engine", score)
            return fft_likelihood(self._luck, rho_a, rho_b, score)
        self._logger.debug("Score %s handled by the naive engine", score)
        return naive_likelihood(self._luck, rho_a, rho_b, score)

    def smooth[D: Distribution](self, rho: D) -> D:
        if isinstance(self._kernel, IdentityKernel):
            return rho
        smoothed = kernel_laplace(self._kernel, rho, rho.support)
        return rho.with_weights(smoothed.weights)
