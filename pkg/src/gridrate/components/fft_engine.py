"""Convolution engine for beliefs sharing one grid.

With a difference-form luck function `Λ(x, y) = (1 - β) / 2 + β F(x - y)`, the win \
likelihood `Σ_j ρ_B(j) F((k - j)Δ)` is a discrete convolution. `F` does not decay \
so it is split into the Heaviside step `H` and the decaying remainder `R = F - H`. \
The step part is a prefix sum and the remainder is convolved with real FFTs.
"""

from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property, lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..exceptions import (
    IncompatibleGridError,
    InvalidParameterError,
    NumericalInstabilityError,
    UnsupportedLuckFunctionError,
)
from ..kernels import IdentityKernel, Kernel
from ..luck import DifferenceLuck, LuckFunction, outcome_likelihood
from ..models import Distribution, Grid, GridDistribution
from .engine import BaseEngine, posterior_from_likelihood

CLAMP_TOLERANCE = 1e-12
"""Largest negative convolution artifact set to zero, relative to `max|g| * Σ ρ`."""


class TableSource(StrEnum):
    luck_remainder = "luck-remainder"
    score = "score"
    kernel = "kernel"


@dataclass(frozen=True, eq=False)
class DifferenceKernelTable:
    """Values `g(dΔ)` of a difference function for `d = -n..n`."""

    values: NDArray[np.float64]
    source: TableSource

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size % 2 == 0:
            msg = "difference table needs 2n + 1 values"
            raise InvalidParameterError(msg)
        if not np.all(np.isfinite(values)):
            msg = "difference table values must be finite"
            raise InvalidParameterError(msg)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return (self.values.size - 1) // 2

    @cached_property
    def fft_size(self) -> int:
        from scipy.fft import next_fast_len

        return next_fast_len(3 * self.n + 1, real=True)

    @cached_property
    def spectrum(self) -> NDArray[np.complex128]:
        from scipy.fft import rfft

        return rfft(self.values, self.fft_size)


def convolve(rho: ArrayLike, table: DifferenceKernelTable) -> NDArray[np.float64]:
    """Compute `out(k) = Σ_j ρ(j) g(k - j)` for `k = 0..n`.

    Args:
        rho: Weights on the `n + 1` grid points.
        table: Difference function sampled on the same grid.

    Returns:
        The `n + 1` convolution values.

    Raises:
        InvalidParameterError: If the lengths do not match.
    """
    from scipy.fft import irfft, rfft

    rho = np.asarray(rho, dtype=np.float64)
    n = table.n
    if rho.ndim != 1 or rho.size != n + 1:
        msg = f"expected {n + 1} weights for a table of {2 * n + 1} values"
        raise InvalidParameterError(msg)
    size = table.fft_size
    full = irfft(rfft(rho, size) * table.spectrum, size)
    return full[n : 2 * n + 1]


def heaviside_prefix(rho: Distribution | ArrayLike) -> NDArray[np.float64]:
    """Compute `Σ_j ρ(j) H((k - j)Δ)` for every `k` in one pass.

    `H(0) = 1/2`, so each point contributes half of its own weight.

    Args:
        rho: Belief or weights.

    Returns:
        The prefix values, one per grid point.
    """
    weights = np.asarray(
        rho.weights if isinstance(rho, Distribution) else rho, dtype=np.float64
    )
    return np.cumsum(weights) - weights / 2


def _differences(grid: Grid) -> NDArray[np.float64]:
    return grid.step * np.arange(-grid.n, grid.n + 1)


@lru_cache(maxsize=32)
def remainder_table(luck: DifferenceLuck, grid: Grid) -> DifferenceKernelTable:
    d = np.arange(-grid.n, grid.n + 1)
    step = np.where(d > 0, 1.0, np.where(d == 0, 0.5, 0.0))
    return DifferenceKernelTable(
        luck.sigmoid(_differences(grid)) - step, TableSource.luck_remainder
    )


@lru_cache(maxsize=64)
def score_table(
    luck: DifferenceLuck, grid: Grid, score: float
) -> DifferenceKernelTable:
    win = luck(_differences(grid), 0.0)
    return DifferenceKernelTable(outcome_likelihood(win, score), TableSource.score)


@lru_cache(maxsize=32)
def kernel_table(kernel: Kernel, grid: Grid) -> DifferenceKernelTable:
    return DifferenceKernelTable(kernel(_differences(grid)), TableSource.kernel)


def _clamp(values: NDArray[np.float64], scale: float) -> NDArray[np.float64]:
    lowest = values.min()
    if lowest < -CLAMP_TOLERANCE * scale:
        msg = f"convolution produced a negative value {lowest:.3g}"
        raise NumericalInstabilityError(msg)
    return np.maximum(values, 0.0) if lowest < 0 else values


def _common_grid(*rhos: Distribution) -> Grid:
    grids = []
    for rho in rhos:
        if not isinstance(rho, GridDistribution):
            msg = "the fft engine needs beliefs on a grid"
            raise IncompatibleGridError(msg)
        grids.append(rho.grid)
    if any(not grid.is_compatible(grids[0]) for grid in grids[1:]):
        msg = f"incompatible grids {grids}"
        raise IncompatibleGridError(msg)
    return grids[0]


def _difference_luck(luck: LuckFunction) -> DifferenceLuck:
    if not isinstance(luck, DifferenceLuck):
        msg = f"the fft engine needs a difference-form luck function, got {luck}"
        raise UnsupportedLuckFunctionError(msg)
    return luck


def fft_likelihood(
    luck: LuckFunction, rho_a: Distribution, rho_b: Distribution, score: float
) -> NDArray[np.float64]:
    luck = _difference_luck(luck)
    grid = _common_grid(rho_a, rho_b)
    if score in (0.0, 1.0):
        total = rho_b.total
        spread = convolve(rho_b.weights, remainder_table(luck, grid))
        spread += heaviside_prefix(rho_b)
        if score == 1.0:
            likelihood = (1 - luck.beta) / 2 * total + luck.beta * spread
        else:
            likelihood = (1 + luck.beta) / 2 * total - luck.beta * spread
    else:
        likelihood = convolve(rho_b.weights, score_table(luck, grid, float(score)))
    return _clamp(likelihood, max(rho_b.total, 1.0))


def posterior_fft(
    luck: LuckFunction,
    rho_a: GridDistribution,
    rho_b: GridDistribution,
    score: float,
) -> GridDistribution:
    """Update a belief after a match with FFT convolutions.

    Scores of 0 and 1 use the step plus remainder split of the luck function. Other \
    scores convolve with the likelihood `Λ^θ (1 - Λ)^(1 - θ)` as a difference \
    function.

    Args:
        luck: Difference-form luck function.
        rho_a: Belief about the player being updated.
        rho_b: Belief about their opponent, on the same grid.
        score: Score of the player being updated.

    Returns:
        The posterior belief.

    Raises:
        IncompatibleGridError: If the beliefs are not on the same grid.
        UnsupportedLuckFunctionError: If the luck function is not difference-form.
    """
    return posterior_from_likelihood(
        rho_a, fft_likelihood(luck, rho_a, rho_b, score)
    )


def kernel_fft(kernel: Kernel, rho: GridDistribution) -> GridDistribution:
    """Smooth a belief by convolution with the kernel difference function.

    Args:
        kernel: Difference kernel.
        rho: Belief to smooth.

    Returns:
        The smoothed belief.
    """
    if isinstance(kernel, IdentityKernel):
        return rho
    table = kernel_table(kernel, _common_grid(rho))
    scale = float(np.abs(table.values).max()) * rho.total
    return rho.with_weights(_clamp(convolve(rho.weights, table), scale))


class FftEngine(BaseEngine):
    def __init__(self, luck: LuckFunction, kernel: Kernel) -> None:
        super().__init__(luck=_difference_luck(luck), kernel=kernel)

    def likelihood(
        self, rho_a: Distribution, rho_b: Distribution, score: float
    ) -> NDArray[np.float64]:
        return fft_likelihood(self._luck, rho_a, rho_b, score)

    def smooth[D: Distribution](self, rho: D) -> D:
        if not isinstance(rho, GridDistribution):
            msg = "the fft engine needs beliefs on a grid"
            raise IncompatibleGridError(msg)
        return kernel_fft(self._kernel, rho)  # type: ignore[return-value]
