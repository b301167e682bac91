"""Diffusion kernels modelling strength drift between matches.

Every kernel is a difference function `K(x, y) = G(x - y)`. Engines normalize their \
output globally, so `G` only needs to be known up to a constant.
"""

from abc import ABC, abstractmethod
from collections.abc import Sequence
from dataclasses import dataclass
from math import isfinite
from typing import Self

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import InvalidParameterError
from .luck import LaplaceComponent, laplace_components


class Kernel(ABC):
    @abstractmethod
    def __call__(self, d: ArrayLike) -> NDArray[np.float64]:
        """Evaluate the difference function `G` on strength differences."""
        raise NotImplementedError


@dataclass(frozen=True)
class GaussianKernel(Kernel):
    sigma: float = 0.03

    def __post_init__(self) -> None:
        if not (isfinite(self.sigma) and self.sigma > 0):
            msg = f"kernel standard deviation must be positive, got {self.sigma}"
            raise InvalidParameterError(msg)

    def __call__(self, d: ArrayLike) -> NDArray[np.float64]:
        from scipy.stats import norm

        return norm.pdf(d, scale=self.sigma)


@dataclass(frozen=True)
class LaplaceMixKernel(Kernel):
    """Mixture of Laplace densities."""

    components: tuple[LaplaceComponent, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        laplace_components(
            [c.weight for c in self.components], [c.scale for c in self.components]
        )

    @classmethod
    def from_lists(cls, weights: Sequence[float], scales: Sequence[float]) -> Self:
        return cls(components=laplace_components(weights, scales))

    def __call__(self, d: ArrayLike) -> NDArray[np.float64]:
        from scipy.stats import laplace

        d = np.asarray(d, dtype=np.float64)
        result = np.zeros_like(d)
        for component in self.components:
            result = result + component.weight * laplace.pdf(d, scale=component.scale)
        return result


@dataclass(frozen=True)
class TabulatedKernel(Kernel):
    """Difference function sampled every `step`, zero beyond its samples.

    `values[j]` is `G((j - J) * step)` with `len(values) = 2J + 1`.
    """

    step: float
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not (isfinite(self.step) and self.step > 0):
            msg = f"table step must be positive, got {self.step}"
            raise InvalidParameterError(msg)
        values = np.asarray(self.values, dtype=np.float64)
        if values.size % 2 == 0:
            msg = "kernel table needs an odd number of samples centered on 0"
            raise InvalidParameterError(msg)
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            msg = "kernel table values must be finite and non-negative"
            raise InvalidParameterError(msg)
        if not np.any(values > 0):
            msg = "kernel table cannot be identically zero"
            raise InvalidParameterError(msg)

    @property
    def knots(self) -> NDArray[np.float64]:
        half = len(self.values) // 2
        return self.step * np.arange(-half, half + 1)

    def __call__(self, d: ArrayLike) -> NDArray[np.float64]:
        return np.interp(d, self.knots, self.values, left=0.0, right=0.0)


@dataclass(frozen=True)
class IdentityKernel(Kernel):
    """No drift. Engines return their input unchanged."""

    def __call__(self, d: ArrayLike) -> NDArray[np.float64]:
        return (np.asarray(d, dtype=np.float64) == 0).astype(np.float64)
