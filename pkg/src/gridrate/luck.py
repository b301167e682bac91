"""Luck functions and the expected score functional.

A luck function `Λ(x, y)` gives the average score of a player of strength `x` \
against a player of strength `y`. All of them satisfy `Λ(x, y) + Λ(y, x) = 1`.

The difference-form variants are written `Λ(x, y) = (1 - β) / 2 + β F(x - y)` where \
`F` is a sigmoid and `β` is the share of the outcome decided by strength rather than \
by chance. Only those are accepted by the convolution-based engines.
"""

from abc import ABC, abstractmethod
from collections.abc import Sequence
from dataclasses import dataclass
from math import isfinite, log
from typing import Self

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import InvalidParameterError
from .models import Distribution, DisplayTransform


def _check_beta(beta: float) -> None:
    if not 0.0 <= beta <= 1.0:
        msg = f"beta must be in [0, 1], got {beta}"
        raise InvalidParameterError(msg)


class LuckFunction(ABC):
    @abstractmethod
    def __call__(self, x: ArrayLike, y: ArrayLike) -> NDArray[np.float64]:
        """Evaluate the luck function, broadcasting its arguments.

        Args:
            x: Strengths of the first player.
            y: Strengths of the second player.

        Returns:
            Average scores of the first player, in [0, 1].
        """
        raise NotImplementedError


class DifferenceLuck(LuckFunction):
    beta: float

    @abstractmethod
    def sigmoid(self, d: ArrayLike) -> NDArray[np.float64]:
        """Evaluate the sigmoid `F` on strength differences."""
        raise NotImplementedError

    def __call__(self, x: ArrayLike, y: ArrayLike) -> NDArray[np.float64]:
        d = np.subtract(x, y, dtype=np.float64)
        return (1 - self.beta) / 2 + self.beta * self.sigmoid(d)


@dataclass(frozen=True)
class SigmoidMix(DifferenceLuck):
    """Constant plus logistic luck function, the default of the rating system."""

    beta: float = 0.8
    scale: float = 1.0
    """Scale of the logistic in natural strength units."""

    def __post_init__(self) -> None:
        _check_beta(self.beta)
        if not (isfinite(self.scale) and self.scale > 0):
            msg = f"logistic scale must be positive, got {self.scale}"
            raise InvalidParameterError(msg)

    @classmethod
    def from_display(
        cls, beta: float, transform: DisplayTransform, base: float = 400.0
    ) -> Self:
        """Build the luck function of a `1 / (1 + 10^(-(r_a - r_b) / base))` logistic.

        Args:
            beta: Share of the outcome decided by strength.
            transform: Display units in which ratings `r_a` and `r_b` are expressed.
            base: Rating difference giving ten to one odds.

        Returns:
            The equivalent natural-scale luck function.
        """
        return cls(beta=beta, scale=base / (log(10) * abs(transform.scale)))

    def sigmoid(self, d: ArrayLike) -> NDArray[np.float64]:
        from scipy.special import expit

        return expit(np.divide(d, self.scale, dtype=np.float64))


@dataclass(frozen=True)
class LaplaceComponent:
    weight: float
    scale: float

    def __post_init__(self) -> None:
        if not (isfinite(self.weight) and self.weight >= 0):
            msg = f"mixture weight must be non-negative, got {self.weight}"
            raise InvalidParameterError(msg)
        if not (isfinite(self.scale) and self.scale > 0):
            msg = f"Laplace scale must be positive, got {self.scale}"
            raise InvalidParameterError(msg)


def laplace_components(
    weights: Sequence[float], scales: Sequence[float]
) -> tuple[LaplaceComponent, ...]:
    """Pair mixture weights with Laplace scales and check the weights sum to 1.

    Args:
        weights: Non-negative mixture weights.
        scales: Positive scales, one per weight.

    Returns:
        The mixture components.

    Raises:
        InvalidParameterError: If the lists are empty, of different lengths, or if \
            the weights do not sum to 1.
    """
    if not weights or len(weights) != len(scales):
        msg = "mixture needs as many weights as scales, and at least one of each"
        raise InvalidParameterError(msg)
    components = tuple(
        LaplaceComponent(weight=w, scale=b)
        for w, b in zip(weights, scales, strict=True)
    )
    if abs(sum(c.weight for c in components) - 1.0) > 1e-9:
        msg = f"mixture weights must sum to 1, got {sum(weights)}"
        raise InvalidParameterError(msg)
    return components


@dataclass(frozen=True)
class LaplaceMix(DifferenceLuck):
    """Constant plus mixture of Laplace distribution functions."""

    beta: float
    components: tuple[LaplaceComponent, ...]

    def __post_init__(self) -> None:
        _check_beta(self.beta)
        object.__setattr__(self, "components", tuple(self.components))
        laplace_components(
            [c.weight for c in self.components], [c.scale for c in self.components]
        )

    @classmethod
    def from_lists(
        cls, beta: float, weights: Sequence[float], scales: Sequence[float]
    ) -> Self:
        return cls(beta=beta, components=laplace_components(weights, scales))

    def sigmoid(self, d: ArrayLike) -> NDArray[np.float64]:
        from scipy.stats import laplace

        d = np.asarray(d, dtype=np.float64)
        result = np.zeros_like(d)
        for component in self.components:
            result = result + component.weight * laplace.cdf(d, scale=component.scale)
        return result


@dataclass(frozen=True)
class TabulatedLuck(DifferenceLuck):
    """Difference-form luck function with a sigmoid sampled every `step`.

    `values[j]` is `F((j - J) * step)` with `len(values) = 2J + 1`. The sigmoid is \
    interpolated linearly between samples and constant beyond them.
    """

    beta: float
    step: float
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        _check_beta(self.beta)
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not (isfinite(self.step) and self.step > 0):
            msg = f"table step must be positive, got {self.step}"
            raise InvalidParameterError(msg)
        values = np.asarray(self.values, dtype=np.float64)
        if values.size % 2 == 0:
            msg = "sigmoid table needs an odd number of samples centered on 0"
            raise InvalidParameterError(msg)
        if np.any(values < 0) or np.any(values > 1):
            msg = "sigmoid table values must be in [0, 1]"
            raise InvalidParameterError(msg)
        if np.any(np.diff(values) < 0):
            msg = "sigmoid table must be non-decreasing"
            raise InvalidParameterError(msg)
        if np.max(np.abs(values + values[::-1] - 1)) > 1e-12:
            msg = "sigmoid table must satisfy F(d) + F(-d) = 1"
            raise InvalidParameterError(msg)

    @classmethod
    def heaviside(cls, beta: float, step: float) -> Self:
        """Step sigmoid, exact at every multiple of `step`.

        Args:
            beta: Share of the outcome decided by strength.
            step: Grid step the luck function will be evaluated on.

        Returns:
            The luck function `(1 - β) / 2 + β H(x - y)` with `H(0) = 1/2`.
        """
        return cls(beta=beta, step=step, values=(0.0, 0.5, 1.0))

    @property
    def knots(self) -> NDArray[np.float64]:
        half = len(self.values) // 2
        return self.step * np.arange(-half, half + 1)

    def sigmoid(self, d: ArrayLike) -> NDArray[np.float64]:
        return np.interp(d, self.knots, self.values)


@dataclass(frozen=True)
class RatioLuck(LuckFunction):
    """Bradley-Terry ratio `x / (x + y)` on positive strengths."""

    def __call__(self, x: ArrayLike, y: ArrayLike) -> NDArray[np.float64]:
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if np.any(x <= 0) or np.any(y <= 0):
            msg = "ratio luck function needs positive strengths"
            raise InvalidParameterError(msg)
        return x / (x + y)


def luck_eval(luck: LuckFunction, x: float, y: float) -> float:
    return float(luck(x, y))


def outcome_likelihood(win: NDArray[np.float64], score: float) -> NDArray[np.float64]:
    """Likelihood `Λ^θ (1 - Λ)^(1 - θ)` of a score given win probabilities.

    Scores of exactly 0 and 1 skip the exponentiation so that `0^0 = 1`.

    Args:
        win: Values of the luck function.
        score: Score of the first player.

    Returns:
        The likelihood of the score, with the shape of `win`.
    """
    if score == 1.0:
        return win
    loss = 1.0 - win
    if score == 0.0:
        return loss
    return np.power(win, score) * np.power(loss, 1.0 - score)


def expected_score(luck: LuckFunction, a: Distribution, b: Distribution) -> float:
    """Average score of `a` against `b`, the double sum of `w_a w_b Λ`.

    Args:
        luck: Luck function.
        a: Belief about the first player.
        b: Belief about the second player.

    Returns:
        The expected score of the first player.
    """
    table = luck(a.support[:, None], b.support[None, :])
    return float(a.weights @ table @ b.weights)
