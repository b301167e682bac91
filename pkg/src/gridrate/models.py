"""Model classes.

There are several kinds of types defined in this module:

- Simple scalar types to disambiguate multi-usage types:

    - [`PlayerId`][gridrate.models.PlayerId]
    - [`MatchScore`][gridrate.models.MatchScore]

- Types used to represent beliefs about player strength. All of them are immutable \
    and hold their weights in read-only numpy arrays:

    - [`Grid`][gridrate.models.Grid]
    - [`Distribution`][gridrate.models.Distribution]
    - [`PointDistribution`][gridrate.models.PointDistribution]
    - [`GridDistribution`][gridrate.models.GridDistribution]

    A [`GridDistribution`][gridrate.models.GridDistribution] lives on the uniform \
    support `x_k = -M + (2M/n)k` shared by every player of a store, a \
    [`PointDistribution`][gridrate.models.PointDistribution] lives on an arbitrary \
    sorted support. Engines accept both where the algebra allows it.

- Types used to display beliefs:

    - [`DisplayTransform`][gridrate.models.DisplayTransform]

- Types read from or written to disk by the rating store. `MatchEvent` is defined \
    with Pydantic so that it can be validated directly from a match log line:

    - [`MatchEvent`][gridrate.models.MatchEvent]
    - [`PlayerRecord`][gridrate.models.PlayerRecord]

- Types produced by the evaluation kit:

    - [`ProcessSummary`][gridrate.models.ProcessSummary]
    - [`LogLossRecord`][gridrate.models.LogLossRecord]
    - [`LogLossReport`][gridrate.models.LogLossReport]
    - [`LossDensity`][gridrate.models.LossDensity]
    - [`CurveSpec`][gridrate.models.CurveSpec]
    - [`CurvePoint`][gridrate.models.CurvePoint]
    - [`LeaderboardRow`][gridrate.models.LeaderboardRow]
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from math import inf, isfinite, log, sqrt
from typing import NewType, Self

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .exceptions import DegenerateDistributionError, InvalidParameterError

########################################################################################
# Simple scalars                                                                       #
########################################################################################

PlayerId = NewType("PlayerId", str)
"""Derived from str to represent specifically a player identifier."""

MatchScore = NewType("MatchScore", float)
"""Derived from float to represent the score of the first player of a match.

1 means the first player won, 0 that the second player won and 1/2 a draw. Any value \
in between is allowed.
"""

SCHEMA_VERSION = 1
"""Version of the player store format."""


def match_score(value: float) -> MatchScore:
    """Validate a score and tag it as a [`MatchScore`][gridrate.models.MatchScore].

    Args:
        value: Score of the first player.

    Returns:
        The same value, typed.

    Raises:
        InvalidParameterError: If the value is not in [0, 1].
    """
    if not 0.0 <= value <= 1.0:
        msg = f"match score must be in [0, 1], got {value}"
        raise InvalidParameterError(msg)
    return MatchScore(float(value))


########################################################################################
# Beliefs                                                                              #
########################################################################################


@dataclass(frozen=True)
class Grid:
    """Uniform support shared by all grid distributions of a store."""

    n: int
    """Number of intervals. The support has `n + 1` points."""

    half_width: float
    """Half width `M` of the support `[-M, M]`."""

    def __post_init__(self) -> None:
        if self.n < 1:
            msg = f"grid needs at least one interval, got n={self.n}"
            raise InvalidParameterError(msg)
        if not (isfinite(self.half_width) and self.half_width > 0):
            msg = f"grid half width must be positive, got {self.half_width}"
            raise InvalidParameterError(msg)

    @property
    def size(self) -> int:
        return self.n + 1

    @property
    def step(self) -> float:
        return 2 * self.half_width / self.n

    @cached_property
    def points(self) -> NDArray[np.float64]:
        # (2k - n) is an exact integer, which keeps the points exactly symmetric
        points = self.half_width * (2 * np.arange(self.n + 1) - self.n) / self.n
        points.flags.writeable = False
        return points

    def is_compatible(self, other: "Grid") -> bool:
        return self.n == other.n and self.half_width == other.half_width


def _readonly(values: ArrayLike, name: str) -> NDArray[np.float64]:
    array = np.array(values, dtype=np.float64)
    if array.ndim != 1:
        msg = f"{name} must be one dimensional"
        raise InvalidParameterError(msg)
    array.flags.writeable = False
    return array


def _check_weights(weights: NDArray[np.float64]) -> None:
    if not np.all(np.isfinite(weights)):
        msg = "weights must be finite"
        raise InvalidParameterError(msg)
    if np.any(weights < 0):
        msg = "weights must be non-negative"
        raise InvalidParameterError(msg)


def normalized(weights: ArrayLike) -> NDArray[np.float64]:
    """Divide weights by their exact current sum.

    Args:
        weights: Non-negative weights.

    Returns:
        A new array summing to 1.

    Raises:
        DegenerateDistributionError: If the weights sum to zero.
    """
    array = np.asarray(weights, dtype=np.float64)
    total = array.sum()
    if not total > 0:
        msg = "weights sum to zero, cannot normalize"
        raise DegenerateDistributionError(msg)
    return array / total


class Distribution(ABC):
    """Weights over a finite sorted support.

    The weights are expected to sum to 1 but this is only enforced by the \
    `from_weights` constructors: engines accept unnormalized weights, which is \
    what makes their scale invariance testable.
    """

    support: NDArray[np.float64]
    weights: NDArray[np.float64]

    @abstractmethod
    def with_weights(self, weights: ArrayLike) -> Self:
        """Build a normalized distribution on the same support.

        Args:
            weights: New unnormalized weights.

        Returns:
            The new distribution.
        """
        raise NotImplementedError

    @property
    def total(self) -> float:
        return float(self.weights.sum())

    def is_normalized(self, tolerance: float = 1e-12) -> bool:
        return abs(self.total - 1.0) <= tolerance

    @property
    def mean(self) -> float:
        return float(np.dot(self.weights, self.support) / self.total)

    @property
    def variance(self) -> float:
        centered = self.support - self.mean
        return float(np.dot(self.weights, centered * centered) / self.total)

    @property
    def std(self) -> float:
        return sqrt(self.variance)

    def cdf(self) -> NDArray[np.float64]:
        return np.cumsum(self.weights) / self.total

    def quantile(self, q: float) -> float:
        index = int(np.searchsorted(self.cdf(), q, side="left"))
        return float(self.support[min(index, self.support.size - 1)])


@dataclass(frozen=True, eq=False)
class PointDistribution(Distribution):
    """Distribution on an arbitrary strictly increasing finite support."""

    support: NDArray[np.float64]
    weights: NDArray[np.float64]

    def __post_init__(self) -> None:
        support = _readonly(self.support, "support")
        weights = _readonly(self.weights, "weights")
        if support.size == 0:
            msg = "support cannot be empty"
            raise InvalidParameterError(msg)
        if support.shape != weights.shape:
            msg = "support and weights must have the same length"
            raise InvalidParameterError(msg)
        if not np.all(np.isfinite(support)) or np.any(np.diff(support) <= 0):
            msg = "support must be finite and strictly increasing"
            raise InvalidParameterError(msg)
        _check_weights(weights)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_weights(cls, support: ArrayLike, weights: ArrayLike) -> Self:
        return cls(np.asarray(support, dtype=np.float64), normalized(weights))

    @classmethod
    def point_mass(cls, x: float) -> Self:
        return cls(np.array([x]), np.array([1.0]))

    def with_weights(self, weights: ArrayLike) -> Self:
        return type(self)(self.support, normalized(weights))


@dataclass(frozen=True, eq=False)
class GridDistribution(Distribution):
    """Distribution on the points of a [`Grid`][gridrate.models.Grid]."""

    grid: Grid
    weights: NDArray[np.float64]

    def __post_init__(self) -> None:
        weights = _readonly(self.weights, "weights")
        if weights.size != self.grid.size:
            msg = f"expected {self.grid.size} weights, got {weights.size}"
            raise InvalidParameterError(msg)
        _check_weights(weights)
        object.__setattr__(self, "weights", weights)

    @property
    def support(self) -> NDArray[np.float64]:
        return self.grid.points

    @classmethod
    def from_weights(cls, grid: Grid, weights: ArrayLike) -> Self:
        return cls(grid, normalized(weights))

    @classmethod
    def point_mass(cls, grid: Grid, index: int) -> Self:
        weights = np.zeros(grid.size)
        weights[index] = 1.0
        return cls(grid, weights)

    @classmethod
    def uniform(cls, grid: Grid) -> Self:
        return cls(grid, np.full(grid.size, 1.0 / grid.size))

    def with_weights(self, weights: ArrayLike) -> Self:
        return type(self)(self.grid, normalized(weights))

    def to_points(self) -> PointDistribution:
        return PointDistribution(self.grid.points, self.weights)


def default_prior(grid: Grid, sigma0: float) -> GridDistribution:
    """Discretize a centered normal distribution on the grid points.

    Args:
        grid: Support of the prior.
        sigma0: Standard deviation of the normal density.

    Returns:
        Weights proportional to the normal density at the grid points.

    Raises:
        InvalidParameterError: If `sigma0` is not positive.
    """
    from scipy.stats import norm

    if not sigma0 > 0:
        msg = f"prior standard deviation must be positive, got {sigma0}"
        raise InvalidParameterError(msg)
    return GridDistribution.from_weights(grid, norm.pdf(grid.points, scale=sigma0))


########################################################################################
# Display                                                                              #
########################################################################################


@dataclass(frozen=True)
class DisplayTransform:
    """Affine map from natural strength units to displayed ratings."""

    scale: float = 400 / log(10)
    offset: float = 1500.0

    def __post_init__(self) -> None:
        if not (isfinite(self.scale) and self.scale != 0 and isfinite(self.offset)):
            msg = "display scale must be finite and non-zero, offset finite"
            raise InvalidParameterError(msg)

    def __call__(self, x: float) -> float:
        return self.scale * x + self.offset

    def inverse(self, rating: float) -> float:
        return (rating - self.offset) / self.scale

    def rating(self, belief: Distribution) -> float:
        return self(belief.mean)

    def deviation(self, belief: Distribution) -> float:
        return abs(self.scale) * belief.std


def display_rating(
    transform: DisplayTransform, belief: Distribution
) -> tuple[float, float]:
    """Compute the displayed rating and deviation of a belief.

    Args:
        transform: Display units.
        belief: Belief about a player strength.

    Returns:
        The rating (transformed mean) and deviation (scaled standard deviation).
    """
    return transform.rating(belief), transform.deviation(belief)


########################################################################################
# Store types                                                                          #
########################################################################################


class MatchEvent(BaseModel):
    """One line of a match log."""

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    match_id: str = Field(alias="id")
    """Label of the match. Not required to be unique."""

    timestamp: int = Field(alias="ts")
    """Milliseconds since epoch."""

    player_a: PlayerId = Field(alias="a")
    """First player. The score is given from their point of view."""

    player_b: PlayerId = Field(alias="b")
    """Second player."""

    score: float = Field(ge=0.0, le=1.0)
    """1 if the first player won, 0 if the second won, 1/2 for a draw."""

    @model_validator(mode="after")
    def _distinct_players(self) -> Self:
        if self.player_a == self.player_b:
            msg = f"player {self.player_a} cannot play against themselves"
            raise ValueError(msg)
        return self


@dataclass(frozen=True, eq=False)
class PlayerRecord:
    """Unit of persistence of the rating store."""

    player_id: PlayerId
    belief: GridDistribution
    matches_played: int = 0
    last_update: int = 0
    """Timestamp of the last processed match, in milliseconds since epoch."""
    schema_version: int = SCHEMA_VERSION


########################################################################################
# Evaluation types                                                                     #
########################################################################################


@dataclass(frozen=True)
class ProcessSummary:
    processed: int
    skipped: int
    duplicates: int
    players: int
    seconds: float

    @property
    def rate(self) -> float:
        return self.processed / self.seconds if self.seconds > 0 else inf


@dataclass(frozen=True)
class LogLossRecord:
    """Walk-forward prediction for a single match."""

    match_id: str
    rating_diff: float
    """Display rating of the first player minus the one of the second player."""

    probability: float
    """Predicted expected score of the first player, before the update."""

    loss: float
    """Negative log likelihood of the observed score."""

    score: float
    included: bool
    """Whether the match passed the burn-in and variance cap filters."""

    @property
    def draw(self) -> bool:
        return 0.0 < self.score < 1.0


@dataclass(frozen=True)
class LogLossReport:
    records: tuple[LogLossRecord, ...] = field(default_factory=tuple)

    @cached_property
    def _included(self) -> tuple[LogLossRecord, ...]:
        return tuple(r for r in self.records if r.included)

    @property
    def included(self) -> int:
        return len(self._included)

    @property
    def excluded(self) -> int:
        return len(self.records) - self.included

    @property
    def draws(self) -> int:
        return sum(1 for r in self._included if r.draw)

    @property
    def average(self) -> float:
        """Average loss over included matches, draws scored with their likelihood."""
        if not self._included:
            return float("nan")
        return sum(r.loss for r in self._included) / self.included

    @property
    def average_without_draws(self) -> float:
        decisive = [r.loss for r in self._included if not r.draw]
        return sum(decisive) / len(decisive) if decisive else float("nan")


@dataclass(frozen=True, eq=False)
class LossDensity:
    """Smoothed contribution of each absolute rating difference to the log loss."""

    x: NDArray[np.float64]
    y: NDArray[np.float64]


class CurveSpec(BaseModel):
    """Parameters of a posterior mean shift curve, in display units."""

    model_config = ConfigDict(frozen=True)

    beta: float = Field(ge=0.0, le=1.0)
    sigma: float = Field(gt=0.0)
    opponent: float = 2000.0
    start: float = 0.0
    stop: float = 4000.0
    step: float = Field(default=10.0, gt=0.0)
    nodes: int = Field(default=4001, ge=3)
    """Initial number of quadrature nodes, doubled until convergence."""

    tolerance: float = Field(default=1e-6, gt=0.0)

    @model_validator(mode="after")
    def _ordered_range(self) -> Self:
        if self.stop < self.start:
            msg = "curve range must satisfy start <= stop"
            raise ValueError(msg)
        return self


@dataclass(frozen=True)
class CurvePoint:
    m: float
    delta: float


@dataclass(frozen=True)
class LeaderboardRow:
    rank: int
    player_id: PlayerId
    rating: float
    deviation: float
    matches_played: int
