from dataclasses import dataclass

import numpy as np
import pytest
from numpy.testing import assert_allclose
from numpy.typing import ArrayLike, NDArray
from pytest import fixture

from gridrate.components.naive_engine import (
    NaiveEngine,
    kernel_naive,
    posterior_naive,
)
from gridrate.exceptions import DegenerateDistributionError, ImpossibleOutcomeError
from gridrate.kernels import GaussianKernel, IdentityKernel, TabulatedKernel
from gridrate.luck import (
    LuckFunction,
    RatioLuck,
    SigmoidMix,
    TabulatedLuck,
    expected_score,
)
from gridrate.models import Grid, GridDistribution, PointDistribution, default_prior


@dataclass(frozen=True)
class Swapped(LuckFunction):
    luck: LuckFunction

    def __call__(self, x: ArrayLike, y: ArrayLike) -> NDArray[np.float64]:
        return self.luck(y, x)


@fixture
def rho_a() -> PointDistribution:
    return PointDistribution.from_weights([2.0, 5.0, 13.0], [9, 3, 8])


@fixture
def rho_b() -> PointDistribution:
    return PointDistribution.from_weights([3.0, 7.0, 11.0], [2, 4, 5])


@fixture
def grid() -> Grid:
    return Grid(n=200, half_width=5.0)


def random_belief(grid: Grid, rng: np.random.Generator) -> GridDistribution:
    from scipy.stats import norm

    weights = norm.pdf(grid.points, loc=rng.uniform(-2, 2), scale=rng.uniform(0.2, 1))
    noise = rng.uniform(0.5, 1.5, grid.size)
    return GridDistribution.from_weights(grid, weights * noise)


def test_ratio_example_winner(
    rho_a: PointDistribution, rho_b: PointDistribution
) -> None:
    posterior = posterior_naive(RatioLuck(), rho_a, rho_b, 1.0)
    assert_allclose(
        posterior.weights,
        np.array([69024, 41925, 173056]) / 284005,
        rtol=0,
        atol=1e-12,
    )
    assert np.array_equal(posterior.support, rho_a.support)


def test_ratio_example_loser(
    rho_a: PointDistribution, rho_b: PointDistribution
) -> None:
    posterior = posterior_naive(RatioLuck(), rho_b, rho_a, 0.0)
    assert_allclose(
        posterior.weights,
        np.array([74724, 105456, 103825]) / 284005,
        rtol=0,
        atol=1e-12,
    )


def test_expected_score_matches_engine(
    rho_a: PointDistribution, rho_b: PointDistribution
) -> None:
    engine = NaiveEngine(RatioLuck(), IdentityKernel())
    assert engine.expected_score(rho_a, rho_b) == pytest.approx(
        expected_score(RatioLuck(), rho_a, rho_b), abs=1e-15
    )


def test_tabulated_kernel_example() -> None:
    support = np.arange(1.0, 101.0)
    weights = np.zeros(100)
    weights[np.arange(1, 11) ** 2 - 1] = 0.1
    rho = PointDistribution(support, weights)
    kernel = TabulatedKernel(step=1.0, values=(1 / 3, 1 / 3, 1 / 3))
    smoothed = kernel_naive(kernel, rho)
    reached = [1, 2, 3, 4, 5, 8, 9, 10, 15, 16, 17, 24, 25, 26, 35, 36, 37]
    reached += [48, 49, 50, 63, 64, 65, 80, 81, 82, 99, 100]
    expected = np.zeros(100)
    expected[np.array(reached) - 1] = 1 / 28
    assert_allclose(smoothed.weights, expected, rtol=0, atol=1e-15)


def test_identity_kernel_returns_the_input(grid: Grid) -> None:
    prior = default_prior(grid, 0.7)
    assert kernel_naive(IdentityKernel(), prior) is prior


def test_gaussian_kernel_against_double_loop() -> None:
    grid = Grid(n=50, half_width=2.0)
    rho = random_belief(grid, np.random.default_rng(3))
    kernel = GaussianKernel(sigma=0.1)
    expected = np.zeros(grid.size)
    for i, x in enumerate(grid.points):
        for k, y in enumerate(grid.points):
            expected[i] += rho.weights[k] * float(kernel(x - y))
    assert_allclose(
        kernel_naive(kernel, rho).weights, expected / expected.sum(), atol=1e-14
    )


def test_fractional_score_against_double_loop(grid: Grid) -> None:
    rng = np.random.default_rng(5)
    a, b = random_belief(grid, rng), random_belief(grid, rng)
    luck = SigmoidMix()
    expected = np.zeros(grid.size)
    for i, x in enumerate(grid.points):
        win = luck(x, grid.points)
        expected[i] = a.weights[i] * np.sum(b.weights * np.sqrt(win * (1 - win)))
    posterior = posterior_naive(luck, a, b, 0.5)
    assert_allclose(posterior.weights, expected / expected.sum(), atol=1e-14)


@pytest.mark.parametrize("score", [0.0, 0.3, 0.5, 1.0])
def test_scale_invariance(grid: Grid, score: float) -> None:
    rng = np.random.default_rng(11)
    a, b = random_belief(grid, rng), random_belief(grid, rng)
    reference = posterior_naive(SigmoidMix(), a, b, score)
    scaled_a = GridDistribution(grid, a.weights * 7.5)
    scaled_b = GridDistribution(grid, b.weights * 0.01)
    scaled = posterior_naive(SigmoidMix(), scaled_a, scaled_b, score)
    assert_allclose(scaled.weights, reference.weights, atol=1e-14)


@pytest.mark.parametrize("score", [0.0, 0.25, 1.0])
def test_complementary_luck_with_complementary_score(grid: Grid, score: float) -> None:
    rng = np.random.default_rng(13)
    a, b = random_belief(grid, rng), random_belief(grid, rng)
    luck = SigmoidMix(beta=0.9)
    direct = posterior_naive(luck, a, b, score)
    swapped = posterior_naive(Swapped(luck), a, b, 1.0 - score)
    assert_allclose(direct.weights, swapped.weights, atol=1e-14)


def test_win_dominates_prior(grid: Grid) -> None:
    rng = np.random.default_rng(17)
    for _ in range(50):
        a, b = random_belief(grid, rng), random_belief(grid, rng)
        won = posterior_naive(SigmoidMix(), a, b, 1.0)
        lost = posterior_naive(SigmoidMix(), a, b, 0.0)
        assert np.all(won.cdf() <= a.cdf() + 1e-12)
        assert np.all(lost.cdf() >= a.cdf() - 1e-12)
        assert won.mean > a.mean > lost.mean


@pytest.mark.parametrize("score", [0.0, 0.5, 1.0])
def test_zero_beta_keeps_the_prior(grid: Grid, score: float) -> None:
    rng = np.random.default_rng(19)
    a, b = random_belief(grid, rng), random_belief(grid, rng)
    posterior = posterior_naive(SigmoidMix(beta=0.0), a, b, score)
    assert_allclose(posterior.weights, a.weights, atol=1e-15)


def test_impossible_outcome(grid: Grid) -> None:
    luck = TabulatedLuck.heaviside(beta=1.0, step=grid.step)
    weak = GridDistribution.point_mass(grid, 10)
    strong = GridDistribution.point_mass(grid, 150)
    with pytest.raises(ImpossibleOutcomeError):
        posterior_naive(luck, weak, strong, 1.0)
    assert posterior_naive(luck, strong, weak, 1.0).weights[150] == 1.0


def test_zero_belief_cannot_be_smoothed(grid: Grid) -> None:
    with pytest.raises(DegenerateDistributionError):
        kernel_naive(GaussianKernel(), GridDistribution(grid, np.zeros(grid.size)))


def test_per_source_normalization_only_matters_at_the_edges() -> None:
    grid = Grid(n=1000, half_width=7.0)
    prior = default_prior(grid, 0.7)
    kernel = GaussianKernel(sigma=0.03)
    globally = kernel_naive(kernel, prior)
    per_source = kernel_naive(kernel, prior, per_source=True)
    assert np.max(np.abs(globally.weights - per_source.weights)) <= 1e-12

    edge = GridDistribution.point_mass(grid, 0)
    assert kernel_naive(kernel, edge).weights[0] == pytest.approx(
        kernel_naive(kernel, edge, per_source=True).weights[0]
    )
