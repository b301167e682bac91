from math import log

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import expit
from scipy.stats import norm

from gridrate.evaluating.curves import curve, curve_maximum, mean_shift
from gridrate.exceptions import ConvergenceError
from gridrate.models import CurveSpec


def quad_shift(beta: float, sigma: float, opponent: float, m: float) -> float:
    def win(x: float) -> float:
        return expit((x - opponent) * log(10) / 400) * norm.pdf(x, m, sigma)

    low, high = m - 10 * sigma, m + 10 * sigma
    numerator = quad(lambda x: win(x) * (x - m), low, high, epsabs=1e-13)[0]
    mass = quad(win, low, high, epsabs=1e-13)[0]
    return beta * numerator / ((1 - beta) / 2 + beta * mass)


def test_winner_far_below_approaches_the_asymptote() -> None:
    spec = CurveSpec(beta=1.0, sigma=50.0)
    assert mean_shift(spec, 0.0) == pytest.approx(50**2 * log(10) / 400, rel=0.01)


@pytest.mark.parametrize("m", [-2e4, -1e5, -3e5])
def test_asymptote_holds_without_underflow(m: float) -> None:
    spec = CurveSpec(beta=1.0, sigma=50.0, start=m, stop=m)
    assert mean_shift(spec, m) == pytest.approx(50**2 * log(10) / 400, rel=1e-4)


def test_partial_luck_far_below_moves_nothing() -> None:
    spec = CurveSpec(beta=0.8, sigma=50.0, start=-3e5, stop=-3e5)
    assert mean_shift(spec, -3e5) == pytest.approx(0.0, abs=1e-12)


def test_coin_flip_moves_nothing() -> None:
    spec = CurveSpec(beta=0.0, sigma=50.0)
    assert mean_shift(spec, 1500.0) == 0.0


@pytest.mark.parametrize("m", [0.0, 1500.0, 2000.0, 2300.0, 3500.0])
def test_matches_adaptive_quadrature(m: float) -> None:
    spec = CurveSpec(beta=0.8, sigma=50.0)
    assert mean_shift(spec, m) == pytest.approx(
        quad_shift(0.8, 50.0, 2000.0, m), rel=5e-3, abs=1e-9
    )


@pytest.mark.parametrize("beta", [0.8, 0.99])
def test_partial_luck_vanishes_far_below(beta: float) -> None:
    points = curve(CurveSpec(beta=beta, sigma=50.0, step=50.0))
    best = curve_maximum(points)
    assert np.isfinite(best.delta)
    assert 0.0 < best.m < 4000.0
    assert points[0].m == 0.0
    assert points[-1].m == 4000.0
    assert points[0].delta < 0.1 * best.delta


def test_shift_is_positive_for_a_win() -> None:
    points = curve(CurveSpec(beta=0.8, sigma=80.0, start=1000, stop=3000, step=250))
    assert len(points) == 9
    assert all(point.delta > 0 for point in points)


def test_spec_validation() -> None:
    with pytest.raises(ValueError, match="start <= stop"):
        CurveSpec(beta=0.8, sigma=50.0, start=10, stop=0)


def test_unconverged_quadrature(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr("gridrate.evaluating.curves._MAX_REFINEMENTS", 1)
    spec = CurveSpec(beta=1.0, sigma=50.0, nodes=3, tolerance=1e-12)
    with pytest.raises(ConvergenceError):
        mean_shift(spec, 1000.0)
