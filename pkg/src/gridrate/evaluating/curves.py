"""Posterior mean shift after a win against a known opponent.

A player believed normal with mean `m` and deviation `σ` (display units) beats an \
opponent of known rating `r`. With `s(x) = 1 / (1 + 10^((r - x) / 400))`, the mean \
moves by

    m' - m = β ∫ s(x)(x - m) φ(x) dx / ((1 - β) / 2 + β ∫ s(x) φ(x) dx)

where `φ` is the belief density. For `β = 1` the shift tends to `σ² ln 10 / 400` \
far below the opponent, for `β < 1` it vanishes.
"""

from logging import getLogger

import numpy as np

from ..exceptions import ConvergenceError
from ..models import CurvePoint, CurveSpec

_logger = getLogger(__name__)

_MAX_REFINEMENTS = 12
_SPAN = 8.0


def _shift_at(spec: CurveSpec, m: float, nodes: int) -> float:
    from scipy.integrate import trapezoid
    from scipy.special import log_expit
    from scipy.stats import norm

    x = np.linspace(m - _SPAN * spec.sigma, m + _SPAN * spec.sigma, nodes)
    log_win = log_expit((x - spec.opponent) * np.log(10) / 400) + norm.logpdf(
        x, loc=m, scale=spec.sigma
    )
    # Weights are rescaled by exp(-peak), and so is the luck term.
    peak = log_win.max()
    win = np.exp(log_win - peak)
    luck = 0.0
    if spec.beta < 1:
        with np.errstate(over="ignore"):
            luck = (1 - spec.beta) / 2 * np.exp(-peak)
    numerator = spec.beta * trapezoid(win * (x - m), x)
    denominator = luck + spec.beta * trapezoid(win, x)
    return float(numerator / denominator)


def mean_shift(spec: CurveSpec, m: float) -> float:
    """Compute `m' - m` for one prior mean, refining the quadrature until it settles.

    Args:
        spec: Curve parameters.
        m: Prior mean of the winner, in display units.

    Returns:
        The posterior mean minus the prior mean.

    Raises:
        ConvergenceError: If doubling the resolution keeps changing the value by more \
            than the tolerance.
    """
    nodes = spec.nodes
    value = _shift_at(spec, m, nodes)
    for _ in range(_MAX_REFINEMENTS):
        nodes = 2 * nodes - 1
        refined = _shift_at(spec, m, nodes)
        if abs(refined - value) < spec.tolerance:
            return refined
        value = refined
    msg = f"mean shift at m={m} did not converge with {nodes} nodes"
    raise ConvergenceError(msg)


def curve(spec: CurveSpec) -> list[CurvePoint]:
    """Evaluate the mean shift over the requested range of prior means.

    Args:
        spec: Curve parameters.

    Returns:
        One point per step from `spec.start` to `spec.stop` included.
    """
    count = int(np.floor((spec.stop - spec.start) / spec.step + 1e-9)) + 1
    points = [
        CurvePoint(m=m, delta=mean_shift(spec, m))
        for m in (spec.start + spec.step * i for i in range(count))
    ]
    best = curve_maximum(points)
    _logger.info("Largest shift %.6g at m=%.6g", best.delta, best.m)
    return points


def curve_maximum(points: list[CurvePoint]) -> CurvePoint:
    return max(points, key=lambda point: point.delta)
