"""Walk-forward log loss of the rating system on a match log.

Every match is predicted with the beliefs held before it, then processed. Matches \
enter the average only after the burn-in and when both players have a display \
deviation below the variance cap.
"""

from collections.abc import Iterable
from logging import getLogger

import numpy as np

from ..components.protocols import RatingStoreProtocol
from ..models import (
    DisplayTransform,
    LogLossRecord,
    LogLossReport,
    LossDensity,
    MatchEvent,
    display_rating,
)

_logger = getLogger(__name__)


def score_loss(probability: float, score: float) -> float:
    """Negative log likelihood `-θ ln p - (1 - θ) ln(1 - p)` of a score.

    Args:
        probability: Predicted expected score.
        score: Observed score.

    Returns:
        The loss, infinite if the observed outcome was predicted impossible.
    """
    from scipy.special import xlogy

    return float(-xlogy(score, probability) - xlogy(1 - score, 1 - probability))


class LogLossEvaluator:
    def __init__(
        self,
        store: RatingStoreProtocol,
        transform: DisplayTransform,
        var_cap: float,
        burn_in: float = 0.0,
    ) -> None:
        self._store = store
        self._transform = transform
        self._var_cap = var_cap
        self._burn_in = burn_in

    def evaluate(self, events: Iterable[MatchEvent], total: int) -> LogLossReport:
        """Predict then process every match of a log.

        Args:
            events: Matches in processing order.
            total: Number of matches, used to size the burn-in.

        Returns:
            The per-match report.
        """
        burn_in = int(self._burn_in * total)
        cap = self._var_cap**2
        records = []
        for index, event in enumerate(events):
            record_a = self._store.get_or_create(event.player_a)
            record_b = self._store.get_or_create(event.player_b)
            rating_a, deviation_a = display_rating(self._transform, record_a.belief)
            rating_b, deviation_b = display_rating(self._transform, record_b.belief)
            probability = self._store.predict(event.player_a, event.player_b)
            included = (
                index >= burn_in and deviation_a**2 < cap and deviation_b**2 < cap
            )
            self._store.process_match(event)
            records.append(
                LogLossRecord(
                    match_id=event.match_id,
                    rating_diff=rating_a - rating_b,
                    probability=probability,
                    loss=score_loss(probability, event.score),
                    score=event.score,
                    included=included,
                )
            )
        report = LogLossReport(records=tuple(records))
        _logger.info(
            "Log loss %.6f over %d matches (%d excluded, %d draws)",
            report.average,
            report.included,
            report.excluded,
            report.draws,
        )
        return report


def loss_density(
    report: LogLossReport,
    bandwidth: float = 5.0,
    resolution: float = 1.0,
    chunk_size: int = 64,
) -> LossDensity:
    """Smooth the losses of included matches over absolute rating differences.

    Each loss is spread with a Gaussian of standard deviation `bandwidth`, the sum at \
    `x` is divided by the mass of the Gaussian on the half-line `[0, ∞)` and the \
    curve is scaled to integrate to the average loss.

    Args:
        report: Log loss report.
        bandwidth: Standard deviation of the Gaussian, in display units.
        resolution: Step of the output grid, in display units.
        chunk_size: Number of grid points evaluated at once.

    Returns:
        The smoothed curve, empty if no match was included.
    """
    from scipy.integrate import trapezoid
    from scipy.stats import norm

    included = [r for r in report.records if r.included]
    if not included:
        return LossDensity(x=np.empty(0), y=np.empty(0))
    differences = np.abs([r.rating_diff for r in included])
    losses = np.array([r.loss for r in included])
    x = np.arange(0.0, differences.max() + 4 * bandwidth + resolution, resolution)
    raw = np.empty_like(x)
    for start in range(0, x.size, chunk_size):
        chunk = x[start : start + chunk_size]
        spread = norm.pdf(chunk[:, None] - differences[None, :], scale=bandwidth)
        raw[start : start + chunk_size] = spread @ losses / norm.cdf(chunk / bandwidth)
    area = trapezoid(raw, x)
    y = raw * (report.average / area) if area > 0 else raw
    return LossDensity(x=x, y=y)
