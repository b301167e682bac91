"""Synthetic match logs sampled from the match outcome model.

Players get fixed strengths, pairs are drawn at random and the first player wins \
with probability `Λ(x_a, x_b)`. With a draw probability `d`, a match is a draw with \
probability `min(d, 2Λ, 2(1 - Λ))` and a win with the rest of `Λ`, which keeps the \
expected score equal to `Λ`.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from ..exceptions import InvalidParameterError
from ..luck import LuckFunction
from ..models import DisplayTransform, MatchEvent, PlayerId
from ..utils import write_tsv

Pairing = Literal["uniform", "nearby"]


@dataclass(frozen=True, eq=False)
class Synthesis:
    player_ids: tuple[PlayerId, ...]
    strengths: NDArray[np.float64]
    events: tuple[MatchEvent, ...]


class MatchSynthesizer:
    def __init__(
        self,
        luck: LuckFunction,
        seed: int,
        pairing: Pairing = "uniform",
        window: int = 5,
        draw_probability: float = 0.0,
    ) -> None:
        if not 0.0 <= draw_probability <= 1.0:
            msg = f"draw probability must be in [0, 1], got {draw_probability}"
            raise InvalidParameterError(msg)
        if window < 1:
            msg = f"pairing window must be at least 1, got {window}"
            raise InvalidParameterError(msg)
        self._luck = luck
        self._rng = np.random.default_rng(seed)
        self._pairing = pairing
        self._window = window
        self._draw_probability = draw_probability

    def sample_strengths(self, population: int, sigma: float) -> NDArray[np.float64]:
        return self._rng.normal(0.0, sigma, population)

    def generate(self, strengths: Sequence[float], matches: int) -> Synthesis:
        """Sample a match log between players of known strengths.

        Args:
            strengths: Natural-scale strength of each player.
            matches: Number of matches to sample.

        Returns:
            The players, their strengths and the sampled matches.
        """
        strengths = np.asarray(strengths, dtype=np.float64)
        population = strengths.size
        if population < 2:
            msg = "a match log needs at least two players"
            raise InvalidParameterError(msg)
        width = len(str(population - 1))
        player_ids = tuple(PlayerId(f"p{i:0{width}d}") for i in range(population))
        first, second = self._pairs(strengths, matches)
        win = np.asarray(self._luck(strengths[first], strengths[second]))
        draw = np.minimum(self._draw_probability, 2 * np.minimum(win, 1 - win))
        uniform = self._rng.random(matches)
        scores = np.where(
            uniform < win - draw / 2, 1.0, np.where(uniform < win + draw / 2, 0.5, 0.0)
        )
        events = tuple(
            MatchEvent(
                match_id=f"m{index}",
                timestamp=1000 * index,
                player_a=player_ids[a],
                player_b=player_ids[b],
                score=score,
            )
            for index, (a, b, score) in enumerate(
                zip(first.tolist(), second.tolist(), scores.tolist(), strict=True)
            )
        )
        return Synthesis(player_ids=player_ids, strengths=strengths, events=events)

    def _pairs(
        self, strengths: NDArray[np.float64], matches: int
    ) -> tuple[NDArray[np.intp], NDArray[np.intp]]:
        population = strengths.size
        if self._pairing == "uniform":
            first = self._rng.integers(population, size=matches)
            second = self._rng.integers(population - 1, size=matches)
            second = np.where(second >= first, second + 1, second)
            return first, second
        ranking = np.argsort(strengths, kind="stable")
        ranks = self._rng.integers(population, size=matches)
        low = np.maximum(ranks - self._window, 0)
        high = np.minimum(ranks + self._window, population - 1)
        offsets = self._rng.integers(0, high - low, size=matches)
        other = low + offsets
        other = np.where(other >= ranks, other + 1, other)
        return ranking[ranks], ranking[other]


def write_synthesis(
    synthesis: Synthesis, log_path: Path, truth_path: Path, transform: DisplayTransform
) -> None:
    """Write the match log and the true strengths next to it.

    Args:
        synthesis: Sampled matches.
        log_path: Line-delimited JSON match log.
        truth_path: Tab-separated true strengths and display ratings.
        transform: Display units of the ratings column.
    """
    with log_path.open("w", encoding="utf8") as fh:
        for event in synthesis.events:
            fh.write(event.model_dump_json(by_alias=True))
            fh.write("\n")
    with truth_path.open("w", encoding="utf8") as fh:
        write_tsv(
            fh,
            ("player", "strength", "rating"),
            (
                (player_id, strength, transform(strength))
                for player_id, strength in zip(
                    synthesis.player_ids, synthesis.strengths.tolist(), strict=True
                )
            ),
        )
