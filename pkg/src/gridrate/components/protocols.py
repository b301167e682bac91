from collections.abc import Iterator
from pathlib import Path
from typing import TYPE_CHECKING, Protocol

if TYPE_CHECKING:
    from numpy import float64
    from numpy.typing import NDArray

    from ..models import (
        Distribution,
        Grid,
        GridDistribution,
        MatchEvent,
        PlayerId,
        PlayerRecord,
    )


class EngineProtocol(Protocol):
    """Match and kernel processing of beliefs.

    Engines differ in the beliefs and luck functions they accept and in their \
    complexity, not in their results.
    """

    def likelihood(
        self, rho_a: "Distribution", rho_b: "Distribution", score: float
    ) -> "NDArray[float64]":
        """Compute the likelihood of a score at every support point of `rho_a`.

        Args:
            rho_a: Belief about the player being updated.
            rho_b: Belief about their opponent.
            score: Score of the player being updated.

        Returns:
            Unnormalized likelihood, one value per support point of `rho_a`.
        """

    def posterior[D: "Distribution"](
        self, rho_a: D, rho_b: "Distribution", score: float
    ) -> D: ...

    def smooth[D: "Distribution"](self, rho: D) -> D: ...

    def expected_score(self, rho_a: "Distribution", rho_b: "Distribution") -> float: ...


class MatchLogReaderProtocol(Protocol):
    @property
    def skipped(self) -> int: ...

    def read(self, path: Path) -> Iterator["MatchEvent"]: ...


class RatingStoreProtocol(Protocol):
    @property
    def grid(self) -> "Grid": ...

    def __len__(self) -> int: ...

    def __contains__(self, player_id: object) -> bool: ...

    def records(self) -> Iterator["PlayerRecord"]: ...

    def get(self, player_id: "PlayerId") -> "PlayerRecord": ...

    def get_or_create(self, player_id: "PlayerId") -> "PlayerRecord": ...

    def process_match(
        self, event: "MatchEvent"
    ) -> tuple["PlayerRecord", "PlayerRecord"]: ...

    def predict(self, player_a: "PlayerId", player_b: "PlayerId") -> float: ...

    def save(self, path: Path) -> None: ...


class FactoryProtocol(Protocol):
    def grid(self) -> "Grid": ...

    def prior(self) -> "GridDistribution": ...

    def engine(self) -> EngineProtocol: ...

    def rating_store(self) -> RatingStoreProtocol: ...

    def match_log_reader(self, strict: bool) -> MatchLogReaderProtocol: ...
