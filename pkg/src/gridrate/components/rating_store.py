from collections.abc import Iterable, Iterator
from dataclasses import replace
from logging import getLogger
from pathlib import Path
from typing import Self

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..exceptions import (
    ChecksumError,
    IncompatibleGridError,
    IntegrityError,
    InvalidMatchError,
    SchemaVersionError,
    UnknownPlayerError,
)
from ..models import (
    SCHEMA_VERSION,
    Grid,
    GridDistribution,
    MatchEvent,
    PlayerId,
    PlayerRecord,
)
from .protocols import EngineProtocol, RatingStoreProtocol

INTEGRITY_TOLERANCE = 1e-6
"""Largest deviation from 1 of a belief sum accepted when reading a record."""

CHECKSUM_TOLERANCE = 1e-9
"""Largest deviation from 1 of a belief sum accepted when loading a snapshot."""


class StoreHeader(BaseModel):
    """First line of a store snapshot."""

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    n: int = Field(ge=1)
    m: float = Field(gt=0)
    beta: float = Field(ge=0, le=1)
    sigma0: float = Field(gt=0)
    sigma_kappa: float = Field(gt=0)

    @property
    def grid(self) -> Grid:
        return Grid(n=self.n, half_width=self.m)

    def drift(self, other: "StoreHeader") -> list[str]:
        return [
            key
            for key in ("beta", "sigma0", "sigma_kappa")
            if getattr(self, key) != getattr(other, key)
        ]


class _StoredPlayer(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    matches: int = Field(ge=0)
    last: int
    w: list[float]
    sha256: str


def _record_digest(
    player_id: str, matches: int, last: int, weights: NDArray[np.float64]
) -> str:
    from hashlib import sha256

    digest = sha256(f"{player_id}\n{matches}\n{last}\n".encode())
    digest.update(np.ascontiguousarray(weights, dtype="<f8").tobytes())
    return digest.hexdigest()


def _dump_record(record: PlayerRecord) -> str:
    from json import dumps

    weights = ",".join(format(w, ".17g") for w in record.belief.weights.tolist())
    digest = _record_digest(
        record.player_id,
        record.matches_played,
        record.last_update,
        record.belief.weights,
    )
    return (
        f'{{"id":{dumps(record.player_id)},"matches":{record.matches_played},'
        f'"last":{record.last_update},"w":[{weights}],"sha256":"{digest}"}}'
    )


class RatingStore(RatingStoreProtocol):
    """In-memory player records with match processing and snapshots.

    Unknown players are created lazily with the prior. Both players of a match are \
    updated from their pre-match beliefs, then smoothed, then committed together.
    """

    def __init__(
        self,
        header: StoreHeader,
        prior: GridDistribution,
        engine: EngineProtocol,
        records: Iterable[PlayerRecord] = (),
    ) -> None:
        if not prior.grid.is_compatible(header.grid):
            msg = f"prior grid {prior.grid} differs from store grid {header.grid}"
            raise IncompatibleGridError(msg)
        self._header = header
        self._prior = prior
        self._engine = engine
        self._records = {record.player_id: record for record in records}
        self._logger = getLogger(__name__)

    @property
    def header(self) -> StoreHeader:
        return self._header

    @property
    def grid(self) -> Grid:
        return self._header.grid

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, player_id: object) -> bool:
        return player_id in self._records

    def records(self) -> Iterator[PlayerRecord]:
        yield from self._records.values()

    def get(self, player_id: PlayerId) -> PlayerRecord:
        try:
            record = self._records[player_id]
        except KeyError as e:
            msg = f"unknown player {player_id}"
            raise UnknownPlayerError(msg) from e
        self._check_integrity(record)
        return record

    def get_or_create(self, player_id: PlayerId) -> PlayerRecord:
        if player_id not in self._records:
            self._records[player_id] = self._new_record(player_id)
        return self.get(player_id)

    def process_match(self, event: MatchEvent) -> tuple[PlayerRecord, PlayerRecord]:
        if event.player_a == event.player_b:
            msg = f"match {event.match_id}: player {event.player_a} plays themselves"
            raise InvalidMatchError(msg)
        record_a = self._staged(event.player_a)
        record_b = self._staged(event.player_b)
        posterior_a = self._engine.posterior(
            record_a.belief, record_b.belief, event.score
        )
        posterior_b = self._engine.posterior(
            record_b.belief, record_a.belief, 1.0 - event.score
        )
        updated_a = replace(
            record_a,
            belief=self._engine.smooth(posterior_a),
            matches_played=record_a.matches_played + 1,
            last_update=event.timestamp,
        )
        updated_b = replace(
            record_b,
            belief=self._engine.smooth(posterior_b),
            matches_played=record_b.matches_played + 1,
            last_update=event.timestamp,
        )
        self._records[updated_a.player_id] = updated_a
        self._records[updated_b.player_id] = updated_b
        return updated_a, updated_b

    def predict(self, player_a: PlayerId, player_b: PlayerId) -> float:
        """Expected score of `player_a` against `player_b`.

        Args:
            player_a: First player.
            player_b: Second player.

        Returns:
            The expected score of the first player under the current beliefs.
        """
        return self._engine.expected_score(
            self.get(player_a).belief, self.get(player_b).belief
        )

    def save(self, path: Path) -> None:
        from contextlib import suppress
        from shutil import move
        from tempfile import NamedTemporaryFile

        path.parent.mkdir(parents=True, exist_ok=True)
        temporary: Path | None = None
        try:
            with NamedTemporaryFile(
                "w", encoding="utf8", delete=False, dir=path.parent
            ) as fh:
                temporary = Path(fh.name)
                fh.write(self._header.model_dump_json(by_alias=True))
                fh.write("\n")
                for player_id in sorted(self._records):
                    fh.write(_dump_record(self._records[player_id]))
                    fh.write("\n")
            move(temporary, path)
        finally:
            if temporary is not None:
                with suppress(FileNotFoundError):
                    temporary.unlink()
        self._logger.info("Saved %d players to %s", len(self._records), path)

    @classmethod
    def load(
        cls,
        path: Path,
        header: StoreHeader,
        prior: GridDistribution,
        engine: EngineProtocol,
    ) -> Self:
        """Load a snapshot written by `save`.

        Args:
            path: Snapshot to read.
            header: Parameters of the current configuration.
            prior: Belief given to new players.
            engine: Engine used to process matches.

        Returns:
            The loaded store. It keeps the current configuration header.

        Raises:
            SchemaVersionError: If the snapshot has another schema version.
            IncompatibleGridError: If the snapshot grid differs from the configured one.
            ChecksumError: If a line cannot be parsed, a belief is invalid or a record \
                does not match its digest.
        """
        logger = getLogger(__name__)
        with path.open(encoding="utf8") as fh:
            lines = fh.read().splitlines()
        if not lines:
            raise ChecksumError(path, 1, "missing header")
        stored_header = cls._parse_header(path, lines[0])
        if stored_header.schema_version != SCHEMA_VERSION:
            msg = (
                f"{path}: schema version {stored_header.schema_version}, "
                f"expected {SCHEMA_VERSION}"
            )
            raise SchemaVersionError(msg)
        if not stored_header.grid.is_compatible(header.grid):
            msg = f"{path}: grid {stored_header.grid} differs from {header.grid}"
            raise IncompatibleGridError(msg)
        if drift := stored_header.drift(header):
            logger.warning(
                "Parameters %s of %s differ from the configuration",
                ", ".join(drift),
                path,
            )
        records: dict[PlayerId, PlayerRecord] = {}
        for line_number, line in enumerate(lines[1:], start=2):
            record = cls._parse_record(path, line_number, line, header.grid)
            if record.player_id in records:
                raise ChecksumError(
                    path, line_number, f"duplicate player {record.player_id}"
                )
            records[record.player_id] = record
        logger.info("Loaded %d players from %s", len(records), path)
        return cls(header=header, prior=prior, engine=engine, records=records.values())

    @staticmethod
    def _parse_header(path: Path, line: str) -> StoreHeader:
        from json import JSONDecodeError, loads

        try:
            return StoreHeader.model_validate(loads(line))
        except (JSONDecodeError, ValidationError) as e:
            raise ChecksumError(path, 1, f"invalid header: {e}") from e

    @staticmethod
    def _parse_record(
        path: Path, line_number: int, line: str, grid: Grid
    ) -> PlayerRecord:
        from json import JSONDecodeError, loads

        try:
            stored = _StoredPlayer.model_validate(loads(line))
        except (JSONDecodeError, ValidationError) as e:
            raise ChecksumError(path, line_number, f"invalid record: {e}") from e
        weights = np.array(stored.w, dtype=np.float64)
        if weights.size != grid.size:
            reason = f"expected {grid.size} weights, got {weights.size}"
            raise ChecksumError(path, line_number, reason)
        if not np.all(np.isfinite(weights)) or np.any(weights < 0):
            raise ChecksumError(path, line_number, "weights must be non-negative")
        if abs(weights.sum() - 1.0) > CHECKSUM_TOLERANCE:
            reason = f"weights sum to {weights.sum():.17g}"
            raise ChecksumError(path, line_number, reason)
        digest = _record_digest(stored.id, stored.matches, stored.last, weights)
        if stored.sha256 != digest:
            raise ChecksumError(path, line_number, "record digest does not match")
        return PlayerRecord(
            player_id=PlayerId(stored.id),
            belief=GridDistribution(grid, weights),
            matches_played=stored.matches,
            last_update=stored.last,
        )

    def _new_record(self, player_id: PlayerId) -> PlayerRecord:
        return PlayerRecord(player_id=player_id, belief=self._prior)

    def _staged(self, player_id: PlayerId) -> PlayerRecord:
        if player_id in self._records:
            return self.get(player_id)
        return self._new_record(player_id)

    def _check_integrity(self, record: PlayerRecord) -> None:
        if record.schema_version != SCHEMA_VERSION:
            msg = f"player {record.player_id} has schema {record.schema_version}"
            raise SchemaVersionError(msg)
        if not record.belief.grid.is_compatible(self.grid):
            msg = f"player {record.player_id} is on grid {record.belief.grid}"
            raise IntegrityError(msg)
        if abs(record.belief.total - 1.0) > INTEGRITY_TOLERANCE:
            msg = f"belief of player {record.player_id} sums to {record.belief.total}"
            raise IntegrityError(msg)
