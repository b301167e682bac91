import json
from logging import WARNING
from pathlib import Path

import numpy as np
import pytest
from pytest import fixture
from scipy.stats import norm

from gridrate.components.factory import SettingsFactory
from gridrate.components.fft_engine import FftEngine
from gridrate.components.rating_store import RatingStore
from gridrate.configuring.settings import SystemConfig
from gridrate.exceptions import (
    ChecksumError,
    IncompatibleGridError,
    IntegrityError,
    InvalidMatchError,
    NumericalInstabilityError,
    SchemaVersionError,
    UnknownPlayerError,
)
from gridrate.models import (
    Distribution,
    GridDistribution,
    MatchEvent,
    PlayerId,
    PlayerRecord,
    display_rating,
)


@fixture
def config() -> SystemConfig:
    return SystemConfig(n=200)


@fixture
def factory(config: SystemConfig) -> SettingsFactory:
    return SettingsFactory(config)


@fixture
def store(factory: SettingsFactory) -> RatingStore:
    return RatingStore(
        header=factory.store_header(), prior=factory.prior(), engine=factory.engine()
    )


def event(
    a: str, b: str, score: float, timestamp: int = 0, match_id: str = "m"
) -> MatchEvent:
    return MatchEvent(id=match_id, ts=timestamp, a=a, b=b, score=score)


def random_events(rng: np.random.Generator, count: int) -> list[MatchEvent]:
    players = [f"p{i}" for i in range(8)]
    events = []
    for i in range(count):
        a, b = rng.choice(players, size=2, replace=False)
        score = float(rng.choice([0.0, 0.5, 1.0]))
        events.append(event(str(a), str(b), score, timestamp=i, match_id=f"m{i}"))
    return events


class FailingSmoothEngine(FftEngine):
    """Fails on the second smoothing of a match."""

    def __init__(self, engine: FftEngine) -> None:
        super().__init__(luck=engine.luck, kernel=engine.kernel)
        self.calls = 0

    def smooth[D: Distribution](self, rho: D) -> D:
        self.calls += 1
        if self.calls == 2:
            msg = "smoothing failed"
            raise NumericalInstabilityError(msg)
        return super().smooth(rho)


def test_unknown_player(store: RatingStore, factory: SettingsFactory) -> None:
    with pytest.raises(UnknownPlayerError):
        store.get(PlayerId("nobody"))
    record = store.get_or_create(PlayerId("nobody"))
    assert record.matches_played == 0
    assert np.array_equal(record.belief.weights, factory.prior().weights)
    rating, _ = display_rating(factory.display_transform(), record.belief)
    assert rating == pytest.approx(1500.0)
    assert PlayerId("nobody") in store


def test_known_player_is_returned_unchanged(store: RatingStore) -> None:
    store.process_match(event("alice", "bob", 1.0))
    first = store.get(PlayerId("alice"))
    second = store.get(PlayerId("alice"))
    assert np.array_equal(first.belief.weights, second.belief.weights)


def test_winner_goes_up_and_loser_goes_down(factory: SettingsFactory) -> None:
    grid = factory.grid()
    rng = np.random.default_rng(1)
    transform = factory.display_transform()
    for _ in range(1000):
        beliefs = [
            GridDistribution.from_weights(
                grid,
                norm.pdf(
                    grid.points, loc=rng.uniform(-2, 2), scale=rng.uniform(0.2, 1)
                ),
            )
            for _ in range(2)
        ]
        store = RatingStore(
            header=factory.store_header(),
            prior=factory.prior(),
            engine=factory.engine(),
            records=[
                PlayerRecord(player_id=PlayerId("a"), belief=beliefs[0]),
                PlayerRecord(player_id=PlayerId("b"), belief=beliefs[1]),
            ],
        )
        updated_a, updated_b = store.process_match(event("a", "b", 1.0))
        assert transform.rating(updated_a.belief) > transform.rating(beliefs[0])
        assert transform.rating(updated_b.belief) < transform.rating(beliefs[1])


def test_updates_are_not_idempotent(store: RatingStore) -> None:
    once, _ = store.process_match(event("alice", "bob", 1.0))
    twice, _ = store.process_match(event("alice", "bob", 1.0))
    assert twice.belief.mean > once.belief.mean
    assert twice.matches_played == 2


def test_update_conserves_mass_and_tracks_metadata(store: RatingStore) -> None:
    a, b = store.process_match(event("alice", "bob", 0.5, timestamp=42))
    assert a.belief.total == pytest.approx(1.0, abs=1e-12)
    assert b.belief.total == pytest.approx(1.0, abs=1e-12)
    assert a.last_update == b.last_update == 42
    assert a.matches_played == b.matches_played == 1


def test_both_players_use_pre_match_beliefs(
    store: RatingStore, factory: SettingsFactory
) -> None:
    a, b = store.process_match(event("alice", "bob", 1.0))
    engine = factory.engine()
    prior = factory.prior()
    expected_a = engine.smooth(engine.posterior(prior, prior, 1.0))
    expected_b = engine.smooth(engine.posterior(prior, prior, 0.0))
    assert np.array_equal(a.belief.weights, expected_a.weights)
    assert np.array_equal(b.belief.weights, expected_b.weights)


def test_self_match_is_rejected(store: RatingStore) -> None:
    self_match = MatchEvent.model_construct(
        match_id="m", timestamp=0, player_a="alice", player_b="alice", score=1.0
    )
    with pytest.raises(InvalidMatchError):
        store.process_match(self_match)
    assert len(store) == 0


def test_failed_update_leaves_the_store_untouched(factory: SettingsFactory) -> None:
    engine = factory.engine()
    assert isinstance(engine, FftEngine)
    store = RatingStore(
        header=factory.store_header(),
        prior=factory.prior(),
        engine=FailingSmoothEngine(engine),
    )
    with pytest.raises(NumericalInstabilityError):
        store.process_match(event("alice", "bob", 1.0))
    assert len(store) == 0


def test_integrity_checks_on_read(factory: SettingsFactory) -> None:
    prior = factory.prior()
    store = RatingStore(
        header=factory.store_header(),
        prior=prior,
        engine=factory.engine(),
        records=[
            PlayerRecord(
                player_id=PlayerId("half"),
                belief=GridDistribution(prior.grid, prior.weights / 2),
            ),
            PlayerRecord(player_id=PlayerId("future"), belief=prior, schema_version=2),
        ],
    )
    with pytest.raises(IntegrityError):
        store.get(PlayerId("half"))
    with pytest.raises(SchemaVersionError):
        store.get(PlayerId("future"))


def test_prior_must_match_the_header(factory: SettingsFactory) -> None:
    other = SettingsFactory(SystemConfig(n=100)).prior()
    with pytest.raises(IncompatibleGridError):
        RatingStore(header=factory.store_header(), prior=other, engine=factory.engine())


def test_snapshot_round_trip_is_byte_identical(
    store: RatingStore, factory: SettingsFactory, tmp_path: Path
) -> None:
    for match in random_events(np.random.default_rng(2), 30):
        store.process_match(match)
    first, second = tmp_path / "first.jsonl", tmp_path / "second.jsonl"
    store.save(first)
    loaded = factory.rating_store(first)
    loaded.save(second)
    assert first.read_bytes() == second.read_bytes()
    for record in store.records():
        assert np.array_equal(
            loaded.get(record.player_id).belief.weights, record.belief.weights
        )
    assert sorted(tmp_path.iterdir()) == sorted([first, second])


def test_empty_store_snapshot_is_a_header(store: RatingStore, tmp_path: Path) -> None:
    path = tmp_path / "players.jsonl"
    store.save(path)
    lines = path.read_text(encoding="utf8").splitlines()
    assert len(lines) == 1
    header = json.loads(lines[0])
    assert header["schema"] == 1
    assert header["n"] == 200


def test_snapshot_lists_players_by_id(store: RatingStore, tmp_path: Path) -> None:
    store.process_match(event("zoe", "adam", 1.0))
    path = tmp_path / "players.jsonl"
    store.save(path)
    ids = [json.loads(line)["id"] for line in path.read_text().splitlines()[1:]]
    assert ids == ["adam", "zoe"]


@pytest.mark.parametrize(
    "tamper",
    [
        lambda record: record["w"].__setitem__(100, record["w"][100] * 2),
        lambda record: record["w"].pop(),
        lambda record: record["w"].__setitem__(0, -1.0),
        lambda record: record.pop("matches"),
        lambda record: record["w"].reverse(),
        lambda record: record.__setitem__("last", record["last"] + 1),
    ],
)
def test_tampered_snapshot_is_rejected(
    store: RatingStore, factory: SettingsFactory, tmp_path: Path, tamper
) -> None:
    store.process_match(event("alice", "bob", 1.0))
    path = tmp_path / "players.jsonl"
    store.save(path)
    lines = path.read_text(encoding="utf8").splitlines()
    record = json.loads(lines[2])
    tamper(record)
    lines[2] = json.dumps(record)
    path.write_text("\n".join(lines) + "\n", encoding="utf8")
    with pytest.raises(ChecksumError) as info:
        factory.rating_store(path)
    assert info.value.line_number == 3


def test_failed_temporary_file_leaves_nothing_behind(
    store: RatingStore, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
) -> None:
    def refuse(*args: object, **kwargs: object) -> None:
        msg = "disk full"
        raise OSError(msg)

    monkeypatch.setattr("tempfile.NamedTemporaryFile", refuse)
    with pytest.raises(OSError, match="disk full"):
        store.save(tmp_path / "players.jsonl")
    assert list(tmp_path.iterdir()) == []


def test_duplicate_player_is_rejected(
    store: RatingStore, factory: SettingsFactory, tmp_path: Path
) -> None:
    store.process_match(event("alice", "bob", 1.0))
    path = tmp_path / "players.jsonl"
    store.save(path)
    lines = path.read_text(encoding="utf8").splitlines()
    path.write_text("\n".join([*lines, lines[1]]) + "\n", encoding="utf8")
    with pytest.raises(ChecksumError):
        factory.rating_store(path)


def test_snapshot_header_checks(
    store: RatingStore, factory: SettingsFactory, tmp_path: Path
) -> None:
    path = tmp_path / "players.jsonl"
    store.save(path)
    with pytest.raises(IncompatibleGridError):
        SettingsFactory(SystemConfig(n=100)).rating_store(path)

    header = json.loads(path.read_text(encoding="utf8"))
    header["schema"] = 2
    path.write_text(json.dumps(header) + "\n", encoding="utf8")
    with pytest.raises(SchemaVersionError):
        factory.rating_store(path)

    path.write_text("", encoding="utf8")
    with pytest.raises(ChecksumError):
        factory.rating_store(path)


def test_parameter_drift_is_logged(
    store: RatingStore, tmp_path: Path, caplog: pytest.LogCaptureFixture
) -> None:
    path = tmp_path / "players.jsonl"
    store.save(path)
    with caplog.at_level(WARNING):
        loaded = SettingsFactory(SystemConfig(n=200, beta=0.5)).rating_store(path)
    assert "beta" in caplog.text
    assert loaded.header.beta == 0.5


def test_replay_is_deterministic(factory: SettingsFactory, tmp_path: Path) -> None:
    events = random_events(np.random.default_rng(3), 50)
    paths = []
    for name in ("first", "second"):
        store = factory.rating_store()
        for match in events:
            store.process_match(match)
        paths.append(tmp_path / f"{name}.jsonl")
        store.save(paths[-1])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_disjoint_matches_commute(factory: SettingsFactory, tmp_path: Path) -> None:
    first = event("alice", "bob", 1.0, timestamp=1, match_id="m1")
    second = event("carol", "dave", 0.5, timestamp=1, match_id="m2")
    paths = []
    for name, events in (("forward", [first, second]), ("backward", [second, first])):
        store = factory.rating_store()
        for match in events:
            store.process_match(match)
        paths.append(tmp_path / f"{name}.jsonl")
        store.save(paths[-1])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_predict(store: RatingStore) -> None:
    store.get_or_create(PlayerId("alice"))
    store.get_or_create(PlayerId("bob"))
    assert store.predict(PlayerId("alice"), PlayerId("bob")) == pytest.approx(0.5)
    store.process_match(event("alice", "bob", 1.0))
    forward = store.predict(PlayerId("alice"), PlayerId("bob"))
    backward = store.predict(PlayerId("bob"), PlayerId("alice"))
    assert forward > 0.5
    assert forward + backward == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(UnknownPlayerError):
        store.predict(PlayerId("alice"), PlayerId("nobody"))
