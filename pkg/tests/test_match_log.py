from pathlib import Path

import pytest
from pytest import fixture

from gridrate.components.match_log import MatchLogReader
from gridrate.exceptions import MalformedLineError

LOG = """\
# exported from the league server
{"id": "m1", "ts": 1, "a": "alice", "b": "bob", "score": 1}

{"id": "m2", "ts": 2, "a": "bob", "b": "carol", "score": 0.5}
{"id": "m3", "ts": 3, "a": "carol", "b": "carol", "score": 0}
not json
{"id": "m4", "ts": 4, "a": "alice", "b": "carol", "score": 0}
"""


@fixture
def log_path(tmp_path: Path) -> Path:
    path = tmp_path / "matches.jsonl"
    path.write_text(LOG, encoding="utf8")
    return path


def test_strict_reader_stops_at_the_first_bad_line(log_path: Path) -> None:
    reader = MatchLogReader(strict=True)
    events = []
    with pytest.raises(MalformedLineError) as info:
        events.extend(reader.read(log_path))
    assert info.value.line_number == 5
    assert [e.match_id for e in events] == ["m1", "m2"]


def test_lenient_reader_skips_bad_lines(
    log_path: Path, caplog: pytest.LogCaptureFixture
) -> None:
    reader = MatchLogReader(strict=False)
    events = list(reader.read(log_path))
    assert [e.match_id for e in events] == ["m1", "m2", "m4"]
    assert reader.skipped == 2
    assert "matches.jsonl:6" in caplog.text


def test_scores_are_parsed(log_path: Path) -> None:
    events = list(MatchLogReader(strict=False).read(log_path))
    assert [e.score for e in events] == [1.0, 0.5, 0.0]
    assert events[1].player_a == "bob"
    assert events[1].timestamp == 2


@fixture
def undecodable_path(tmp_path: Path) -> Path:
    path = tmp_path / "latin1.jsonl"
    path.write_bytes(
        b'{"id": "m1", "ts": 1, "a": "alice", "b": "bob", "score": 1}\n'
        b'{"id": "m2", "ts": 2, "a": "j\xff", "b": "bob", "score": 0}\n'
        b'{"id": "m3", "ts": 3, "a": "alice", "b": "bob", "score": 0}\n'
    )
    return path


def test_strict_reader_rejects_invalid_utf8(undecodable_path: Path) -> None:
    with pytest.raises(MalformedLineError, match="utf-8") as info:
        list(MatchLogReader(strict=True).read(undecodable_path))
    assert info.value.line_number == 2


def test_lenient_reader_skips_invalid_utf8(
    undecodable_path: Path, caplog: pytest.LogCaptureFixture
) -> None:
    reader = MatchLogReader(strict=False)
    events = list(reader.read(undecodable_path))
    assert [e.match_id for e in events] == ["m1", "m3"]
    assert reader.skipped == 1
    assert "latin1.jsonl:2" in caplog.text
