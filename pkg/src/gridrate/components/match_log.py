from collections.abc import Iterator
from logging import getLogger
from pathlib import Path

from pydantic import ValidationError

from ..exceptions import MalformedLineError
from ..models import MatchEvent
from .protocols import MatchLogReaderProtocol


class MatchLogReader(MatchLogReaderProtocol):
    """Read a line-delimited JSON match log.

    Blank lines and lines starting with `#` are ignored. In strict mode the first \
    invalid line aborts the read, otherwise it is skipped and counted.
    """

    def __init__(self, strict: bool) -> None:
        self._strict = strict
        self._skipped = 0
        self._logger = getLogger(__name__)

    @property
    def skipped(self) -> int:
        return self._skipped

    def read(self, path: Path) -> Iterator[MatchEvent]:
        with path.open("rb") as fh:
            for line_number, raw in enumerate(fh, start=1):
                try:
                    stripped = raw.decode("utf8").strip()
                    if not stripped or stripped.startswith("#"):
                        continue
                    event = MatchEvent.model_validate_json(stripped)
                except UnicodeDecodeError as e:
                    self._reject(path, line_number, f"invalid utf-8: {e.reason}", e)
                except ValidationError as e:
                    reason = "; ".join(error["msg"] for error in e.errors())
                    self._reject(path, line_number, reason, e)
                else:
                    yield event

    def _reject(
        self, path: Path, line_number: int, reason: str, error: Exception
    ) -> None:
        if self._strict:
            raise MalformedLineError(path, line_number, reason) from error
        self._skipped += 1
        self._logger.warning("Skipping %s:%d: %s", path, line_number, reason)
