from pathlib import Path

from . import CommonOptions, app


@app.command()
def process(matches: Path, /, *, common: CommonOptions | None = None) -> None:
    """Process the matches of MATCHES in order and update the store.

    Args:
        matches: Line-delimited JSON match log
        common: Options shared by all commands

    """
    from sys import stdout

    from ..pipelines import run_process
    from ..utils import write_tsv

    common = common or CommonOptions()
    summary = run_process(
        common.system_config(), common.store, matches, strict=common.strict
    )
    write_tsv(
        stdout,
        ("processed", "skipped", "duplicates", "players", "seconds", "per_second"),
        [
            (
                summary.processed,
                summary.skipped,
                summary.duplicates,
                summary.players,
                summary.seconds,
                summary.rate if summary.processed else 0.0,
            )
        ],
    )
