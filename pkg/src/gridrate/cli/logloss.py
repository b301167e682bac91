from pathlib import Path

from . import CommonOptions, app


@app.command()
def logloss(
    matches: Path,
    /,
    *,
    common: CommonOptions | None = None,
    burn_in: float = 0.0,
    records: Path | None = None,
    density: Path | None = None,
) -> None:
    """Evaluate walk-forward predictions on MATCHES without saving the store.

    Args:
        matches: Line-delimited JSON match log
        common: Options shared by all commands
        burn_in: Fraction of the log excluded from the average
        records: Write per-match predictions to this TSV file
        density: Write the smoothed loss density to this TSV file

    """
    from sys import stdout

    from ..pipelines import run_logloss
    from ..utils import write_tsv

    common = common or CommonOptions()
    store = common.store if common.store.exists() else None
    report = run_logloss(
        common.system_config(),
        store,
        matches,
        strict=common.strict,
        burn_in=burn_in,
        records_path=records,
        density_path=density,
    )
    write_tsv(
        stdout,
        ("average", "average_without_draws", "included", "excluded", "draws"),
        [
            (
                report.average,
                report.average_without_draws,
                report.included,
                report.excluded,
                report.draws,
            )
        ],
    )
