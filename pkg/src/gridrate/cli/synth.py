from pathlib import Path
from typing import Literal

from . import CommonOptions, app


@app.command()
def synth(
    output: Path,
    /,
    *,
    common: CommonOptions | None = None,
    population: int = 100,
    matches: int = 10_000,
    seed: int = 0,
    sigma: float | None = None,
    pairing: Literal["uniform", "nearby"] = "uniform",
    window: int = 5,
    draws: float = 0.0,
    truth: Path | None = None,
) -> None:
    """Sample a synthetic match log to OUTPUT.

    Args:
        output: Line-delimited JSON match log to write
        common: Options shared by all commands
        population: Number of players
        matches: Number of matches
        seed: Seed of the random generator
        sigma: Deviation of the true strengths, the prior one by default
        pairing: Pair any two players, or players close in true strength
        window: Largest rank difference of nearby pairs
        draws: Probability of a draw when the luck function allows it
        truth: TSV file of the true strengths, next to OUTPUT by default

    """
    from ..pipelines import run_synth

    common = common or CommonOptions()
    run_synth(
        common.system_config(),
        population=population,
        matches=matches,
        seed=seed,
        log_path=output,
        truth_path=truth or output.with_suffix(".truth.tsv"),
        sigma=sigma,
        pairing=pairing,
        window=window,
        draw_probability=draws,
    )
