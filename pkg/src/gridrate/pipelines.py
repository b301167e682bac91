from collections import Counter
from dataclasses import dataclass
from logging import getLogger
from pathlib import Path

from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress

from .components.factory import SettingsFactory
from .configuring.settings import SystemConfig
from .evaluating.curves import curve, curve_maximum
from .evaluating.leaderboard import leaderboard
from .evaluating.log_loss import LogLossEvaluator, loss_density
from .evaluating.synthesis import (
    MatchSynthesizer,
    Pairing,
    Synthesis,
    write_synthesis,
)
from .exceptions import DataError
from .models import (
    CurvePoint,
    CurveSpec,
    LeaderboardRow,
    LogLossReport,
    MatchEvent,
    PlayerId,
    ProcessSummary,
    display_rating,
)
from .utils import write_tsv

_logger = getLogger(__name__)


def _progress() -> Progress:
    return Progress(
        "[progress.description]{task.description}",
        BarColumn(),
        MofNCompleteColumn(),
        console=Console(stderr=True),
        transient=True,
    )


def _read_events(
    factory: SettingsFactory, matches_path: Path, strict: bool
) -> tuple[list[MatchEvent], int]:
    reader = factory.match_log_reader(strict=strict)
    events = list(reader.read(matches_path))
    return events, reader.skipped


def run_init(config: SystemConfig, store_path: Path, force: bool = False) -> None:
    if store_path.exists() and not force:
        msg = f"{store_path} already exists"
        raise DataError(msg)
    SettingsFactory(config).rating_store().save(store_path)


def run_process(
    config: SystemConfig, store_path: Path, matches_path: Path, strict: bool
) -> ProcessSummary:
    """Process a match log in order and save the store.

    The whole log is read before any match is processed, so that a malformed line \
    in strict mode leaves the store untouched.

    Args:
        config: System configuration.
        store_path: Store snapshot, created if missing.
        matches_path: Line-delimited JSON match log.
        strict: Abort on malformed lines instead of skipping them.

    Returns:
        Counts and throughput of the run.
    """
    from time import perf_counter

    factory = SettingsFactory(config)
    events, skipped = _read_events(factory, matches_path, strict)
    store = factory.rating_store(store_path)
    ids = Counter(event.match_id for event in events)
    duplicates = sum(count - 1 for count in ids.values())
    if duplicates:
        _logger.warning("%d matches reuse an already seen id", duplicates)
    if not events:
        _logger.info("No match to process in %s", matches_path)
        return ProcessSummary(
            processed=0,
            skipped=skipped,
            duplicates=0,
            players=len(store),
            seconds=0.0,
        )
    start = perf_counter()
    with _progress() as progress:
        for event in progress.track(events, description="Processing matches…"):
            store.process_match(event)
    seconds = perf_counter() - start
    store.save(store_path)
    summary = ProcessSummary(
        processed=len(events),
        skipped=skipped,
        duplicates=duplicates,
        players=len(store),
        seconds=seconds,
    )
    _logger.info(
        "Processed %d matches in %.3fs (%.1f matches/s)",
        summary.processed,
        summary.seconds,
        summary.rate,
    )
    return summary


@dataclass(frozen=True)
class Prediction:
    probability: float
    rating_a: float
    deviation_a: float
    rating_b: float
    deviation_b: float


def run_predict(
    config: SystemConfig, store_path: Path, player_a: PlayerId, player_b: PlayerId
) -> Prediction:
    factory = SettingsFactory(config)
    store = factory.rating_store(store_path)
    transform = factory.display_transform()
    probability = store.predict(player_a, player_b)
    rating_a, deviation_a = display_rating(transform, store.get(player_a).belief)
    rating_b, deviation_b = display_rating(transform, store.get(player_b).belief)
    return Prediction(
        probability=probability,
        rating_a=rating_a,
        deviation_a=deviation_a,
        rating_b=rating_b,
        deviation_b=deviation_b,
    )


def run_leaderboard(
    config: SystemConfig, store_path: Path, top_k: int | None, min_matches: int
) -> list[LeaderboardRow]:
    factory = SettingsFactory(config)
    return leaderboard(
        factory.rating_store(store_path).records(),
        factory.display_transform(),
        min_matches=min_matches,
        top_k=top_k,
    )


def run_logloss(
    config: SystemConfig,
    store_path: Path | None,
    matches_path: Path,
    strict: bool,
    burn_in: float = 0.0,
    records_path: Path | None = None,
    density_path: Path | None = None,
) -> LogLossReport:
    """Evaluate walk-forward predictions on a match log.

    The store is used as a starting point and is not saved.

    Args:
        config: System configuration.
        store_path: Optional store snapshot to start from.
        matches_path: Line-delimited JSON match log.
        strict: Abort on malformed lines instead of skipping them.
        burn_in: Fraction of the log excluded from the average.
        records_path: Optional TSV output of the per-match records.
        density_path: Optional TSV output of the smoothed loss density.

    Returns:
        The log loss report.
    """
    factory = SettingsFactory(config)
    events, _ = _read_events(factory, matches_path, strict)
    evaluator = LogLossEvaluator(
        store=factory.rating_store(store_path),
        transform=factory.display_transform(),
        var_cap=config.var_cap,
        burn_in=burn_in,
    )
    with _progress() as progress:
        report = evaluator.evaluate(
            progress.track(events, description="Evaluating matches…"),
            total=len(events),
        )
    if records_path is not None:
        with records_path.open("w", encoding="utf8") as fh:
            write_tsv(
                fh,
                ("match", "rating_diff", "p", "loss", "score", "included", "draw"),
                (
                    (
                        r.match_id,
                        r.rating_diff,
                        r.probability,
                        r.loss,
                        r.score,
                        int(r.included),
                        int(r.draw),
                    )
                    for r in report.records
                ),
            )
    if density_path is not None:
        density = loss_density(report)
        with density_path.open("w", encoding="utf8") as fh:
            write_tsv(
                fh,
                ("abs_rating_diff", "density"),
                zip(density.x.tolist(), density.y.tolist(), strict=True),
            )
    return report


def run_curve(spec: CurveSpec) -> tuple[list[CurvePoint], CurvePoint]:
    points = curve(spec)
    return points, curve_maximum(points)


def run_synth(
    config: SystemConfig,
    population: int,
    matches: int,
    seed: int,
    log_path: Path,
    truth_path: Path,
    sigma: float | None = None,
    pairing: Pairing = "uniform",
    window: int = 5,
    draw_probability: float = 0.0,
) -> Synthesis:
    factory = SettingsFactory(config)
    synthesizer = MatchSynthesizer(
        luck=factory.luck_function(),
        seed=seed,
        pairing=pairing,
        window=window,
        draw_probability=draw_probability,
    )
    strengths = synthesizer.sample_strengths(
        population, config.sigma0 if sigma is None else sigma
    )
    synthesis = synthesizer.generate(strengths, matches)
    write_synthesis(synthesis, log_path, truth_path, factory.display_transform())
    _logger.info(
        "Wrote %d matches between %d players to %s", matches, population, log_path
    )
    return synthesis
