from . import CommonOptions, app


@app.command()
def leaderboard(
    *,
    common: CommonOptions | None = None,
    top_k: int | None = None,
    min_matches: int = 0,
) -> None:
    """Print players ranked by display rating.

    Args:
        common: Options shared by all commands
        top_k: Number of players to print, all by default
        min_matches: Minimum number of processed matches to be ranked

    """
    from sys import stdout

    from ..pipelines import run_leaderboard
    from ..utils import write_tsv

    common = common or CommonOptions()
    rows = run_leaderboard(
        common.system_config(), common.store, top_k=top_k, min_matches=min_matches
    )
    write_tsv(
        stdout,
        ("rank", "player", "rating", "deviation", "matches"),
        (
            (row.rank, row.player_id, row.rating, row.deviation, row.matches_played)
            for row in rows
        ),
    )
