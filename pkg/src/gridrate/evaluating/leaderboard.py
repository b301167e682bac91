from collections.abc import Iterable

from ..models import DisplayTransform, LeaderboardRow, PlayerRecord, display_rating


def leaderboard(
    records: Iterable[PlayerRecord],
    transform: DisplayTransform,
    min_matches: int = 0,
    top_k: int | None = None,
) -> list[LeaderboardRow]:
    """Rank players by display rating.

    Ties are broken by lower deviation, then by player id.

    Args:
        records: Player records.
        transform: Display units.
        min_matches: Minimum number of processed matches to be ranked.
        top_k: Number of rows to keep, all if `None`.

    Returns:
        The ranked rows, ranks starting at 1.
    """
    rated = [
        (*display_rating(transform, record.belief), record)
        for record in records
        if record.matches_played >= min_matches
    ]
    rated.sort(key=lambda item: (-item[0], item[1], item[2].player_id))
    return [
        LeaderboardRow(
            rank=rank,
            player_id=record.player_id,
            rating=rating,
            deviation=deviation,
            matches_played=record.matches_played,
        )
        for rank, (rating, deviation, record) in enumerate(rated[:top_k], start=1)
    ]
