from . import CommonOptions, app


@app.command()
def predict(
    player_a: str, player_b: str, /, *, common: CommonOptions | None = None
) -> None:
    """Print the expected score of PLAYER_A against PLAYER_B.

    Args:
        player_a: First player
        player_b: Second player
        common: Options shared by all commands

    """
    from sys import stdout

    from ..models import PlayerId
    from ..pipelines import run_predict
    from ..utils import write_tsv

    common = common or CommonOptions()
    prediction = run_predict(
        common.system_config(), common.store, PlayerId(player_a), PlayerId(player_b)
    )
    write_tsv(
        stdout,
        ("p", "rating_a", "deviation_a", "rating_b", "deviation_b"),
        [
            (
                prediction.probability,
                prediction.rating_a,
                prediction.deviation_a,
                prediction.rating_b,
                prediction.deviation_b,
            )
        ],
    )
