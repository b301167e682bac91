from . import app


@app.command()
def curve(
    *,
    beta: float = 0.8,
    sigma: float = 50.0,
    opponent: float = 2000.0,
    start: float = 0.0,
    stop: float = 4000.0,
    step: float = 10.0,
    nodes: int = 4001,
) -> None:
    """Print the mean shift of a player beating an opponent of known rating.

    The last line is a `#maximum` comment with the location and value of the \
    largest shift.

    Args:
        beta: Share of the outcome decided by strength
        sigma: Deviation of the winner belief, in display units
        opponent: Rating of the opponent, in display units
        start: First prior mean of the winner
        stop: Last prior mean of the winner
        step: Step between prior means
        nodes: Initial number of quadrature nodes

    """
    from sys import stdout

    from pydantic import ValidationError

    from ..exceptions import InvalidParameterError
    from ..models import CurveSpec
    from ..pipelines import run_curve
    from ..utils import write_tsv

    try:
        spec = CurveSpec(
            beta=beta,
            sigma=sigma,
            opponent=opponent,
            start=start,
            stop=stop,
            step=step,
            nodes=nodes,
        )
    except ValidationError as e:
        msg = f"invalid curve parameters:\n{e}"
        raise InvalidParameterError(msg) from e
    points, best = run_curve(spec)
    write_tsv(
        stdout,
        ("m", "delta"),
        ((point.m, point.delta) for point in points),
        footer=[("maximum", best.m, best.delta)],
    )
