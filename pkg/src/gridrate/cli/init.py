from . import CommonOptions, app


@app.command()
def init(*, common: CommonOptions | None = None, force: bool = False) -> None:
    """Create an empty player store.

    Args:
        common: Options shared by all commands
        force: Overwrite an existing store

    """
    from logging import getLogger

    from ..pipelines import run_init

    common = common or CommonOptions()
    run_init(common.system_config(), common.store, force=force)
    getLogger(__name__).info(f"Created {common.store}")
