from . import CommonOptions, app


@app.command()
def print_settings(*, common: CommonOptions | None = None) -> None:
    """Print the resolved settings.

    Args:
        common: Options shared by all commands

    """
    from rich import print as rich_print

    rich_print((common or CommonOptions()).system_config())
