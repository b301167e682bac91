from typing import Literal

from .. import app_name
from . import app


@app.command()
def generate_completion(shell: Literal["zsh", "bash", "fish"]) -> None:
    """Print the gridrate completion script for SHELL.

    Completes the rating commands and their options, such as `--engine` or \
    `--lenient`. Source the output from the shell startup file, or use \
    `--install-completion` to install it.

    Args:
        shell: Shell whose completion script is printed

    """
    from sys import stdout

    stdout.write(app.generate_completion(prog_name=app_name, shell=shell) + "\n")
