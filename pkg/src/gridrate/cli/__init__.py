from dataclasses import dataclass
from logging import INFO, basicConfig, getLogger
from pathlib import Path
from typing import TYPE_CHECKING, Annotated

from cyclopts import App, Parameter
from rich.console import Console
from rich.logging import RichHandler

from .. import __version__
from ..configuring.settings import EngineName

if TYPE_CHECKING:
    from ..configuring.settings import SystemConfig

app = App(version=__version__)
app.register_install_completion_command()


@Parameter(name="*")
@dataclass(frozen=True)
class CommonOptions:
    config: Path | None = None
    """Flat key=value configuration file"""

    store: Path = Path("players.jsonl")
    """Player store snapshot"""

    engine: EngineName | None = None
    """Engine processing the matches, overrides the configuration"""

    strict: Annotated[bool, Parameter(negative="--lenient")] = True
    """Abort on malformed match log lines instead of skipping them"""

    def system_config(self) -> "SystemConfig":
        from ..configuring.settings import SystemConfig

        return SystemConfig.load(
            config_file=self.config, overrides={"engine": self.engine}
        )


def main() -> None:
    basicConfig(
        level=INFO,
        format="%(message)s",
        datefmt="%H:%M:%S",
        handlers=[
            RichHandler(
                console=Console(stderr=True),
                rich_tracebacks=True,
                tracebacks_show_locals=False,
            )
        ],
    )
    from sys import exit as sys_exit

    from ..exceptions import GridrateError
    from ..utils import import_module_and_submodules

    import_module_and_submodules(__name__)
    try:
        app()
    except GridrateError as e:
        getLogger(__name__).error(str(e))
        sys_exit(e.exit_code)
