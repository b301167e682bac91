"""Provide general utility functions that would not fit in other modules."""

from collections.abc import Iterable, Iterator, Sequence
from contextlib import suppress
from pathlib import Path
from typing import Any, TextIO


def import_module_and_submodules(package_name: str) -> None:
    """Import all modules and submodules from a package.

    From https://github.com/allenai/allennlp/blob/master/allennlp/common/util.py.

    Args:
        package_name: Name of the package to fully import.
    """
    from importlib import import_module, reload
    from importlib import invalidate_caches as importlib_invalidate_caches
    from pkgutil import walk_packages
    from sys import modules

    importlib_invalidate_caches()

    if package_name in modules:
        module = modules[package_name]
        reload(module)
    else:
        module = import_module(package_name)
    path = getattr(module, "__path__", [])
    path_string = "" if not path else path[0]

    for module_finder, name, _ in walk_packages(path):
        if (
            path_string
            and hasattr(module_finder, "path")
            and module_finder.path != path_string
        ):
            continue
        subpackage = f"{package_name}.{name}"
        import_module_and_submodules(subpackage)


def load_yaml(path: Path) -> Any:
    from yaml import safe_load

    return safe_load(path.read_text(encoding="utf8"))


def load_all_yamls(paths: Iterable[Path]) -> Iterator[Any]:
    for path in paths:
        with suppress(FileNotFoundError):
            yield load_yaml(path)


def load_key_values(path: Path) -> dict[str, str]:
    """Parse a flat `key = value` file.

    Blank lines and lines starting with `#` are ignored. Later keys override earlier \
    ones.

    Args:
        path: File to parse.

    Returns:
        Raw string values, to be validated by the caller.

    Raises:
        ConfigurationError: If a line has no `=` or an empty key.
    """
    from .exceptions import ConfigurationError

    values = {}
    for line_number, line in enumerate(
        path.read_text(encoding="utf8").splitlines(), start=1
    ):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, separator, value = stripped.partition("=")
        if not separator or not key.strip():
            msg = f"{path}:{line_number}: expected key=value, got {stripped!r}"
            raise ConfigurationError(msg)
        values[key.strip()] = value.strip()
    return values


def format_decimal(value: float) -> str:
    return format(value, ".10g")


def _tsv_line(cells: Iterable[object]) -> str:
    return (
        "\t".join(
            format_decimal(cell) if isinstance(cell, float) else str(cell)
            for cell in cells
        )
        + "\n"
    )


def write_tsv(
    fh: TextIO,
    header: Sequence[str],
    rows: Iterable[Sequence[object]],
    footer: Iterable[Sequence[object]] = (),
) -> None:
    """Write a tab-separated table with a `#` header line.

    Floats are written with 10 significant digits. Footer rows come after the \
    table as `#` comment lines.

    Args:
        fh: Text stream to write to.
        header: Column names.
        rows: Rows with as many cells as columns.
        footer: Summary rows, each starting with its label.
    """
    fh.write("#" + "\t".join(header) + "\n")
    for row in rows:
        fh.write(_tsv_line(row))
    for row in footer:
        fh.write("#" + _tsv_line(row))
