from collections.abc import Mapping
from functools import reduce
from math import log, sqrt
from pathlib import Path
from typing import Annotated, Any, Literal, Self

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    ValidationError,
    model_validator,
)

from .. import app_name
from ..exceptions import ConfigurationError
from ..utils import load_all_yamls, load_key_values

EngineName = Literal["naive", "fft", "laplace"]
LuckName = Literal["logistic", "laplace"]
KernelName = Literal["gaussian", "laplace", "identity"]


def _split(value: Any) -> Any:
    if isinstance(value, str):
        return tuple(part.strip() for part in value.split(",") if part.strip())
    return value


_FloatList = Annotated[tuple[float, ...], BeforeValidator(_split)]


def user_config_dir() -> Path:
    from appdirs import user_config_dir as appdirs_user_config_dir

    return Path(appdirs_user_config_dir(app_name))


class SystemConfig(BaseModel):
    """Parameters of the rating system.

    Values are read from `gridrate.yml` in the user config directory, then \
    `gridrate.yml` in the working directory, then a flat `key = value` file, then \
    command line overrides. Later sources win.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    beta: float = Field(default=0.8, ge=0, le=1)
    n: int = Field(default=1000, ge=1)
    half_width: float = Field(default=7.0, gt=0, allow_inf_nan=False)
    sigma0: float = Field(default=0.7, gt=0, allow_inf_nan=False)
    sigma_kappa: float = Field(default=0.03, gt=0, allow_inf_nan=False)
    engine: EngineName = "fft"
    display_scale: float = Field(default=400 / log(10), allow_inf_nan=False)
    display_offset: float = Field(default=1500.0, allow_inf_nan=False)
    var_cap: float = Field(default=70.0, gt=0)
    """Largest display deviation of players whose matches enter the log loss."""

    luck: LuckName = "logistic"
    logistic_scale: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    laplace_weights: _FloatList = (1.0,)
    laplace_scales: _FloatList = (1.0,)
    kernel: KernelName = "gaussian"
    kernel_weights: _FloatList = (1.0,)
    kernel_scales: _FloatList | None = None
    """Laplace kernel scales, defaults to a single `sigma_kappa / sqrt(2)`."""

    @model_validator(mode="after")
    def _check_consistency(self) -> Self:
        if self.display_scale == 0:
            msg = "display_scale cannot be 0"
            raise ValueError(msg)
        if self.engine == "laplace" and self.luck != "laplace":
            msg = "engine laplace requires luck laplace"
            raise ValueError(msg)
        if self.engine == "laplace" and self.kernel == "gaussian":
            msg = "engine laplace requires kernel laplace or identity"
            raise ValueError(msg)
        if len(self.laplace_weights) != len(self.laplace_scales):
            msg = "laplace_weights and laplace_scales must have the same length"
            raise ValueError(msg)
        if len(self.kernel_weights) != len(self.resolved_kernel_scales):
            msg = "kernel_weights and kernel_scales must have the same length"
            raise ValueError(msg)
        return self

    @property
    def resolved_kernel_scales(self) -> tuple[float, ...]:
        if self.kernel_scales is None:
            return (self.sigma_kappa / sqrt(2),)
        return self.kernel_scales

    @classmethod
    def load(
        cls,
        config_file: Path | None = None,
        overrides: Mapping[str, Any] | None = None,
        current_dir: Path | None = None,
    ) -> Self:
        """Merge every configuration source and validate the result.

        Args:
            config_file: Optional flat `key = value` file.
            overrides: Values given on the command line. `None` values are ignored.
            current_dir: Directory searched for `gridrate.yml`. Defaults to the \
                working directory.

        Returns:
            The validated configuration.

        Raises:
            ConfigurationError: If a source cannot be read or a value is invalid.
        """
        directories = (user_config_dir(), current_dir or Path.cwd())
        content: dict[str, Any] = reduce(
            lambda a, b: {**a, **b},
            (
                loaded or {}
                for loaded in load_all_yamls(
                    d for directory in directories
                    if (d := directory / f"{app_name}.yml").is_file()
                )
            ),
            {},
        )
        if config_file is not None:
            try:
                content |= load_key_values(config_file)
            except OSError as e:
                msg = f"cannot read configuration file {config_file}: {e}"
                raise ConfigurationError(msg) from e
        if overrides:
            content |= {k: v for k, v in overrides.items() if v is not None}
        try:
            return cls.model_validate(content)
        except ValidationError as e:
            msg = f"invalid configuration:\n{e}"
            raise ConfigurationError(msg) from e
