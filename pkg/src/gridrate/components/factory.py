from pathlib import Path
from typing import TYPE_CHECKING

from .protocols import (
    EngineProtocol,
    FactoryProtocol,
    MatchLogReaderProtocol,
    RatingStoreProtocol,
)

if TYPE_CHECKING:
    from ..configuring.settings import SystemConfig
    from ..kernels import Kernel
    from ..luck import LuckFunction
    from ..models import DisplayTransform, Grid, GridDistribution
    from .rating_store import StoreHeader


class SettingsFactory(FactoryProtocol):
    def __init__(self, config: "SystemConfig") -> None:
        self._config = config

    def grid(self) -> "Grid":
        from ..models import Grid

        return Grid(n=self._config.n, half_width=self._config.half_width)

    def display_transform(self) -> "DisplayTransform":
        from ..models import DisplayTransform

        return DisplayTransform(
            scale=self._config.display_scale, offset=self._config.display_offset
        )

    def prior(self) -> "GridDistribution":
        from ..models import default_prior

        return default_prior(self.grid(), self._config.sigma0)

    def luck_function(self) -> "LuckFunction":
        from ..luck import LaplaceMix, SigmoidMix

        if self._config.luck == "laplace":
            return LaplaceMix.from_lists(
                beta=self._config.beta,
                weights=self._config.laplace_weights,
                scales=self._config.laplace_scales,
            )
        return SigmoidMix(beta=self._config.beta, scale=self._config.logistic_scale)

    def kernel(self) -> "Kernel":
        from ..kernels import GaussianKernel, IdentityKernel, LaplaceMixKernel

        if self._config.kernel == "identity":
            return IdentityKernel()
        if self._config.kernel == "laplace":
            return LaplaceMixKernel.from_lists(
                weights=self._config.kernel_weights,
                scales=self._config.resolved_kernel_scales,
            )
        return GaussianKernel(sigma=self._config.sigma_kappa)

    def engine(self) -> EngineProtocol:
        if self._config.engine == "naive":
            from .naive_engine import NaiveEngine

            return NaiveEngine(luck=self.luck_function(), kernel=self.kernel())
        if self._config.engine == "laplace":
            from .laplace_engine import LaplaceEngine

            return LaplaceEngine(luck=self.luck_function(), kernel=self.kernel())
        from .fft_engine import FftEngine

        return FftEngine(luck=self.luck_function(), kernel=self.kernel())

    def store_header(self) -> "StoreHeader":
        from .rating_store import StoreHeader

        return StoreHeader(
            n=self._config.n,
            m=self._config.half_width,
            beta=self._config.beta,
            sigma0=self._config.sigma0,
            sigma_kappa=self._config.sigma_kappa,
        )

    def rating_store(self, path: Path | None = None) -> RatingStoreProtocol:
        """Build an empty store, or load it from `path` if it exists.

        Args:
            path: Optional snapshot to load.

        Returns:
            The rating store.
        """
        from .rating_store import RatingStore

        if path is not None and path.exists():
            return RatingStore.load(
                path,
                header=self.store_header(),
                prior=self.prior(),
                engine=self.engine(),
            )
        return RatingStore(
            header=self.store_header(), prior=self.prior(), engine=self.engine()
        )

    def match_log_reader(self, strict: bool) -> MatchLogReaderProtocol:
        from .match_log import MatchLogReader

        return MatchLogReader(strict=strict)
