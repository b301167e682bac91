from abc import ABC, abstractmethod
from logging import getLogger

import numpy as np
from numpy.typing import NDArray

from ..exceptions import ImpossibleOutcomeError
from ..kernels import Kernel
from ..luck import LuckFunction
from ..models import Distribution
from .protocols import EngineProtocol


def posterior_from_likelihood[D: Distribution](
    rho: D, likelihood: NDArray[np.float64]
) -> D:
    """Multiply a prior by a likelihood and normalize.

    Args:
        rho: Prior belief.
        likelihood: Likelihood at every support point of the prior.

    Returns:
        The posterior belief, on the support of the prior.

    Raises:
        ImpossibleOutcomeError: If the observed outcome has zero probability under \
            the prior.
    """
    weights = rho.weights * likelihood
    if not weights.sum() > 0:
        msg = "observed outcome has zero probability under the current beliefs"
        raise ImpossibleOutcomeError(msg)
    return rho.with_weights(weights)


class BaseEngine(ABC, EngineProtocol):
    def __init__(self, luck: LuckFunction, kernel: Kernel) -> None:
        self._luck = luck
        self._kernel = kernel
        self._logger = getLogger(__name__)

    @property
    def luck(self) -> LuckFunction:
        return self._luck

    @property
    def kernel(self) -> Kernel:
        return self._kernel

    @abstractmethod
    def likelihood(
        self, rho_a: Distribution, rho_b: Distribution, score: float
    ) -> NDArray[np.float64]:
        raise NotImplementedError

    @abstractmethod
    def smooth[D: Distribution](self, rho: D) -> D:
        raise NotImplementedError

    def posterior[D: Distribution](
        self, rho_a: D, rho_b: Distribution, score: float
    ) -> D:
        return posterior_from_likelihood(rho_a, self.likelihood(rho_a, rho_b, score))

    def expected_score(self, rho_a: Distribution, rho_b: Distribution) -> float:
        return float(np.dot(rho_a.weights, self.likelihood(rho_a, rho_b, 1.0)))
