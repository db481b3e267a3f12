import logging
import math

from zoprox.objects.errors import InvalidArgumentException, UnattainableContractionException
from zoprox.solvers.config import ParamMode, SolverConfig, SolverKind
from zoprox.solvers.theory import (SVRG_EPOCH_CONTRACTION, exact, saga_constant,
                                   saga_prefactor, saga_theory_params, svrg_theory_params)

logger = logging.getLogger(__name__)

K_MAX = 10_000_000


def svrg_epochs_for(contraction_target) -> int:
    """Fewest epochs ``T`` with ``(3/4)**T <= contraction_target``."""
    target = exact(contraction_target)
    epochs, reached = 1, SVRG_EPOCH_CONTRACTION
    while reached > target:
        epochs += 1
        reached *= SVRG_EPOCH_CONTRACTION
    return epochs


def saga_iterations_for(contraction_target: float, L: float, gamma: float, d: int, n: int) -> int:
    """Fewest iterations ``K`` whose SAGA contraction factor is at most the target."""
    eta, b = saga_theory_params(L, gamma, d, n)
    prefactor = saga_prefactor(eta, b, n, d, L, gamma)
    ratio = 1 - eta * gamma / 2
    if prefactor <= contraction_target:
        return 0
    k = max(0, math.ceil(math.log(contraction_target / prefactor) / math.log(ratio)))
    # the closed form can be off by one either way in floating point
    while k > 0 and prefactor * ratio ** (k - 1) <= contraction_target:
        k -= 1
    while prefactor * ratio ** k > contraction_target:
        k += 1
    return k


def inner_budget(kind: SolverKind, contraction_target: float, L: float, gamma: float, d: int, n: int,
                 *, k_max: int = K_MAX, allow_cap: bool = False) -> SolverConfig:
    """Theory-mode inner settings that realise ``contraction_target`` per stage.

    SAGA runs longer than ``k_max`` iterations raise, unless ``allow_cap`` is set,
    in which case the run is capped at ``k_max`` with a warning.
    """
    if not 0 < contraction_target < 1:
        raise InvalidArgumentException(f"Contraction target must lie in (0, 1), got {contraction_target}")
    if kind is SolverKind.svrg:
        eta, b, m = svrg_theory_params(L, gamma, d, n)
        epochs = svrg_epochs_for(contraction_target)
        return SolverConfig(eta=eta, b=b, m=m, epochs=epochs, gamma=gamma, param_mode=ParamMode.theory)
    if kind is SolverKind.saga:
        eta, b = saga_theory_params(L, gamma, d, n)
        # validates the stepsize against 2b > eta n gamma
        saga_constant(eta, b, n, d, L, gamma)
        iterations = saga_iterations_for(contraction_target, L, gamma, d, n)
        if iterations > k_max:
            if not allow_cap:
                raise UnattainableContractionException(
                    f"SAGA needs {iterations} iterations to contract by {contraction_target}, over the cap {k_max}")
            logger.warning("SAGA inner budget %d capped at %d; contraction %s is not reached",
                           iterations, k_max, contraction_target)
            iterations = k_max
        return SolverConfig(eta=eta, b=b, iterations=iterations, gamma=gamma, param_mode=ParamMode.theory)
    raise InvalidArgumentException(f"No inner budget for solver kind {kind.value}")