"""White-box reference solvers. Used for F*, stage optima and the Moreau
subproblem, never by the benchmarked algorithms."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from zoprox.objects.errors import ConvergenceException, UnsupportedModeException
from zoprox.objects.problem import BlackBoxProblem
from zoprox.objects.regularizers import prox_step
from zoprox.solvers.trace import RunTrace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReferenceSolution:
    x: np.ndarray
    objective: float
    iterations: int
    residual: float


def _require_whitebox(problem: BlackBoxProblem):
    if not problem.has_whitebox:
        raise UnsupportedModeException(f"{problem.name} has no white-box gradient for a reference solve")


def prox_gradient(problem: BlackBoxProblem, x0: np.ndarray, tol: float = 1e-10,
                  max_iter: int = 1_000_000, eta: Optional[float] = None,
                  accelerated: bool = False) -> ReferenceSolution:
    """Proximal gradient descent, or FISTA with ``accelerated``.

    Stops once the gradient mapping at the current point has norm at most
    ``tol``; failing that within ``max_iter`` steps raises.
    """
    _require_whitebox(problem)
    eta = 1.0 / problem.meta.L if eta is None else eta
    reg = problem.regularizer
    x = np.array(x0, dtype=float)
    y, t = x.copy(), 1.0
    residual = np.inf
    for it in range(1, max_iter + 1):
        if accelerated:
            x_next = prox_step(y, problem.diagnostic_grad(y), eta, reg)
            # gradient based restart
            if np.dot(y - x_next, x_next - x) > 0:
                y, t = x_next.copy(), 1.0
            else:
                t_next = (1 + np.sqrt(1 + 4 * t * t)) / 2
                y = x_next + ((t - 1) / t_next) * (x_next - x)
                t = t_next
            x = x_next
            residual = float(np.linalg.norm(x - prox_step(x, problem.diagnostic_grad(x), eta, reg)) / eta)
        else:
            x_next = prox_step(x, problem.diagnostic_grad(x), eta, reg)
            # mapping measured at the point before the step
            residual = float(np.linalg.norm(x - x_next) / eta)
            x = x_next
        if residual <= tol:
            logger.debug("reference solve converged in %d iterations", it)
            return ReferenceSolution(x, problem.diagnostic_objective(x), it, residual)
    raise ConvergenceException(f"Reference solve did not reach {tol:.1e} in {max_iter} iterations",
                               residual=residual)


def fista(problem: BlackBoxProblem, x0: np.ndarray, tol: float = 1e-10,
          max_iter: int = 1_000_000) -> ReferenceSolution:
    return prox_gradient(problem, x0, tol=tol, max_iter=max_iter, accelerated=True)


def reference_inner(problem: BlackBoxProblem, config, x0: np.ndarray, rng: np.random.Generator,
                    ledger=None, *, monitor=None, recorder=None, budget=None):
    """Exact white-box stage solver with the inner solver signature, for checking reductions.

    Spends no queries, so checkpoints only appear where other solvers move the ledger.
    """
    if ledger is not None:
        problem = problem.with_ledger(ledger)
    solution = prox_gradient(problem, x0, tol=1e-10)
    return RunTrace("reference_pg", output=solution.x,
                    info={"steps": solution.iterations, "residual": solution.residual})
