"""Stationarity and error diagnostics for reduction runs. These read white-box
gradients where they can and are never part of a benchmarked run."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Union

import numpy as np

from zoprox.objects.errors import (ConvergenceException, InvalidArgumentException,
                                   UnsupportedModeException)
from zoprox.objects.problem import BlackBoxProblem
from zoprox.objects.regularizers import grad_mapping
from zoprox.solvers.config import SnapshotMode, SolverConfig
from zoprox.solvers.estimators import coord_full_est
from zoprox.solvers.reference import ReferenceSolution, prox_gradient
from zoprox.solvers.svrg import zor_prox_svrg
from zoprox.solvers.trace import RunTrace

logger = logging.getLogger(__name__)

REFERENCE_TOL = 1e-10
MIN_MU = 1e-9


class LedgerMode(Enum):
    metered = "metered"
    diagnostic = "diagnostic"


def _subproblem(problem: BlackBoxProblem, x: np.ndarray, lam: float) -> BlackBoxProblem:
    if not lam > 0:
        raise InvalidArgumentException(f"lambda must be positive, got {lam}")
    sigma = problem.meta.sigma
    if sigma > 0 and lam * sigma >= 1:
        raise InvalidArgumentException(
            f"lambda={lam} must be below 1/sigma={1 / sigma} for the envelope to be smooth")
    return problem.augment_quadratic(1 / lam, x)


def moreau_grad_norm(problem: BlackBoxProblem, x: np.ndarray, lam: float, accuracy: float = 1e-6,
                     ledger_mode: Union[LedgerMode, str] = LedgerMode.diagnostic, *,
                     rng: Optional[np.random.Generator] = None, max_epochs: int = 200,
                     max_iter: int = 1_000_000) -> float:
    """``||x - prox_{lam F}(x)|| / lam``, the gradient norm of the Moreau envelope.

    The prox point minimises ``F(z) + ||z - x||^2 / (2 lam)``. In diagnostic mode
    that is a white-box proximal gradient solve accurate enough that the returned
    norm is within ``accuracy``. In metered mode ZO SVRG epochs run on the same
    subproblem until a coordinated estimate of its gradient mapping meets the
    same tolerance; every query is charged.
    """
    ledger_mode = LedgerMode(ledger_mode)
    x = problem.checked_point(x, what="x").copy()
    sub = _subproblem(problem, x, lam)
    # strong convexity of the subproblem bounds the distance to its minimiser
    strong = sub.meta.gamma
    if not strong > 0:
        raise InvalidArgumentException("The Moreau subproblem is not strongly convex for this lambda")
    tol = accuracy * lam * strong / 2

    if ledger_mode is LedgerMode.diagnostic:
        if not problem.has_whitebox:
            raise UnsupportedModeException("Diagnostic Moreau norms need white-box gradients")
        z = prox_gradient(sub, x, tol=tol, max_iter=max_iter).x
        return float(np.linalg.norm(x - z) / lam)

    rng = np.random.default_rng(0) if rng is None else rng
    # estimator bias grows like d L mu, keep it under the stopping tolerance
    mu = max(tol / (2 * problem.d * sub.meta.L), MIN_MU)
    config = SolverConfig(epochs=1, eta=0.5 / sub.meta.L, mu=mu, snapshot_mode=SnapshotMode.average)
    z = x
    residual = np.inf
    for epoch in range(max_epochs):
        z = zor_prox_svrg(sub, config, z, rng).snapshot_output
        g = coord_full_est(sub, z, mu)
        residual = float(np.linalg.norm(grad_mapping(z, g, 1.0 / sub.meta.L, sub.regularizer)))
        if residual <= tol:
            logger.debug("metered Moreau solve settled after %d epochs", epoch + 1)
            return float(np.linalg.norm(x - z) / lam)
    raise ConvergenceException(f"Metered Moreau solve did not reach {tol:.1e} in {max_epochs} epochs",
                               residual=residual)


@dataclass(frozen=True)
class StageErrorDiagnostic:
    """Largest squared smooth-gradient norm at the stage optima.

    ``gc_sq`` is set for convex reduction traces, ``gnc_sq`` for weakly convex ones.
    """

    gc_sq: Optional[float]
    gnc_sq: Optional[float]
    per_stage: List[float]


def _stage_problems(problem: BlackBoxProblem, trace: RunTrace):
    for stage in trace.stages:
        yield problem.augment_quadratic(stage["coeff"], stage["anchor"])


def estimate_stage_errors(problem: BlackBoxProblem, trace: RunTrace, accelerated: bool = False,
                          tol: float = REFERENCE_TOL) -> StageErrorDiagnostic:
    """Solve every logged stage problem to high accuracy and measure ``||grad f_stage(x_s*)||^2``."""
    if not problem.has_whitebox:
        raise UnsupportedModeException("Stage errors need white-box gradients")
    if not trace.stages:
        raise InvalidArgumentException(f"{trace.algorithm} trace has no stages")
    per_stage = []
    for stage_problem, stage in zip(_stage_problems(problem, trace), trace.stages):
        solution = prox_gradient(stage_problem, stage["output"], tol=tol, accelerated=accelerated)
        g = stage_problem.diagnostic_grad(solution.x)
        per_stage.append(float(g @ g))
    worst = max(per_stage)
    if trace.algorithm.startswith("adaptnc"):
        return StageErrorDiagnostic(None, worst, per_stage)
    return StageErrorDiagnostic(worst, None, per_stage)


@dataclass(frozen=True)
class TheoremFixture:
    """Initial gap ``Delta >= F(x0) - F*`` and distance ``Theta >= ||x0 - x*||^2``."""

    Delta: float
    Theta: float
    reference: Optional[ReferenceSolution] = None

    @classmethod
    def from_reference(cls, problem: BlackBoxProblem, x0: np.ndarray, tol: float = REFERENCE_TOL,
                       accelerated: bool = True) -> "TheoremFixture":
        solution = prox_gradient(problem, x0, tol=tol, accelerated=accelerated)
        delta = problem.diagnostic_objective(x0) - solution.objective
        diff = np.asarray(x0, dtype=float) - solution.x
        return cls(max(delta, 0.0), float(diff @ diff), solution)
