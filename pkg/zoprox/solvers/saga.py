import logging
from typing import Optional

import numpy as np

from zoprox.objects.ledger import QueryBudget, QueryLedger
from zoprox.objects.problem import BlackBoxProblem
from zoprox.objects.regularizers import prox_step
from zoprox.solvers.config import SolverConfig, SolverKind
from zoprox.solvers.estimators import full_rand_est, pair_estimates, sample_batch
from zoprox.solvers.svrg import prepare_run
from zoprox.solvers.trace import RunTrace, TraceRecorder

logger = logging.getLogger(__name__)


def zor_prox_saga(problem: BlackBoxProblem, config: SolverConfig, x0: np.ndarray, rng: np.random.Generator,
                  ledger: Optional[QueryLedger] = None, *, monitor: Optional[BlackBoxProblem] = None,
                  recorder: Optional[TraceRecorder] = None, budget: Optional[QueryBudget] = None) -> RunTrace:
    """Proximal SAGA on random two-point estimates.

    The table keeps one point per component (``n * d`` floats), since a fresh
    estimate at the stored point needs the point itself. Each sampled component
    is estimated at the iterate and at its own table entry with one shared
    direction; the same differences feed the step and the running average.
    Initialisation costs ``2n`` queries, each iteration ``4b``.
    """
    problem, cfg, x, trace, recorder, budget = prepare_run(
        problem, config, SolverKind.saga, x0, "zor_saga", ledger, monitor, recorder, budget)
    n = problem.n
    iterations = cfg.iteration_count(n)
    pair_cost = 4 * cfg.b
    reg = problem.regularizer

    if not budget.fits(2 * n):
        trace.info["steps"] = 0
        trace.output = x
        return trace

    table = np.tile(x, (n, 1))
    average = full_rand_est(problem, x, cfg.mu, rng)
    if cfg.record_history:
        trace.info["initial_average"] = average.copy()

    epoch_length = max(1, n // cfg.b)
    k = done = 0
    for k in range(iterations):
        if not budget.fits(pair_cost):
            break
        done += 1
        batch = sample_batch(n, cfg.b, rng)
        at_x, at_table = pair_estimates(problem, batch, x, [table[i] for i in batch], cfg.mu, rng)
        correction = sum(gx - gp for gx, gp in zip(at_x, at_table)) / cfg.b
        step = correction + average
        x_next = prox_step(x, step, cfg.eta, reg)
        recorder.guard(x_next, k // epoch_length)
        table[batch] = x
        if cfg.record_history:
            trace.history.append({"k": k, "average": average.copy(), "correction": correction, "step": step})
        average = average + (cfg.b / n) * correction
        x = x_next
        recorder.maybe_record(x, k // epoch_length + 1)

    logger.debug("zor_saga ran %d of %d iterations", done, iterations)
    recorder.record(x, k // epoch_length + 1)
    trace.info["steps"] = done
    trace.output = x
    trace.info["final_average"] = average
    return trace
