from typing import Optional

import numpy as np

from zoprox.objects.ledger import QueryBudget, QueryLedger
from zoprox.objects.problem import BlackBoxProblem
from zoprox.objects.regularizers import prox_step
from zoprox.solvers.config import SolverConfig, SolverKind
from zoprox.solvers.estimators import batch_rand_est, sample_batch
from zoprox.solvers.svrg import prepare_run
from zoprox.solvers.trace import RunTrace, TraceRecorder


def rspgf_baseline(problem: BlackBoxProblem, config: SolverConfig, x0: np.ndarray, rng: np.random.Generator,
                   ledger: Optional[QueryLedger] = None, *, monitor: Optional[BlackBoxProblem] = None,
                   recorder: Optional[TraceRecorder] = None, budget: Optional[QueryBudget] = None) -> RunTrace:
    """Randomized stochastic projected gradient-free baseline: a prox step on a
    plain minibatch estimate, ``2b`` queries per iteration and no variance reduction."""
    problem, cfg, x, trace, recorder, budget = prepare_run(
        problem, config, SolverKind.rspgf, x0, "rspgf", ledger, monitor, recorder, budget)
    epoch_length = max(1, problem.n // cfg.b)
    k = steps = 0
    for k in range(cfg.iteration_count(problem.n)):
        if not budget.fits(2 * cfg.b):
            break
        steps += 1
        batch = sample_batch(problem.n, cfg.b, rng)
        g = batch_rand_est(problem, batch, x, cfg.mu, rng)
        x = prox_step(x, g, cfg.eta, problem.regularizer)
        recorder.guard(x, k // epoch_length)
        if cfg.record_history:
            trace.history.append({"k": k, "estimate": g})
        recorder.maybe_record(x, k // epoch_length + 1)

    recorder.record(x, k // epoch_length + 1)
    trace.info["steps"] = steps
    trace.output = x
    return trace
