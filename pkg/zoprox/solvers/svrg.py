import logging
from typing import Optional

import numpy as np

from zoprox.objects.ledger import QueryBudget, QueryLedger
from zoprox.objects.problem import BlackBoxProblem
from zoprox.objects.regularizers import prox_step
from zoprox.solvers.config import SnapshotMode, SolverConfig, SolverKind
from zoprox.solvers.estimators import CoordinatedEstimator, RandomEstimator, sample_batch
from zoprox.solvers.trace import RunTrace, TraceRecorder

logger = logging.getLogger(__name__)


def prepare_run(problem: BlackBoxProblem, config: SolverConfig, kind: SolverKind, x0: np.ndarray,
                algorithm: str, ledger: Optional[QueryLedger], monitor: Optional[BlackBoxProblem],
                recorder: Optional[TraceRecorder], budget: Optional[QueryBudget]):
    """Shared setup of every solver: resolved config, start point, trace, recorder and budget."""
    if ledger is not None:
        problem = problem.with_ledger(ledger)
    cfg = config.resolve(problem, kind)
    x = problem.checked_point(x0, what="x0").copy()
    trace = RunTrace(algorithm, info={"config": cfg.as_dict()})
    if recorder is None:
        recorder = TraceRecorder(problem if monitor is None else monitor, trace, cfg.checkpoint_every)
    if budget is None:
        budget = QueryBudget(problem.ledger, cfg.fqc_budget)
    recorder.record(x, epoch=0)
    return problem, cfg, x, trace, recorder, budget


def choose_snapshot(starts, last: np.ndarray, mode: SnapshotMode, rng: np.random.Generator) -> np.ndarray:
    """Next snapshot from the points the epoch stepped from, ``x_0 .. x_{m-1}``.

    ``last`` mode ignores them and keeps the final iterate ``x_m``.
    """
    if mode is SnapshotMode.last:
        return last.copy()
    if mode is SnapshotMode.average:
        return np.mean(starts, axis=0)
    return starts[int(rng.integers(len(starts)))].copy()


def _svrg(problem: BlackBoxProblem, config: SolverConfig, x0: np.ndarray, rng: np.random.Generator,
          estimator, algorithm: str, ledger=None, monitor=None, recorder=None, budget=None) -> RunTrace:
    problem, cfg, x, trace, recorder, budget = prepare_run(
        problem, config, SolverKind.svrg, x0, algorithm, ledger, monitor, recorder, budget)
    trace.info["snapshot_mode"] = cfg.snapshot_mode.value
    full_cost = estimator.full_cost(problem.n, problem.d)
    pair_cost = estimator.pair_cost(cfg.b, problem.d)
    reg = problem.regularizer

    snapshot = x.copy()
    epoch = steps = 0
    for epoch in range(1, cfg.epochs + 1):
        if not budget.fits(full_cost):
            epoch -= 1
            break
        # every epoch restarts from the snapshot
        x = snapshot.copy()
        full_grad = estimator.full(problem, snapshot, cfg.mu, rng)
        starts = []
        for k in range(cfg.m):
            if not budget.fits(pair_cost):
                break
            batch = sample_batch(problem.n, cfg.b, rng)
            gx, gy = estimator.pair(problem, batch, x, snapshot, cfg.mu, rng)
            blend = gx - gy + full_grad
            starts.append(x)
            x = prox_step(x, blend, cfg.eta, reg)
            recorder.guard(x, epoch)
            steps += 1
            if cfg.record_history:
                trace.history.append({"epoch": epoch, "k": k, "snapshot": snapshot.copy(),
                                      "full_grad": full_grad, "gx": gx, "gy": gy, "blend": blend})
            recorder.maybe_record(x, epoch)
        if starts:
            snapshot = choose_snapshot(starts, x, cfg.snapshot_mode, rng)
        logger.debug("%s epoch %d done, %d inner steps", algorithm, epoch, len(starts))
        if len(starts) < cfg.m:
            break

    recorder.record(x, epoch)
    trace.info["steps"] = steps
    trace.output = x
    trace.snapshot_output = snapshot
    return trace


def zor_prox_svrg(problem: BlackBoxProblem, config: SolverConfig, x0: np.ndarray, rng: np.random.Generator,
                  ledger: Optional[QueryLedger] = None, *, monitor: Optional[BlackBoxProblem] = None,
                  recorder: Optional[TraceRecorder] = None, budget: Optional[QueryBudget] = None) -> RunTrace:
    """Variance reduced proximal SVRG on random two-point estimates.

    One epoch costs ``2n + 4bm`` queries: a full estimate at the snapshot, then
    ``m`` minibatch pairs that share a direction between the iterate and the
    snapshot.
    """
    return _svrg(problem, config, x0, rng, RandomEstimator, "zor_svrg",
                 ledger, monitor, recorder, budget)


def zo_prox_svrg_coord(problem: BlackBoxProblem, config: SolverConfig, x0: np.ndarray, rng: np.random.Generator,
                       ledger: Optional[QueryLedger] = None, *, monitor: Optional[BlackBoxProblem] = None,
                       recorder: Optional[TraceRecorder] = None, budget: Optional[QueryBudget] = None) -> RunTrace:
    """Same loop on coordinate-wise estimates, ``2dn + 4dbm`` queries per epoch."""
    return _svrg(problem, config, x0, rng, CoordinatedEstimator, "zo_svrg_coord",
                 ledger, monitor, recorder, budget)
