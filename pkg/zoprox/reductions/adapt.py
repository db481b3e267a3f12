"""Stagewise reductions that turn a strongly convex inner solver into one for
convex and weakly convex problems."""

import logging
from dataclasses import replace
from typing import Optional, Union

import numpy as np

from zoprox.bench.switch import switch_orchestrator
from zoprox.objects.errors import DivergenceException, InvalidArgumentException
from zoprox.objects.ledger import QueryBudget, QueryLedger
from zoprox.objects.problem import BlackBoxProblem
from zoprox.reductions.budget import inner_budget
from zoprox.reductions.config import InnerSolver, ReductionConfigC, ReductionConfigNC
from zoprox.solvers import Solvers
from zoprox.solvers.config import ParamMode, SolverConfig
from zoprox.solvers.trace import RunTrace, TraceRecorder

logger = logging.getLogger(__name__)

FALLBACK_EPOCH_CAP = 1_000_000

ReductionConfig = Union[ReductionConfigC, ReductionConfigNC]


class _Reduction:
    """Bookkeeping shared by both reductions: trace, recorder, budget and the fallback hand off."""

    def __init__(self, problem: BlackBoxProblem, cfg: ReductionConfig, inner: InnerSolver, x0: np.ndarray,
                 algorithm: str, fqc_budget: Optional[int], checkpoint_every: Optional[int]):
        self.problem = problem
        self.cfg = cfg
        self.inner = inner
        self.x0 = problem.checked_point(x0, what="x0").copy()
        self.trace = RunTrace(algorithm, info={"reduction": cfg.as_dict(), "inner": inner.name})
        every = 2 * problem.n if checkpoint_every is None else checkpoint_every
        self.recorder = TraceRecorder(problem, self.trace, every)
        self.budget = QueryBudget(problem.ledger, fqc_budget)
        self.recorder.record(self.x0, 0)
        self.trace.info["initial_objective"] = problem.diagnostic_objective(self.x0)

    def stage_config(self, stage_problem: BlackBoxProblem, gamma: float) -> SolverConfig:
        if self.cfg.param_mode is ParamMode.theory:
            return inner_budget(self.inner.kind, self.cfg.contraction_target, stage_problem.meta.L,
                                gamma, stage_problem.d, stage_problem.n)
        return replace(self.inner.config, epochs=self.cfg.epochs_per_stage, iterations=None, gamma=gamma)

    def run_stage(self, stage: int, stage_problem: BlackBoxProblem, gamma: float, start: np.ndarray,
                  rng: np.random.Generator) -> Optional[np.ndarray]:
        """Run the inner solver for one stage; ``None`` when the budget is already spent."""
        config = self.stage_config(stage_problem, gamma)
        self.recorder.stage = stage
        before = self.recorder.fqc
        try:
            run = self.inner.run(stage_problem, config, start, rng, monitor=self.problem,
                                 recorder=self.recorder, budget=self.budget)
        except DivergenceException as e:
            e.stage = stage
            raise
        if run.info.get("steps", 0) == 0:
            logger.info("%s: budget spent before stage %d", self.trace.algorithm, stage)
            return None
        out = self.inner.output_of(run)
        self.trace.stages.append({
            "stage": stage,
            "gamma": gamma,
            "coeff": stage_problem.augmentations[-1].coeff,
            "anchor": stage_problem.augmentations[-1].anchor.copy(),
            "output": out.copy(),
            "objective": self.problem.diagnostic_objective(out),
            "fqc": self.recorder.fqc,
            "queries": self.recorder.fqc - before,
            "inner_config": config.as_dict(),
        })
        logger.debug("%s stage %d objective %.6e", self.trace.algorithm, stage, self.trace.stages[-1]["objective"])
        return out

    def should_switch(self) -> bool:
        decision = switch_orchestrator(self.trace, self.cfg.switch_threshold, self.cfg.fallback)
        self.trace.events.append(decision.as_event())
        return decision.switch

    def fallback(self, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Spend what is left of the budget on the fallback solver over the original problem."""
        epochs = self.cfg.fallback_epochs
        if epochs is None:
            epochs = FALLBACK_EPOCH_CAP if self.budget.limit is not None else self.cfg.epochs_per_stage
        config = SolverConfig(epochs=epochs, mu=self.inner.config.mu)
        self.recorder.stage = len(self.trace.stages) + 1
        before = self.recorder.fqc
        try:
            run = Solvers(self.cfg.fallback, self.problem, config, x, rng,
                          recorder=self.recorder, budget=self.budget)
        except DivergenceException as e:
            e.stage = self.recorder.stage
            raise
        self.trace.events.append({"event": "fallback_done", "solver": self.cfg.fallback,
                                  "queries": self.recorder.fqc - before})
        return run.output

    def finish(self, x: np.ndarray) -> RunTrace:
        self.recorder.record(x, len(self.trace.stages))
        self.trace.output = x
        return self.trace


def adapt_rdct_c(problem: BlackBoxProblem, cfg: ReductionConfigC, inner: InnerSolver, x0: np.ndarray,
                 rng: np.random.Generator, ledger: Optional[QueryLedger] = None, *,
                 fqc_budget: Optional[int] = None, checkpoint_every: Optional[int] = None) -> RunTrace:
    """Convex reduction.

    Stage ``s`` minimises ``F(x) + (gamma_s/2)||x - x0||^2``, always anchored at
    the original ``x0``, warm started from the previous output, with
    ``gamma_{s+1} = sqrt(contraction_target) * gamma_s``.
    """
    if ledger is not None:
        problem = problem.with_ledger(ledger)
    if not problem.meta.is_convex:
        raise InvalidArgumentException(f"{problem.name} is not convex, use the weakly convex reduction")
    run = _Reduction(problem, cfg, inner, x0, f"adaptc+{inner.name}", fqc_budget, checkpoint_every)
    x = run.x0
    for s in range(cfg.stages):
        gamma = cfg.gamma(s)
        out = run.run_stage(s, problem.augment_quadratic(gamma, run.x0), gamma, x, rng)
        if out is None:
            break
        x = out
        if run.should_switch():
            x = run.fallback(x, rng)
            break
    return run.finish(x)


def adapt_rdct_nc(problem: BlackBoxProblem, cfg: ReductionConfigNC, inner: InnerSolver, x0: np.ndarray,
                  rng: np.random.Generator, ledger: Optional[QueryLedger] = None, *,
                  fqc_budget: Optional[int] = None, checkpoint_every: Optional[int] = None) -> RunTrace:
    """Weakly convex reduction.

    Stage ``s`` minimises ``F(x) + sigma ||x - x_{s-1}||^2`` from ``x_{s-1}``, which
    is sigma-strongly convex for a sigma-weakly convex ``F``. The output is a
    uniformly drawn stage output ``x_alpha``, kept in ``info`` even when the
    fallback solver ends up producing ``output``.
    """
    if ledger is not None:
        problem = problem.with_ledger(ledger)
    if cfg.sigma < problem.meta.sigma:
        logger.warning("sigma=%g is below the problem's weak convexity %g; stages may not be strongly convex",
                       cfg.sigma, problem.meta.sigma)
    run = _Reduction(problem, cfg, inner, x0, f"adaptnc+{inner.name}", fqc_budget, checkpoint_every)
    run.trace.info["lambda"] = cfg.lam
    x = run.x0
    switched = False
    fallback_out = None
    for s in range(1, cfg.stages + 1):
        out = run.run_stage(s, problem.augment_quadratic(2 * cfg.sigma, x), cfg.sigma, x, rng)
        if out is None:
            break
        x = out
        if run.should_switch():
            switched = True
            fallback_out = run.fallback(x, rng)
            break

    outputs = [stage["output"] for stage in run.trace.stages]
    if outputs:
        alpha = int(rng.integers(len(outputs)))
        x_alpha = outputs[alpha]
        run.trace.info["alpha"] = run.trace.stages[alpha]["stage"]
    else:
        x_alpha = run.x0
        run.trace.info["alpha"] = 0
    run.trace.info["x_alpha"] = x_alpha
    run.trace.info["x_alpha_grad_mapping_norm"] = run.recorder.grad_mapping_norm(x_alpha)
    run.trace.info["initial_grad_mapping_norm"] = run.recorder.grad_mapping_norm(run.x0)
    return run.finish(fallback_out if switched else x_alpha)
