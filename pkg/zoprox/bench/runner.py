"""Runs an :class:`ExperimentConfig` and writes one CSV trace per seed plus a manifest."""

import csv
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

import zoprox
from zoprox.bench.config import ExperimentConfig
from zoprox.objects.errors import DivergenceException
from zoprox.objects.problem import BlackBoxProblem
from zoprox.reductions import adapt_rdct_c, adapt_rdct_nc
from zoprox.solvers import Solvers
from zoprox.solvers.trace import RunTrace

logger = logging.getLogger(__name__)

HEADER = ("seed", "algorithm", "stage", "fqc", "objective", "grad_mapping_norm", "wall_ms")

MANIFEST = "manifest.json"

# epochs for a lone solver whose config sets neither epochs nor iterations; the budget stops it
BUDGET_BOUND_EPOCHS = 1_000_000

REDUCTION_RUNNERS = {
    "adaptc": adapt_rdct_c,
    "adaptnc": adapt_rdct_nc,
}


@dataclass
class SeedResult:
    seed: int
    trace: RunTrace
    error: Optional[DivergenceException] = None


@dataclass
class ExperimentResult:
    files: Dict[int, str] = field(default_factory=dict)
    traces: Dict[int, RunTrace] = field(default_factory=dict)
    manifest: Optional[str] = None
    aborted: List[SeedResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.aborted


def trace_filename(algorithm: str, seed: int) -> str:
    return f"{algorithm.replace('+', '_')}-seed{seed}.csv"


def run_seed(config: ExperimentConfig, problem: BlackBoxProblem, seed: int) -> SeedResult:
    """One seeded run on a private ledger, with white-box gradients closed to the solver."""
    view = problem.with_ledger().in_benchmark_mode()
    rng = np.random.default_rng(seed)
    x0 = np.zeros(view.d)
    reduction = config.reduction_name
    try:
        if reduction is not None:
            trace = REDUCTION_RUNNERS[reduction](view, config.reduction_config(), config.inner_solver(), x0, rng,
                                                 fqc_budget=config.fqc_budget,
                                                 checkpoint_every=config.checkpoint_every)
        else:
            solver = config.solver_config()
            if "epochs" not in config.solver and "iterations" not in config.solver:
                solver = replace(solver, epochs=BUDGET_BOUND_EPOCHS)
            every = solver.checkpoint_every if config.checkpoint_every is None else config.checkpoint_every
            solver = replace(solver, fqc_budget=config.fqc_budget, checkpoint_every=every)
            trace = Solvers(config.solver_name, view, solver, x0, rng)
    except DivergenceException as e:
        partial = e.run if isinstance(e.run, RunTrace) else RunTrace(config.algorithm)
        return SeedResult(seed, partial, e)
    return SeedResult(seed, trace)


def _number(value) -> str:
    return "" if value is None else repr(float(value))


def trace_rows(seed: int, algorithm: str, result: SeedResult) -> List[Tuple[str, ...]]:
    rows = []
    for c in result.trace.checkpoints:
        stage = c.stage if c.stage is not None else c.epoch
        rows.append((str(seed), algorithm, str(stage), str(c.fqc), _number(c.objective),
                     _number(c.grad_mapping_norm), f"{c.extra.get('wall_ms', 0.0):.3f}"))
    if result.error is not None:
        last = result.trace.last
        rows.append((str(seed), algorithm, "abort", str(last.fqc if last is not None else 0),
                     "nan", "", ""))
    return rows


def write_trace(path: str, rows: List[Tuple[str, ...]]):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(HEADER)
        writer.writerows(rows)


def run_experiment(config: ExperimentConfig, problem: Optional[BlackBoxProblem] = None,
                   workers: Optional[int] = None) -> ExperimentResult:
    """Run every seed and write the traces.

    Seeds run on worker threads, each with its own RNG and ledger; files are
    written here in seed order once all have finished.
    """
    problem = config.problem.build() if problem is None else problem
    out_dir = config.output_dir
    os.makedirs(out_dir, exist_ok=True)
    logger.info("running %s on %s (n=%d, d=%d) for seeds %s, budget %d",
                config.algorithm, problem.name, problem.n, problem.d, config.seeds, config.fqc_budget)

    workers = min(len(config.seeds), os.cpu_count() or 1) if workers is None else workers
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(lambda seed: run_seed(config, problem, seed), config.seeds))

    outcome = ExperimentResult()
    for result in results:
        path = os.path.join(out_dir, trace_filename(config.algorithm, result.seed))
        write_trace(path, trace_rows(result.seed, config.algorithm, result))
        outcome.files[result.seed] = path
        outcome.traces[result.seed] = result.trace
        if result.error is not None:
            logger.error("seed %d aborted: %s", result.seed, result.error)
            outcome.aborted.append(result)
        else:
            last = result.trace.last
            logger.info("seed %d done: fqc %d objective %.6e", result.seed, last.fqc, last.objective)

    manifest = {
        "version": zoprox.__version__,
        "algorithm": config.algorithm,
        "problem": config.problem.as_dict(),
        "seeds": list(config.seeds),
        "config": config.as_dict(),
        "files": {str(seed): os.path.basename(path) for seed, path in outcome.files.items()},
        "aborted": [r.seed for r in outcome.aborted],
    }
    outcome.manifest = os.path.join(out_dir, MANIFEST)
    with open(outcome.manifest, "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return outcome
