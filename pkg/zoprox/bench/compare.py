"""Summaries of two trace directories on a common grid of query budgets."""

import csv
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from zoprox.bench.runner import HEADER, MANIFEST
from zoprox.objects.errors import InvalidArgumentException, MismatchException
from zoprox.utils.formatter import format_table

logger = logging.getLogger(__name__)

Curve = Tuple[np.ndarray, np.ndarray]


def step_value(fqcs: np.ndarray, objectives: np.ndarray, budget: float) -> float:
    """Objective of the last checkpoint taken within ``budget`` queries."""
    idx = int(np.searchsorted(fqcs, budget, side="right")) - 1
    return float(objectives[max(idx, 0)])


def budget_grid(budgets: Sequence[float]) -> np.ndarray:
    grid = np.unique(np.asarray(budgets, dtype=float))
    if grid.size == 0:
        raise InvalidArgumentException("Need at least one budget")
    if grid[0] <= 0:
        raise InvalidArgumentException(f"Budgets must be positive, got {grid[0]:g}")
    return grid


def trace_auc(fqcs: np.ndarray, objectives: np.ndarray, budgets: Sequence[float]) -> float:
    """Objective integrated over ``log10`` of the query count, sampled on ``budgets``."""
    grid = budget_grid(budgets)
    values = [step_value(fqcs, objectives, b) for b in grid]
    return float(trapezoid(values, np.log10(grid)))


@dataclass
class TraceSet:
    """Every seed of one algorithm read back from a run directory."""

    directory: str
    algorithm: str
    problem: dict
    curves: Dict[int, Curve] = field(default_factory=dict)

    def median_at(self, budget: float) -> float:
        return float(np.median([step_value(f, o, budget) for f, o in self.curves.values()]))

    def auc(self, seed: int, budgets: Sequence[float]) -> float:
        return trace_auc(*self.curves[seed], budgets)


def read_trace(path: str) -> Dict[int, Tuple[str, List[int], List[float]]]:
    """Rows of one CSV grouped by seed; abort rows are dropped."""
    out: Dict[int, Tuple[str, List[int], List[float]]] = {}
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = tuple(next(reader, ()))
        if header != HEADER:
            raise MismatchException(f"{path} has header {','.join(header)!r}, expected {','.join(HEADER)!r}")
        for row in reader:
            seed, algorithm, stage, fqc, objective = row[:5]
            if stage == "abort":
                continue
            _, fqcs, objectives = out.setdefault(int(seed), (algorithm, [], []))
            fqcs.append(int(fqc))
            objectives.append(float(objective))
    return out


def load_traces(directory: str) -> TraceSet:
    manifest_path = os.path.join(directory, MANIFEST)
    try:
        with open(manifest_path) as f:
            manifest = json.load(f)
    except OSError as e:
        raise MismatchException(f"{directory} has no readable {MANIFEST}: {e.strerror}") from None

    traces = TraceSet(directory, manifest["algorithm"], manifest["problem"])
    for name in sorted(manifest["files"].values()):
        for seed, (algorithm, fqcs, objectives) in read_trace(os.path.join(directory, name)).items():
            if algorithm != traces.algorithm:
                raise MismatchException(f"{name} holds {algorithm}, the manifest says {traces.algorithm}")
            if fqcs:
                traces.curves[seed] = (np.asarray(fqcs), np.asarray(objectives))
    if not traces.curves:
        raise MismatchException(f"{directory} holds no finished traces")
    return traces


@dataclass(frozen=True)
class BudgetRow:
    budget: float
    median_a: float
    median_b: float

    @property
    def winner(self) -> str:
        if self.median_a < self.median_b:
            return "A"
        if self.median_b < self.median_a:
            return "B"
        return "tie"


@dataclass
class Comparison:
    label_a: str
    label_b: str
    rows: List[BudgetRow]
    auc_a: float
    auc_b: float
    # per seed present in both directories, which side had the lower AUC
    seed_wins: Dict[int, str]

    @property
    def wins(self) -> Dict[str, int]:
        counts = {"A": 0, "B": 0, "tie": 0}
        for winner in self.seed_wins.values():
            counts[winner] += 1
        return counts

    def table(self) -> str:
        body = format_table(
            ("budget", f"A: {self.label_a}", f"B: {self.label_b}", "winner"),
            [(int(r.budget), r.median_a, r.median_b, r.winner) for r in self.rows])
        wins = self.wins
        return "\n".join([
            body,
            "",
            f"median AUC over log10(fqc): A {self.auc_a:.6g}, B {self.auc_b:.6g}",
            f"per seed AUC wins: A {wins['A']}, B {wins['B']}, tied {wins['tie']}",
        ])


def compare_traces(dir_a: str, dir_b: str, budgets: Sequence[float]) -> Comparison:
    """Median objective and winner at each budget, and AUC per algorithm.

    Both directories must have been run on the same problem.
    """
    grid = budget_grid(budgets)
    a, b = load_traces(dir_a), load_traces(dir_b)
    if a.problem != b.problem:
        differ = sorted(k for k in set(a.problem) | set(b.problem) if a.problem.get(k) != b.problem.get(k))
        raise MismatchException(f"{dir_a} and {dir_b} ran different problems",
                                f"fields that differ: {', '.join(differ)}")

    rows = [BudgetRow(float(g), a.median_at(g), b.median_at(g)) for g in grid]
    auc_a = {seed: a.auc(seed, grid) for seed in a.curves}
    auc_b = {seed: b.auc(seed, grid) for seed in b.curves}
    seed_wins = {}
    for seed in sorted(set(auc_a) & set(auc_b)):
        seed_wins[seed] = "A" if auc_a[seed] < auc_b[seed] else "B" if auc_b[seed] < auc_a[seed] else "tie"
    logger.debug("compared %d common seeds", len(seed_wins))
    return Comparison(a.algorithm, b.algorithm, rows, float(np.median(list(auc_a.values()))),
                      float(np.median(list(auc_b.values()))), seed_wins)
