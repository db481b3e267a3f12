import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from zoprox.objects.errors import DivergenceException
from zoprox.objects.problem import BlackBoxProblem
from zoprox.objects.regularizers import grad_mapping

logger = logging.getLogger(__name__)

DIVERGENCE_NORM = 1e8


@dataclass(frozen=True)
class Checkpoint:
    fqc: int
    objective: float
    epoch: int
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def stage(self) -> Optional[int]:
        return self.extra.get("stage")

    @property
    def grad_mapping_norm(self) -> Optional[float]:
        return self.extra.get("grad_mapping_norm")


@dataclass
class RunTrace:
    """What a solver or reduction run leaves behind.

    :checkpoints: measurements with strictly increasing ``fqc``.
    :output: the final iterate.
    :snapshot_output: the last snapshot, for SVRG-style solvers.
    :stages: per-stage records of a reduction run.
    :events: logged decisions such as a switch to the fallback solver.
    :history: per-iteration estimator internals when ``record_history`` is set.
    """

    algorithm: str
    checkpoints: List[Checkpoint] = field(default_factory=list)
    output: Optional[np.ndarray] = None
    snapshot_output: Optional[np.ndarray] = None
    stages: List[Dict[str, Any]] = field(default_factory=list)
    events: List[Dict[str, Any]] = field(default_factory=list)
    history: List[Dict[str, Any]] = field(default_factory=list)
    info: Dict[str, Any] = field(default_factory=dict)

    @property
    def last(self) -> Optional[Checkpoint]:
        return self.checkpoints[-1] if self.checkpoints else None

    @property
    def fqcs(self) -> np.ndarray:
        return np.array([c.fqc for c in self.checkpoints], dtype=np.int64)

    @property
    def objectives(self) -> np.ndarray:
        return np.array([c.objective for c in self.checkpoints])

    @property
    def stage_objectives(self) -> List[float]:
        """Objective at the start point, then after every stage."""
        start = [self.info["initial_objective"]] if "initial_objective" in self.info else []
        return start + [s["objective"] for s in self.stages]


class TraceRecorder:
    """Takes checkpoints of a run without charging the ledger.

    ``monitor`` is the problem whose objective is reported, the un-augmented
    one for reductions. Checkpoint ``fqc`` counts from when the recorder was
    made.
    """

    def __init__(self, monitor: BlackBoxProblem, trace: RunTrace, every: int):
        self.monitor = monitor
        self.trace = trace
        self.every = max(1, int(every))
        self.ledger = monitor.ledger
        self.origin = monitor.ledger.total
        self.started = time.perf_counter()
        self.stage: Optional[int] = None
        # gradient mapping is reported at the normalised stepsize 1/L
        self.eta = 1.0 / monitor.meta.L

    @property
    def fqc(self) -> int:
        return self.ledger.total - self.origin

    def due(self) -> bool:
        last = self.trace.last
        return last is None or self.fqc - last.fqc >= self.every

    def maybe_record(self, x: np.ndarray, epoch: int):
        if self.due():
            self.record(x, epoch)

    def record(self, x: np.ndarray, epoch: int) -> Optional[Checkpoint]:
        """Checkpoint ``x`` unless the ledger has not moved since the last one."""
        last = self.trace.last
        fqc = self.fqc
        if last is not None and fqc <= last.fqc:
            return None
        self.guard(x, epoch)
        with self.ledger.refunded():
            objective = self.monitor.diagnostic_objective(x)
        if not np.isfinite(objective):
            self._diverged(f"Objective is not finite at epoch {epoch}")
        extra: Dict[str, Any] = {"wall_ms": (time.perf_counter() - self.started) * 1000.0}
        if self.stage is not None:
            extra["stage"] = self.stage
        norm = self.grad_mapping_norm(x)
        if norm is not None:
            extra["grad_mapping_norm"] = norm
        checkpoint = Checkpoint(fqc, objective, epoch, extra)
        self.trace.checkpoints.append(checkpoint)
        logger.debug("%s epoch %d fqc %d objective %.6e", self.trace.algorithm, epoch, fqc, objective)
        return checkpoint

    def grad_mapping_norm(self, x: np.ndarray) -> Optional[float]:
        if not self.monitor.has_whitebox:
            return None
        g = self.monitor.diagnostic_grad(x)
        return float(np.linalg.norm(grad_mapping(x, g, self.eta, self.monitor.regularizer)))

    def guard(self, x: np.ndarray, epoch: int):
        if not np.all(np.isfinite(x)):
            self._diverged(f"Iterate is not finite at epoch {epoch}")
        norm = float(np.linalg.norm(x))
        if norm > DIVERGENCE_NORM:
            self._diverged(f"Iterate norm {norm:.3e} exceeds {DIVERGENCE_NORM:.0e} at epoch {epoch}")

    def _diverged(self, reason: str):
        logger.error("%s aborted: %s", self.trace.algorithm, reason)
        raise DivergenceException(reason, checkpoint=self.trace.last, run=self.trace, stage=self.stage)
