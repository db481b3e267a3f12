import math
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from zoprox.bench.switch import DEFAULT_FALLBACK
from zoprox.objects.errors import ConfigException
from zoprox.solvers import Solvers
from zoprox.solvers.config import ParamMode, SolverConfig
from zoprox.solvers.trace import RunTrace


@dataclass
class InnerSolver:
    """An inner solver id plus the settings every stage starts from."""

    name: str = "zor_svrg"
    config: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        Solvers.lookup(self.name)

    @property
    def kind(self):
        return Solvers.kinds[self.name]

    def run(self, problem, config: SolverConfig, x0: np.ndarray, rng: np.random.Generator, **kwargs) -> RunTrace:
        return Solvers(self.name, problem, config, x0, rng, **kwargs)

    def output_of(self, trace: RunTrace) -> np.ndarray:
        """The point handed to the next stage: the snapshot for SVRG-style solvers."""
        if Solvers.uses_snapshot(self.name) and trace.snapshot_output is not None:
            return trace.snapshot_output
        return trace.output


class _ReductionConfig:

    def _common_checks(self, problems: List[str], bad: List[str]):
        if not isinstance(self.param_mode, ParamMode):
            try:
                self.param_mode = ParamMode(self.param_mode)
            except ValueError:
                problems.append(f"param_mode: {self.param_mode!r} is not 'theory' or 'tuned'")
                bad.append("param_mode")

        def check(name, ok, message):
            if not ok:
                problems.append(f"{name}: {message}, got {getattr(self, name)!r}")
                bad.append(name)

        check("stages", self.stages >= 1, "must be at least 1")
        check("switch_threshold", self.switch_threshold is None or self.switch_threshold >= 0,
              "must be nonnegative or null")
        check("epochs_per_stage", self.epochs_per_stage >= 1, "must be at least 1")
        check("fallback_epochs", self.fallback_epochs is None or self.fallback_epochs >= 0,
              "must be nonnegative")
        check("contraction_target", 0 < self.contraction_target < 1, "must lie in (0, 1)")
        if self.fallback not in Solvers.entries:
            problems.append(f"fallback: unknown solver {self.fallback!r}")
            bad.append("fallback")

    def as_dict(self) -> Dict[str, Any]:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, float) and math.isinf(value):
                value = "inf"
            out[f.name] = value
        return out

    @classmethod
    def from_dict(cls, data: Dict[str, Any]):
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigException(f"Unknown reduction fields: {', '.join(unknown)}", fields=unknown)
        data = dict(data)
        if data.get("switch_threshold") == "inf":
            data["switch_threshold"] = math.inf
        return cls(**data)


@dataclass
class ReductionConfigC(_ReductionConfig):
    """Convex reduction: stage ``s`` adds ``(gamma_s/2)||x - x0||^2`` with
    ``gamma_s = gamma0 * contraction_target**(s/2)``."""

    gamma0: float = 0.1
    contraction_target: float = 0.25
    stages: int = 10
    switch_threshold: Optional[float] = 1e-3
    epochs_per_stage: int = 2
    fallback_epochs: Optional[int] = None
    param_mode: ParamMode = ParamMode.tuned
    fallback: str = DEFAULT_FALLBACK

    def __post_init__(self):
        self.validate()

    def validate(self):
        problems: List[str] = []
        bad: List[str] = []
        if not self.gamma0 > 0:
            problems.append(f"gamma0: must be positive, got {self.gamma0!r}")
            bad.append("gamma0")
        self._common_checks(problems, bad)
        if problems:
            raise ConfigException("Invalid reduction configuration:", *problems, fields=bad)

    def gamma(self, stage: int) -> float:
        return self.gamma0 * self.contraction_target ** (stage / 2)


@dataclass
class ReductionConfigNC(_ReductionConfig):
    """Weakly convex reduction: stage ``s`` adds ``sigma ||x - x_{s-1}||^2``.

    ``contraction_target`` only sizes theory-mode inner runs.
    """

    sigma: float = 5e-4
    stages: int = 20
    switch_threshold: Optional[float] = 3e-4
    epochs_per_stage: int = 2
    fallback_epochs: Optional[int] = None
    param_mode: ParamMode = ParamMode.tuned
    contraction_target: float = 0.5
    fallback: str = DEFAULT_FALLBACK

    def __post_init__(self):
        self.validate()

    def validate(self):
        problems: List[str] = []
        bad: List[str] = []
        if not self.sigma > 0:
            problems.append(f"sigma: must be positive, got {self.sigma!r}")
            bad.append("sigma")
        self._common_checks(problems, bad)
        if problems:
            raise ConfigException("Invalid reduction configuration:", *problems, fields=bad)

    @property
    def lam(self) -> float:
        return 1 / (2 * self.sigma)
