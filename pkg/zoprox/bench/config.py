"""Experiment configuration: a JSON document whose keys mirror these dataclasses."""

import json
import os
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from zoprox.objects.errors import ConfigException
from zoprox.objects.problem import BlackBoxProblem
from zoprox.parser import read_libsvm
from zoprox.problems import LogisticSpec, make_logistic, synth_dataset
from zoprox.reductions.config import InnerSolver, ReductionConfigC, ReductionConfigNC
from zoprox.solvers import Solvers
from zoprox.solvers.config import SolverConfig

DATA_DIR_ENV = "ZOPROX_DATA_DIR"

REDUCTIONS = {
    "adaptc": ReductionConfigC,
    "adaptnc": ReductionConfigNC,
}

DEFAULT_SEEDS = tuple(range(10))


def split_algorithm(algorithm: str) -> Tuple[Optional[str], str]:
    """``"adaptc+zor_svrg"`` -> ``("adaptc", "zor_svrg")``, ``"rspgf"`` -> ``(None, "rspgf")``."""
    if "+" in algorithm:
        reduction, _, inner = algorithm.partition("+")
        return reduction, inner
    return None, algorithm


def resolve_data_path(path: str) -> str:
    """Relative dataset paths resolve against ``$ZOPROX_DATA_DIR`` when it is set."""
    path = os.path.expanduser(path)
    base = os.environ.get(DATA_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _check_fields(cls, data: Dict[str, Any], what: str):
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigException(f"Unknown {what} fields: {', '.join(unknown)}", fields=unknown)


@dataclass
class ProblemConfig:
    """Which logistic problem to build.

    ``dataset`` names a LIBSVM file; without one a synthetic dataset of
    ``n`` by ``d`` is generated from ``data_seed``. ``alpha > 0`` selects the
    nonconvex variant. ``strong_convexity`` adds ``(c/2)||x||^2`` to the smooth part.
    """

    dataset: Optional[str] = None
    n_features: Optional[int] = None
    max_rows: Optional[int] = None
    n: int = 100
    d: int = 20
    data_seed: int = 0
    separability: float = 2.0
    lambda1: float = 1e-3
    lambda2: float = 1e-5
    alpha: float = 0.0
    strong_convexity: float = 0.0

    def validate(self, problems: List[str], bad: List[str]):

        def check(name, ok, message):
            if not ok:
                problems.append(f"problem.{name}: {message}, got {getattr(self, name)!r}")
                bad.append(f"problem.{name}")

        check("n", self.n >= 1, "must be at least 1")
        check("d", self.d >= 1, "must be at least 1")
        check("separability", self.separability >= 0, "must be nonnegative")
        check("lambda1", self.lambda1 >= 0, "must be nonnegative")
        check("lambda2", self.lambda2 >= 0, "must be nonnegative")
        check("alpha", self.alpha >= 0, "must be nonnegative")
        check("strong_convexity", self.strong_convexity >= 0, "must be nonnegative")
        check("max_rows", self.max_rows is None or self.max_rows >= 1, "must be at least 1")
        if self.dataset is not None and not os.path.isfile(resolve_data_path(self.dataset)):
            problems.append(f"problem.dataset: {resolve_data_path(self.dataset)!r} is not a readable file")
            bad.append("problem.dataset")

    def build(self) -> BlackBoxProblem:
        if self.dataset is not None:
            dataset = read_libsvm(resolve_data_path(self.dataset), n_features=self.n_features)
        else:
            dataset = synth_dataset(self.n, self.d, self.data_seed, self.separability)
        if self.max_rows is not None:
            dataset = dataset.head(self.max_rows)
        problem = make_logistic(dataset, LogisticSpec(self.lambda1, self.lambda2, self.alpha))
        if self.strong_convexity:
            problem = problem.augment_quadratic(self.strong_convexity, np.zeros(problem.d))
        return problem

    def as_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ProblemConfig":
        _check_fields(cls, data, "problem")
        return cls(**data)


@dataclass
class ExperimentConfig:
    """One algorithm on one problem over several seeds.

    :algorithm: a solver id, or ``adaptc+<inner>`` / ``adaptnc+<inner>``.
    :solver: :class:`SolverConfig` fields, for the solver or the reduction's inner solver.
    :reduction: reduction config fields.
    """

    problem: ProblemConfig = field(default_factory=ProblemConfig)
    algorithm: str = "zor_svrg"
    solver: Dict[str, Any] = field(default_factory=dict)
    reduction: Dict[str, Any] = field(default_factory=dict)
    fqc_budget: int = 200_000
    seeds: List[int] = field(default_factory=lambda: list(DEFAULT_SEEDS))
    checkpoint_every: Optional[int] = None
    output_dir: str = "traces"

    def __post_init__(self):
        if isinstance(self.problem, dict):
            self.problem = ProblemConfig.from_dict(self.problem)
        self.seeds = [int(s) for s in self.seeds]
        self.validate()

    def validate(self):
        """Raise one :class:`ConfigException` naming every bad field."""
        problems: List[str] = []
        bad: List[str] = []

        def check(name, ok, message):
            if not ok:
                problems.append(f"{name}: {message}, got {getattr(self, name)!r}")
                bad.append(name)

        check("fqc_budget", self.fqc_budget > 0, "must be positive")
        check("seeds", len(self.seeds) >= 1, "needs at least one seed")
        check("seeds", len(set(self.seeds)) == len(self.seeds), "must not repeat")
        check("checkpoint_every", self.checkpoint_every is None or self.checkpoint_every >= 1,
              "must be at least 1")
        self.problem.validate(problems, bad)

        reduction, inner = split_algorithm(self.algorithm)
        if reduction is not None and reduction not in REDUCTIONS:
            problems.append(f"algorithm: unknown reduction {reduction!r} in {self.algorithm!r}, "
                            f"expected one of {sorted(REDUCTIONS)}")
            bad.append("algorithm")
        if inner not in Solvers.benchmarked:
            problems.append(f"algorithm: {inner!r} is not a benchmarked solver, "
                            f"expected one of {list(Solvers.benchmarked)}")
            bad.append("algorithm")
        if reduction is None and self.reduction:
            problems.append(f"reduction: set but {self.algorithm!r} is not a reduction")
            bad.append("reduction")

        for name, build in (("solver", self.solver_config), ("reduction", self.reduction_config)):
            try:
                build()
            except ConfigException as e:
                problems.append(f"{name}: {e.reason}")
                bad.extend(f"{name}.{f}" for f in e.fields)

        if problems:
            raise ConfigException("Invalid experiment configuration:", *problems, fields=bad)

    @property
    def reduction_name(self) -> Optional[str]:
        return split_algorithm(self.algorithm)[0]

    @property
    def solver_name(self) -> str:
        return split_algorithm(self.algorithm)[1]

    def solver_config(self) -> SolverConfig:
        return SolverConfig.from_dict(self.solver)

    def reduction_config(self):
        cls = REDUCTIONS.get(self.reduction_name)
        if cls is None:
            return None
        return cls.from_dict(self.reduction)

    def inner_solver(self) -> InnerSolver:
        return InnerSolver(self.solver_name, self.solver_config())

    def as_dict(self) -> Dict[str, Any]:
        return {
            "problem": self.problem.as_dict(),
            "algorithm": self.algorithm,
            "solver": dict(self.solver),
            "reduction": dict(self.reduction),
            "fqc_budget": self.fqc_budget,
            "seeds": list(self.seeds),
            "checkpoint_every": self.checkpoint_every,
            "output_dir": self.output_dir,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        _check_fields(cls, data, "experiment")
        data = dict(data)
        data["problem"] = ProblemConfig.from_dict(data.get("problem") or {})
        try:
            return cls(**data)
        except TypeError as e:
            raise ConfigException(f"Malformed experiment configuration: {e}") from None


def load_config(path: Optional[str] = None, **overrides) -> ExperimentConfig:
    """Read a JSON config, then apply every override that is not ``None``."""
    data: Dict[str, Any] = {}
    if path is not None:
        try:
            with open(path) as f:
                data = json.load(f)
        except OSError as e:
            raise ConfigException(f"Can not read config {path!r}: {e.strerror}", fields=("config",)) from None
        except json.JSONDecodeError as e:
            raise ConfigException(f"Config {path!r} is not valid JSON: {e}", fields=("config",)) from None
        if not isinstance(data, dict):
            raise ConfigException(f"Config {path!r} must hold a JSON object", fields=("config",))
    data.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_dict(data)
