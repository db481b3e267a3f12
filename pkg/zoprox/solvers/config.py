from dataclasses import dataclass, fields, replace
from enum import Enum
from typing import Any, Dict, List, Optional

from zoprox.objects.errors import ConfigException
from zoprox.objects.problem import BlackBoxProblem
from zoprox.solvers.theory import saga_theory_params, svrg_theory_params


class SnapshotMode(Enum):
    random_iterate = "random_iterate"
    average = "average"
    last = "last"


class ParamMode(Enum):
    theory = "theory"
    tuned = "tuned"


class SolverKind(Enum):
    svrg = "svrg"
    saga = "saga"
    rspgf = "rspgf"


def _coerce(enum, value, name: str, problems: List[str], bad: List[str]):
    if isinstance(value, enum):
        return value
    try:
        return enum(value)
    except ValueError:
        problems.append(f"{name}: {value!r} is not one of {[e.value for e in enum]}")
        bad.append(name)
        return value


@dataclass
class SolverConfig:
    """Inner solver settings; ``None`` means filled in by :meth:`resolve`.

    :epochs: outer epochs for SVRG, data passes for SAGA and RSPGF.
    :iterations: exact iteration count for SAGA and RSPGF, overrides ``epochs``.
    :gamma: strong convexity parameter handed in by a reduction; defaults to the problem's.
    :fqc_budget: queries this run may spend.
    :checkpoint_every: ledger interval between checkpoints, defaults to ``2n``.
    """

    eta: Optional[float] = None
    b: Optional[int] = None
    m: Optional[int] = None
    epochs: int = 10
    iterations: Optional[int] = None
    mu: Optional[float] = None
    snapshot_mode: SnapshotMode = SnapshotMode.random_iterate
    param_mode: ParamMode = ParamMode.tuned
    gamma: Optional[float] = None
    fqc_budget: Optional[int] = None
    checkpoint_every: Optional[int] = None
    record_history: bool = False

    def __post_init__(self):
        self.validate()

    def validate(self):
        problems: List[str] = []
        bad: List[str] = []
        self.snapshot_mode = _coerce(SnapshotMode, self.snapshot_mode, "snapshot_mode", problems, bad)
        self.param_mode = _coerce(ParamMode, self.param_mode, "param_mode", problems, bad)

        def check(name, ok, message):
            if not ok:
                problems.append(f"{name}: {message}, got {getattr(self, name)!r}")
                bad.append(name)

        check("eta", self.eta is None or self.eta > 0, "must be positive")
        check("b", self.b is None or self.b >= 1, "must be at least 1")
        check("m", self.m is None or self.m >= 1, "must be at least 1")
        check("epochs", self.epochs >= 0, "must be nonnegative")
        check("iterations", self.iterations is None or self.iterations >= 0, "must be nonnegative")
        check("mu", self.mu is None or self.mu > 0, "must be positive")
        check("gamma", self.gamma is None or self.gamma >= 0, "must be nonnegative")
        check("fqc_budget", self.fqc_budget is None or self.fqc_budget >= 0, "must be nonnegative")
        check("checkpoint_every", self.checkpoint_every is None or self.checkpoint_every >= 1,
              "must be at least 1")
        if problems:
            raise ConfigException("Invalid solver configuration:", *problems, fields=bad)

    def resolve(self, problem: BlackBoxProblem, kind: SolverKind) -> "SolverConfig":
        """A copy with every unset value filled in for ``problem``."""
        meta = problem.meta
        n, d = problem.n, problem.d
        eta, b, m = self.eta, self.b, self.m
        gamma = meta.gamma if self.gamma is None else self.gamma

        if self.param_mode is ParamMode.theory:
            if kind is SolverKind.rspgf:
                raise ConfigException("rspgf has no theory parameters, use param_mode 'tuned'",
                                      fields=("param_mode",))
            if kind is SolverKind.svrg:
                t_eta, t_b, t_m = svrg_theory_params(meta.L, gamma, d, n)
                m = t_m if m is None else m
            else:
                t_eta, t_b = saga_theory_params(meta.L, gamma, d, n)
            eta = t_eta if eta is None else eta
            b = t_b if b is None else b
            if eta > 1 / meta.L:
                raise ConfigException(f"eta={eta} exceeds 1/L={1 / meta.L} in theory mode", fields=("eta",))
        else:
            eta = 0.1 / meta.L if eta is None else eta
            b = min(n, 10) if b is None else b
            m = max(1, n // b) if m is None else m

        if m is None:
            m = max(1, n // b)
        mu = 1e-3 / d if self.mu is None else self.mu
        every = 2 * n if self.checkpoint_every is None else self.checkpoint_every
        return replace(self, eta=eta, b=b, m=m, mu=mu, gamma=gamma, checkpoint_every=every)

    def iteration_count(self, n: int) -> int:
        """Iterations of a SAGA or RSPGF run; call on a resolved config."""
        if self.iterations is not None:
            return self.iterations
        return self.epochs * max(1, n // self.b)

    def as_dict(self) -> Dict[str, Any]:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = value.value if isinstance(value, Enum) else value
        return out

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SolverConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigException(f"Unknown solver fields: {', '.join(unknown)}", fields=unknown)
        return cls(**data)
