from zoprox.solvers.config import ParamMode, SnapshotMode, SolverConfig, SolverKind
from zoprox.solvers.estimators import (EstimatorConfig, SmoothedSurrogate, batch_pair_est,
                                       coord_est, full_rand_est, mc_smoothed_value, rand_est,
                                       sample_sphere)
from zoprox.solvers.reference import reference_inner
from zoprox.solvers.rspgf import rspgf_baseline
from zoprox.solvers.saga import zor_prox_saga
from zoprox.solvers.svrg import zo_prox_svrg_coord, zor_prox_svrg
from zoprox.solvers.theory import (ZoodEstimate, saga_theory_params, saga_zood,
                                   svrg_theory_params, svrg_zood)
from zoprox.solvers.trace import Checkpoint, RunTrace, TraceRecorder
from zoprox.utils.registry import Registry, registers


class Solvers(Registry):
    """Inner solvers by algorithm id: ``Solvers("zor_svrg", problem, config, x0, rng)``."""

    kind = "solver"

    # kind of parameters each solver resolves with
    kinds = {
        "zor_svrg": SolverKind.svrg,
        "zo_svrg_coord": SolverKind.svrg,
        "zor_saga": SolverKind.saga,
        "rspgf": SolverKind.rspgf,
        "reference_pg": None,
    }
    # the ones a benchmark may run; reference_pg reads white-box gradients
    benchmarked = ("zor_svrg", "zor_saga", "rspgf", "zo_svrg_coord")

    @registers("zor_svrg")
    def zor_svrg(cls, problem, config, x0, rng, **kwargs):
        return zor_prox_svrg(problem, config, x0, rng, **kwargs)

    @registers("zor_saga")
    def zor_saga(cls, problem, config, x0, rng, **kwargs):
        return zor_prox_saga(problem, config, x0, rng, **kwargs)

    @registers("rspgf")
    def rspgf(cls, problem, config, x0, rng, **kwargs):
        return rspgf_baseline(problem, config, x0, rng, **kwargs)

    @registers("zo_svrg_coord")
    def zo_svrg_coord(cls, problem, config, x0, rng, **kwargs):
        return zo_prox_svrg_coord(problem, config, x0, rng, **kwargs)

    @registers("reference_pg")
    def reference_pg(cls, problem, config, x0, rng, **kwargs):
        return reference_inner(problem, config, x0, rng, **kwargs)

    @classmethod
    def uses_snapshot(cls, name: str) -> bool:
        return cls.kinds[name] is SolverKind.svrg
