import math

import numpy as np
from pytest import approx, raises

from zoprox.objects import (ConfigException, DivergenceException, InvalidArgumentException, L1,
                            QueryLedger, UnsupportedModeException)
from zoprox.problems import make_quadratic
from zoprox.reductions import (InnerSolver, LedgerMode, ReductionConfigC, ReductionConfigNC,
                               TheoremFixture, adapt_rdct_c, adapt_rdct_nc, estimate_stage_errors,
                               moreau_grad_norm)
from zoprox.solvers import RunTrace, SolverConfig
from zoprox.solvers.reference import prox_gradient
from tests.helpers import (bump_problem, for_feature, identical_quadratics, oracle_problem,
                           random_quadratics)


def rng(seed=0):
    return np.random.default_rng(seed)


def small_svrg():
    return InnerSolver("zor_svrg", SolverConfig(eta=0.1, b=2, m=5, mu=1e-4))


@for_feature(adaptc="Convex reduction")
def test_convex_schedule():
    """gamma_s = gamma0 * K^(s/2)."""
    cfg = ReductionConfigC(gamma0=0.1, contraction_target=0.25)
    assert [cfg.gamma(s) for s in range(3)] == approx([0.1, 0.05, 0.025])
    for s in range(10):
        assert cfg.gamma(s) / cfg.gamma(s + 1) == approx(1 / math.sqrt(0.25))


@for_feature(adaptc="Convex reduction")
def test_single_exact_stage_solves_the_augmented_problem():
    """One exact stage lands on the minimiser of F + (gamma0/2)||x - x0||^2."""
    problem = random_quadratics(5, 3, seed=1, regularizer=L1(0.05))
    x0 = np.ones(3)
    cfg = ReductionConfigC(gamma0=0.1, stages=1, switch_threshold=None)
    trace = adapt_rdct_c(problem, cfg, InnerSolver("reference_pg"), x0, rng())
    expected = prox_gradient(problem.augment_quadratic(0.1, x0), x0, tol=1e-10).x
    assert np.allclose(trace.output, expected, atol=1e-6)
    assert len(trace.stages) == 1


@for_feature(adaptc="Convex reduction")
def test_convex_anchor_is_always_x0():
    """Every stage of the convex reduction is anchored at the original start point."""
    problem = random_quadratics(5, 3, seed=2)
    x0 = np.array([1.0, -1.0, 2.0])
    cfg = ReductionConfigC(gamma0=0.2, contraction_target=0.5, stages=4, switch_threshold=None)
    trace = adapt_rdct_c(problem, cfg, InnerSolver("reference_pg"), x0, rng())
    assert len(trace.stages) == 4
    for s, stage in enumerate(trace.stages):
        assert np.array_equal(stage["anchor"], x0)
        assert stage["coeff"] == cfg.gamma(s)
        assert stage["gamma"] == cfg.gamma(s)
    assert [e["event"] for e in trace.events] == ["continue"] * 4


@for_feature(adaptc="Convex reduction")
def test_infinite_threshold_switches_after_first_stage():
    """With an infinite threshold the fallback takes over after stage 0."""
    problem = random_quadratics(10, 3, seed=3)
    cfg = ReductionConfigC(stages=5, switch_threshold=math.inf, epochs_per_stage=1, fallback_epochs=1)
    trace = adapt_rdct_c(problem, cfg, small_svrg(), np.ones(3), rng())
    assert len(trace.stages) == 1
    assert trace.events[0]["event"] == "switch"
    assert trace.events[-1]["event"] == "fallback_done"
    assert trace.events[-1]["solver"] == "zo_svrg_coord"
    assert trace.events[-1]["queries"] > 0


@for_feature(adaptc="Convex reduction")
def test_convex_reduction_respects_budget():
    """The reduction never spends past its query budget and records increasing checkpoints."""
    problem = random_quadratics(20, 3, seed=4)
    ledger = QueryLedger()
    cfg = ReductionConfigC(stages=10, switch_threshold=None)
    trace = adapt_rdct_c(problem, cfg, small_svrg(), np.ones(3), rng(), ledger, fqc_budget=1000,
                         checkpoint_every=50)
    assert ledger.total <= 1000
    assert trace.last.fqc == ledger.total
    assert np.all(np.diff(trace.fqcs) > 0)
    assert trace.last.stage is not None


@for_feature(adaptc="Convex reduction")
def test_convex_reduction_refuses_weakly_convex():
    """Weakly convex problems need the other reduction."""
    with raises(InvalidArgumentException):
        adapt_rdct_c(bump_problem(), ReductionConfigC(), InnerSolver("reference_pg"), np.ones(1), rng())


@for_feature(adaptc="Convex reduction")
def test_divergence_carries_the_stage():
    """An inner abort names the stage it happened in."""
    problem = identical_quadratics(2, [1.0, 1.0], b=[1.0, 1.0])
    inner = InnerSolver("zor_svrg", SolverConfig(eta=100.0, b=1, m=10, mu=1e-3))
    cfg = ReductionConfigC(stages=3, switch_threshold=None)
    with raises(DivergenceException) as e:
        adapt_rdct_c(problem, cfg, inner, np.zeros(2), rng())
    assert e.value.stage == 0


@for_feature(adaptnc="Weakly convex reduction")
def test_nonconvex_stages_are_strongly_convex():
    """Adding 2 sigma to a sigma-weakly convex problem leaves sigma strong convexity per stage."""
    problem = bump_problem(alpha=1.0)
    cfg = ReductionConfigNC(sigma=2.0, stages=3, switch_threshold=None)
    trace = adapt_rdct_nc(problem, cfg, InnerSolver("reference_pg"), np.array([1.5]), rng())
    assert len(trace.stages) == 3
    for stage in trace.stages:
        assert stage["coeff"] == 4.0
        assert problem.augment_quadratic(stage["coeff"], stage["anchor"]).meta.gamma == approx(2.0)
    assert trace.info["lambda"] == 0.25


@for_feature(adaptnc="Weakly convex reduction")
def test_nonconvex_anchor_moves():
    """Each stage is anchored at the previous stage's output."""
    problem = bump_problem(alpha=1.0)
    x0 = np.array([1.5])
    cfg = ReductionConfigNC(sigma=2.0, stages=4, switch_threshold=None)
    trace = adapt_rdct_nc(problem, cfg, InnerSolver("reference_pg"), x0, rng())
    anchors = [stage["anchor"] for stage in trace.stages]
    outputs = [x0] + [stage["output"] for stage in trace.stages]
    for anchor, previous in zip(anchors, outputs):
        assert np.array_equal(anchor, previous)


@for_feature(adaptnc="Weakly convex reduction")
def test_single_stage_output():
    """With one stage the randomly chosen output is that stage's output."""
    problem = bump_problem(alpha=1.0)
    cfg = ReductionConfigNC(sigma=2.0, stages=1, switch_threshold=None)
    trace = adapt_rdct_nc(problem, cfg, InnerSolver("reference_pg"), np.array([0.3]), rng())
    assert trace.info["alpha"] == 1
    assert np.array_equal(trace.info["x_alpha"], trace.stages[0]["output"])
    assert np.array_equal(trace.output, trace.info["x_alpha"])
    assert trace.info["x_alpha_grad_mapping_norm"] < trace.info["initial_grad_mapping_norm"]


@for_feature(adaptnc="Weakly convex reduction")
def test_low_sigma_warns(caplog):
    """A sigma below the problem's weak convexity bound is allowed but logged."""
    problem = bump_problem(alpha=1.0)
    cfg = ReductionConfigNC(sigma=0.5, stages=1, switch_threshold=None)
    adapt_rdct_nc(problem, cfg, InnerSolver("reference_pg"), np.array([0.5]), rng())
    assert "below the problem's weak convexity" in caplog.text


@for_feature(config="Reduction settings")
def test_reduction_config_validation():
    """Bad reduction fields are collected into one error."""
    with raises(ConfigException) as e:
        ReductionConfigC(gamma0=0.0, stages=0, contraction_target=1.5)
    assert set(e.value.fields) == {"gamma0", "stages", "contraction_target"}
    with raises(ConfigException):
        ReductionConfigNC(sigma=-1.0)
    with raises(ConfigException):
        ReductionConfigNC(fallback="newton")
    cfg = ReductionConfigC.from_dict({"switch_threshold": "inf"})
    assert cfg.switch_threshold == math.inf
    assert cfg.as_dict()["switch_threshold"] == "inf"
    assert ReductionConfigNC().switch_threshold == 3e-4
    assert ReductionConfigC().switch_threshold == 1e-3
    with raises(ConfigException):
        InnerSolver("newton")


@for_feature(moreau="Moreau envelope")
def test_moreau_on_half_square():
    """For F = x^2/2 and lambda = 1 the prox point is x/2."""
    problem = identical_quadratics(1, [1.0])
    assert moreau_grad_norm(problem, np.array([2.0]), 1.0) == approx(1.0, abs=1e-6)


@for_feature(moreau="Moreau envelope")
def test_moreau_vanishes_at_minimiser():
    """At the minimiser of a convex F the Moreau gradient is zero."""
    problem = random_quadratics(3, 3, seed=5, regularizer=L1(0.1))
    xstar = prox_gradient(problem, np.zeros(3), tol=1e-12).x
    assert moreau_grad_norm(problem, xstar, 0.5, accuracy=1e-6) <= 1e-5


@for_feature(moreau="Moreau envelope")
def test_moreau_matches_closed_form_lasso():
    """For (1/2)||x - c||^2 + lam ||x||_1 the prox point has a closed form."""
    c = np.array([1.0, -0.3])
    problem = make_quadratic([np.eye(2)], [c], L1(0.2))
    x, lam = np.array([2.0, 0.5]), 0.5
    # minimiser of (1/2)||z - c||^2 + 0.2||z||_1 + ||z - x||^2 / (2 lam)
    w = (c + x / lam) / (1 + 1 / lam)
    z = np.sign(w) * np.maximum(np.abs(w) - 0.2 / (1 + 1 / lam), 0.0)
    assert moreau_grad_norm(problem, x, lam, accuracy=1e-8) == approx(np.linalg.norm(x - z) / lam, abs=1e-7)


@for_feature(moreau="Moreau envelope")
def test_moreau_on_bump_matches_grid_search():
    """The weakly convex bump agrees with a dense grid search for the prox point."""
    problem = bump_problem(alpha=1.0)
    lam, x = 0.25, 1.0
    grid = np.linspace(-10.0, 10.0, 1_000_001)
    values = grid ** 2 / (1 + grid ** 2) + (grid - x) ** 2 / (2 * lam)
    z = grid[np.argmin(values)]
    expected = abs(x - z) / lam
    assert moreau_grad_norm(problem, np.array([x]), lam) == approx(expected, abs=1e-3)


@for_feature(moreau="Moreau envelope")
def test_moreau_lambda_bound():
    """lambda must stay below 1/sigma."""
    problem = bump_problem(alpha=1.0)
    with raises(InvalidArgumentException):
        moreau_grad_norm(problem, np.array([1.0]), 0.5)
    with raises(InvalidArgumentException):
        moreau_grad_norm(problem, np.array([1.0]), 0.0)


@for_feature(moreau="Moreau envelope")
def test_metered_moreau():
    """The metered solve pays for its queries and lands near the closed form."""
    problem = identical_quadratics(4, [1.0])
    value = moreau_grad_norm(problem, np.array([2.0]), 1.0, accuracy=1e-3, ledger_mode="metered",
                             rng=rng(1))
    assert value == approx(1.0, abs=2e-3)
    assert problem.ledger.total > 0


@for_feature(moreau="Moreau envelope")
def test_diagnostic_moreau_needs_whitebox():
    """Without gradients only the metered mode works."""
    problem = oracle_problem([lambda x: 0.5 * float(x @ x)], 1)
    with raises(UnsupportedModeException):
        moreau_grad_norm(problem, np.array([2.0]), 1.0, ledger_mode=LedgerMode.diagnostic)


def _stage_trace(algorithm, coeff, anchor, output):
    trace = RunTrace(algorithm)
    trace.stages.append({"stage": 0, "coeff": coeff, "anchor": anchor, "output": output})
    return trace


@for_feature(stage_errors="Stage errors")
def test_stage_error_zero_at_unconstrained_minimum():
    """Anchored at the minimiser of a smooth problem the stage optimum has zero gradient."""
    problem = random_quadratics(4, 3, seed=6)
    xstar = prox_gradient(problem, np.zeros(3), tol=1e-12).x
    diagnostic = estimate_stage_errors(problem, _stage_trace("adaptc+zor_svrg", 0.1, xstar, np.zeros(3)))
    assert diagnostic.gc_sq < 1e-12
    assert diagnostic.gnc_sq is None


@for_feature(stage_errors="Stage errors")
def test_stage_error_positive_with_active_l1():
    """An active L1 term leaves a nonzero smooth gradient at the optimum."""
    c = np.array([1.0, 0.05])
    problem = make_quadratic([np.eye(2)], [c], L1(0.1))
    xstar = np.array([0.9, 0.0])
    trace = _stage_trace("adaptnc+zor_svrg", 0.1, xstar, np.zeros(2))
    diagnostic = estimate_stage_errors(problem, trace)
    assert diagnostic.gnc_sq == approx(0.0125, abs=1e-8)
    assert diagnostic.gc_sq is None

    accelerated = estimate_stage_errors(problem, trace, accelerated=True)
    assert accelerated.gnc_sq == approx(diagnostic.gnc_sq, abs=1e-6)


@for_feature(stage_errors="Stage errors")
def test_stage_errors_need_whitebox_and_stages():
    """Stage errors refuse blind problems and empty traces."""
    blind = oracle_problem([lambda x: 0.5 * float(x @ x)], 1)
    with raises(UnsupportedModeException):
        estimate_stage_errors(blind, _stage_trace("adaptc+zor_svrg", 0.1, np.zeros(1), np.zeros(1)))
    with raises(InvalidArgumentException):
        estimate_stage_errors(random_quadratics(2, 2), RunTrace("adaptc+zor_svrg"))


@for_feature(stage_errors="Stage errors")
def test_theorem_fixture():
    """Delta and Theta bound the initial gap and distance."""
    problem = identical_quadratics(2, [1.0, 2.0])
    x0 = np.array([1.0, 1.0])
    fixture = TheoremFixture.from_reference(problem, x0)
    assert fixture.Delta == approx(1.5, abs=1e-9)
    assert fixture.Theta == approx(2.0, abs=1e-9)
