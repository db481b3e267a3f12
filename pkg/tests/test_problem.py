import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from pytest import approx, raises

from zoprox.objects import (L1, ConvexityTag, ElasticNet, InvalidArgumentException,
                            OracleException, ProblemMeta, QueryBudget, QueryLedger,
                            UnsupportedModeException, augment_quadratic, eval_component,
                            eval_smooth_avg, objective)
from tests.helpers import for_feature, identical_quadratics, oracle_problem, random_quadratics


def half_norm(x):
    return 0.5 * float(x @ x)


@for_feature(oracles="Component oracles")
def test_eval_component_charges_one():
    """A component evaluation returns f_i(x) and costs one query."""
    problem = oracle_problem([half_norm], 2)
    assert eval_component(problem, 0, np.array([1.0, 2.0])) == 2.5
    assert problem.ledger.total == 1


@for_feature(oracles="Component oracles")
def test_eval_component_with_augmentation():
    """The quadratic term is added to the oracle value for free."""
    problem = augment_quadratic(oracle_problem([lambda x: 0.0], 2), 2.0, np.zeros(2))
    assert problem.eval_component(0, np.array([1.0, 0.0])) == 1.0
    assert problem.ledger.total == 1

    shifted = oracle_problem([lambda x: 0.0], 2).augment_quadratic(2.0, np.array([1.0, 0.0]))
    assert shifted.eval_component(0, np.zeros(2)) == 1.0


@for_feature(oracles="Component oracles")
def test_eval_component_rejects_bad_input():
    """Out of range indices and non-finite points are hard errors that charge nothing."""
    problem = oracle_problem([half_norm], 2)
    with raises(OracleException):
        problem.eval_component(1, np.zeros(2))
    with raises(OracleException):
        problem.eval_component(-1, np.zeros(2))
    with raises(OracleException):
        problem.eval_component(0, np.array([np.nan, 0.0]))
    with raises(OracleException):
        problem.eval_component(0, np.zeros(3))
    assert problem.ledger.total == 0


@for_feature(oracles="Component oracles")
def test_eval_component_rejects_non_finite_return():
    """An oracle returning inf is an error."""
    problem = oracle_problem([lambda x: math.inf], 1)
    with raises(OracleException):
        problem.eval_component(0, np.zeros(1))


@for_feature(oracles="Component oracles")
def test_smooth_average():
    """The smooth part is the mean of the components and costs n queries."""
    problem = oracle_problem([lambda x: float(x[0]), lambda x: 3 * float(x[0])], 1)
    assert eval_smooth_avg(problem, np.array([1.0])) == 2.0
    assert problem.ledger.total == 2

    single = oracle_problem([half_norm], 2)
    x = np.array([0.3, -1.2])
    assert single.eval_smooth_avg(x) == single.eval_component(0, x)


@for_feature(oracles="Component oracles")
def test_smooth_average_matches_loop():
    """Random quadratics averaged agree with a plain summation loop."""
    problem = random_quadratics(10, 4, seed=3)
    x = np.random.default_rng(1).standard_normal(4)
    total = 0.0
    for component in problem.components:
        total += component(x)
    assert eval_smooth_avg(problem, x) == approx(total / 10, abs=1e-12)


@for_feature(oracles="Component oracles")
def test_objective_adds_unmetered_regularizer():
    """r is evaluated analytically and does not touch the ledger."""
    problem = oracle_problem([lambda x: 0.0], 2, regularizer=L1(1.0))
    assert objective(problem, np.array([1.0, -2.0])) == 3.0
    assert problem.ledger.total == 1

    plain = oracle_problem([half_norm], 2)
    x = np.array([1.0, 1.0])
    assert plain.objective(x) == plain.eval_smooth_avg(x)

    net = oracle_problem([half_norm], 4, regularizer=ElasticNet(1e-3, 1e-5))
    ones = np.ones(4)
    assert net.objective(ones) == approx(2.0 + 4e-3 + 4e-5, abs=1e-12)


@for_feature(augmentation="Quadratic augmentation")
def test_augmentation_is_linear():
    """The augmented oracle equals the base oracle plus (c/2)||x - a||^2."""
    rng = np.random.default_rng(0)
    base = random_quadratics(3, 5, seed=2)
    for _ in range(100):
        c = rng.uniform(0, 5)
        a = rng.standard_normal(5)
        x = rng.standard_normal(5)
        aug = base.augment_quadratic(c, a)
        expected = base.eval_component(1, x) + 0.5 * c * float((x - a) @ (x - a))
        assert aug.eval_component(1, x) == approx(expected, rel=1e-13, abs=1e-13)


@for_feature(augmentation="Quadratic augmentation")
def test_augmentation_bookkeeping():
    """Augmenting a convex problem makes it c-strongly convex and adds c to L; the ledger is shared."""
    base = oracle_problem([half_norm], 2)
    aug = base.augment_quadratic(2.0, np.zeros(2))
    assert aug.meta.gamma == 2.0
    assert aug.meta.L == 3.0
    assert aug.meta.convexity_tag is ConvexityTag.strongly_convex
    assert aug.ledger is base.ledger

    same = base.augment_quadratic(0.0, np.ones(2))
    x = np.array([0.5, 2.0])
    assert same.eval_component(0, x) == base.eval_component(0, x)

    with raises(InvalidArgumentException):
        base.augment_quadratic(-1.0, np.zeros(2))


@for_feature(augmentation="Quadratic augmentation")
def test_augmenting_weakly_convex_meta():
    """Adding 2 sigma to a sigma-weakly convex problem leaves it sigma-strongly convex."""
    meta = ProblemMeta(1.0, sigma=0.2)
    assert meta.convexity_tag is ConvexityTag.weakly_convex
    assert meta.augmented(0.4).gamma == approx(0.2)
    assert meta.augmented(0.1).convexity_tag is ConvexityTag.weakly_convex


@for_feature(meta="Problem constants")
def test_meta_validation():
    """Constants must satisfy L > 0 and gamma, sigma <= L."""
    with raises(InvalidArgumentException):
        ProblemMeta(0.0)
    with raises(InvalidArgumentException):
        ProblemMeta(1.0, gamma=2.0)
    with raises(InvalidArgumentException):
        ProblemMeta(1.0, sigma=1.5)
    assert ProblemMeta(1.0).convexity_tag is ConvexityTag.convex


@for_feature(ledger="Query ledger")
def test_ledger_counts_every_evaluation():
    """After k evaluations the ledger reads exactly k."""
    problem = random_quadratics(4, 3)
    rng = np.random.default_rng(0)
    for k in range(1, 51):
        problem.eval_component(int(rng.integers(4)), rng.standard_normal(3))
        assert problem.ledger.total == k


@for_feature(ledger="Query ledger")
def test_ledger_refunds_and_threads():
    """Refunded evaluations are not counted and concurrent charges are not lost."""
    ledger = QueryLedger()
    ledger.charge(3)
    with ledger.refunded():
        ledger.charge(100)
    assert ledger.total == 3

    with raises(InvalidArgumentException):
        ledger.charge(-1)

    def work(_):
        for _ in range(1000):
            ledger.charge()

    with ThreadPoolExecutor(max_workers=8) as pool:
        list(pool.map(work, range(8)))
    assert ledger.total == 8003


@for_feature(ledger="Query ledger")
def test_budget_never_overshoots():
    """A budget admits a block only when its whole cost fits."""
    ledger = QueryLedger(10)
    budget = QueryBudget(ledger, 5)
    assert budget.fits(5)
    assert not budget.fits(6)
    ledger.charge(4)
    assert budget.spent == 4
    assert budget.remaining == 1
    assert not budget.fits(2)
    assert QueryBudget(ledger).fits(10 ** 9)


@for_feature(whitebox="White-box channel")
def test_whitebox_agrees_with_finite_differences():
    """White-box component gradients match central differences."""
    problem = random_quadratics(3, 4, seed=5)
    rng = np.random.default_rng(2)
    for _ in range(10):
        x = rng.standard_normal(4)
        for i in range(3):
            numeric = np.zeros(4)
            for j in range(4):
                e = np.zeros(4)
                e[j] = 1e-6
                numeric[j] = (problem.components[i](x + e) - problem.components[i](x - e)) / 2e-6
            g = problem.whitebox_grad(i, x)
            assert np.linalg.norm(g - numeric) <= 1e-5 * max(np.linalg.norm(g), 1.0)


@for_feature(whitebox="White-box channel")
def test_benchmark_mode_closes_whitebox():
    """Benchmark mode refuses gradient access but still reports objectives off the ledger."""
    problem = identical_quadratics(2, [1.0, 2.0]).in_benchmark_mode()
    with raises(UnsupportedModeException):
        problem.whitebox_grad(0, np.zeros(2))
    assert problem.diagnostic_objective(np.ones(2)) == approx(1.5)
    assert problem.ledger.total == 0

    blind = oracle_problem([half_norm], 2)
    with raises(UnsupportedModeException):
        blind.diagnostic_grad(np.zeros(2))
    assert blind.diagnostic_objective(np.array([1.0, 1.0])) == 1.0
    assert blind.ledger.total == 0
