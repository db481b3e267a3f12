import numpy as np
from pytest import approx, raises

from zoprox.objects import (L1, ElasticNet, InvalidArgumentException, NoRegularizer,
                            SquaredL2, grad_mapping, make_regularizer, prox, prox_step)
from tests.helpers import bisection_prox, for_feature


@for_feature(prox="Proximal operators")
def test_prox_matches_bisection():
    """The closed form agrees with a bisection on the optimality condition."""
    rng = np.random.default_rng(0)
    for _ in range(500):
        lam1, lam2 = rng.uniform(0, 2, size=2)
        tau = rng.uniform(1e-3, 5)
        w = rng.uniform(-10, 10, size=3)
        got = ElasticNet(lam1, lam2).prox(tau, w)
        for j in range(3):
            assert got[j] == approx(bisection_prox(lam1, lam2, tau, w[j]), abs=1e-12)


@for_feature(prox="Proximal operators")
def test_prox_variants():
    """Each named regularizer shrinks the way its formula says."""
    v = np.array([3.0, -0.5, 1.0])
    assert np.array_equal(NoRegularizer().prox(2.0, v), v)
    assert np.array_equal(L1(1.0).prox(1.0, v), np.array([2.0, 0.0, 0.0]))
    assert np.allclose(SquaredL2(0.5).prox(1.0, v), v / 2)
    assert np.allclose(ElasticNet(1.0, 0.5).prox(1.0, v), np.array([1.0, 0.0, 0.0]))


@for_feature(prox="Proximal operators")
def test_prox_with_zero_tau_is_identity():
    """A zero prox parameter returns the input unchanged."""
    v = np.array([1.5, -2.0])
    assert np.array_equal(ElasticNet(3.0, 3.0).prox(0.0, v), v)
    with raises(InvalidArgumentException):
        L1(1.0).prox(-1.0, v)


@for_feature(prox="Proximal operators")
def test_prox_threshold_is_exactly_zero():
    """A coordinate sitting at the threshold maps to zero."""
    out = L1(0.5).prox(2.0, np.array([1.0, -1.0]))
    assert np.all(out == 0.0)


@for_feature(prox="Proximal operators")
def test_prox_function_handles_missing_regularizer():
    """prox(None, ...) is the identity."""
    v = np.array([0.25, 4.0])
    assert np.array_equal(prox(None, 1.0, v), v)


@for_feature(prox="Proximal operators")
def test_make_regularizer_picks_variant():
    """Zero weights select the narrowest variant."""
    assert isinstance(make_regularizer(), NoRegularizer)
    assert isinstance(make_regularizer(0.1), L1)
    assert isinstance(make_regularizer(0.0, 0.1), SquaredL2)
    assert isinstance(make_regularizer(0.1, 0.1), ElasticNet)
    assert make_regularizer(0.1, 0.2) == ElasticNet(0.1, 0.2)
    with raises(InvalidArgumentException):
        make_regularizer(-1.0)


@for_feature(prox="Proximal operators")
def test_regularizer_value():
    """r(x) = lam1 ||x||_1 + lam2 ||x||^2."""
    x = np.array([1.0, -2.0])
    assert ElasticNet(0.5, 0.25).value(x) == approx(0.5 * 3 + 0.25 * 5)
    assert NoRegularizer().value(x) == 0.0


@for_feature(grad_mapping="Gradient mapping")
def test_grad_mapping_without_regularizer_is_gradient():
    """With no r the gradient mapping is the gradient itself."""
    x = np.array([1.0, 2.0])
    g = np.array([0.3, -0.7])
    assert np.allclose(grad_mapping(x, g, 0.1, None), g)


@for_feature(grad_mapping="Gradient mapping")
def test_grad_mapping_vanishes_at_lasso_solution():
    """At the minimiser of (1/2)(x - c)^2 + lam |x| the mapping is zero."""
    c = np.array([2.0, 0.05])
    reg = L1(0.1)
    x = np.array([1.9, 0.0])
    assert np.allclose(grad_mapping(x, x - c, 0.5, reg), 0.0)
    assert not np.allclose(grad_mapping(np.zeros(2), -c, 0.5, reg), 0.0)


@for_feature(grad_mapping="Gradient mapping")
def test_prox_step_rejects_bad_stepsize():
    """Stepsizes must be positive."""
    with raises(InvalidArgumentException):
        prox_step(np.zeros(1), np.zeros(1), 0.0, None)


@for_feature(prox="Proximal operators")
def test_prox_worked_examples():
    """Soft thresholding and elastic net shrinkage by hand."""
    assert np.allclose(L1(0.5).prox(1.0, np.array([3.0, -0.5, 0.2])), [2.5, 0.0, 0.0])
    assert ElasticNet(1.0, 0.5).prox(1.0, np.array([2.0]))[0] == 0.5


@for_feature(prox="Proximal operators")
def test_prox_is_nonexpansive():
    """||prox(a) - prox(b)|| <= ||a - b|| on random pairs."""
    rng = np.random.default_rng(3)
    reg = ElasticNet(0.3, 0.2)
    for _ in range(1000):
        a, b = rng.standard_normal((2, 4)) * 3
        tau = rng.uniform(0, 3)
        assert np.linalg.norm(reg.prox(tau, a) - reg.prox(tau, b)) <= np.linalg.norm(a - b) + 1e-12


@for_feature(prox="Proximal operators")
def test_prox_optimality():
    """(v - z) / tau lies in the subdifferential of r at z = prox(v)."""
    rng = np.random.default_rng(4)
    reg = ElasticNet(0.7, 0.4)
    for _ in range(200):
        v = rng.standard_normal(5) * 2
        tau = rng.uniform(0.01, 2)
        z = reg.prox(tau, v)
        low, high = reg.subgradient_interval(z)
        residual = (v - z) / tau
        assert np.all(residual >= low - 1e-10)
        assert np.all(residual <= high + 1e-10)


@for_feature(prox="Proximal operators")
def test_prox_specialisations():
    """Elastic net with one weight zero matches L1 or squared L2."""
    v = np.array([2.0, -0.1, 0.6])
    assert np.array_equal(ElasticNet(0.4, 0.0).prox(0.5, v), L1(0.4).prox(0.5, v))
    assert np.array_equal(ElasticNet(0.0, 0.4).prox(0.5, v), SquaredL2(0.4).prox(0.5, v))
    assert np.allclose(SquaredL2(0.4).prox(0.5, v), v / 1.4)


@for_feature(grad_mapping="Gradient mapping")
def test_prox_step_worked_examples():
    """A plain gradient step without r; the dead zone sends small entries to zero."""
    x = np.array([1.0, -1.0])
    g = np.array([0.5, 2.0])
    assert np.allclose(prox_step(x, g, 0.1, None), x - 0.1 * g)
    assert np.all(prox_step(np.array([0.05, -0.1]), np.zeros(2), 0.5, L1(0.2)) == 0.0)
