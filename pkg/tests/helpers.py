from typing import Callable, Optional, Sequence, TypeVar

import numpy as np

from zoprox.objects import BlackBoxProblem, ProblemMeta, Regularizer, WhiteBox
from zoprox.problems import LogisticSpec, make_logistic, make_quadratic, synth_dataset


RT = TypeVar('RT')


def for_feature(**features: str) -> Callable[[Callable[..., RT]], Callable[..., RT]]:
    def deco(f: Callable[..., RT]) -> Callable[..., RT]:
        f._features = features
        return f
    return deco


def oracle_problem(fns: Sequence[Callable[[np.ndarray], float]], d: int, L: float = 1.0,
                   regularizer: Optional[Regularizer] = None, **meta) -> BlackBoxProblem:
    """A problem straight from plain callables, no white-box channel."""
    return BlackBoxProblem(list(fns), d, ProblemMeta(L, **meta), regularizer)


def linear_problem(a: Sequence[float], n: int = 1) -> BlackBoxProblem:
    a = np.asarray(a, dtype=float)
    return oracle_problem([lambda x: float(a @ x)] * n, len(a))


def identical_quadratics(n: int, diag: Sequence[float], b: Optional[Sequence[float]] = None,
                         regularizer: Optional[Regularizer] = None) -> BlackBoxProblem:
    """``n`` copies of ``0.5 x.diag(diag).x - b.x``."""
    A = np.diag(np.asarray(diag, dtype=float))
    vectors = None if b is None else [np.asarray(b, dtype=float)] * n
    return make_quadratic([A] * n, vectors, regularizer)


def random_quadratics(n: int, d: int, seed: int = 0, regularizer: Optional[Regularizer] = None,
                      shift: float = 0.1) -> BlackBoxProblem:
    """Distinct positive definite components with random linear terms."""
    rng = np.random.default_rng(seed)
    matrices, vectors = [], []
    for _ in range(n):
        M = rng.standard_normal((d, d))
        matrices.append(M @ M.T / d + shift * np.eye(d))
        vectors.append(rng.standard_normal(d))
    return make_quadratic(matrices, vectors, regularizer)


def bump_problem(alpha: float = 1.0) -> BlackBoxProblem:
    """1-d ``alpha x^2 / (1 + x^2)``, weakly convex with the bound ``sigma = 2 alpha``."""
    def value(x):
        return alpha * float(x[0] ** 2 / (1 + x[0] ** 2))

    def grad(i, x):
        return alpha * 2 * x / (1 + x * x) ** 2

    whitebox = WhiteBox(grad=grad, value=value, full_grad=lambda x: grad(0, x))
    return BlackBoxProblem([value], 1, ProblemMeta(2 * alpha, sigma=2 * alpha), whitebox=whitebox,
                           name="bump")


def logistic_fixture(n: int = 100, d: int = 20, seed: int = 0, spec: LogisticSpec = LogisticSpec()):
    return make_logistic(synth_dataset(n, d, seed), spec)


def central_diff(f: Callable[[np.ndarray], float], x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for j in range(x.size):
        step = np.zeros_like(x)
        step[j] = h
        g[j] = (f(x + step) - f(x - step)) / (2 * h)
    return g


def bisection_prox(lam1: float, lam2: float, tau: float, w: float) -> float:
    """Minimiser of ``lam1|z| + lam2 z^2 + (z - w)^2 / (2 tau)`` by bisection on its subdifferential."""
    lo, hi = -abs(w) - 1.0, abs(w) + 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        smooth = 2 * lam2 * mid + (mid - w) / tau
        if mid > 0:
            low = high = smooth + lam1
        elif mid < 0:
            low = high = smooth - lam1
        else:
            low, high = smooth - lam1, smooth + lam1
        if low > 0:
            hi = mid
        elif high < 0:
            lo = mid
        else:
            return mid
    return (lo + hi) / 2
