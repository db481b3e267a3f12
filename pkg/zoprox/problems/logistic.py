from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from zoprox.objects.dataset import Dataset
from zoprox.objects.errors import InvalidArgumentException
from zoprox.objects.problem import BlackBoxProblem, ConvexityTag, ProblemMeta, WhiteBox
from zoprox.objects.regularizers import make_regularizer

# floor for L when every row is zero
_L_FLOOR = np.finfo(float).eps


@dataclass(frozen=True)
class LogisticSpec:
    lambda1: float = 1e-3
    lambda2: float = 1e-5
    alpha: float = 0.0

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "alpha"):
            if getattr(self, name) < 0:
                raise InvalidArgumentException(f"{name} must be nonnegative, got {getattr(self, name)}")


class LogisticComponent:
    """``log(1 + exp(w.x_i)) - y_i w.x_i`` for one sparse row."""

    __slots__ = ("indices", "data", "label")

    def __init__(self, indices: np.ndarray, data: np.ndarray, label: int):
        self.indices = indices
        self.data = data
        self.label = label

    def margin(self, w: np.ndarray) -> float:
        return float(self.data @ w[self.indices])

    def __call__(self, w: np.ndarray) -> float:
        z = self.margin(w)
        return float(np.logaddexp(0.0, z)) - self.label * z


class NcLogisticComponent(LogisticComponent):
    """Logistic loss plus ``alpha * sum_j w_j^2 / (1 + w_j^2)``."""

    __slots__ = ("alpha",)

    def __init__(self, indices: np.ndarray, data: np.ndarray, label: int, alpha: float):
        super().__init__(indices, data, label)
        self.alpha = alpha

    def __call__(self, w: np.ndarray) -> float:
        return super().__call__(w) + nonconvex_term(w, self.alpha)


def nonconvex_term(w: np.ndarray, alpha: float) -> float:
    sq = w * w
    return alpha * float(np.sum(sq / (1 + sq)))


def nonconvex_grad(w: np.ndarray, alpha: float) -> np.ndarray:
    return alpha * 2 * w / (1 + w * w) ** 2


def _components(dataset: Dataset, alpha: float):
    X = dataset.features
    out = []
    for i in range(dataset.n):
        start, end = X.indptr[i], X.indptr[i + 1]
        indices, data, label = X.indices[start:end], X.data[start:end], int(dataset.labels[i])
        if alpha > 0:
            out.append(NcLogisticComponent(indices, data, label, alpha))
        else:
            out.append(LogisticComponent(indices, data, label))
    return out


def _whitebox(dataset: Dataset, alpha: float) -> WhiteBox:
    X = dataset.features
    y = dataset.labels.astype(float)
    n = dataset.n

    def grad(i: int, w: np.ndarray) -> np.ndarray:
        start, end = X.indptr[i], X.indptr[i + 1]
        indices, data = X.indices[start:end], X.data[start:end]
        g = np.zeros(dataset.d)
        g[indices] = (expit(data @ w[indices]) - y[i]) * data
        return g + nonconvex_grad(w, alpha) if alpha > 0 else g

    def value(w: np.ndarray) -> float:
        z = X @ w
        loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
        return loss + nonconvex_term(w, alpha) if alpha > 0 else loss

    def full_grad(w: np.ndarray) -> np.ndarray:
        z = X @ w
        g = X.T @ (expit(z) - y) / n
        return g + nonconvex_grad(w, alpha) if alpha > 0 else g

    return WhiteBox(grad=grad, value=value, full_grad=full_grad)


def _max_row_norm_sq(dataset: Dataset) -> float:
    if dataset.n == 0:
        return 0.0
    return float(np.max(np.asarray(dataset.features.multiply(dataset.features).sum(axis=1)).ravel()))


def make_logistic(dataset: Dataset, spec: LogisticSpec = LogisticSpec()) -> BlackBoxProblem:
    """Cross-entropy logistic regression with an elastic-net regularizer.

    Labels are 0/1. ``L = max_i ||x_i||^2 / 4``, the per-component bound;
    ``lambda2`` lives in the regularizer and adds nothing to ``L``.
    """
    if dataset.n < 1:
        raise InvalidArgumentException("Logistic problems need a nonempty dataset")
    if spec.alpha:
        return make_nc_logistic(dataset, spec)
    L = max(_max_row_norm_sq(dataset) / 4, _L_FLOOR)
    return BlackBoxProblem(_components(dataset, 0.0), dataset.d, ProblemMeta(L),
                           make_regularizer(spec.lambda1, spec.lambda2), _whitebox(dataset, 0.0),
                           name="logistic")


def make_nc_logistic(dataset: Dataset, spec: LogisticSpec) -> BlackBoxProblem:
    """Logistic regression with the nonconvex penalty added to every component.

    The penalty's curvature lies in ``[-alpha/2, 2 alpha]``, so ``2 alpha`` is both a
    weak convexity bound and its contribution to ``L``.
    """
    if not spec.alpha > 0:
        raise InvalidArgumentException(f"The nonconvex variant needs alpha > 0, got {spec.alpha}")
    if dataset.n < 1:
        raise InvalidArgumentException("Logistic problems need a nonempty dataset")
    sigma = 2 * spec.alpha
    L = max(_max_row_norm_sq(dataset) / 4 + sigma, _L_FLOOR)
    meta = ProblemMeta(L, sigma=sigma, convexity_tag=ConvexityTag.weakly_convex)
    return BlackBoxProblem(_components(dataset, spec.alpha), dataset.d, meta,
                           make_regularizer(spec.lambda1, spec.lambda2), _whitebox(dataset, spec.alpha),
                           name="nc_logistic")
