from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit

from zoprox.objects.dataset import Dataset
from zoprox.objects.errors import InvalidArgumentException
from zoprox.objects.problem import BlackBoxProblem, ProblemMeta, WhiteBox
from zoprox.objects.regularizers import Regularizer

PLANTED_SCALE = 2.0


def synth_dataset(n: int, d: int, seed: int, separability: float = 2.0) -> Dataset:
    return synth_with_weights(n, d, seed, separability)[0]


def synth_with_weights(n: int, d: int, seed: int, separability: float = 2.0) -> Tuple[Dataset, np.ndarray]:
    """Unit-norm Gaussian rows labelled by a planted weight vector.

    ``P(y = 1) = sigmoid(separability * w.x)``; an infinite separability labels
    by the sign of the planted score.
    """
    if n < 1 or d < 1:
        raise InvalidArgumentException(f"Need n, d >= 1, got n={n}, d={d}")
    if separability < 0:
        raise InvalidArgumentException(f"separability must be nonnegative, got {separability}")
    rng = np.random.default_rng(seed)
    rows = rng.standard_normal((n, d))
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    rows = rows / np.where(norms > 0, norms, 1.0)
    planted = rng.normal(0.0, PLANTED_SCALE, size=d)
    scores = rows @ planted
    noise = rng.random(n)
    if np.isinf(separability):
        labels = scores > 0
    else:
        labels = noise < expit(separability * scores)
    return Dataset.from_dense(rows, labels.astype(np.int64)), planted


class QuadraticComponent:
    """``0.5 x.A x - b.x``."""

    __slots__ = ("A", "b")

    def __init__(self, A: np.ndarray, b: np.ndarray):
        self.A = A
        self.b = b

    def __call__(self, x: np.ndarray) -> float:
        return 0.5 * float(x @ self.A @ x) - float(self.b @ x)

    def grad(self, x: np.ndarray) -> np.ndarray:
        return self.A @ x - self.b


def make_quadratic(matrices: Sequence[np.ndarray], vectors: Optional[Sequence[np.ndarray]] = None,
                   regularizer: Optional[Regularizer] = None, name: str = "quadratic") -> BlackBoxProblem:
    """Quadratic components with exact constants.

    ``L`` is the largest spectral norm of any ``A_i``; strong or weak convexity
    comes from the extreme eigenvalues of the average matrix.
    """
    matrices = [np.atleast_2d(np.asarray(A, dtype=float)) for A in matrices]
    if not matrices:
        raise InvalidArgumentException("Need at least one component")
    d = matrices[0].shape[0]
    if vectors is None:
        vectors = [np.zeros(d) for _ in matrices]
    vectors = [np.atleast_1d(np.asarray(b, dtype=float)) for b in vectors]
    if len(vectors) != len(matrices):
        raise InvalidArgumentException(f"{len(matrices)} matrices but {len(vectors)} vectors")
    for A, b in zip(matrices, vectors):
        if A.shape != (d, d) or b.shape != (d,):
            raise InvalidArgumentException(f"Component shapes {A.shape}, {b.shape} do not match d={d}")
        if not np.allclose(A, A.T):
            raise InvalidArgumentException("Component matrices must be symmetric")

    components = [QuadraticComponent(A, b) for A, b in zip(matrices, vectors)]
    mean_A = sum(matrices) / len(matrices)
    mean_b = sum(vectors) / len(vectors)
    L = max(float(np.max(np.abs(np.linalg.eigvalsh(A)))) for A in matrices)
    lowest = float(np.min(np.linalg.eigvalsh(mean_A)))
    L = max(L, np.finfo(float).eps)
    meta = ProblemMeta(L, gamma=min(max(lowest, 0.0), L), sigma=min(max(-lowest, 0.0), L))

    whitebox = WhiteBox(
        grad=lambda i, x: components[i].grad(x),
        value=lambda x: 0.5 * float(x @ mean_A @ x) - float(mean_b @ x),
        full_grad=lambda x: mean_A @ x - mean_b,
    )
    return BlackBoxProblem(components, d, meta, regularizer, whitebox, name=name)
