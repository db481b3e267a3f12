"""Two-point zeroth-order gradient estimators.

Every estimator pays for each oracle call through the problem's ledger; nothing
is cached, so evaluating at the same point twice costs twice.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from zoprox.objects.errors import InvalidArgumentException
from zoprox.objects.problem import BlackBoxProblem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EstimatorConfig:
    mu: float
    seed: int = 0

    def __post_init__(self):
        if not self.mu > 0:
            raise InvalidArgumentException(f"Smoothing parameter must be positive, got {self.mu}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def _check_mu(mu: float):
    if not mu > 0:
        raise InvalidArgumentException(f"Smoothing parameter must be positive, got {mu}")


def sample_sphere(d: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform direction on the unit sphere, as a normalised Gaussian."""
    if d < 1:
        raise InvalidArgumentException(f"Dimension must be at least 1, got {d}")
    while True:
        u = rng.standard_normal(d)
        norm = np.linalg.norm(u)
        if norm > 0:
            return u / norm


def sample_ball(d: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point in the unit ball: sphere direction times radius ``U**(1/d)``."""
    u = sample_sphere(d, rng)
    return u * rng.random() ** (1.0 / d)


def sample_batch(n: int, b: int, rng: np.random.Generator) -> np.ndarray:
    """``b`` component indices drawn with replacement."""
    if b < 1:
        raise InvalidArgumentException(f"Batch size must be at least 1, got {b}")
    return rng.integers(0, n, size=b)


def rand_est(problem: BlackBoxProblem, i: int, x: np.ndarray, mu: float, u: np.ndarray) -> np.ndarray:
    """``(d/mu) (f_i(x + mu u) - f_i(x)) u``, two queries."""
    _check_mu(mu)
    shifted = problem.eval_component(i, x + mu * u)
    base = problem.eval_component(i, x)
    return (problem.d / mu) * (shifted - base) * u


def coord_est(problem: BlackBoxProblem, i: int, x: np.ndarray, mu: float) -> np.ndarray:
    """Central differences along every axis, ``2d`` queries."""
    _check_mu(mu)
    x = np.asarray(x, dtype=float)
    g = np.empty(problem.d)
    step = np.zeros(problem.d)
    for j in range(problem.d):
        step[j] = mu
        g[j] = (problem.eval_component(i, x + step) - problem.eval_component(i, x - step)) / (2 * mu)
        step[j] = 0.0
    return g


def full_rand_est(problem: BlackBoxProblem, x: np.ndarray, mu: float, rng: np.random.Generator) -> np.ndarray:
    """Average of :func:`rand_est` over all components with a fresh direction each, ``2n`` queries."""
    total = np.zeros(problem.d)
    for i in range(problem.n):
        total += rand_est(problem, i, x, mu, sample_sphere(problem.d, rng))
    return total / problem.n


def batch_rand_est(problem: BlackBoxProblem, batch: Sequence[int], x: np.ndarray, mu: float,
                   rng: np.random.Generator) -> np.ndarray:
    """Minibatch average of :func:`rand_est`, ``2b`` queries."""
    if len(batch) == 0:
        raise InvalidArgumentException("Empty batch")
    total = np.zeros(problem.d)
    for i in batch:
        total += rand_est(problem, int(i), x, mu, sample_sphere(problem.d, rng))
    return total / len(batch)


def pair_estimates(problem: BlackBoxProblem, batch: Sequence[int], x: np.ndarray,
                   others: Sequence[np.ndarray], mu: float,
                   rng: np.random.Generator) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Per-sample estimates at ``x`` and at ``others[k]``, sharing one direction per sample.

    ``4b`` queries.
    """
    if len(batch) == 0:
        raise InvalidArgumentException("Empty batch")
    at_x, at_other = [], []
    for i, other in zip(batch, others):
        u = sample_sphere(problem.d, rng)
        at_x.append(rand_est(problem, int(i), x, mu, u))
        at_other.append(rand_est(problem, int(i), other, mu, u))
    return at_x, at_other


def batch_pair_est(problem: BlackBoxProblem, batch: Sequence[int], x: np.ndarray, y: np.ndarray,
                   mu: float, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    at_x, at_y = pair_estimates(problem, batch, x, [y] * len(batch), mu, rng)
    return sum(at_x) / len(batch), sum(at_y) / len(batch)


def coord_full_est(problem: BlackBoxProblem, x: np.ndarray, mu: float) -> np.ndarray:
    total = np.zeros(problem.d)
    for i in range(problem.n):
        total += coord_est(problem, i, x, mu)
    return total / problem.n


def coord_batch_pair_est(problem: BlackBoxProblem, batch: Sequence[int], x: np.ndarray, y: np.ndarray,
                         mu: float) -> Tuple[np.ndarray, np.ndarray]:
    if len(batch) == 0:
        raise InvalidArgumentException("Empty batch")
    gx = sum(coord_est(problem, int(i), x, mu) for i in batch) / len(batch)
    gy = sum(coord_est(problem, int(i), y, mu) for i in batch) / len(batch)
    return gx, gy


class RandomEstimator:
    """Sphere-direction estimator used by the ZOR solvers."""

    name = "random"

    @staticmethod
    def full_cost(n: int, d: int) -> int:
        return 2 * n

    @staticmethod
    def pair_cost(b: int, d: int) -> int:
        return 4 * b

    @staticmethod
    def full(problem, x, mu, rng):
        return full_rand_est(problem, x, mu, rng)

    @staticmethod
    def pair(problem, batch, x, y, mu, rng):
        return batch_pair_est(problem, batch, x, y, mu, rng)


class CoordinatedEstimator:
    """Coordinate-wise central differences; consumes no randomness."""

    name = "coordinated"

    @staticmethod
    def full_cost(n: int, d: int) -> int:
        return 2 * d * n

    @staticmethod
    def pair_cost(b: int, d: int) -> int:
        return 4 * d * b

    @staticmethod
    def full(problem, x, mu, rng):
        return coord_full_est(problem, x, mu)

    @staticmethod
    def pair(problem, batch, x, y, mu, rng):
        return coord_batch_pair_est(problem, batch, x, y, mu)


def _smoothed_samples(problem: BlackBoxProblem, x: np.ndarray, mu: float, count: int,
                      rng: np.random.Generator) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.array([problem.eval_smooth_avg(x + mu * sample_ball(problem.d, rng))
                     for _ in range(count)])


def _summarise(samples: np.ndarray) -> Tuple[float, float]:
    return float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(samples.size))


def mc_smoothed_value(problem: BlackBoxProblem, x: np.ndarray, mu: float, N: int,
                      rng: np.random.Generator) -> Tuple[float, float]:
    """Monte Carlo estimate of the ball-smoothed ``f`` and its standard error, ``N n`` queries."""
    _check_mu(mu)
    if N < 2:
        raise InvalidArgumentException(f"Need at least 2 samples for a standard error, got {N}")
    return _summarise(_smoothed_samples(problem, x, mu, N, rng))


@dataclass(frozen=True)
class SmoothedSurrogate:
    """``f_mu(x) = E_{u in ball} f(x + mu u)`` by Monte Carlo."""

    mu: float
    sample_count: int

    def __post_init__(self):
        _check_mu(self.mu)
        if self.sample_count < 2:
            raise InvalidArgumentException(f"Need at least 2 samples, got {self.sample_count}")

    def estimate(self, problem: BlackBoxProblem, x: np.ndarray, rng: np.random.Generator) -> Tuple[float, float]:
        return mc_smoothed_value(problem, x, self.mu, self.sample_count, rng)

    def estimate_parallel(self, problem: BlackBoxProblem, x: np.ndarray, seed: int,
                          workers: int = 4) -> Tuple[float, float]:
        """Same estimate split over threads, each with its own spawned substream."""
        streams = np.random.SeedSequence(seed).spawn(workers)
        shares = [self.sample_count // workers + (k < self.sample_count % workers) for k in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(
                lambda job: _smoothed_samples(problem, x, self.mu, job[0], np.random.default_rng(job[1])),
                [(share, stream) for share, stream in zip(shares, streams) if share > 0]))
        samples = np.concatenate(parts)
        logger.debug("smoothed value from %d samples over %d workers", samples.size, len(parts))
        return _summarise(samples)
