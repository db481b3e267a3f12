import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from zoprox.objects.errors import (InvalidArgumentException, OracleException,
                                   UnsupportedModeException)
from zoprox.objects.ledger import QueryLedger
from zoprox.objects.regularizers import Regularizer, as_regularizer

Oracle = Callable[[np.ndarray], float]


class ConvexityTag(Enum):
    strongly_convex = "strongly_convex"
    convex = "convex"
    weakly_convex = "weakly_convex"


@dataclass(frozen=True)
class ProblemMeta:
    """Analytic constants of the smooth part.

    :L: per-component smoothness constant.
    :gamma: strong convexity constant, 0 when absent.
    :sigma: weak convexity constant, 0 when absent.
    """

    L: float
    gamma: float = 0.0
    sigma: float = 0.0
    convexity_tag: Optional[ConvexityTag] = None

    def __post_init__(self):
        if not self.L > 0:
            raise InvalidArgumentException(f"Smoothness constant must be positive, got L={self.L}")
        if self.gamma < 0 or self.sigma < 0:
            raise InvalidArgumentException(f"gamma and sigma must be nonnegative, got {self.gamma}, {self.sigma}")
        if self.gamma > self.L:
            raise InvalidArgumentException(f"gamma={self.gamma} exceeds L={self.L}")
        if self.sigma > self.L:
            raise InvalidArgumentException(f"sigma={self.sigma} exceeds L={self.L}")
        if self.convexity_tag is None:
            object.__setattr__(self, "convexity_tag", self._infer_tag())

    def _infer_tag(self) -> ConvexityTag:
        if self.sigma > 0:
            return ConvexityTag.weakly_convex
        if self.gamma > 0:
            return ConvexityTag.strongly_convex
        return ConvexityTag.convex

    def augmented(self, coeff: float) -> "ProblemMeta":
        """Constants after adding ``(coeff/2) * ||x - a||^2`` to every component."""
        effective = self.gamma - self.sigma + coeff
        L = self.L + coeff
        if effective > 0:
            return ProblemMeta(L, gamma=effective, sigma=0.0, convexity_tag=ConvexityTag.strongly_convex)
        if effective == 0:
            return ProblemMeta(L, convexity_tag=ConvexityTag.convex)
        return ProblemMeta(L, sigma=-effective, convexity_tag=ConvexityTag.weakly_convex)

    @property
    def is_convex(self) -> bool:
        return self.convexity_tag is not ConvexityTag.weakly_convex


@dataclass(frozen=True)
class QuadraticAugmentation:
    coeff: float
    anchor: np.ndarray

    def value(self, x: np.ndarray) -> float:
        diff = x - self.anchor
        return 0.5 * self.coeff * float(diff @ diff)

    def grad(self, x: np.ndarray) -> np.ndarray:
        return self.coeff * (x - self.anchor)


@dataclass(frozen=True)
class WhiteBox:
    """Gradient access to the smooth part, for diagnostics only.

    :grad: per-component gradient ``grad(i, x)``.
    :value: optional vectorised ``(1/n) sum_i f_i(x)``.
    :full_grad: optional vectorised ``(1/n) sum_i grad f_i(x)``.
    """

    grad: Callable[[int, np.ndarray], np.ndarray]
    value: Optional[Oracle] = None
    full_grad: Optional[Callable[[np.ndarray], np.ndarray]] = None


class BlackBoxProblem:
    """Finite-sum objective ``(1/n) sum_i f_i(x) + r(x)`` behind value oracles.

    Views made by :meth:`augment_quadratic` share the component oracles and
    the ledger of their base; every component evaluation charges exactly one
    query. Regularizer values and augmentation terms are analytic and free.
    """

    __slots__ = ("components", "d", "regularizer", "meta", "whitebox", "ledger",
                 "augmentations", "benchmark_mode", "name")

    def __init__(self, components: Sequence[Oracle], d: int, meta: ProblemMeta,
                 regularizer: Optional[Regularizer] = None, whitebox: Optional[WhiteBox] = None,
                 ledger: Optional[QueryLedger] = None, *,
                 augmentations: Tuple[QuadraticAugmentation, ...] = (),
                 benchmark_mode: bool = False, name: str = "problem"):
        if len(components) < 1:
            raise InvalidArgumentException("A problem needs at least one component")
        if d < 1:
            raise InvalidArgumentException(f"Dimension must be at least 1, got {d}")
        self.components = components
        self.d = int(d)
        self.regularizer = as_regularizer(regularizer)
        self.meta = meta
        self.whitebox = whitebox
        self.ledger = QueryLedger() if ledger is None else ledger
        self.augmentations = tuple(augmentations)
        self.benchmark_mode = benchmark_mode
        self.name = name

    @property
    def n(self) -> int:
        return len(self.components)

    def _view(self, **changes) -> "BlackBoxProblem":
        fields = dict(components=self.components, d=self.d, meta=self.meta,
                      regularizer=self.regularizer, whitebox=self.whitebox,
                      ledger=self.ledger, augmentations=self.augmentations,
                      benchmark_mode=self.benchmark_mode, name=self.name)
        fields.update(changes)
        return BlackBoxProblem(**fields)

    def with_ledger(self, ledger: Optional[QueryLedger] = None) -> "BlackBoxProblem":
        return self._view(ledger=QueryLedger() if ledger is None else ledger)

    def in_benchmark_mode(self, enabled: bool = True) -> "BlackBoxProblem":
        return self._view(benchmark_mode=enabled)

    def augment_quadratic(self, c: float, a: np.ndarray) -> "BlackBoxProblem":
        if c < 0:
            raise InvalidArgumentException(f"Augmentation coefficient must be nonnegative, got {c}")
        anchor = self.checked_point(a, what="anchor")
        aug = QuadraticAugmentation(float(c), anchor.copy())
        return self._view(meta=self.meta.augmented(float(c)),
                          augmentations=self.augmentations + (aug,),
                          name=f"{self.name}+quad({c:g})")

    def augmentation_value(self, x: np.ndarray) -> float:
        return sum(aug.value(x) for aug in self.augmentations)

    def augmentation_grad(self, x: np.ndarray) -> np.ndarray:
        g = np.zeros(self.d)
        for aug in self.augmentations:
            g += aug.grad(x)
        return g

    def checked_point(self, x, what: str = "query point") -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.d,):
            raise OracleException(f"{what} has shape {x.shape}, expected ({self.d},)")
        if not np.all(np.isfinite(x)):
            raise OracleException(f"{what} is not finite")
        return x

    def eval_component(self, i: int, x: np.ndarray) -> float:
        if not 0 <= i < self.n:
            raise OracleException(f"Component index {i} out of range for n={self.n}")
        x = self.checked_point(x)
        self.ledger.charge(1)
        value = float(self.components[i](x))
        if not math.isfinite(value):
            raise OracleException(f"Component {i} returned a non-finite value: {value}")
        return value + self.augmentation_value(x)

    def eval_smooth_avg(self, x: np.ndarray) -> float:
        return math.fsum(self.eval_component(i, x) for i in range(self.n)) / self.n

    def objective(self, x: np.ndarray) -> float:
        return self.eval_smooth_avg(x) + self.regularizer.value(x)

    @property
    def has_whitebox(self) -> bool:
        return self.whitebox is not None

    def whitebox_grad(self, i: int, x: np.ndarray) -> np.ndarray:
        """Per-component gradient; refused in benchmark mode."""
        if self.benchmark_mode:
            raise UnsupportedModeException("White-box gradients are disabled in benchmark mode")
        if self.whitebox is None:
            raise UnsupportedModeException(f"{self.name} has no white-box gradient")
        return np.asarray(self.whitebox.grad(i, x), dtype=float) + self.augmentation_grad(x)

    def diagnostic_smooth_value(self, x: np.ndarray) -> float:
        """The smooth part without touching the ledger."""
        x = self.checked_point(x)
        if self.whitebox is not None and self.whitebox.value is not None:
            return float(self.whitebox.value(x)) + self.augmentation_value(x)
        with self.ledger.refunded():
            return self.eval_smooth_avg(x)

    def diagnostic_objective(self, x: np.ndarray) -> float:
        return self.diagnostic_smooth_value(x) + self.regularizer.value(x)

    def diagnostic_grad(self, x: np.ndarray) -> np.ndarray:
        """Full gradient of the smooth part through the white-box channel."""
        if self.whitebox is None:
            raise UnsupportedModeException(f"{self.name} has no white-box gradient")
        x = np.asarray(x, dtype=float)
        if self.whitebox.full_grad is not None:
            g = np.asarray(self.whitebox.full_grad(x), dtype=float)
        else:
            g = sum(np.asarray(self.whitebox.grad(i, x), dtype=float) for i in range(self.n)) / self.n
        return g + self.augmentation_grad(x)

    def __repr__(self):
        return (f"BlackBoxProblem(name={self.name!r}, n={self.n}, d={self.d}, "
                f"regularizer={self.regularizer!r}, meta={self.meta!r})")
