from typing import Optional

import numpy as np

from zoprox.objects.errors import InvalidArgumentException


class Regularizer:
    """The non-smooth part r of the objective.

    Every variant is the elastic net ``lam1 * ||x||_1 + lam2 * ||x||^2`` with some
    weights pinned to zero, so value and prox live here once.
    """

    __slots__ = ("lam1", "lam2")

    name = "regularizer"

    def __init__(self, lam1: float = 0.0, lam2: float = 0.0):
        if lam1 < 0 or lam2 < 0:
            raise InvalidArgumentException(f"Regularizer weights must be nonnegative, got lam1={lam1}, lam2={lam2}")
        self.lam1 = float(lam1)
        self.lam2 = float(lam2)

    def value(self, x: np.ndarray) -> float:
        return self.lam1 * float(np.abs(x).sum()) + self.lam2 * float(x @ x)

    def prox(self, tau: float, v: np.ndarray) -> np.ndarray:
        if tau < 0:
            raise InvalidArgumentException(f"Prox parameter must be nonnegative, got {tau}")
        v = np.asarray(v, dtype=float)
        if tau == 0:
            return v.copy()
        # the max with 0 sends the exact threshold to 0
        shrunk = np.sign(v) * np.maximum(np.abs(v) - tau * self.lam1, 0.0)
        return shrunk / (1.0 + 2.0 * tau * self.lam2)

    def subgradient_interval(self, z: np.ndarray):
        """Componentwise bounds of the subdifferential of r at z."""
        smooth = 2.0 * self.lam2 * z
        sign = np.sign(z)
        low = np.where(sign == 0, -self.lam1, self.lam1 * sign) + smooth
        high = np.where(sign == 0, self.lam1, self.lam1 * sign) + smooth
        return low, high

    def __eq__(self, other):
        if not isinstance(other, Regularizer):
            return False
        return (self.lam1, self.lam2) == (other.lam1, other.lam2)

    def __hash__(self):
        return hash((self.lam1, self.lam2))

    def __repr__(self):
        return f"{type(self).__name__}({self.lam1!r}, {self.lam2!r})"


class NoRegularizer(Regularizer):

    __slots__ = ()

    name = "none"

    def __init__(self):
        super().__init__(0.0, 0.0)

    def value(self, x: np.ndarray) -> float:
        return 0.0

    def prox(self, tau: float, v: np.ndarray) -> np.ndarray:
        if tau < 0:
            raise InvalidArgumentException(f"Prox parameter must be nonnegative, got {tau}")
        return np.array(v, dtype=float)

    def __repr__(self):
        return "NoRegularizer()"


class L1(Regularizer):

    __slots__ = ()

    name = "l1"

    def __init__(self, lam1: float):
        super().__init__(lam1, 0.0)

    def __repr__(self):
        return f"L1({self.lam1!r})"


class SquaredL2(Regularizer):
    """``lam2 * ||x||^2``, no half in front."""

    __slots__ = ()

    name = "squared_l2"

    def __init__(self, lam2: float):
        super().__init__(0.0, lam2)

    def __repr__(self):
        return f"SquaredL2({self.lam2!r})"


class ElasticNet(Regularizer):

    __slots__ = ()

    name = "elastic_net"

    def __repr__(self):
        return f"ElasticNet({self.lam1!r}, {self.lam2!r})"


def as_regularizer(reg: Optional[Regularizer]) -> Regularizer:
    return NoRegularizer() if reg is None else reg


def make_regularizer(lam1: float = 0.0, lam2: float = 0.0) -> Regularizer:
    """Pick the narrowest variant for the given weights."""
    if lam1 == 0 and lam2 == 0:
        return NoRegularizer()
    if lam2 == 0:
        return L1(lam1)
    if lam1 == 0:
        return SquaredL2(lam2)
    return ElasticNet(lam1, lam2)


def prox(reg: Optional[Regularizer], tau: float, v: np.ndarray) -> np.ndarray:
    return as_regularizer(reg).prox(tau, v)


def prox_step(x: np.ndarray, g: np.ndarray, eta: float, reg: Optional[Regularizer]) -> np.ndarray:
    """Forward step on the smooth part then the prox of ``eta * r``."""
    if eta <= 0:
        raise InvalidArgumentException(f"Stepsize must be positive, got {eta}")
    return prox(reg, eta, x - eta * g)


def grad_mapping(x: np.ndarray, g: np.ndarray, eta: float, reg: Optional[Regularizer]) -> np.ndarray:
    return (x - prox_step(x, g, eta, reg)) / eta
