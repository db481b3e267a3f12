"""Parameter choices and objective-decrease constants that come with the convergence analysis.

Nothing here runs a solver; these are closed-form numbers used to configure
theory-mode runs and as diagnostics next to measured traces.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from zoprox.objects.errors import ConfigException, InvalidArgumentException

SVRG_BATCH = 25
SAGA_BATCH = 6
# per-epoch contraction implied by the SVRG theory parameters
SVRG_EPOCH_CONTRACTION = Fraction(3, 4)


def exact(value) -> Fraction:
    """Exact rational for ints and for floats as written in decimal."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(repr(float(value)))


def _check(L, gamma, d):
    if not L > 0:
        raise ConfigException(f"Theory parameters need L > 0, got {L}", fields=("L",))
    if not gamma > 0:
        raise ConfigException(f"Theory parameters need strong convexity gamma > 0, got {gamma}",
                              fields=("gamma",))
    if d < 1:
        raise ConfigException(f"Dimension must be at least 1, got {d}", fields=("d",))


def svrg_theory_params_exact(L, gamma, d: int) -> Tuple[Fraction, int, int]:
    _check(L, gamma, d)
    L, gamma = exact(L), exact(gamma)
    eta = Fraction(3, 170 * d) / L
    m = max(1, math.ceil(190 * d * L / gamma))
    return eta, SVRG_BATCH, m


def svrg_theory_params(L: float, gamma: float, d: int, n: int) -> Tuple[float, int, int]:
    """``eta = 3/(170 d L)``, ``b = 25``, ``m = ceil(190 d L / gamma)``."""
    eta, b, m = svrg_theory_params_exact(L, gamma, d)
    return float(eta), b, m


def saga_theory_params_exact(L, gamma, d: int, n: int) -> Tuple[Fraction, int]:
    _check(L, gamma, d)
    L, gamma = exact(L), exact(gamma)
    eta = min(Fraction(1, 95 * d) / L, Fraction(2, 3 * n) / gamma)
    return eta, SAGA_BATCH


def saga_theory_params(L: float, gamma: float, d: int, n: int) -> Tuple[float, int]:
    """``eta = min(1/(95 d L), 2/(3 n gamma))``, ``b = 6``."""
    eta, b = saga_theory_params_exact(L, gamma, d, n)
    return float(eta), b


@dataclass(frozen=True)
class ZoodEstimate:
    """Objective decrease guarantee of one inner run.

    ``E[F(out)] - F* <= contraction * (F(in) - F*) + mu_floor + residual``
    """

    contraction: float
    mu_floor: float
    residual: float

    def __post_init__(self):
        if not 0 < self.contraction < 1:
            raise InvalidArgumentException(
                f"Contraction must lie in (0, 1), got {self.contraction}; the parameters do not contract")
        if self.mu_floor < 0 or self.residual < 0:
            raise InvalidArgumentException("Floors must be nonnegative")


def svrg_zood(L: float, gamma: float, d: int, eta: float, b: int, m: int, mu: float,
              grad_star_sq: float = 0.0) -> ZoodEstimate:
    """Constants for one SVRG epoch; ``grad_star_sq`` is ``||grad f(x*)||^2``."""
    beta1 = 2 * eta * (1 - 24 * d * L * eta / b)
    beta2 = (2 / (m * gamma) + 48 * d * L * eta ** 2 / (b * m)
             + 16 * d * L * eta ** 2 * (3 / b + 2))
    gap = beta1 - beta2
    if not gap > 0:
        raise InvalidArgumentException(f"beta1={beta1:.3e} does not exceed beta2={beta2:.3e}")
    mu_floor = 2 * eta * L * mu ** 2 * (1 + (3 / b + 1) * eta * L * d ** 2) / gap
    residual = 16 * eta ** 2 * d * grad_star_sq / gap
    return ZoodEstimate(beta2 / beta1, mu_floor, residual)


def saga_constant(eta: float, b: int, n: int, d: int, L: float, gamma: float) -> float:
    denominator = b * (2 * b - eta * n * gamma)
    if not denominator > 0:
        raise InvalidArgumentException("Stepsize too large for the SAGA constant: 2b <= eta n gamma")
    return 96 * eta ** 2 * n * d * L / denominator


def saga_prefactor(eta: float, b: int, n: int, d: int, L: float, gamma: float) -> float:
    return (2 / gamma + 2 * eta + saga_constant(eta, b, n, d, L, gamma)) / (2 * eta)


def saga_zood(L: float, gamma: float, d: int, n: int, eta: float, b: int, iterations: int,
              mu: float, grad_star_sq: float = 0.0) -> ZoodEstimate:
    """Constants for ``iterations`` SAGA steps."""
    contraction = saga_prefactor(eta, b, n, d, L, gamma) * (1 - eta * gamma / 2) ** iterations
    mu_floor = 2 * (b + 3) * L ** 2 * d ** 2 * mu ** 2 / (b * gamma)
    residual = 16 * d * grad_star_sq / gamma
    return ZoodEstimate(contraction, mu_floor, residual)


def adaptc_bound(zood: ZoodEstimate, stages: int, gamma0: float, delta: float, theta: float) -> float:
    """Gap bound after ``stages`` rounds of the convex reduction."""
    k = zood.contraction
    return (zood.mu_floor + k ** stages * (delta - zood.mu_floor)
            + (0.5 + 2 / math.sqrt(k)) * k ** (stages / 2) * gamma0 * theta
            + zood.residual / (1 - k))


def adaptnc_bound(zood: ZoodEstimate, stages: int, sigma: float, delta: float) -> float:
    """Bound on the expected squared Moreau gradient norm of the weakly convex reduction."""
    k = zood.contraction
    return (8 * sigma * (2 * k + 1) * delta / ((1 - k) * (stages + 1))
            + 24 * sigma * zood.mu_floor + 24 * zood.residual / (1 - k))
