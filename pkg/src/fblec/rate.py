"""Finite-blocklength rate model over quasi-static Rayleigh fading.

The normal approximation of the maximal coding rate is

    r(z) = C(rho*z) - sqrt(V(rho*z)/n) * Qinv(eps)

with C the Shannon capacity and V the channel dispersion (both in bits).
The exponent kernel exp(-n*theta*r) that sits inside the effective-capacity
expectation factors exactly as (1 + rho*z)^alpha * exp(beta*gamma(z)).
"""

import enum
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

from .errors import DomainError
from .specfun import gaussian_q_inv

LOG2E = 1.0 / math.log(2.0)
MIN_BLOCKLENGTH = 100


class SmallBlocklengthWarning(UserWarning):
    """Blocklength below the range where the normal approximation is accurate."""


@dataclass(frozen=True)
class AuxParams:
    """Derived exponents: alpha = -theta*n/ln2, beta = theta*sqrt(n)*Qinv(eps)*log2(e)."""

    alpha: float
    beta: float

    @property
    def kappa(self):
        return 0.5 * self.beta * self.beta + self.beta

    @classmethod
    def from_values(cls, n, eps, theta):
        if not 0.0 < eps < 1.0:
            raise DomainError(f"eps out of (0,1): {eps!r}")
        alpha = -theta * n * LOG2E
        beta = theta * math.sqrt(n) * gaussian_q_inv(eps) * LOG2E
        return cls(alpha, beta)


@dataclass(frozen=True)
class SystemParams:
    """One operating point (n, eps, theta, rho), all on linear scale.

    ``n < 100`` is rejected unless ``allow_small_n`` is set, in which case a
    :class:`SmallBlocklengthWarning` is emitted instead.
    """

    n: int
    eps: float
    theta: float
    rho: float
    allow_small_n: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not (isinstance(self.n, int) or float(self.n).is_integer()) or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if self.n < MIN_BLOCKLENGTH:
            if not self.allow_small_n:
                raise DomainError(
                    f"n={self.n} below {MIN_BLOCKLENGTH}; pass allow_small_n=True to override")
            warnings.warn(
                f"n={self.n} is below {MIN_BLOCKLENGTH}; normal approximation may be inaccurate",
                SmallBlocklengthWarning, stacklevel=3)
        if not 0.0 < self.eps < 1.0:
            raise DomainError(f"eps out of (0,1): {self.eps!r}")
        if not (self.theta > 0.0 and math.isfinite(self.theta)):
            raise DomainError(f"theta must be positive and finite, got {self.theta!r}")
        if not (self.rho > 0.0 and math.isfinite(self.rho)):
            raise DomainError(f"rho must be positive and finite, got {self.rho!r}")

    @cached_property
    def aux(self):
        return AuxParams.from_values(self.n, self.eps, self.theta)

    def replace(self, **changes):
        values = dict(n=self.n, eps=self.eps, theta=self.theta, rho=self.rho,
                      allow_small_n=self.allow_small_n)
        values.update(changes)
        return SystemParams(**values)


class FadingKind(enum.Enum):
    QUASI_STATIC_RAYLEIGH = "quasi_static_rayleigh"


@dataclass(frozen=True)
class FadingModel:
    """Power-gain law of the fading channel; only unit-mean Rayleigh is modelled."""

    kind: FadingKind = FadingKind.QUASI_STATIC_RAYLEIGH

    @staticmethod
    def density(z):
        return math.exp(-z) if z >= 0.0 else 0.0


RAYLEIGH = FadingModel()


def shannon_capacity(x):
    """log2(1 + x) in bits per channel use."""
    if x < 0.0:
        raise DomainError(f"SNR must be non-negative, got {x!r}")
    return math.log1p(x) * LOG2E


def channel_dispersion(x):
    """(1 - (1 + x)^-2) * log2(e)^2."""
    if x < 0.0:
        raise DomainError(f"SNR must be non-negative, got {x!r}")
    # 1 - (1+x)^-2 = x*(2+x)/(1+x)^2, exact near x = 0
    return x * (2.0 + x) / (1.0 + x) ** 2 * LOG2E * LOG2E


def achievable_rate(p, z):
    """Normal-approximation rate at fading gain ``z``; not clamped at zero."""
    if z < 0.0:
        raise DomainError(f"gain must be non-negative, got {z!r}")
    snr = p.rho * z
    qinv = gaussian_q_inv(p.eps)
    return shannon_capacity(snr) - math.sqrt(channel_dispersion(snr) / p.n) * qinv


def log_ec_kernel(p, z):
    """log exp(-n*theta*r(z)) = alpha*ln(1 + rho*z) + beta*gamma(z)."""
    if z < 0.0:
        raise DomainError(f"gain must be non-negative, got {z!r}")
    x = p.rho * z
    aux = p.aux
    gam = math.sqrt(x * (2.0 + x)) / (1.0 + x)
    return aux.alpha * math.log1p(x) + aux.beta * gam


def ec_kernel(p, z):
    """exp(-n*theta*r(z)), evaluated in the log domain.

    Raises OverflowError when n*theta*|r| is beyond double range.
    """
    lk = log_ec_kernel(p, z)
    if lk > 709.78:
        raise OverflowError(f"exp(-n*theta*r) overflows at z={z!r}: exponent {lk:.6g}")
    return math.exp(lk)
