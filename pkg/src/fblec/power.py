"""High-SNR power/delay trade-off and power allocation.

At high SNR the closed-form J behaves like e^{1/rho} F / rho with

    F = (kappa - beta/2)/(alpha - 1) - (kappa + 1)/(alpha + 1),

which can be inverted with Lambert W for the SNR that sustains a target
effective capacity, and differentiated to place the power level where the
marginal EC gain per unit SNR drops to ``mu``.
"""

import enum
import math
import warnings
from dataclasses import dataclass

from .capacity import effective_capacity, psi_closed_form, theta_upper_bound
from .errors import DegenerateAlpha, DomainError, InfeasibleConstraint, InfeasibleEc
from .rate import AuxParams, SystemParams
from .specfun import lambert_w0

HIGH_SNR_FLOOR = 10.0  # linear; below 10 dB the asymptotics are not trusted


class HighSnrValidityWarning(UserWarning):
    """Result lies outside the high-SNR region where the asymptotics hold."""


class Binding(enum.Enum):
    DERIVATIVE_CONSTRAINT = "derivative"
    POWER_CAP = "power_cap"


@dataclass(frozen=True)
class AsymptoticTerms:
    F: float
    G: float


@dataclass(frozen=True)
class PowerAllocResult:
    rho_star: float
    rho_max: float
    eta_db: float
    ec_at_star: float
    ec_at_max: float
    binding: Binding

    @property
    def ec_loss_rel(self):
        return (self.ec_at_max - self.ec_at_star) / self.ec_at_max


def asymptotic_F(aux):
    a = aux.alpha
    if abs(a + 1.0) < 1e-9 or abs(a - 1.0) < 1e-9:
        raise DegenerateAlpha(f"alpha={a!r} too close to +/-1")
    return (aux.kappa - 0.5 * aux.beta) / (a - 1.0) - (aux.kappa + 1.0) / (a + 1.0)


def asymptotic_G(ce, n, theta, eps):
    return (math.exp(-n * theta * ce) - eps) / (1.0 - eps)


def asymptotic_terms(ce, n, theta, eps):
    return AsymptoticTerms(F=asymptotic_F(AuxParams.from_values(n, eps, theta)),
                           G=asymptotic_G(ce, n, theta, eps))


def required_snr(ce, n, theta, eps):
    """Linear SNR needed for effective capacity ``ce`` at delay exponent ``theta``.

    High-SNR approximation 1 / W(G/F).  Raises :class:`InfeasibleEc` when
    theta >= -ln(eps)/(n*ce), i.e. ``ce`` is not below the EC ceiling, and
    :class:`InfeasibleConstraint` when F <= 0.
    """
    if not ce > 0.0:
        raise DomainError(f"ce must be positive, got {ce!r}")
    terms = asymptotic_terms(ce, n, theta, eps)
    if theta >= theta_upper_bound(n, ce, eps) or terms.G <= 0.0:
        raise InfeasibleEc(
            f"ce={ce} not attainable: theta={theta} >= bound {theta_upper_bound(n, ce, eps)}")
    if terms.F <= 0.0:
        raise InfeasibleConstraint(f"F={terms.F:.6g} <= 0 at n={n}, theta={theta}, eps={eps}")
    w = lambert_w0(terms.G / terms.F)
    return 1.0 / w


def power_saving_db(rho_star, rho_max):
    """Saved power 10*log10(rho_max/rho_star) in dB."""
    if not 0.0 < rho_star <= rho_max:
        raise DomainError(f"need 0 < rho_star <= rho_max, got {rho_star!r}, {rho_max!r}")
    return 10.0 * math.log10(rho_max / rho_star)


def ec_derivative(p):
    """Approximate dEC/drho at high SNR, with psi taken from the closed form."""
    f = asymptotic_F(p.aux)
    psi = psi_closed_form(p)
    return (1.0 - p.eps) / (p.n * p.theta * psi) * f / p.rho ** 2 * (1.0 + 1.0 / p.rho) ** 2


def optimal_power(n, theta, eps, mu, rho_max):
    """Lowest SNR at which the EC slope still reaches ``mu``, capped at ``rho_max``.

    Uses psi ~ eps (the high-SNR limit) in the slope, which turns the slope
    condition into a quadratic in 1/rho.  ``mu = 0`` returns ``rho_max``.
    """
    if not mu >= 0.0:
        raise DomainError(f"mu must be non-negative, got {mu!r}")
    if not rho_max > 0.0:
        raise DomainError(f"rho_max must be positive, got {rho_max!r}")
    f = asymptotic_F(AuxParams.from_values(n, eps, theta))
    if f <= 0.0:
        raise InfeasibleConstraint(f"F={f:.6g} <= 0 at n={n}, theta={theta}, eps={eps}")

    rho_d = math.inf
    if mu > 0.0:
        # (1/rho + 1/rho^2)^2 = s^2  ->  rho = 2/(sqrt(1+4s) - 1) = (sqrt(1+4s) + 1)/(2s)
        s = math.sqrt(mu * n * theta * eps / ((1.0 - eps) * f))
        rho_d = (math.sqrt(1.0 + 4.0 * s) + 1.0) / (2.0 * s)
    if rho_d < rho_max:
        rho_star, binding = rho_d, Binding.DERIVATIVE_CONSTRAINT
    else:
        rho_star, binding = rho_max, Binding.POWER_CAP
    if rho_star < HIGH_SNR_FLOOR:
        warnings.warn(f"rho*={rho_star:.4g} below 10 dB; high-SNR allocation may be inaccurate",
                      HighSnrValidityWarning, stacklevel=2)

    ec_star = effective_capacity(SystemParams(n, eps, theta, rho_star)).ec
    ec_max = effective_capacity(SystemParams(n, eps, theta, rho_max)).ec
    return PowerAllocResult(rho_star=rho_star, rho_max=rho_max,
                            eta_db=power_saving_db(rho_star, rho_max),
                            ec_at_star=ec_star, ec_at_max=ec_max, binding=binding)
