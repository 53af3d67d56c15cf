"""Effective capacity of finite-blocklength links in quasi-static Rayleigh fading.

Two backends evaluate the expectation

    psi(rho, theta, eps) = E_Z[eps + (1 - eps) * exp(-n*theta*r(Z))]

and the effective capacity is ``-ln(psi) / (n*theta)`` bits per channel use:

* ``Method.ORACLE`` integrates the exact kernel by adaptive Gauss-Kronrod
  quadrature;
* ``Method.CLOSED_FORM`` uses the second-order truncated expansion expressed
  through upper incomplete gamma functions at orders alpha +/- 1.
"""

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError, NotUnimodal, NumericalInstability, QuadratureError
from .rate import MIN_BLOCKLENGTH, SystemParams, log_ec_kernel
from .specfun import scaled_upper_inc_gamma

Z_MAX = 37.0  # exp(-37) < 1e-16
QUAD_RTOL = 1e-10
CANCELLATION_LIMIT = 1e6


class Method(enum.Enum):
    CLOSED_FORM = "closed"
    ORACLE = "oracle"


@dataclass(frozen=True)
class EcResult:
    ec: float
    method: Method
    psi: float
    diagnostics: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class EpsilonOptResult:
    eps_star: float
    ec_max: float
    iterations: int
    bracket: tuple


# --------------------------------------------------------------------------
#  psi backends
# --------------------------------------------------------------------------

def _kernel_integral(p, log_kernel, z_max=Z_MAX, rtol=QUAD_RTOL):
    """int_0^z_max exp(log_kernel(z) - z) dz with breakpoints at the 1/rho scale."""
    points = [k / p.rho for k in (1.0, 10.0, 100.0) if k / p.rho < z_max]

    def integrand(z):
        return math.exp(log_kernel(z) - z)

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, abserr = integrate.quad(integrand, 0.0, z_max, points=points or None,
                                         epsabs=0.0, epsrel=rtol, limit=500)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature failed at {p}: {exc}") from exc
    if abserr > max(rtol * abs(val), 1e-300):
        raise QuadratureError(f"quadrature error {abserr:.3g} exceeds rtol {rtol} at {p}")
    # Beyond z_max the kernel is checked to be <= 1 so the neglected mass is at most e^-z_max.
    lk_end = log_kernel(z_max)
    if lk_end > 0.0:
        raise QuadratureError(f"kernel exceeds 1 at z_max={z_max}; tail bound invalid for {p}")
    return val, abserr, math.exp(lk_end - z_max)


def psi_oracle(p, rtol=QUAD_RTOL, *, return_diagnostics=False):
    """Expectation of eps + (1-eps)*exp(-n*theta*r) over unit-mean exponential gain.

    The eps part integrates to eps analytically; the kernel part is integrated
    by adaptive quadrature on [0, 37] to relative tolerance ``rtol``.
    """
    val, abserr, tail = _kernel_integral(p, lambda z: log_ec_kernel(p, z), rtol=rtol)
    psi = p.eps + (1.0 - p.eps) * val
    if return_diagnostics:
        return psi, {"abserr": (1.0 - p.eps) * abserr, "tail_bound": tail}
    return psi


def _closed_form_parts(p):
    aux = p.aux
    x = 1.0 / p.rho
    kappa = aux.kappa
    # e^{1/rho} rho^alpha Gamma(alpha+1, 1/rho) = x * S(alpha+1, x), and similarly
    # e^{1/rho} rho^alpha rho^-2 Gamma(alpha-1, 1/rho) = x * S(alpha-1, x).
    t1 = (kappa + 1.0) * x * scaled_upper_inc_gamma(aux.alpha + 1.0, x)
    t2 = (kappa - 0.5 * aux.beta) * x * scaled_upper_inc_gamma(aux.alpha - 1.0, x)
    return t1, t2


def closed_form_j(p):
    """The bracketed term J of the closed form (so that psi = eps + (1-eps)*J)."""
    t1, t2 = _closed_form_parts(p)
    j = t1 - t2
    if max(abs(t1), abs(t2)) > CANCELLATION_LIMIT * abs(j):
        raise NumericalInstability(
            f"cancellation in closed form at {p}: terms {t1:.6g}, {t2:.6g}, J={j:.6g}")
    return j


def psi_closed_form(p, *, return_diagnostics=False):
    """eps + (1-eps)*J with J expressed through incomplete gamma functions."""
    t1, t2 = _closed_form_parts(p)
    j = t1 - t2
    ratio = max(abs(t1), abs(t2)) / abs(j) if j != 0.0 else math.inf
    if ratio > CANCELLATION_LIMIT:
        raise NumericalInstability(
            f"cancellation in closed form at {p}: terms {t1:.6g}, {t2:.6g}, J={j:.6g}")
    psi = p.eps + (1.0 - p.eps) * j
    if not psi > 0.0:
        raise NumericalInstability(f"closed form gives non-positive psi={psi!r} at {p}")
    if return_diagnostics:
        return psi, {"J": j, "cancellation_ratio": ratio}
    return psi


def psi(p, method=Method.CLOSED_FORM):
    method = Method(method)
    if method is Method.CLOSED_FORM:
        return psi_closed_form(p)
    return psi_oracle(p)


def effective_capacity(p, method=Method.CLOSED_FORM):
    """Effective capacity -ln(psi)/(n*theta) in bpcu, as an :class:`EcResult`.

    psi never legitimately drops below eps; if round-off pushes it there the
    value is floored at eps and ``diagnostics['floored']`` is set.
    """
    method = Method(method)
    if method is Method.CLOSED_FORM:
        value, diag = psi_closed_form(p, return_diagnostics=True)
    else:
        value, diag = psi_oracle(p, return_diagnostics=True)
    diag["floored"] = value < p.eps
    if diag["floored"]:
        value = p.eps
    ec = -math.log(value) / (p.n * p.theta)
    return EcResult(ec=ec, method=method, psi=value, diagnostics=diag)


def shannon_ec(n, theta, rho):
    """Classical effective capacity: rate log2(1+rho*z), no decoding errors.

    Computed by the same quadrature as :func:`psi_oracle` with kernel
    (1 + rho*z)^alpha.
    """
    p = SystemParams(n, 0.5, theta, rho, allow_small_n=n < MIN_BLOCKLENGTH)
    alpha = p.aux.alpha
    val, _, _ = _kernel_integral(p, lambda z: alpha * math.log1p(rho * z))
    return -math.log(val) / (n * theta)


# --------------------------------------------------------------------------
#  High-SNR bounds and delay outage
# --------------------------------------------------------------------------

def _check_n(n):
    if n < MIN_BLOCKLENGTH:
        raise DomainError(f"n={n} below {MIN_BLOCKLENGTH}")


def ec_upper_bound(n, theta, eps):
    """Limit of the effective capacity as rho -> inf: -ln(eps)/(n*theta)."""
    _check_n(n)
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps out of (0,1): {eps!r}")
    if not theta > 0.0:
        raise DomainError(f"theta must be positive, got {theta!r}")
    return -math.log(eps) / (n * theta)


def theta_upper_bound(n, ce, eps):
    """Largest delay exponent that can sustain effective capacity ``ce``."""
    if not ce > 0.0:
        raise DomainError(f"ce must be positive, got {ce!r}")
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps out of (0,1): {eps!r}")
    return -math.log(eps) / (n * ce)


def delay_outage_prob(theta, ce, d_max):
    """P(delay >= d_max) ~ exp(-theta * ce * d_max)."""
    if not theta > 0.0:
        raise DomainError(f"theta must be positive, got {theta!r}")
    if not ce >= 0.0:
        raise DomainError(f"ce must be non-negative, got {ce!r}")
    if not d_max > 0.0:
        raise DomainError(f"d_max must be positive, got {d_max!r}")
    return math.exp(-theta * ce * d_max)


# --------------------------------------------------------------------------
#  Optimal error probability
# --------------------------------------------------------------------------

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
EPS_LO = 1e-12
EPS_HI = 0.5
EPS_HI_WIDE = 1.0 - 1e-9


def _psi_of_eps(n, theta, rho, method):
    def f(eps):
        return psi(SystemParams(n, eps, theta, rho), method)
    return f


def optimal_epsilon(n, theta, rho, backend=Method.CLOSED_FORM, *, rtol=1e-3, max_iter=200):
    """Error probability maximizing the effective capacity at fixed (n, theta, rho).

    psi is convex in eps, so golden-section search on log(eps) over
    [1e-12, 0.5] finds the unique minimizer.  If psi is still decreasing at
    0.5 the interval is widened to 1 - 1e-9.
    """
    f = _psi_of_eps(n, theta, rho, backend)
    lo, hi = EPS_LO, EPS_HI
    if f(hi) < f(hi * (1.0 - 1e-3)):
        hi = EPS_HI_WIDE
        if f(hi) < f(1.0 - 2e-9):
            raise NotUnimodal(f"psi decreasing up to eps={hi} at n={n}, theta={theta}, rho={rho}")

    a, b = math.log(lo), math.log(hi)
    h = b - a
    c = b - _INV_PHI * h
    d = a + _INV_PHI * h
    fc, fd = f(math.exp(c)), f(math.exp(d))
    tol = math.log1p(rtol)
    it = 0
    while b - a > tol:
        if it >= max_iter:
            raise ConvergenceError(f"golden-section search exceeded {max_iter} iterations")
        it += 1
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(math.exp(d))
    u, fu = (c, fc) if fc < fd else (d, fd)
    return EpsilonOptResult(eps_star=math.exp(u), ec_max=-math.log(fu) / (n * theta),
                            iterations=it, bracket=(math.exp(a), math.exp(b)))


def grid_optimal_epsilon(n, theta, rho, backend=Method.CLOSED_FORM, *, num=10_000,
                         lo=EPS_LO, hi=EPS_HI):
    """Exhaustive log-grid search; returns (eps_star, ec_max, grid, psi_values)."""
    f = _psi_of_eps(n, theta, rho, backend)
    grid = np.geomspace(lo, hi, num)
    values = np.array([f(e) for e in grid])
    k = int(np.argmin(values))
    return float(grid[k]), -math.log(values[k]) / (n * theta), grid, values


def ec_at(n, eps, theta, rho, method=Method.CLOSED_FORM):
    """Shorthand for ``effective_capacity(SystemParams(...), method).ec``."""
    return effective_capacity(SystemParams(n, eps, theta, rho), method).ec


__all__ = [
    "Method", "EcResult", "EpsilonOptResult", "Z_MAX",
    "psi_oracle", "psi_closed_form", "closed_form_j", "psi", "effective_capacity",
    "shannon_ec", "ec_upper_bound", "theta_upper_bound", "delay_outage_prob",
    "optimal_epsilon", "grid_optimal_epsilon", "ec_at",
]
