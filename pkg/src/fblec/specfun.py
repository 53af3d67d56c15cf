"""Scalar special functions used by the effective-capacity closed forms.

Everything here is a pure function of float arguments. The incomplete gamma
family is evaluated through the *scaled* quantity

    S(a, x) = e^x * x^(-a) * Gamma(a, x),

which stays O(1) for the large negative orders produced by the closed-form
effective capacity (a = -theta*n/ln2 +/- 1), where Gamma(a, x) itself spans
hundreds of decades.  ``E_nu(x) = e^-x * S(1 - nu, x)`` follows directly.
"""

import math

from scipy.special import zeta

from .errors import ConvergenceError, DomainError

__all__ = [
    "gaussian_q",
    "gaussian_q_inv",
    "upper_inc_gamma",
    "log_upper_inc_gamma",
    "scaled_upper_inc_gamma",
    "gen_exp_integral",
    "lambert_w0",
]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_EULER_GAMMA = 0.57721566490153286061
_TINY = 1e-300

CF_RTOL = 1e-14
CF_MAX_ITER = 500
SERIES_MAX_ORDER = 400

# log Gamma(1 + b) = -gamma*b + sum_{k>=2} (-1)^k zeta(k) b^k / k
_LGAMMA1P_COEF = [(-1) ** k * float(zeta(k)) / k for k in range(2, 32)]


# --------------------------------------------------------------------------
#  Gaussian tail
# --------------------------------------------------------------------------

def gaussian_q(x):
    """Standard normal tail probability Q(x) = P(N(0,1) > x)."""
    return 0.5 * math.erfc(x / _SQRT2)


# Acklam's rational approximation to the normal quantile (rel. err ~1.2e-9).
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def _tail_rational(q):
    num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
    den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
    return num / den


def _normal_quantile_guess(p):
    if p < _P_LOW:
        return _tail_rational(math.sqrt(-2.0 * math.log(p)))
    if p > 1.0 - _P_LOW:
        return -_tail_rational(math.sqrt(-2.0 * math.log1p(-p)))
    q = p - 0.5
    r = q * q
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return num / den


def gaussian_q_inv(eps):
    """Inverse of :func:`gaussian_q`.

    A rational initial guess is polished with Halley steps on Q itself, so
    ``gaussian_q(gaussian_q_inv(eps))`` reproduces ``eps`` to ~1e-15 relative.
    """
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps out of (0,1): {eps!r}")
    if eps == 0.5:
        return 0.0
    # Q^{-1}(eps) = Phi^{-1}(1 - eps) = -Phi^{-1}(eps)
    x = -_normal_quantile_guess(eps)
    for _ in range(4):
        pdf = _INV_SQRT_2PI * math.exp(-0.5 * x * x)
        if pdf == 0.0:
            break
        f = gaussian_q(x) - eps
        # f' = -pdf, f'' = x*pdf
        t = f / pdf
        step = t / (1.0 + 0.5 * x * t)
        x += step
        if abs(step) <= 1e-16 * max(1.0, abs(x)):
            break
    return x


# --------------------------------------------------------------------------
#  Incomplete gamma / generalized exponential integral
# --------------------------------------------------------------------------

def _cf_scaled(a, x):
    """S(a, x) by the Legendre continued fraction (modified Lentz).

    Returns None when CF_MAX_ITER iterations do not reach CF_RTOL; this
    happens for small x combined with small 1 - a.
    """
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b if b != 0.0 else 1.0 / _TINY
    h = d
    for i in range(1, CF_MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < CF_RTOL:
            return h
    return None


def _gamma1p_m1_over(b):
    """(Gamma(1 + b) - 1) / b, accurate as b -> 0."""
    if abs(b) < 0.1:
        s = 0.0
        for coef in reversed(_LGAMMA1P_COEF):
            s = (s + coef) * b
        lg = (s - _EULER_GAMMA) * b
        if b == 0.0:
            return -_EULER_GAMMA
        return math.expm1(lg) / b
    return (math.gamma(1.0 + b) - 1.0) / b


def _small_order_gamma(b, x):
    """Gamma(b, x) for |b| <= 0.5 and moderate x (power series, b -> 0 safe)."""
    lx = math.log(x)
    if b == 0.0:
        head = -lx
    else:
        head = -math.expm1(b * lx) / b
    total = 0.0
    term = 1.0
    k = 0
    while True:
        k += 1
        term *= -x / k
        contrib = term / (b + k)
        total += contrib
        if abs(contrib) < 1e-17 * abs(total) or k > 200:
            break
    return _gamma1p_m1_over(b) + head - math.exp(b * lx) * total


def _lower_regularized(a, x):
    """P(a, x) = gamma(a, x)/Gamma(a) by its power series (a > 0.5, x < a + 1)."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(1000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-17:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * total


def _log_series_positive(a, x):
    """log Gamma(a, x) = log(Gamma(a) - gamma(a, x)) for a > 0.5, x < a + 1."""
    return math.lgamma(a) + math.log1p(-_lower_regularized(a, x))


def _positive_series_route(a, x):
    return a > 0.5 and x < a + 1.0


def _scaled(a, x):
    """S(a, x) as a float, via continued fraction or small-argument series."""
    if _positive_series_route(a, x):
        return math.exp(_log_series_positive(a, x) + x - a * math.log(x))
    if x < 1.0 and -SERIES_MAX_ORDER < a <= 0.5:
        return _scaled_small_x(a, x)
    h = _cf_scaled(a, x)
    if h is None:
        raise ConvergenceError(
            f"continued fraction for Gamma({a}, {x}) did not converge in {CF_MAX_ITER} iterations")
    return h


def _scaled_small_x(a, x):
    # Series at b in (-1/2, 1/2], then downward recurrence S(c) = (x*S(c+1) - 1)/c,
    # which damps the starting error by x/|c| per step.  The continued fraction
    # converges slowly here and stops short of full double precision.
    b = a - round(a)
    if b <= -0.5:
        b += 1.0
    s = _small_order_gamma(b, x) * math.exp(x) * x ** (-b)
    c = b
    for _ in range(int(round(b - a))):
        c -= 1.0
        s = (x * s - 1.0) / c
    return s


def _check_x(x):
    if not x > 0.0:
        raise DomainError(f"x must be positive, got {x!r}")


def scaled_upper_inc_gamma(a, x):
    """Return e^x * x^(-a) * Gamma(a, x) for real ``a`` and ``x > 0``."""
    _check_x(x)
    return _scaled(a, x)


def log_upper_inc_gamma(a, x):
    """Natural log of the upper incomplete gamma function (always positive for x > 0)."""
    _check_x(x)
    if _positive_series_route(a, x):
        return _log_series_positive(a, x)
    return math.log(_scaled(a, x)) + a * math.log(x) - x


def upper_inc_gamma(a, x):
    """Upper incomplete gamma Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt.

    Valid for any real order ``a``, including large negative orders.  For
    ``a <= 0`` the value is obtained from E_{1-a}(x) by continued fraction
    when x >= 1, and by a small-order series plus downward recurrence below
    that.  Returns ``inf`` if the result overflows a double.
    """
    _check_x(x)
    if _positive_series_route(a, x):
        if a < 170.0:
            return math.gamma(a) * (1.0 - _lower_regularized(a, x))
        return math.exp(_log_series_positive(a, x))
    log_scale = a * math.log(x) - x
    if abs(log_scale) < 700.0:
        # x**a is correctly rounded; exp(log_scale) would lose |log_scale| ulps
        return _scaled(a, x) * x ** a * math.exp(-x)
    lg = math.log(_scaled(a, x)) + log_scale
    if lg > 709.78:
        return math.inf
    return math.exp(lg)


def gen_exp_integral(nu, x):
    """Generalized exponential integral E_nu(x) = int_1^inf e^(-x t) t^(-nu) dt."""
    if not nu >= 1.0:
        raise DomainError(f"nu must be >= 1, got {nu!r}")
    if not x > 0.0:
        raise DomainError(f"x must be positive, got {x!r}")
    return _scaled(1.0 - nu, x) * math.exp(-x)


# --------------------------------------------------------------------------
#  Lambert W
# --------------------------------------------------------------------------

_INV_E = math.exp(-1.0)


def lambert_w0(x):
    """Principal branch of the Lambert W function (W >= -1).

    Halley iteration from a branch-point series near -1/e, a log1p-based
    guess on moderate arguments and the asymptotic log expansion beyond.
    """
    if math.isnan(x) or x < -_INV_E:
        # tolerate the rounding of -1/e itself
        if x >= -_INV_E - 4e-17:
            return -1.0
        raise DomainError(f"lambert_w0 requires x >= -1/e, got {x!r}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf

    if x < -0.25:
        p = math.sqrt(max(2.0 * (math.e * x + 1.0), 0.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    elif x < 3.0:
        l1 = math.log1p(x)
        w = l1 * (1.0 - math.log1p(l1) / (2.0 + l1))
    else:
        l1 = math.log(x)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1

    for _ in range(64):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        # near the branch point f is pure round-off long before dw is small
        if wp1 == 0.0 or abs(f) <= 1e-16 * abs(x):
            break
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= 4e-16 * (1.0 + abs(w)):
            break
    w = max(w, -1.0)
    if abs(w * math.exp(w) - x) > 1e-13 * abs(x):
        raise ConvergenceError(f"Halley iteration for W({x}) did not converge")
    return w
