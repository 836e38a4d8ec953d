"""Density and distribution kernels for the normal, central t and noncentral t.

Every kernel has a log-space twin (``*_logpdf`` / ``*_logcdf``) because the
Bayes-factor code works with ratios of densities that underflow long before
the ratio itself becomes uninteresting.

The noncentral t kernels use the Poisson mixture of incomplete-beta terms,
summed outward from the Poisson mode.  The density falls back to a
log-scaled adaptive Gauss-Kronrod integral over the normal/chi
representation when the series is badly conditioned.
"""

import math
from dataclasses import dataclass

from scipy import integrate, optimize, special as sc

from .errors import DomainError, NumericalError

CENTRAL_TOL = 1e-12
NONCENTRAL_TOL = 1e-10
MAX_SERIES_TERMS = 10_000
MAX_CF_ITERATIONS = 100_000

_EPS = 2.220446049250313e-16
_LOG_2PI = math.log(2.0 * math.pi)
_SQRT2 = math.sqrt(2.0)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_SERIES_TAIL = 1e-13
_MILLS_DIRECT_LIMIT = 8.0
_LOG2 = math.log(2.0)
# below this x^2/(x^2 + nu) the noncentral kernels treat x as the origin
_TINY_XB = 1e-200


@dataclass(frozen=True)
class EvalResult:
    """A kernel value together with a bound on its absolute error."""

    value: float
    abs_error_bound: float = 0.0

    def __float__(self):
        return self.value


def _check_nu(nu):
    nu = float(nu)
    if not nu >= 1.0 or math.isinf(nu):
        raise DomainError(f"degrees of freedom must be a finite value >= 1, got {nu!r}")
    return nu


def _check_theta(theta):
    theta = float(theta)
    if not math.isfinite(theta):
        raise DomainError(f"noncentrality must be finite, got {theta!r}")
    return theta


# ---------------------------------------------------------------------------
# Gamma and beta helpers


def _stirling_tail(z):
    # lgamma(z) - [(z - 1/2) log z - z + log(2 pi)/2], valid for z >= 10
    z2 = z * z
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * z2)) / z2) / z2) / z


def log_gamma_ratio(a, b):
    """Return ``log(Gamma(b + a) / Gamma(b))`` without cancellation for large ``b``."""
    if b < 50.0 or a + b < 50.0:
        return math.lgamma(b + a) - math.lgamma(b)
    c = b + a
    return (b - 0.5) * math.log1p(a / b) + a * math.log(c) - a + _stirling_tail(c) - _stirling_tail(b)


def log_beta(a, b):
    """Logarithm of the complete beta function."""
    if a > b:
        a, b = b, a
    return math.lgamma(a) - log_gamma_ratio(a, b)


def _betacf(a, b, x):
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, MAX_CF_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < 4.0 * _EPS:
            return h
    raise NumericalError(f"incomplete beta continued fraction did not converge for a={a}, b={b}, x={x}", h)


def _log_betainc_parts(a, b, x, y, log_x=None, log_y=None):
    """Return (log I, log(1 - I)) where one side is exact and the other via log1p.

    Callers with large ``a`` or ``b`` should pass ``log_x``/``log_y`` computed
    without cancellation; the front factor multiplies them by ``a`` and ``b``.
    """
    if x <= 0.0:
        return -math.inf, 0.0
    if y <= 0.0:
        return 0.0, -math.inf
    if log_x is None:
        log_x = math.log(x)
    if log_y is None:
        log_y = math.log(y)
    log_front = a * log_x + b * log_y - log_beta(a, b)
    if x >= (a + 1.0) / (a + b + 2.0):
        log_c = log_front + math.log(_betacf(b, a, y)) - math.log(b)
        return _log1mexp(log_c), log_c
    log_i = log_front + math.log(_betacf(a, b, x)) - math.log(a)
    # Near x = 1 the direct fraction only sees 1 - x to within eps/y, so a small
    # complement loses digits.  Just outside its region the swapped fraction is
    # usually still accurate; it is trusted for a complement below one half
    # that agrees with the direct value.
    if y <= 0.1 and y < 3.0 * (b + 1.0) / (a + b + 2.0):
        try:
            log_c = log_front + math.log(_betacf(b, a, y)) - math.log(b)
        except (NumericalError, ValueError):
            log_c = math.inf
        if log_c < -_LOG2 and abs(math.exp(log_i) + math.exp(log_c) - 1.0) <= 1e-8:
            return _log1mexp(log_c), log_c
    return log_i, _log1mexp(log_i)


def _log1mexp(log_v):
    if log_v == -math.inf:
        return 0.0
    if log_v > -0.6931471805599453:
        return math.log(-math.expm1(log_v))
    return math.log1p(-math.exp(log_v))


def betainc(a, b, x, y=None, log_x=None, log_y=None):
    """Regularized incomplete beta ``I_x(a, b)``.

    ``y`` may be passed as an exactly computed ``1 - x`` to avoid losing the
    small complement to rounding.
    """
    if y is None:
        y = 1.0 - x
    log_i, _ = _log_betainc_parts(a, b, x, y, log_x, log_y)
    return math.exp(log_i)


# ---------------------------------------------------------------------------
# Normal distribution and Mills ratio


def norm_pdf(x):
    return math.exp(-0.5 * x * x - 0.5 * _LOG_2PI)


def norm_logpdf(x):
    return -0.5 * x * x - 0.5 * _LOG_2PI


def norm_cdf(x):
    return 0.5 * math.erfc(-x / _SQRT2)


def norm_logcdf(x):
    if x > -5.0:
        return math.log(norm_cdf(x))
    # log(Phi(x)) = log(M(x)) + log(phi(x)) stays finite far into the tail
    return math.log(mills_exact(x)) + norm_logpdf(x)


def mills_exact(x):
    """Mills ratio ``Phi(-|x|) / phi(x)``."""
    ax = abs(float(x))
    if ax <= _MILLS_DIRECT_LIMIT:
        return norm_cdf(-ax) / norm_pdf(ax)
    # scaled erfc keeps the ratio finite where both factors underflow
    return math.sqrt(math.pi / 2.0) * float(sc.erfcx(ax / _SQRT2))


def mills_asymptotic(x):
    """Large-argument approximation ``1/|x|``."""
    if x == 0:
        raise DomainError("the 1/|x| approximation to the Mills ratio diverges at x = 0")
    return 1.0 / abs(x)


def mills_modified(x):
    """Approximation ``1/(sqrt(2/pi) + |x|)``, exact at zero."""
    return 1.0 / (_SQRT_2_OVER_PI + abs(x))


# ---------------------------------------------------------------------------
# Central t


def t_logpdf(x, nu):
    nu = _check_nu(nu)
    x = float(x)
    if math.isinf(x):
        return -math.inf
    return log_gamma_ratio(0.5, 0.5 * nu) - 0.5 * math.log(nu * math.pi) - 0.5 * (nu + 1.0) * math.log1p(x * x / nu)


def t_pdf(x, nu):
    """Student t density with ``nu`` degrees of freedom."""
    value = math.exp(t_logpdf(x, nu))
    return EvalResult(value, 64.0 * _EPS * value)


def _t_lower_tail_log(ax, nu):
    """log P(T <= -ax) for ax >= 0, and its complement."""
    if ax == 0.0:
        return -math.log(2.0), -math.log(2.0)
    if math.isinf(ax):
        return -math.inf, 0.0
    denom = nu + ax * ax
    z = nu / denom
    w = ax * ax / denom
    log_z = -math.log1p(ax * ax / nu)
    log_w = 2.0 * math.log(ax) - math.log(denom)
    log_i, log_ci = _log_betainc_parts(0.5 * nu, 0.5, z, w, log_z, log_w)
    log_tail = log_i - math.log(2.0)
    # complement of I/2 is 1/2 + (1 - I)/2
    log_rest = math.log(0.5 + 0.5 * math.exp(log_ci))
    return log_tail, log_rest


def t_logcdf(x, nu):
    nu = _check_nu(nu)
    x = float(x)
    lower, upper = _t_lower_tail_log(abs(x), nu)
    return lower if x <= 0 else upper


def t_cdf(x, nu):
    """``P(T_nu <= x)`` through the regularized incomplete beta."""
    nu = _check_nu(nu)
    x = float(x)
    lower, upper = _t_lower_tail_log(abs(x), nu)
    value = math.exp(lower) if x <= 0 else math.exp(upper)
    return EvalResult(value, 64.0 * _EPS * max(value, 1e-300) + 1e-300)


# ---------------------------------------------------------------------------
# Noncentral t density


def _nct_logpdf_origin(nu, theta):
    return -0.5 * theta * theta + t_logpdf(0.0, nu)


def _nct_logpdf_series(x, nu, theta):
    """Poisson-weighted beta-density series for x > 0.

    Returns (log density, relative error bound).  Terms are scaled by the
    largest term at the Poisson mode so the sum never under- or overflows.
    """
    lam = 0.5 * theta * theta
    half_nu = 0.5 * nu
    denom = x * x + nu
    log_x = 2.0 * math.log(x) - math.log(denom)
    log_y = -math.log1p(x * x / nu)
    xb = math.exp(log_x)
    sign_q = 1.0 if theta > 0 else -1.0
    log_abs_theta = math.log(abs(theta))
    # log of 0.5 * dx/dt * y^(nu/2 - 1)
    log_common = math.log(x * nu) - 2.0 * math.log(denom) + (half_nu - 1.0) * log_y

    def log_p_term(j):
        a = j + 0.5
        return -lam + j * math.log(lam) - math.lgamma(j + 1.0) + (a - 1.0) * log_x - log_beta(a, half_nu)

    def log_q_term(j):
        a = j + 1.0
        return (log_abs_theta - lam + j * math.log(lam) - 0.5 * math.log(2.0) - math.lgamma(j + 1.5)
                + (a - 1.0) * log_x - log_beta(a, half_nu))

    k = int(min(math.floor(lam), MAX_SERIES_TERMS))
    lp, lq = log_p_term(k), log_q_term(k)
    scale = max(lp, lq)
    p0 = math.exp(lp - scale)
    q0 = math.exp(lq - scale)

    total = p0 + sign_q * q0
    abs_total = p0 + q0
    n_terms = 1
    tail = 0.0

    # upward from the mode
    p, q = p0, q0
    j = k
    while True:
        rp = lam / (j + 1.0) * xb * (j + 0.5 + half_nu) / (j + 0.5)
        rq = lam / (j + 1.5) * xb * (j + 1.0 + half_nu) / (j + 1.0)
        p *= rp
        q *= rq
        j += 1
        n_terms += 1
        total += p + sign_q * q
        abs_total += p + q
        r = max(rp, rq)
        if r < 1.0 and (p + q) * r / (1.0 - r) <= _SERIES_TAIL * _EPS * abs_total:
            tail += (p + q) * r / (1.0 - r)
            break
        if n_terms > MAX_SERIES_TERMS:
            raise NumericalError("noncentral t density series hit the term cap",
                                 abs_error_bound=(p + q) / max(abs_total, 1e-300))

    # downward from the mode
    p, q = p0, q0
    j = k
    while j > 0:
        rp = j / lam / xb * (j - 0.5) / (j - 0.5 + half_nu)
        rq = (j + 0.5) / lam / xb * j / (j + half_nu)
        p *= rp
        q *= rq
        j -= 1
        n_terms += 1
        total += p + sign_q * q
        abs_total += p + q
        r = max(rp, rq)
        if r < 1.0 and (p + q) * r / (1.0 - r) <= _SERIES_TAIL * _EPS * abs_total:
            tail += (p + q) * r / (1.0 - r)
            break
        if n_terms > MAX_SERIES_TERMS:
            raise NumericalError("noncentral t density series hit the term cap",
                                 abs_error_bound=(p + q) / max(abs_total, 1e-300))

    if total <= 0.0:
        return None, math.inf
    rel_err = (4.0 * n_terms * _EPS * abs_total + tail) / total
    return scale + log_common + math.log(total), rel_err


def _nct_logpdf_quad(x, nu, theta):
    """Integral over s = sqrt(V/nu) of s * phi(x s - theta) * chi density.

    The log integrand is concave in s with a closed-form maximiser, so the
    integrand is normalised at its peak and integrated over a window of
    +-40 curvature widths.  Returns (log density, relative error bound).
    """
    half_nu = 0.5 * nu
    c2 = nu + x * x
    s_star = (x * theta + math.sqrt(x * x * theta * theta + 4.0 * nu * c2)) / (2.0 * c2)
    log_s_star = math.log(s_star)

    def shape(s):
        # nu*(log s - (s^2 - 1)/2) - (x s - theta)^2 / 2, evaluated relative to s_star
        return (nu * (math.log(s) - log_s_star) - 0.5 * nu * (s - s_star) * (s + s_star)
                - 0.5 * ((x * s - theta) ** 2 - (x * s_star - theta) ** 2))

    peak = nu * (log_s_star - 0.5 * (s_star - 1.0) * (s_star + 1.0)) - 0.5 * (x * s_star - theta) ** 2
    width = 1.0 / math.sqrt(nu / (s_star * s_star) + nu + x * x)
    lo = max(s_star - 40.0 * width, 0.0)
    hi = s_star + 40.0 * width

    def integrand(s):
        if s <= 0.0:
            return 0.0
        return math.exp(shape(s))

    val, err = integrate.quad(integrand, lo, hi, points=[s_star], epsabs=0.0, epsrel=1e-13, limit=200)
    if not val > 0.0:
        raise NumericalError("noncentral t density quadrature returned a non-positive mass", val, err)
    const = math.log(2.0) + 0.5 * math.log(half_nu) - _LOG_2PI
    if half_nu >= 10.0:
        const -= _stirling_tail(half_nu)
    else:
        const = math.log(2.0) + half_nu * math.log(half_nu) - math.lgamma(half_nu) - half_nu - 0.5 * _LOG_2PI
    return const + peak + math.log(val), err / val


def _nct_logpdf_eval(x, nu, theta, tol):
    if 0.5 * theta * theta == 0.0:
        # the shift is below the resolution of the series; the density is central to O(theta)
        return t_logpdf(x, nu), 64.0 * _EPS
    if x * x / (x * x + nu) < _TINY_XB:
        # the density equals its value at the origin to O(|x|)
        return _nct_logpdf_origin(nu, theta), 64.0 * _EPS
    if x < 0.0:
        x, theta = -x, -theta
    if theta * theta <= nu:
        try:
            log_val, rel = _nct_logpdf_series(x, nu, theta)
        except NumericalError:
            log_val, rel = None, math.inf
        if log_val is not None and rel <= 0.1 * tol:
            return log_val, rel
    return _nct_logpdf_quad(x, nu, theta)


def nct_logpdf(x, nu, theta, tol=NONCENTRAL_TOL):
    nu = _check_nu(nu)
    theta = _check_theta(theta)
    x = float(x)
    if math.isinf(x):
        return -math.inf
    return _nct_logpdf_eval(x, nu, theta, tol)[0]


def nct_pdf(x, nu, theta, tol=NONCENTRAL_TOL):
    """Noncentral t density ``f_nu(x; theta)``."""
    nu = _check_nu(nu)
    theta = _check_theta(theta)
    x = float(x)
    if math.isinf(x):
        return EvalResult(0.0, 0.0)
    log_val, rel = _nct_logpdf_eval(x, nu, theta, tol)
    value = math.exp(log_val)
    bound = value * rel
    if bound > tol:
        raise NumericalError("noncentral t density missed its error target", value, bound)
    return EvalResult(value, bound)


# ---------------------------------------------------------------------------
# Noncentral t distribution function


def _nct_cdf_nonneg(x, nu, theta, tol):
    """P(T <= x) for x >= 0 by the incomplete-beta mixture summed from the mode."""
    base = norm_cdf(-theta)
    if x * x / (x * x + nu) < _TINY_XB:
        # the mass between 0 and x is at most |x| times a bounded density
        return base, 4.0 * _EPS + x
    lam = 0.5 * theta * theta
    if lam == 0.0:
        lower, upper = _t_lower_tail_log(x, nu)
        return math.exp(upper), 64.0 * _EPS
    half_nu = 0.5 * nu
    denom = x * x + nu
    xb = x * x / denom
    yb = nu / denom
    log_xb = 2.0 * math.log(x) - math.log(denom)
    log_yb = -math.log1p(x * x / nu)
    log_abs_theta = math.log(abs(theta))
    sign_q = 1.0 if theta > 0 else -1.0
    q_mass = math.erf(abs(theta) / _SQRT2)

    k = int(min(math.floor(lam), MAX_SERIES_TERMS))
    p_k = math.exp(-lam + k * math.log(lam) - math.lgamma(k + 1.0))
    q_k = math.exp(log_abs_theta - lam + k * math.log(lam) - 0.5 * math.log(2.0) - math.lgamma(k + 1.5))
    a_p = k + 0.5
    a_q = k + 1.0
    i_p_k = betainc(a_p, half_nu, xb, yb, log_xb, log_yb)
    i_q_k = betainc(a_q, half_nu, xb, yb, log_xb, log_yb)
    # x^a y^b / (a B(a, b)): the decrement between I(a) and I(a + 1)
    g_p_k = math.exp(a_p * log_xb + half_nu * log_yb - math.log(a_p) - log_beta(a_p, half_nu))
    g_q_k = math.exp(a_q * log_xb + half_nu * log_yb - math.log(a_q) - log_beta(a_q, half_nu))

    total = p_k * i_p_k + sign_q * q_k * i_q_k
    seen_p = p_k
    seen_q = q_k
    n_terms = 1

    def bound():
        return 0.5 * (max(1.0 - seen_p, 0.0) + max(q_mass - seen_q, 0.0))

    # downward to j = 0 or until the Poisson terms are negligible
    p, q, ip, iq, gp, gq = p_k, q_k, i_p_k, i_q_k, g_p_k, g_q_k
    j = k
    while j > 0 and p + q > 1e-18:
        ap = j + 0.5
        aq = j + 1.0
        gp *= ap / (xb * (ap - 1.0 + half_nu))
        gq *= aq / (xb * (aq - 1.0 + half_nu))
        ip += gp
        iq += gq
        p *= j / lam
        q *= (j + 0.5) / lam
        j -= 1
        total += p * min(ip, 1.0) + sign_q * q * min(iq, 1.0)
        seen_p += p
        seen_q += q
        n_terms += 1

    # upward until the unseen Poisson mass is below the tail target
    p, q, ip, iq, gp, gq = p_k, q_k, i_p_k, i_q_k, g_p_k, g_q_k
    j = k
    while bound() > _SERIES_TAIL:
        if n_terms > MAX_SERIES_TERMS:
            raise NumericalError("noncentral t distribution series hit the term cap",
                                 norm_cdf(-theta) + 0.5 * total, bound())
        ap = j + 0.5
        aq = j + 1.0
        ip -= gp
        iq -= gq
        gp *= xb * (ap + half_nu) / (ap + 1.0)
        gq *= xb * (aq + half_nu) / (aq + 1.0)
        p *= lam / (j + 1.0)
        q *= lam / (j + 1.5)
        j += 1
        total += p * max(ip, 0.0) + sign_q * q * max(iq, 0.0)
        seen_p += p
        seen_q += q
        n_terms += 1
        if p + q == 0.0:
            break

    value = base + 0.5 * total
    abs_err = bound() + 16.0 * n_terms * _EPS
    if abs_err > tol:
        raise NumericalError("noncentral t distribution series missed its error target", value, abs_err)
    return min(max(value, 0.0), 1.0), abs_err


def _log_chi_scale_const(nu):
    """log of the chi-scale density constant with exp(-nu/2) folded in."""
    half_nu = 0.5 * nu
    if half_nu >= 10.0:
        return math.log(2.0) + 0.5 * math.log(half_nu) - 0.5 * _LOG_2PI - _stirling_tail(half_nu)
    return math.log(2.0) + half_nu * math.log(half_nu) - math.lgamma(half_nu) - half_nu


def _nct_cdf_quad(x, nu, theta):
    """Integral over s = sqrt(V/nu) of Phi(x s - theta) * chi density.

    The log integrand is concave in s, so its maximiser is the root of the
    decreasing derivative; the integrand is normalised there.  Returns
    (value, absolute error estimate).
    """

    def log_f(s):
        return norm_logcdf(x * s - theta) + (nu - 1.0) * math.log(s) - 0.5 * nu * (s - 1.0) * (s + 1.0)

    def slope(s):
        z = x * s - theta
        return x * math.exp(norm_logpdf(z) - norm_logcdf(z)) + (nu - 1.0) / s - nu * s

    lo = 1e-300
    if slope(lo) <= 0.0:
        s_star = lo
    else:
        hi = 1.0
        while slope(hi) > 0.0:
            hi *= 2.0
        s_star = optimize.brentq(slope, lo, hi, xtol=1e-14, rtol=1e-14)
    peak = log_f(s_star)
    curvature = nu + ((nu - 1.0) / (s_star * s_star) if nu > 1.0 else 0.0)
    width = 1.0 / math.sqrt(curvature)
    a = max(s_star - 40.0 * width, 0.0)
    b = s_star + 40.0 * width

    def integrand(s):
        return math.exp(log_f(s) - peak) if s > 0.0 else 0.0

    val, err = integrate.quad(integrand, a, b, points=[s_star], epsabs=0.0, epsrel=1e-13, limit=200)
    scale = math.exp(_log_chi_scale_const(nu) + peak)
    return min(max(scale * val, 0.0), 1.0), scale * err + 64.0 * _EPS


def _nct_cdf_eval(x, nu, theta, tol):
    if 0.5 * theta * theta == 0.0:
        return t_cdf(x, nu).value, 64.0 * _EPS
    if 0.5 * theta * theta <= 0.5 * MAX_SERIES_TERMS:
        try:
            if x >= 0.0:
                return _nct_cdf_nonneg(x, nu, theta, tol)
            upper, err = _nct_cdf_nonneg(-x, nu, -theta, tol)
            return min(max(1.0 - upper, 0.0), 1.0), err
        except NumericalError:
            pass
    value, err = _nct_cdf_quad(x, nu, theta)
    if err > tol:
        raise NumericalError("noncentral t distribution quadrature missed its error target", value, err)
    return value, err


def nct_cdf(x, nu, theta, tol=NONCENTRAL_TOL):
    """``P(T_nu(theta) <= x)``."""
    nu = _check_nu(nu)
    theta = _check_theta(theta)
    x = float(x)
    if x == math.inf:
        return EvalResult(1.0, 0.0)
    if x == -math.inf:
        return EvalResult(0.0, 0.0)
    value, err = _nct_cdf_eval(x, nu, theta, tol)
    return EvalResult(value, err)


def nct_logcdf(x, nu, theta, tol=NONCENTRAL_TOL):
    """Log of :func:`nct_cdf`; relative accuracy degrades once the value nears the absolute tolerance."""
    value = nct_cdf(x, nu, theta, tol).value
    return math.log(value) if value > 0.0 else -math.inf
