"""
Special functions used by the closed-form SOP expressions.

Ei on the negative axis comes from scipy.special; the exponentially scaled
forms e^t E_m(t) use the modified Lentz continued fraction above t = 1 so they
stay finite where e^t overflows and E_m(t) underflows. The hypergeometric
family 2F1(n+1, 1; n+2; z) is evaluated through an mpmath context so the
same code serves double precision (mpmath.fp) and extended precision
(mpmath.mp).
"""
import logging
import math

import mpmath
from scipy import special

from app.services.custom_errors import NumericalError, ValidationError

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.5772156649015329
_CF_EPS = 1e-16
_CF_FPMIN = 1e-300
_CF_MAX_ITER = 100000
_SERIES_MAX_TERMS = 2000000
# closed form accepted while it loses at most three digits
_MAX_CANCELLATION = 1e3
_DIRECT_SERIES_RADIUS = 0.25


def _positive(t, name):
    t = float(t)
    if not t > 0 or math.isinf(t):
        raise ValidationError(f"{name} needs a finite positive argument, got {t}")
    return t


def ei_neg(t: float) -> float:
    """Ei(-t) = -E1(t) for t > 0"""
    t = _positive(t, 'ei_neg')
    return -float(special.exp1(t))


def expn_scaled(m: int, t: float) -> float:
    """e^t E_m(t) for integer m >= 1 and t > 0"""
    t = _positive(t, 'expn_scaled')
    if m < 1 or int(m) != m:
        raise ValidationError(f"expn_scaled order must be a positive integer, got {m}")
    m = int(m)
    if t <= 1.0:
        return math.exp(t) * float(special.expn(m, t))

    b = t + m
    c = 1.0 / _CF_FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _CF_MAX_ITER):
        an = -i * (m - 1 + i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise NumericalError(f"continued fraction for E_{m}({t}) did not converge",
                         payload={"order": m, "argument": t})


def ei_neg_scaled(t: float) -> float:
    """e^t Ei(-t) for t > 0, finite up to t = 1e8 and beyond"""
    t = _positive(t, 'ei_neg_scaled')
    return -expn_scaled(1, t)


def hyp2f1_n(n: int, z, ctx=mpmath.fp):
    """
    2F1(n+1, 1; n+2; z) for integer n >= 1 and real z < 1.

    Direct series (n+1) sum z^k/(n+1+k) for |z| <= 1/4. Beyond that the
    logarithmic closed form (n+1) z^-(n+1) (-ln(1-z) - sum_{m<=n} z^m/m) is
    used when its cancellation is mild; near z = 1 the logarithm dominates
    and the form is well conditioned. Otherwise positive z falls back to the
    direct series and negative z to the Pfaff-transformed series
    (1-z)^-1 2F1(1, 1; n+2; z/(z-1)), whose terms are all positive.
    """
    if int(n) != n or n < 1:
        raise ValidationError(f"hyp2f1_n needs an integer n >= 1, got {n}")
    n = int(n)
    z = ctx.mpf(z)
    if not z < 1:
        raise ValidationError(f"hyp2f1_n needs z < 1, got {z}")
    if z == 0:
        return ctx.mpf(1)
    if abs(z) <= _DIRECT_SERIES_RADIUS:
        return _direct_series(n, z, ctx)

    value, condition = _log_closed_form(n, z, ctx)
    if condition < _MAX_CANCELLATION:
        return value
    if z > 0:
        return _direct_series(n, z, ctx)
    logger.debug(f"hyp2f1_n(n={n}, z={z}) closed form too ill-conditioned ({condition:.3g}); "
                 f"using the transformed series")
    return _pfaff_series(n, z, ctx)


def _direct_series(n, z, ctx):
    total = ctx.mpf(0)
    power = ctx.mpf(1)
    for k in range(_SERIES_MAX_TERMS):
        term = power / (n + 1 + k)
        total += term
        if abs(term) <= ctx.eps * abs(total):
            return (n + 1) * total
        power *= z
    raise NumericalError(f"hypergeometric series did not converge for n={n}, z={z}")


def _log_closed_form(n, z, ctx):
    log_term = -ctx.log(1 - z)
    largest = abs(log_term)
    partial = ctx.mpf(0)
    power = ctx.mpf(1)
    for m in range(1, n + 1):
        power *= z
        term = power / m
        partial += term
        largest = max(largest, abs(term))
    bracket = log_term - partial
    if bracket == 0:
        return bracket, ctx.inf
    value = (n + 1) * bracket / z ** (n + 1)
    return value, largest / abs(bracket)


def _pfaff_series(n, z, ctx):
    w = z / (z - 1)
    total = ctx.mpf(0)
    term = ctx.mpf(1)
    for k in range(_SERIES_MAX_TERMS):
        total += term
        if term <= ctx.eps * total:
            return total / (1 - z)
        # ratio of consecutive terms of 2F1(1, 1; n+2; w)
        term *= w * (k + 1) / (n + 2 + k)
    raise NumericalError(f"transformed hypergeometric series did not converge for n={n}, z={z}")
