import logging
import math

import mpmath

from app.models.sop import SchemeKind, SopMethod, SopValue
from app.models.system_config import AsymptoticParams, DerivedParams, SystemConfig
from app.services import quadrature
from app.services.custom_errors import ConvergenceError, ValidationError
from app.services.params_service import ParamsService
from app.services.specfun import expn_scaled, hyp2f1_n
from constants import MAX_TRANSMITTERS

logger = logging.getLogger(__name__)

DEFAULT_REL_TOL = 1e-8
# |a - b| below this fraction of max(a, b) switches to the Taylor expansion about a = b
DEGENERATE_GAP = 1e-2
_TAYLOR_TERMS = 8
_EXTRA_DIGITS = 30


def _check_scheme_inputs(n_tx, s):
    if isinstance(n_tx, bool) or int(n_tx) != n_tx or not 1 <= n_tx <= MAX_TRANSMITTERS:
        raise ValidationError(f"n_tx must be an integer in [1, {MAX_TRANSMITTERS}], got {n_tx}")
    if not 0.0 <= s <= 1.0:
        raise ValidationError(f"s must lie in [0, 1], got {s}")
    return int(n_tx), float(s)


def _check_x(x):
    if not x >= 0:
        raise ValidationError(f"x must be >= 0, got {x}")
    return float(x)


def _alternating_binomials(n_tx, s):
    """(n, C(N, n) (-1)^(n+1) s^n) for n = 1..N"""
    for n in range(1, n_tx + 1):
        yield n, math.comb(n_tx, n) * (-1) ** (n + 1) * s ** n


def _exp_rational_integrals(a, b, c):
    """
    J1 = int_0^inf e^{-cx} / ((x+a)(x+b)) dx and
    J2 = int_0^inf e^{-cx} / ((x+a)(x+b)^2) dx, for a, b, c > 0.
    """
    gap = a - b
    if abs(gap) >= DEGENERATE_GAP * max(a, b):
        ga = expn_scaled(1, a * c)
        gb = expn_scaled(1, b * c)
        j1 = (gb - ga) / gap
        # int e^{-cx} (x+b)^-2 dx = 1/b - c gb, taken as e^{cb} E_2(cb) / b to avoid cancellation
        m2 = expn_scaled(2, b * c) / b
        j2 = (ga - gb) / gap ** 2 + m2 / gap
        return j1, j2

    logger.debug(f"a={a:.12g} and b={b:.12g} nearly coincide; using the expansion about a = b")
    # M_m = int_0^inf e^{-cx} (x+b)^-m dx = b^(1-m) e^{cb} E_m(cb)
    moments = {m: b ** (1 - m) * expn_scaled(m, c * b) for m in range(2, _TAYLOR_TERMS + 3)}
    j1 = math.fsum((-gap) ** k * moments[k + 2] for k in range(_TAYLOR_TERMS))
    j2 = math.fsum((-gap) ** k * moments[k + 3] for k in range(_TAYLOR_TERMS))
    return j1, j2


def _rational_integral(a, b):
    """int_0^inf dx / ((x+a)(x+b)^2) for a, b > 0"""
    gap = a - b
    if abs(gap) >= DEGENERATE_GAP * max(a, b):
        return (math.log(b) - math.log(a)) / gap ** 2 + 1.0 / (b * gap)
    return math.fsum((-gap) ** k / ((k + 2) * b ** (k + 2)) for k in range(_TAYLOR_TERMS))


class AnalyticService:
    @staticmethod
    def cdf_gamma_tr(x: float, p: DerivedParams) -> float:
        """CDF of the primary receiver SINR under interference from the selected transmitter"""
        x = _check_x(x)
        decay = math.exp(-p.lambda_tr * x / p.gamma_t)
        if p.gamma_s <= 0.0:
            return 1.0 - decay
        kappa = p.lambda_sr * p.gamma_t / (p.lambda_tr * p.gamma_s)
        return 1.0 - kappa / (x + kappa) * decay

    @staticmethod
    def cdf_gamma_sd_sts(x: float, p: DerivedParams, n_tx: int, s: float) -> float:
        """CDF of the destination SINR after STS selection, backhaul reliability included"""
        x = _check_x(x)
        n_tx, s = _check_scheme_inputs(n_tx, s)
        if p.gamma_s <= 0.0:
            return 1.0
        terms = []
        for n, weight in _alternating_binomials(n_tx, s):
            mu = p.lambda_td * p.gamma_s / (n * p.lambda_sd * p.gamma_t)
            terms.append(weight * mu / (x + mu) * math.exp(-n * p.lambda_sd * x / p.gamma_s))
        return 1.0 - math.fsum(terms)

    @staticmethod
    def cdf_gamma_sd_ots_conditional(x: float, p: DerivedParams, s: float, h_td: float) -> float:
        """Single-branch destination SINR CDF given |h_TD|^2, with the backhaul mixture"""
        x = _check_x(x)
        if p.gamma_s <= 0.0:
            return 1.0
        return 1.0 - s * math.exp(-p.lambda_sd * (p.gamma_t * h_td + 1.0) * x / p.gamma_s)

    @staticmethod
    def cdf_gamma_se(x: float, p: DerivedParams) -> float:
        x = _check_x(x)
        if p.gamma_s <= 0.0:
            return 1.0
        nu = p.lambda_te * p.gamma_s / (p.lambda_se * p.gamma_t)
        return 1.0 - nu / (x + nu) * math.exp(-p.lambda_se * x / p.gamma_s)

    @staticmethod
    def pdf_gamma_se(x: float, p: DerivedParams) -> float:
        x = _check_x(x)
        if p.gamma_s <= 0.0:
            raise ValidationError("the eavesdropper SINR has no density when the secondary is silenced")
        nu = p.lambda_te * p.gamma_s / (p.lambda_se * p.gamma_t)
        decay = math.exp(-p.lambda_se * x / p.gamma_s)
        return (p.lambda_te / p.gamma_t) * decay / (x + nu) + nu * decay / (x + nu) ** 2

    @staticmethod
    def sop_sts(p: DerivedParams, n_tx: int, s: float) -> SopValue:
        """Closed-form SOP of sub-optimal transmitter selection"""
        n_tx, s = _check_scheme_inputs(n_tx, s)
        if p.gamma_s <= 0.0 or s == 0.0:
            return SopValue(1.0, SopMethod.EXACT_CLOSED_FORM)

        rho, gamma_s, gamma_t = p.rho, p.gamma_s, p.gamma_t
        b = p.lambda_te * gamma_s / (p.lambda_se * gamma_t)
        terms = []
        for n, weight in _alternating_binomials(n_tx, s):
            n_sd = n * p.lambda_sd
            a = (p.lambda_td * gamma_s + n_sd * gamma_t * (rho - 1.0)) / (n_sd * rho * gamma_t)
            c = (n_sd * rho + p.lambda_se) / gamma_s
            i1, i2 = _exp_rational_integrals(a, b, c)
            prefactor = weight * p.lambda_te * p.lambda_td * gamma_s / (n_sd * rho * gamma_t ** 2) \
                * math.exp(-n_sd * (rho - 1.0) / gamma_s)
            terms.append(prefactor * (i1 + gamma_s / p.lambda_se * i2))
        return SopValue(1.0 - math.fsum(terms), SopMethod.EXACT_CLOSED_FORM)

    @staticmethod
    def sop_ots(p: DerivedParams, n_tx: int, s: float, rel_tol: float = DEFAULT_REL_TOL,
                budget: int = quadrature.DEFAULT_BUDGET) -> SopValue:
        """SOP of optimal transmitter selection as a double integral over |h_TD|^2, |h_TE|^2"""
        n_tx, s = _check_scheme_inputs(n_tx, s)
        if p.gamma_s <= 0.0 or s == 0.0:
            return SopValue(1.0, SopMethod.EXACT_QUADRATURE)

        lambda_td, lambda_te, gamma_t = p.lambda_td, p.lambda_te, p.gamma_t
        rho_sd = p.rho * p.lambda_sd
        decay = p.lambda_sd * (p.rho - 1.0) / p.gamma_s

        def integrand(x, y):
            td = gamma_t * x + 1.0
            te = p.lambda_se * (gamma_t * y + 1.0)
            branch = 1.0 - s * te / (rho_sd * td + te) * math.exp(-decay * td)
            return branch ** n_tx * lambda_td * math.exp(-lambda_td * x) * lambda_te * math.exp(-lambda_te * y)

        try:
            result = quadrature.integrate_double_semi_inf(integrand, rel_tol=rel_tol, budget=budget)
        except ConvergenceError as e:
            e.message = f"OTS SOP (N={n_tx}, s={s}, Gamma_T={gamma_t:.6g}): {e.message}"
            raise
        logger.debug(f"OTS SOP quadrature used {result.evaluations} evaluations")
        return SopValue(result.value, SopMethod.EXACT_QUADRATURE)

    @staticmethod
    def sop_sts_asymptotic(q: AsymptoticParams, n_tx: int, s: float) -> SopValue:
        """High-SNR SOP floor of STS; takes no Gamma_T"""
        n_tx, s = _check_scheme_inputs(n_tx, s)
        if q.xi <= 0.0 or s == 0.0:
            return SopValue(1.0, SopMethod.ASYMPTOTIC)
        xi, rho = q.xi, q.rho
        b = q.lambda_te * q.lambda_sr * xi / q.lambda_se
        terms = []
        for n, weight in _alternating_binomials(n_tx, s):
            n_sd = n * q.lambda_sd
            a = (n_sd * (rho - 1.0) + q.lambda_sr * q.lambda_td * xi) / (n_sd * rho)
            prefactor = weight * q.lambda_te * q.lambda_td * q.lambda_sr ** 2 * xi ** 2 \
                / (n_sd * rho * q.lambda_se)
            terms.append(prefactor * _rational_integral(a, b))
        return SopValue(1.0 - math.fsum(terms), SopMethod.ASYMPTOTIC)

    @staticmethod
    def sop_ots_asymptotic(q: AsymptoticParams, n_tx: int, s: float) -> SopValue:
        """
        High-SNR SOP floor of OTS; takes no Gamma_T.

        The polynomial and hypergeometric parts of each n >= 2 term cancel to
        roughly (a b / lambda_te)^(n-1), so the sum is carried in mpmath with
        enough extra digits to absorb that.
        """
        n_tx, s = _check_scheme_inputs(n_tx, s)
        if q.xi <= 0.0 or s == 0.0:
            return SopValue(1.0, SopMethod.ASYMPTOTIC)

        a_max = (q.lambda_sd * (q.rho - 1.0) * n_tx + q.lambda_td * q.lambda_sr * q.xi) / (q.lambda_sr * q.xi)
        b_float = q.lambda_se / (q.rho * q.lambda_sd)
        ratio = max(2.0, a_max * b_float / q.lambda_te, q.lambda_te / (a_max * b_float))
        digits = _EXTRA_DIGITS + int(math.ceil(n_tx * math.log10(ratio)))
        with mpmath.workdps(digits):
            value = AnalyticService._ots_asymptotic_sum(q, n_tx, s)
        return SopValue(float(value), SopMethod.ASYMPTOTIC)

    @staticmethod
    def _ots_asymptotic_sum(q, n_tx, s):
        mp = mpmath.mp
        lam_sd, lam_se, lam_sr = mp.mpf(q.lambda_sd), mp.mpf(q.lambda_se), mp.mpf(q.lambda_sr)
        lam_td, lam_te = mp.mpf(q.lambda_td), mp.mpf(q.lambda_te)
        rho, xi, s = mp.mpf(q.rho), mp.mpf(q.xi), mp.mpf(s)
        b = lam_se / (rho * lam_sd)

        def a_of(n):
            return (lam_sd * (rho - 1) * n + lam_td * lam_sr * xi) / (lam_sr * xi)

        # n = 1 term, written with a evaluated at n = 1
        a1 = a_of(1)
        gap = lam_te - a1 * b
        eps = gap / lam_te
        if abs(eps) < mp.mpf('1e-8'):
            bracket = mp.fsum(eps ** k / (k + 2) for k in range(12)) / lam_te ** 2
        else:
            bracket = mp.log(lam_te / (a1 * b)) / gap ** 2 - 1 / (gap * lam_te)
        total = 1 - s * lam_se * lam_td * lam_te * n_tx / (rho * lam_sd) * bracket

        for n in range(2, n_tx + 1):
            a = a_of(n)
            polynomial = mp.fsum(
                mp.factorial(k - 1) * mp.factorial(n - k) * (-a) ** (n - k - 1) / (b ** k * lam_te ** (n - k + 1))
                for k in range(1, n))
            z = (lam_te - a * b) / lam_te
            hyper = (-a) ** (n - 1) * mp.factorial(n) / ((n + 1) * lam_te ** (n + 1)) * hyp2f1_n(n, z, ctx=mp)
            weight = math.comb(n_tx, n) * (-1) ** (n + 1) * s ** n * b ** n * lam_td * lam_te / mp.factorial(n - 1)
            total -= weight * (polynomial + hyper)
        return total

    @staticmethod
    def sop(config: SystemConfig, scheme, method: SopMethod, rel_tol: float = DEFAULT_REL_TOL,
            budget: int = quadrature.DEFAULT_BUDGET) -> SopValue:
        """Analytic or asymptotic SOP of a known-backhaul scheme at one configuration"""
        scheme = SchemeKind.parse(scheme)
        if scheme.is_blind:
            raise ValidationError(f"no analytic SOP exists for the blind scheme {scheme.value}")
        n_tx, s = config.n_transmitters, config.backhaul_prob
        if method is SopMethod.ASYMPTOTIC:
            q = ParamsService.asymptotic_params(config)
            if scheme is SchemeKind.STS_KNOWN:
                return AnalyticService.sop_sts_asymptotic(q, n_tx, s)
            return AnalyticService.sop_ots_asymptotic(q, n_tx, s)
        p = ParamsService.derive(config)
        if scheme is SchemeKind.STS_KNOWN:
            return AnalyticService.sop_sts(p, n_tx, s)
        return AnalyticService.sop_ots(p, n_tx, s, rel_tol=rel_tol, budget=budget)
