import enum
import logging
import math
import warnings

from scipy import integrate

from app.models.sop import QuadResult
from app.services.custom_errors import ConvergenceError, NumericalError, ValidationError

logger = logging.getLogger(__name__)

ABS_FLOOR = 1e-14
DEFAULT_REL_TOL = 1e-9
DEFAULT_BUDGET = 2000000
# QUADPACK's 21-point Gauss-Kronrod rule spends 21 evaluations per subinterval
_POINTS_PER_INTERVAL = 21


class DomainMap(enum.Enum):
    """Maps of [0, 1) onto [0, inf): x(t) and dx/dt"""
    RATIONAL = 'rational'
    LOGARITHMIC = 'logarithmic'

    def point(self, t):
        if self is DomainMap.RATIONAL:
            return t / (1.0 - t)
        return -math.log1p(-t)

    def jacobian(self, t):
        if self is DomainMap.RATIONAL:
            return 1.0 / (1.0 - t) ** 2
        return 1.0 / (1.0 - t)


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spend(self, dimension):
        self.used += 1
        if self.used > self.limit:
            raise _BudgetExhausted(dimension)


class _BudgetExhausted(Exception):
    def __init__(self, dimension):
        Exception.__init__(self, dimension)
        self.dimension = dimension


def _mapped(f, mapping, budget, dimension):
    def g(t):
        if t >= 1.0:
            return 0.0
        budget.spend(dimension)
        x = mapping.point(t)
        fx = f(x)
        if not math.isfinite(fx):
            raise NumericalError(f"integrand returned {fx} at {dimension} = {x!r}",
                                 payload={"abscissa": x, "dimension": dimension, "value": str(fx)})
        return fx * mapping.jacobian(t)
    return g


def _quad(g, rel_tol, budget, dimension):
    intervals = max(50, (budget.limit - budget.used) // _POINTS_PER_INTERVAL)
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', integrate.IntegrationWarning)
        result = integrate.quad(g, 0.0, 1.0, epsabs=ABS_FLOOR, epsrel=rel_tol, limit=intervals, full_output=1)
    value, abserr = result[0], result[1]
    if len(result) > 3:
        raise ConvergenceError(f"{dimension} integral did not converge: {result[3]}",
                               estimate=value, error_bound=abserr,
                               evaluations=budget.used, dimension=dimension)
    return value, abserr


def _check(rel_tol, budget):
    if not rel_tol > 0:
        raise ValidationError(f"rel_tol must be positive, got {rel_tol}")
    if int(budget) != budget or budget < 1:
        raise ValidationError(f"budget must be a positive integer, got {budget}")


def integrate_semi_inf(f, rel_tol=DEFAULT_REL_TOL, budget=DEFAULT_BUDGET, mapping=DomainMap.RATIONAL):
    """Integral of f over [0, inf) after mapping the domain onto [0, 1)"""
    _check(rel_tol, budget)
    mapping = DomainMap(mapping)
    counter = _Budget(int(budget))
    try:
        value, abserr = _quad(_mapped(f, mapping, counter, 'x'), rel_tol, counter, 'x')
    except _BudgetExhausted as e:
        raise ConvergenceError(f"evaluation budget of {budget} exhausted",
                               evaluations=counter.used, dimension=e.dimension)
    logger.debug(f"integrate_semi_inf: value={value:.15g} error={abserr:.3g} evaluations={counter.used}")
    return QuadResult(value=value, abs_error_estimate=abserr, evaluations=counter.used)


def integrate_double_semi_inf(f, rel_tol=DEFAULT_REL_TOL, budget=DEFAULT_BUDGET, mapping=DomainMap.RATIONAL):
    """
    Iterated integral of f(x, y) over [0, inf)^2: adaptive outer integral over
    y, adaptive inner integral over x at a tenth of the outer tolerance.
    """
    _check(rel_tol, budget)
    mapping = DomainMap(mapping)
    counter = _Budget(int(budget))
    inner_tol = rel_tol / 10.0
    inner_error = [0.0]

    def inner(y):
        value, abserr = _quad(_mapped(lambda x: f(x, y), mapping, counter, 'x'), inner_tol, counter, 'x')
        inner_error[0] = max(inner_error[0], abserr)
        return value

    try:
        value, abserr = _quad(_mapped(inner, mapping, counter, 'y'), rel_tol, counter, 'y')
    except _BudgetExhausted as e:
        raise ConvergenceError(f"evaluation budget of {budget} exhausted in the {e.dimension} integral",
                               evaluations=counter.used, dimension=e.dimension)
    logger.debug(f"integrate_double_semi_inf: value={value:.15g} error={abserr:.3g} evaluations={counter.used}")
    return QuadResult(value=value, abs_error_estimate=abserr + inner_error[0], evaluations=counter.used)
