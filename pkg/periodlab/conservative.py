"""
Energy-period function of the conservative equation x'' + g(x) = 0,

    T(c) = sqrt(2) * int_a^b dx / sqrt(c - G(x)),    G(a) = G(b) = c,

computed by tanh-sinh quadrature on both halves [a, 0] and [0, b]. Each half has a single inverse square root
singularity at its turning point; the energy gap c - G(x) next to it is evaluated as an integral of g over
[x, b] so that it keeps its relative accuracy when x approaches b.
"""
import functools
import logging
import math
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy
from numpy.polynomial import polynomial as P
from scipy import optimize

from .config import QuadratureSettings, WellSettings
from .errors import (DegenerateWell, DomainError, EnergyOutOfRange, NotPolynomial, QuadratureNoConvergence,
                     TooFewSamples)
from .expr import as_expr, compile_expr
from .jets import gauss_kronrod, polynomial_coefficients

logger = logging.getLogger(__name__)

ENERGY = 'energy'
AMPLITUDE = 'amplitude'
QUADRATURE = 'quadrature'
RETURN_MAP = 'return_map'

INCREASING = 'increasing'
DECREASING = 'decreasing'
CONSTANT = 'constant'
MIXED = 'mixed'

TurningPoints = namedtuple('TurningPoints', ['c', 'a', 'b'])
WellRange = namedtuple('WellRange', ['c_max', 'a_min', 'b_max'])


@dataclass(frozen=True)
class Sample:
    param: float
    T: float
    phi: float = None


@dataclass(frozen=True)
class PeriodCurve:
    """
    sampled period function. param is an energy (quadrature) or an amplitude on the positive x-axis
    (return map); phi is the return map displacement, None for quadrature samples.
    """
    samples: tuple
    parameterization: str
    method: str
    tolerance: float

    def __post_init__(self):
        params = [s.param for s in self.samples]
        if any(b <= a for a, b in zip(params, params[1:])):
            raise ValueError("period curve parameters must be strictly increasing")
        if any(not s.T > 0 for s in self.samples):
            raise ValueError("periods must be positive")

    @property
    def params(self):
        return numpy.array([s.param for s in self.samples])

    @property
    def periods(self):
        return numpy.array([s.T for s in self.samples])

    def __len__(self):
        return len(self.samples)


# potential and well

@functools.lru_cache(maxsize=64)
def _primitive_coefficients(g):
    try:
        return tuple(P.polyint(polynomial_coefficients(g)))
    except NotPolynomial:
        return None


def potential(g, x, rel_tol=1e-12, max_depth=40):
    """
    G(x) = int_0^x g(s) ds

    Args:
        g: Expr or expression text
        x: float
        rel_tol: tolerance of the quadrature path, used when g is not a polynomial
        max_depth: bisection depth of the quadrature path

    Returns:
        float

    """
    g = as_expr(g)
    coeffs = _primitive_coefficients(g)
    if coeffs is not None:
        return float(P.polyval(float(x), coeffs))
    if x == 0:
        return 0.0
    return gauss_kronrod(compile_expr(g), 0.0, float(x), rel_tol=rel_tol, max_depth=max_depth)


def _side_end(g, sign, settings):
    """outer end of the well on one side: the nearest zero of g, the last point g is defined at, or the cap"""
    fun = compile_expr(g)
    step = settings.scan_fraction * settings.cap
    n = int(round(1.0 / settings.scan_fraction))
    inner = sign * step * 1e-3
    previous = inner
    seen_nonzero = False
    for k in range(1, n + 1):
        x = sign * step * k
        try:
            value = fun(x)
        except DomainError:
            logger.debug("well_range: g undefined at %g, well ends at %g", x, previous)
            if not seen_nonzero:
                raise DegenerateWell("g is undefined right next to 0 on the %s side" % _side_name(sign))
            return previous
        if value != 0:
            seen_nonzero = True
        if x * value <= 0:
            if k == 1 and fun(inner) * inner <= 0:
                raise DegenerateWell("g has no sign-definite neighbourhood on the %s side of 0"
                                     % _side_name(sign))
            if value == 0:
                return x
            return optimize.brentq(fun, previous, x, xtol=1e-15, rtol=4 * numpy.finfo(float).eps)
        previous = x
    if not seen_nonzero:
        raise DegenerateWell("g vanishes identically on the %s side of 0" % _side_name(sign))
    return sign * settings.cap


def _side_name(sign):
    return 'positive' if sign > 0 else 'negative'


@functools.lru_cache(maxsize=64)
def _well(g, cap, scan_fraction, pullback):
    settings = WellSettings(cap=cap, scan_fraction=scan_fraction, pullback=pullback)
    left = _side_end(g, -1, settings)
    right = _side_end(g, +1, settings)
    c_max = (1.0 - pullback) * min(potential(g, left), potential(g, right))
    if not c_max > 0:
        raise DegenerateWell("the potential well around 0 is empty")
    a_min = _solve_side(g, c_max, left)
    b_max = _solve_side(g, c_max, right)
    logger.debug("well_range(%s): zeros/edges at %g, %g; c_max=%.17g", g, left, right, c_max)
    return WellRange(c_max, a_min, b_max), (left, right)


def well_range(g, settings=None):
    """
    largest energy c_max below which the orbits of x'' + g(x) = 0 stay in the well around 0

    Args:
        g: Expr or expression text
        settings: WellSettings, the cap bounds the searched |x|

    Returns:
        WellRange(c_max, a_min, b_max), with a_min, b_max the turning points at c_max

    Raises:
        DegenerateWell: g vanishes identically on one side of 0

    """
    settings = settings or WellSettings()
    g = as_expr(g)
    return _well(g, settings.cap, settings.scan_fraction, settings.pullback)[0]


def well_edges(g, settings):
    return _well(g, settings.cap, settings.scan_fraction, settings.pullback)[1]


def _solve_side(g, c, edge):
    """root of G(x) = c between 0 and the side edge, bracketed then Newton polished"""
    fun = compile_expr(g)

    def residual(x):
        return potential(g, x) - c

    root = optimize.brentq(residual, 0.0, edge, xtol=1e-300, rtol=4 * numpy.finfo(float).eps, maxiter=200)
    polished = optimize.newton(residual, root, fprime=fun, tol=abs(root) * 1e-15, maxiter=4, disp=False)
    lo, hi = sorted((0.0, edge))
    if lo < polished < hi and abs(residual(polished)) <= abs(residual(root)):
        return float(polished)
    return float(root)


def turning_points(g, c, settings=None):
    """
    the turning points a < 0 < b of the conservative orbit at energy c

    Raises:
        EnergyOutOfRange: c is not in (0, c_max) of well_range

    """
    settings = settings or WellSettings()
    g = as_expr(g)
    c = float(c)
    well = well_range(g, settings)
    if not 0 < c < well.c_max:
        raise EnergyOutOfRange("energy %.17g outside the well (0, %.17g)" % (c, well.c_max))
    left, right = well_edges(g, settings)
    return TurningPoints(c, _solve_side(g, c, left), _solve_side(g, c, right))


# period

class _HalfIntegral:
    """
    int dx / sqrt(c - G(x)) between 0 and the turning point `end`, in the tanh-sinh variable t. delta is the
    distance of x from the turning point.
    """
    def __init__(self, g, end, settings):
        self.fun = compile_expr(g)
        self.end = end
        self.width = abs(end)
        self.sign = 1.0 if end > 0 else -1.0
        nodes, weights = numpy.polynomial.legendre.leggauss(settings.gap_nodes)
        self.s = 0.5 * (nodes + 1.0)
        self.w = 0.5 * weights

    def __call__(self, t):
        u = 0.5 * math.pi * numpy.sinh(t)
        delta = self.width / (1.0 + numpy.exp(2.0 * u))
        jacobian = self.width * 0.25 * math.pi * numpy.cosh(t) / numpy.cosh(u) ** 2
        inner = self.end - self.sign * delta[:, None] * self.s[None, :]
        gap = self.sign * delta * numpy.dot(self.fun(inner), self.w)
        return jacobian / numpy.sqrt(gap)


def _tanh_sinh(halves, settings, tol):
    h = 0.5
    n = int(math.ceil(settings.t_max / h))
    t = h * numpy.arange(-n, n + 1)
    total = h * sum(numpy.sum(half(t)) for half in halves)
    estimate = math.sqrt(2.0) * total
    for level in range(1, settings.max_level + 1):
        h *= 0.5
        n = int(math.ceil(settings.t_max / h))
        t = h * numpy.arange(-n + 1, n + 1, 2)
        total = 0.5 * total + h * sum(numpy.sum(half(t)) for half in halves)
        previous, estimate = estimate, math.sqrt(2.0) * total
        logger.debug("tanh-sinh level %d: T=%.17g, change %.3g", level, estimate, abs(estimate - previous))
        if level >= settings.min_level and abs(estimate - previous) <= tol:
            return estimate
    raise QuadratureNoConvergence("tanh-sinh did not reach %.3g after %d levels (last change %.3g)"
                                  % (tol, settings.max_level, abs(estimate - previous)))


def period_conservative(g, c, settings=None, well_settings=None):
    """
    period of the conservative orbit at energy c

    Args:
        g: Expr or expression text
        c: energy level, 0 < c < c_max
        settings: QuadratureSettings
        well_settings: WellSettings

    Returns:
        float

    """
    settings = settings or QuadratureSettings()
    tp = turning_points(g, c, well_settings)
    g = as_expr(g)
    with numpy.errstate(over='ignore', under='ignore'):
        return _tanh_sinh([_HalfIntegral(g, tp.a, settings), _HalfIntegral(g, tp.b, settings)], settings,
                          settings.tol)


def geometric_grid(lo, hi, n):
    grid = lo * (hi / lo) ** (numpy.arange(n) / (n - 1.0))
    grid[0], grid[-1] = lo, hi
    return grid


def sample_map(fun, params, workers=1):
    """fun over params, order preserving; a thread pool is used when workers > 1"""
    if workers is None or workers <= 1:
        return [fun(p) for p in params]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fun, params))


def period_curve_conservative(g, c_lo, c_hi, n, settings=None, well_settings=None, workers=1):
    """
    n periods on a geometric energy grid between c_lo and c_hi

    Returns:
        PeriodCurve parameterized by energy

    """
    settings = settings or QuadratureSettings()
    g = as_expr(g)
    if n < 2:
        raise TooFewSamples("a period curve needs n >= 2 samples, got %d" % n)
    well = well_range(g, well_settings)
    if not 0 < c_lo < c_hi < well.c_max:
        raise EnergyOutOfRange("energy range [%.17g, %.17g] outside the well (0, %.17g)"
                               % (c_lo, c_hi, well.c_max))
    energies = geometric_grid(float(c_lo), float(c_hi), n)
    periods = sample_map(lambda c: period_conservative(g, c, settings, well_settings), energies, workers)
    samples = tuple(Sample(float(c), float(T)) for c, T in zip(energies, periods))
    return PeriodCurve(samples, ENERGY, QUADRATURE, settings.tol)


def monotonicity_verdict(curve):
    """
    classifies a sampled period function

    Returns:
        'constant' if every T is within 10*tolerance of the mean, 'increasing' or 'decreasing' if every
        consecutive difference clears 10*tolerance with that sign, 'mixed' otherwise

    Raises:
        TooFewSamples: fewer than 3 samples

    """
    if len(curve.samples) < 3:
        raise TooFewSamples("a monotonicity verdict needs at least 3 samples, got %d" % len(curve.samples))
    periods = curve.periods
    threshold = 10.0 * curve.tolerance
    if numpy.max(numpy.abs(periods - periods.mean())) <= threshold:
        return CONSTANT
    steps = numpy.diff(periods)
    if numpy.all(steps > threshold):
        return INCREASING
    if numpy.all(steps < -threshold):
        return DECREASING
    return MIXED
