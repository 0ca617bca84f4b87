"""
Lienard systems x'' + f(x)x' + g(x) = 0: embedded Dormand-Prince integration, the Poincare return map on the
positive x-axis, period curves, the function C(x) characterizing isochronous centers and its companion sigma(x),
and the reduction of Rayleigh equations x'' + F(x') + x = 0.

The integrated field is

    x' = -sqrt(g'(0)) y,    y' = g(x)/sqrt(g'(0)) - f(x) y,

which is x'' + f(x)x' + g(x) = 0 for y = -x'/sqrt(g'(0)). Orbits start at (c, 0), turn counter-clockwise and
return to the positive x-axis after one period.
"""
import functools
import logging
import math
import warnings
from collections import namedtuple
from dataclasses import dataclass

import numpy

from .config import IntegratorSettings, WellSettings
from .conservative import AMPLITUDE, RETURN_MAP, PeriodCurve, Sample, geometric_grid, sample_map, well_edges, \
    well_range
from .errors import (AmplitudeOutOfRange, NoReturn, NotACenter, NotAtOrigin, NotPolynomial, StepUnderflow,
                     TooFewSamples)
from .expr import as_expr, compile_expr, differentiate
from .jets import derivatives_at, eval_jet, moment_integral, poly_derivative
from .system import SystemSpec, validate_system

logger = logging.getLogger(__name__)

PhaseState = namedtuple('PhaseState', ['x', 'y', 't'])

DEFAULT_SERIES_ORDER = 10
SWITCH_FRACTION = 1e-2


@dataclass(frozen=True)
class ReturnMapResult:
    c: float
    T: float
    phi: float
    steps: int
    tolerance: float


def _check_system(sys):
    if not isinstance(sys, SystemSpec):
        raise TypeError("you must pass a valid SystemSpec instance")


def vector_field(sys, state):
    """
    right hand side of the rescaled Lienard system

    Args:
        sys: SystemSpec
        state: PhaseState (or any (x, y, ...) sequence)

    Returns:
        (dx, dy)

    """
    _check_system(sys)
    x, y = state[0], state[1]
    root = math.sqrt(sys.gp0)
    return -root * y, sys.g_at(x) / root - sys.f_at(x) * y


# Dormand-Prince 5(4) tableau
A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = 9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0
B1, B3, B4, B5, B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# differences between the fifth and fourth order weights
E1 = B1 - 5179.0 / 57600.0
E3 = B3 - 7571.0 / 16695.0
E4 = B4 - 393.0 / 640.0
E5 = B5 - -92097.0 / 339200.0
E6 = B6 - 187.0 / 2100.0
E7 = -1.0 / 40.0


class DormandPrince:
    """
    embedded Runge-Kutta 5(4) stepper for one Lienard system, with PI step size control. The last stage of an
    accepted step is the first stage of the next one.
    """
    SAFETY = 0.9
    ALPHA = 0.7 / 5.0
    BETA = 0.4 / 5.0
    MIN_FACTOR = 0.2
    MAX_FACTOR = 5.0

    def __init__(self, sys, rtol=1e-10, atol=None, h_min=1e-14):
        _check_system(sys)
        self.fx = compile_expr(sys.f)
        self.gx = compile_expr(sys.g)
        self.root = math.sqrt(sys.gp0)
        self.rtol = rtol
        self.atol = atol if atol is not None else rtol * 1e-2
        self.h_min = h_min
        self.previous_error = 1e-4
        self.rejected = 0
        self._k1 = None

    def rhs(self, x, y):
        return -self.root * y, self.gx(x) / self.root - self.fx(x) * y

    def attempt(self, x, y, h, k1=None):
        """
        one step of size h without error control

        Returns:
            (x5, y5, error norm, last stage)

        """
        f = self.rhs
        k1x, k1y = k1 if k1 is not None else f(x, y)
        k2x, k2y = f(x + h * A21 * k1x, y + h * A21 * k1y)
        k3x, k3y = f(x + h * (A31 * k1x + A32 * k2x), y + h * (A31 * k1y + A32 * k2y))
        k4x, k4y = f(x + h * (A41 * k1x + A42 * k2x + A43 * k3x), y + h * (A41 * k1y + A42 * k2y + A43 * k3y))
        k5x, k5y = f(x + h * (A51 * k1x + A52 * k2x + A53 * k3x + A54 * k4x),
                     y + h * (A51 * k1y + A52 * k2y + A53 * k3y + A54 * k4y))
        k6x, k6y = f(x + h * (A61 * k1x + A62 * k2x + A63 * k3x + A64 * k4x + A65 * k5x),
                     y + h * (A61 * k1y + A62 * k2y + A63 * k3y + A64 * k4y + A65 * k5y))
        x5 = x + h * (B1 * k1x + B3 * k3x + B4 * k4x + B5 * k5x + B6 * k6x)
        y5 = y + h * (B1 * k1y + B3 * k3y + B4 * k4y + B5 * k5y + B6 * k6y)
        k7x, k7y = f(x5, y5)
        ex = h * (E1 * k1x + E3 * k3x + E4 * k4x + E5 * k5x + E6 * k6x + E7 * k7x)
        ey = h * (E1 * k1y + E3 * k3y + E4 * k4y + E5 * k5y + E6 * k6y + E7 * k7y)
        sx = self.atol + self.rtol * max(abs(x), abs(x5))
        sy = self.atol + self.rtol * max(abs(y), abs(y5))
        error = max(abs(ex) / sx, abs(ey) / sy)
        return x5, y5, error, (k7x, k7y)

    def step(self, state, h_try):
        """
        one accepted step; rejected attempts are retried with a smaller step

        Returns:
            (new PhaseState, suggested next step, step actually taken)

        Raises:
            StepUnderflow: the step size fell below h_min

        """
        h = h_try
        while True:
            if not h >= self.h_min:
                raise StepUnderflow("step size %.3g below %.3g at t=%.17g" % (h, self.h_min, state.t))
            x5, y5, error, k7 = self.attempt(state.x, state.y, h, self._k1)
            if not (math.isfinite(x5) and math.isfinite(y5)):
                error = math.inf
            if error <= 1.0:
                if error == 0.0:
                    factor = self.MAX_FACTOR
                else:
                    factor = self.SAFETY * error ** -self.ALPHA * self.previous_error ** self.BETA
                    factor = min(self.MAX_FACTOR, max(self.MIN_FACTOR, factor))
                self.previous_error = max(error, 1e-4)
                self._k1 = k7
                return PhaseState(x5, y5, state.t + h), h * factor, h
            self.rejected += 1
            factor = self.SAFETY * error ** -0.2 if math.isfinite(error) else self.MIN_FACTOR
            h *= max(self.MIN_FACTOR, min(1.0, factor))
            logger.debug("rejected step at t=%.6g, error %.3g, retry with h=%.3g", state.t, error, h)


def integrate_step(sys, state, h_try, tol):
    """
    one error-controlled Dormand-Prince step of the Lienard system

    Args:
        sys: SystemSpec
        state: PhaseState
        h_try: trial step size
        tol: relative tolerance, the absolute tolerance is tol*1e-2

    Returns:
        (PhaseState, h_next)

    """
    if not h_try > 0 or not tol > 0:
        raise ValueError("h_try and tol must be positive")
    stepper = DormandPrince(sys, rtol=tol, h_min=IntegratorSettings().h_min)
    new_state, h_next, _ = stepper.step(PhaseState(*state), h_try)
    return new_state, h_next


def small_amplitude_cap(sys, well_settings=None):
    """half the distance from 0 to the nearest zero of g (or to the edge of the searched range)"""
    _check_system(sys)
    left, right = well_edges(sys.g, well_settings or WellSettings())
    return 0.5 * min(abs(left), abs(right))


def return_map(sys, c, tol=None, settings=None, cap=None):
    """
    first return of the orbit through (c, 0) to the positive x-axis

    Args:
        sys: SystemSpec
        c: starting amplitude, 0 < c <= cap
        tol: integrator tolerance, defaults to settings.rtol
        settings: IntegratorSettings
        cap: small-amplitude cap, defaults to small_amplitude_cap(sys)

    Returns:
        ReturnMapResult

    Raises:
        NoReturn: the orbit leaves the bounding box or does not come back within max_period_factor*T0
        StepUnderflow

    """
    _check_system(sys)
    settings = settings or IntegratorSettings.from_env()
    rtol = tol if tol is not None else settings.rtol
    atol = rtol * 1e-2 if tol is not None else settings.atol
    cap = cap if cap is not None else small_amplitude_cap(sys)
    c = float(c)
    if not 0 < c <= cap:
        raise AmplitudeOutOfRange("amplitude %.17g outside (0, %.17g]" % (c, cap))
    T0 = 2.0 * math.pi / math.sqrt(sys.gp0)
    box = settings.box_factor * cap
    t_max = settings.max_period_factor * T0
    stepper = DormandPrince(sys, rtol=rtol, atol=atol, h_min=settings.h_min)

    state = PhaseState(c, 0.0, 0.0)
    h = min(settings.h_init, 0.01 * T0)
    passed_left = False
    steps = 0
    while True:
        new, h_next, taken = stepper.step(state, h)
        steps += 1
        if abs(new.x) > box or abs(new.y) > box:
            raise NoReturn("orbit from c=%.17g left the box |x|,|y| <= %.3g at t=%.6g" % (c, box, new.t))
        if new.t > t_max or steps > settings.max_steps:
            raise NoReturn("orbit from c=%.17g did not return within t=%.6g (%d steps)" % (c, new.t, steps))
        if not passed_left:
            if state.y > 0 >= new.y and new.x < 0:
                passed_left = True
        elif state.y < 0 <= new.y and new.x > 0:
            end = _locate_crossing(stepper, state, new, taken, settings.event_tol)
            break
        state, h = new, h_next

    T = end.t
    phi = end.x - c
    if abs(T - T0) > 0.5 * T0:
        warnings.warn("return time %.6g of c=%.6g is more than 50%% away from 2*pi/sqrt(g'(0)) = %.6g"
                      % (T, c, T0), RuntimeWarning)
    logger.debug("return_map c=%.6g: T=%.17g phi=%.3g in %d steps (%d rejected)", c, T, phi, steps,
                 stepper.rejected)
    return ReturnMapResult(c=c, T=T, phi=phi, steps=steps, tolerance=rtol)


def _locate_crossing(stepper, start, end, h, event_tol):
    """bisection on the sign of y over the step start -> end (y < 0 at start, y >= 0 at end)"""
    if abs(end.y) <= event_tol:
        return end
    lo, hi = 0.0, h
    best = end
    for _ in range(200):
        s = 0.5 * (lo + hi)
        x, y, _, _ = stepper.attempt(start.x, start.y, s)
        best = PhaseState(x, y, start.t + s)
        if abs(y) <= event_tol or hi - lo <= 1e-16 * max(1.0, start.t):
            break
        if y < 0:
            lo = s
        else:
            hi = s
    return best


def period_lienard(sys, c, tol=None, settings=None):
    return return_map(sys, c, tol, settings).T


def period_curve_lienard(sys, c_lo, c_hi, n, tol=None, settings=None, workers=1, cap=None):
    """
    n periods on a geometric amplitude grid, each from the return map

    Returns:
        PeriodCurve parameterized by amplitude, tolerance 100*tol

    Raises:
        NotACenter: some |phi| exceeds the closed-orbit guard 100*tol
        TooFewSamples: n < 2

    """
    _check_system(sys)
    settings = settings or IntegratorSettings.from_env()
    tol = tol if tol is not None else settings.rtol
    if n < 2:
        raise TooFewSamples("a period curve needs n >= 2 samples, got %d" % n)
    cap = cap if cap is not None else small_amplitude_cap(sys)
    if not 0 < c_lo < c_hi <= cap:
        raise AmplitudeOutOfRange("amplitude range [%.17g, %.17g] outside (0, %.17g]" % (c_lo, c_hi, cap))
    amplitudes = geometric_grid(float(c_lo), float(c_hi), n)
    results = sample_map(lambda c: return_map(sys, c, tol, settings, cap), amplitudes, workers)
    guard = 100.0 * tol
    for result in results:
        if abs(result.phi) > guard:
            raise NotACenter("orbit through c=%.17g does not close: phi=%.17g exceeds %.3g"
                             % (result.c, result.phi, guard), c=result.c, phi=result.phi)
    samples = tuple(Sample(r.c, r.T, r.phi) for r in results)
    return PeriodCurve(samples, AMPLITUDE, RETURN_MAP, 100.0 * tol)


# C(x) and sigma(x)

def _moment(sys, x):
    return moment_integral(sys.f, x)


@functools.lru_cache(maxsize=64)
def _series(sys, order):
    f = eval_jet(sys.f, 0.0, order + 1).coeffs
    g = eval_jet(sys.g, 0.0, order).coeffs
    m = numpy.zeros(order + 4)
    k = numpy.arange(2, order + 4)
    m[2:] = f[:order + 2] / k
    square = numpy.convolve(m, m)[:order + 4]
    return (g - square[3:order + 4]) / sys.gp0


def sabatini_series(sys, order=DEFAULT_SERIES_ORDER):
    """Taylor coefficients of C at 0, coeffs[k] = C^(k)(0)/k!"""
    _check_system(sys)
    return _series(sys, order).copy()


def sabatini_switch(sys, well_settings=None):
    """|x| below which sabatini_C uses the Taylor series at 0"""
    well = well_range(sys.g, well_settings)
    return SWITCH_FRACTION * min(abs(well.a_min), abs(well.b_max))


def sabatini_C(sys, x, order=DEFAULT_SERIES_ORDER, x_switch=None):
    """
    C(x) = g(x)/g'(0) - [int_0^x s f(s) ds]^2 / (g'(0) x^3)

    Args:
        sys: SystemSpec
        x: abscissa
        order: order of the Taylor series used for |x| <= x_switch
        x_switch: defaults to sabatini_switch(sys)

    Returns:
        float

    """
    _check_system(sys)
    x = float(x)
    x_switch = sabatini_switch(sys) if x_switch is None else x_switch
    if abs(x) <= x_switch:
        return float(numpy.polynomial.polynomial.polyval(x, _series(sys, order)))
    moment = _moment(sys, x)
    return sys.g_at(x) / sys.gp0 - moment * moment / (sys.gp0 * x ** 3)


def sigma(sys, x):
    """
    sigma(x) = -x^5 (C(x)/x)', evaluated by the explicit formula

        2x^2 f(x) M(x)/g'(0) - 4 M(x)^2/g'(0) + x^3 gn(x) - x^4 gn'(x),  gn(x) = g(x)/g'(0) - x,

    with M(x) = int_0^x s f(s) ds.
    """
    _check_system(sys)
    x = float(x)
    moment = _moment(sys, x)
    g, gp = derivatives_at(sys.g, x, 1)
    gn = g / sys.gp0 - x
    gnp = gp / sys.gp0 - 1.0
    return (2.0 * x * x * sys.f_at(x) * moment - 4.0 * moment * moment) / sys.gp0 + x ** 3 * gn - x ** 4 * gnp


def sigma_from_C(sys, x, step=1e-6):
    """-x^5 (C(x)/x)' by a central difference, the cross-check of sigma"""
    _check_system(sys)
    x = float(x)

    def ratio(u):
        return sabatini_C(sys, u) / u

    return -x ** 5 * (ratio(x + step) - ratio(x - step)) / (2.0 * step)


def isochronicity_residual(sys, x_grid):
    """max |C(x) - x| over the grid; 0 characterizes an isochronous center"""
    _check_system(sys)
    x_switch = sabatini_switch(sys)
    return max((abs(sabatini_C(sys, x, x_switch=x_switch) - x) for x in x_grid if x != 0), default=0.0)


# Rayleigh equations

def rayleigh_to_lienard(F):
    """
    x'' + F(x') + x = 0 as the Lienard system with g(x) = x and f = F'

    Returns:
        SystemSpec with origin 'rayleigh'; corollary5_applicable is set when F is even to order 3 and
        F''(0) != 0 (the period is then increasing near 0)

    Raises:
        NotAtOrigin: F(0) != 0, or F'(0) != 0 (then f(0) != 0)

    """
    F = as_expr(F)
    d = derivatives_at(F, 0.0, 3)
    if abs(d[0]) > 1e-12:
        raise NotAtOrigin("F(0) = %.17g, a Rayleigh reduction needs F(0) = 0" % d[0])
    try:
        f = poly_derivative(F)
    except NotPolynomial:
        f = differentiate(F)
    scale = max(1.0, float(numpy.max(numpy.abs(d))))
    even = abs(d[1]) <= 1e-9 * scale and abs(d[3]) <= 1e-9 * scale
    applicable = bool(even and abs(d[2]) > 1e-9 * scale)
    logger.debug("rayleigh F=%s -> f=%s, corollary 5 %s", F, f, 'applies' if applicable else 'does not apply')
    return validate_system(f, 'x', origin='rayleigh', corollary5_applicable=applicable)
