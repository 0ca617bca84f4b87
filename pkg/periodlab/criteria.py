"""
Monotonicity and isochronicity criteria for the period function, and their synthesis into a classification
report checked against a numerically computed period curve.

Local criteria use the derivatives at 0 cached on the SystemSpec. Grid criteria evaluate a witness function on
a symmetric grid around 0 and conclude only when every witness clears the sign threshold
1e-9 * max(1, max|witness|).
"""
import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy
from numpy.polynomial import polynomial as P
from scipy import optimize

from . import lienard
from .config import CurveConfig, GridConfig, IntegratorSettings, QuadratureSettings, WellSettings
from .conservative import (CONSTANT, DECREASING, INCREASING, MIXED, monotonicity_verdict, period_curve_conservative,
                           potential, turning_points, well_edges)
from .errors import ConfigurationError, Inapplicable, NoRealTarget, NoReturn, NotACenter, NotPolynomial, \
    UndefinedWitness
from .expr import as_expr, compile_expr, differentiate
from .jets import derivatives_at, polynomial_coefficients
from .system import SystemSpec

logger = logging.getLogger(__name__)

ISOCHRONOUS = 'isochronous_candidate'
NOT_A_CENTER = 'not_a_center'
INCONCLUSIVE = 'inconclusive'

CRITERIA = ('opial', 'chow_wang_C1', 'chow_wang_C0', 'schaaf_C3', 'rothe_C4', 'chouikha_C5', 'prop2_chain',
            'theorem1_Q', 'lemma2_center', 'corollary4', 'proposition3_convexity', 'sigma_sign')
CONSERVATIVE_ONLY = ('opial', 'chow_wang_C1', 'chow_wang_C0', 'schaaf_C3', 'rothe_C4', 'chouikha_C5',
                     'prop2_chain')
AT0 = 'at0'
SIGN_RTOL = 1e-9
C5_READING = ("(C5) part (i) is printed with unbalanced brackets; evaluated as "
              "g''(0)(3g'(x)^2 - g(x)g''(x)) - 3g'(0)^2 g''(x)")


@dataclass
class CriterionVerdict:
    name: str
    witness: list
    applicable: bool
    reason: str
    conclusion: str
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in CRITERIA:
            raise ValueError("unknown criterion %r" % self.name)
        if not self.applicable:
            self.conclusion = INCONCLUSIVE

    def values(self):
        return numpy.array([v for _, v in self.witness], dtype=float)


@dataclass
class ClassificationReport:
    system: SystemSpec
    verdicts: list
    local_expansion: dict
    Q: float
    numeric_curve_verdict: str
    curve: object
    final_conclusion: str
    agreement: bool
    center: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    grid: list = field(default_factory=list)

    def verdict(self, name):
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)


def sign_threshold(values):
    values = numpy.abs(numpy.asarray(values, dtype=float))
    scale = max(1.0, float(values.max())) if values.size else 1.0
    return SIGN_RTOL * scale


def signs(values):
    """-1, 0, +1 per value; 0 when |value| is below the sign threshold"""
    values = numpy.asarray(values, dtype=float)
    threshold = sign_threshold(values)
    return numpy.where(values > threshold, 1, numpy.where(values < -threshold, -1, 0))


def _monotone(s, positive, negative, zero=INCONCLUSIVE):
    """conclusion from a sign array: positive if all +1, negative if all -1, zero if all 0"""
    if s.size and numpy.all(s == 1):
        return positive
    if s.size and numpy.all(s == -1):
        return negative
    if s.size and numpy.all(s == 0):
        return zero
    return INCONCLUSIVE


def _witness(grid, values):
    return [(float(x), float(v)) for x, v in zip(grid, values)]


def _check_grid(grid):
    grid = numpy.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("a criteria grid must be a non-empty list of abscissae")
    if numpy.any(grid == 0):
        raise ValueError("the criteria grid must exclude 0")
    return grid


def _derivatives(g, grid, k):
    return numpy.array([derivatives_at(g, x, k) for x in grid])


def _potentials(g, grid):
    return numpy.array([potential(g, x) for x in grid])


def default_grid(a, b, config=None):
    """
    symmetric criteria grid on [fraction*a, fraction*b] without the exclusion ball around 0

    Args:
        a: left half-width (negative)
        b: right half-width (positive)
        config: GridConfig

    """
    config = config or GridConfig()
    t = numpy.linspace(-1.0, 1.0, config.n_points)
    grid = numpy.where(t < 0, t * config.fraction * abs(a), t * config.fraction * abs(b))
    return grid[numpy.abs(grid) >= config.exclusion]


# local quantities at 0

def theorem1_Q(sys):
    """Q = g'(0)g'''(0) - (5/3)g''(0)^2 - (2/3)f'(0)^2 g'(0); Q < 0 means increasing near 0"""
    return sys.gp0 * sys.gppp0 - 5.0 / 3.0 * sys.gpp0 ** 2 - 2.0 / 3.0 * sys.fp0 ** 2 * sys.gp0


def expansion_coefficient(sys):
    """
    T(c) = T0 + K c^2 + o(c^2) near 0, c the amplitude on the positive x-axis

    Returns:
        (T0, K)

    """
    root = math.sqrt(sys.gp0)
    T0 = 2.0 * math.pi / root
    bracket = (-sys.fp0 ** 2 / sys.gp0 - 10.0 * sys.gpp0 ** 2 / (4.0 * sys.gp0 ** 2)
               + 9.0 * sys.gppp0 / (6.0 * sys.gp0))
    K = -math.pi / (12.0 * root) * bracket
    return T0, K


def lemma2_center(sys):
    """
    the center necessary condition f'(0)g''(0) - 2g'(0)f''(0) and the third derivative phi_ccc(0, 0) of the
    return map displacement

    Returns:
        (value, phi_ccc)

    """
    root = math.sqrt(sys.gp0)
    value = sys.fp0 * sys.gpp0 - 2.0 * sys.gp0 * sys.fpp0
    phi_ccc = 3.0 * math.pi / (2.0 * root) * (sys.gpp0 / (2.0 * sys.gp0) * sys.fp0 / (2.0 * root)
                                              - sys.fpp0 / (2.0 * root))
    return value, phi_ccc


def center_condition(sys):
    """both printed forms of the center necessary condition, with the predicted cubic coefficient of phi"""
    value, phi_ccc = lemma2_center(sys)
    return {
        'lemma2': value,
        'unit_factor': sys.fp0 * sys.gpp0 - sys.gp0 * sys.fpp0,
        'phi_ccc': phi_ccc,
        'phi_cubic': phi_ccc / 6.0,
    }


def sabatini_C_derivatives_at0(sys):
    """(C'(0), C''(0), C'''(0)) in closed form"""
    c1 = 1.0 - sys.f0 ** 2 / (4.0 * sys.gp0)
    c2 = sys.gpp0 / sys.gp0 - 2.0 / (3.0 * sys.gp0) * sys.f0 * sys.fp0
    c3 = sys.gppp0 / sys.gp0 - 2.0 / (3.0 * sys.gp0) * sys.fp0 ** 2
    return c1, c2, c3


def corollary4_targets(g):
    """
    values of f'(0) and f''(0) an isochronous Lienard perturbation of x'' + g(x) = 0 must take

    Args:
        g: Expr, expression text or SystemSpec

    Returns:
        ((f'(0)+, f'(0)-), (f''(0)+, f''(0)-)), sign paired

    Raises:
        Inapplicable: g''(0) = 0
        NoRealTarget: the radicand 3g'''(0) - 5g''(0)^2/g'(0) is negative

    """
    if isinstance(g, SystemSpec):
        gp0, gpp0, gppp0 = g.gp0, g.gpp0, g.gppp0
    else:
        _, gp0, gpp0, gppp0 = derivatives_at(g, 0.0, 3)
    if abs(gpp0) <= SIGN_RTOL * max(1.0, abs(gp0), abs(gppp0)):
        raise Inapplicable("corollary 4 needs g''(0) != 0")
    radicand = 3.0 * gppp0 - 5.0 * gpp0 ** 2 / gp0
    if radicand < 0:
        raise NoRealTarget("radicand 3g'''(0) - 5g''(0)^2/g'(0) = %.17g < 0: no isochronous Lienard "
                           "perturbation" % radicand)
    root = math.sqrt(radicand)
    scale = gpp0 / (2.0 * gp0)
    return (root, -root), (scale * root, -scale * root)


# conservative criteria

def opial_sign(g, grid):
    """
    sign of (g/x)': positive for x < 0 and negative for x > 0 gives an increasing period, the mirrored pattern a
    decreasing one
    """
    g = as_expr(g)
    grid = _check_grid(grid)
    d = _derivatives(g, grid, 1)
    values = (grid * d[:, 1] - d[:, 0]) / grid ** 2
    pattern = signs(values) * numpy.sign(grid).astype(int)
    conclusion = _monotone(pattern, DECREASING, INCREASING)
    _, _, gpp0, gppp0 = derivatives_at(g, 0.0, 3)
    reason = "g''(0) = %.6g" % gpp0
    if abs(gpp0) > SIGN_RTOL:
        reason += "; x(g/x)' cannot keep a constant sign near 0 unless g''(0) = 0"
    elif abs(gppp0) > SIGN_RTOL:
        witness_sign = signs(grid * values)
        agrees = bool(numpy.all(witness_sign[witness_sign != 0] == numpy.sign(gppp0)))
        reason += "; g'''(0) = %.6g %s the sign of x(g/x)'" % (gppp0, 'shares' if agrees else 'does not share')
    return CriterionVerdict('opial', _witness(grid, values), True, reason, conclusion)


def chow_wang(g, grid):
    """
    (C1): g'' > 0 and Delta(x) = x(g''(0)g'(x) - g'(0)g''(x)) one-signed; (C0): sign of
    H0 = g^2 + g''(0)/(3g'(0)^2) g^3 - 2Gg'. Positive Delta or H0 give an increasing period.

    Returns:
        (C1 verdict, C0 verdict)

    """
    g = as_expr(g)
    grid = _check_grid(grid)
    d = _derivatives(g, grid, 2)
    _, gp0, gpp0 = derivatives_at(g, 0.0, 2)
    delta = grid * (gpp0 * d[:, 1] - gp0 * d[:, 2])
    convex = bool(numpy.all(signs(d[:, 2]) == 1))
    c1_reason = "g'' > 0 on the grid" if convex else "g'' is not positive on the whole grid"
    c1 = CriterionVerdict('chow_wang_C1', _witness(grid, delta), convex, c1_reason,
                          _monotone(signs(delta), INCREASING, DECREASING))

    G = _potentials(g, grid)
    h0 = d[:, 0] ** 2 + gpp0 / (3.0 * gp0 ** 2) * d[:, 0] ** 3 - 2.0 * G * d[:, 1]
    c0 = CriterionVerdict('chow_wang_C0', _witness(grid, h0), True, "sign of H0 on the grid",
                          _monotone(signs(h0), INCREASING, DECREASING))
    return c1, c0


def schaaf(g, grid):
    """
    H3 = 5g''^2 - 3g'g'''; H3 > 0 gives an increasing period (with f = 0, Q = -H3(0)/3)
    """
    g = as_expr(g)
    grid = numpy.asarray(grid, dtype=float)
    points = numpy.concatenate([[0.0], grid[grid != 0]])
    d = _derivatives(g, points, 3)
    h3 = 5.0 * d[:, 2] ** 2 - 3.0 * d[:, 1] * d[:, 3]
    witness = [(AT0, float(h3[0]))] + _witness(points[1:], h3[1:])
    threshold = sign_threshold(numpy.abs(d[:, 1]))
    critical = numpy.abs(d[1:, 1]) < threshold
    if numpy.any(critical):
        side = d[1:, 0][critical] * d[1:, 2][critical]
        holds = bool(numpy.all(side < 0))
        reason = "g' vanishes on the grid; side condition g g'' < 0 %s there" % ('holds' if holds else 'fails')
        applicable = holds
    else:
        reason = "g' does not vanish on the grid"
        applicable = True
    return CriterionVerdict('schaaf_C3', witness, applicable, reason,
                            _monotone(signs(h3), INCREASING, DECREASING))


def rothe(g, grid):
    """
    H4 = x[3g''(0)g'^2 - g''(0)g g'' - 3g'(0)^2 g'']; H4 >= 0 gives an increasing period
    """
    g = as_expr(g)
    grid = _check_grid(grid)
    d = _derivatives(g, grid, 2)
    _, gp0, gpp0 = derivatives_at(g, 0.0, 2)
    h4 = grid * (3.0 * gpp0 * d[:, 1] ** 2 - gpp0 * d[:, 0] * d[:, 2] - 3.0 * gp0 ** 2 * d[:, 2])
    return CriterionVerdict('rothe_C4', _witness(grid, h4), True, "sign of H4 on the grid",
                            _monotone(signs(h4), INCREASING, DECREASING))


def derivative_zero_left(g, edge):
    """nearest zero of g' in [edge, 0), or edge when g' keeps its sign there"""
    gprime = compile_expr(differentiate(g))
    xs = numpy.linspace(0.0, edge, 1001)[1:]
    values = gprime(xs)
    change = numpy.nonzero(numpy.sign(values) != numpy.sign(values[0]))[0]
    if change.size == 0:
        return float(edge)
    k = change[0]
    if values[k] == 0 or k == 0:
        return float(xs[k])
    return float(optimize.brentq(gprime, xs[k], xs[k - 1]))


def chouikha_c5(g, grid_neg, grid_pos):
    """
    (C5): part (i) on grid_neg, part (ii) g'g''(0)/(g''g'(0)^2) - 2G/g^2 on grid_pos, both must not vanish.
    The verdict only says whether the condition holds; it implies (C0).

    Raises:
        UndefinedWitness: g'' vanishes at a point of grid_pos

    """
    g = as_expr(g)
    grid_neg = numpy.asarray(grid_neg, dtype=float)
    grid_pos = numpy.asarray(grid_pos, dtype=float)
    _, gp0, gpp0 = derivatives_at(g, 0.0, 2)
    dn = _derivatives(g, grid_neg, 2) if grid_neg.size else numpy.zeros((0, 3))
    dp = _derivatives(g, grid_pos, 2) if grid_pos.size else numpy.zeros((0, 3))
    if numpy.any(numpy.abs(dp[:, 2]) <= 1e-14 * numpy.maximum(1.0, numpy.abs(dp[:, 1]))):
        raise UndefinedWitness("g'' vanishes on (0, b), part (ii) of (C5) is undefined")
    part1 = gpp0 * (3.0 * dn[:, 1] ** 2 - dn[:, 0] * dn[:, 2]) - 3.0 * gp0 ** 2 * dn[:, 2]
    G = _potentials(g, grid_pos)
    part2 = dp[:, 1] * gpp0 / (dp[:, 2] * gp0 ** 2) - 2.0 * G / dp[:, 0] ** 2
    holds1 = bool(numpy.all(signs(part1) != 0))
    holds2 = bool(numpy.all(signs(part2) != 0))
    holds = holds1 and holds2
    witness = _witness(grid_neg, part1) + _witness(grid_pos, part2)
    reason = "(C5) %s (part (i) %s, part (ii) %s); %s" % (
        'holds' if holds else 'fails', 'holds' if holds1 else 'fails', 'holds' if holds2 else 'fails', C5_READING)
    return CriterionVerdict('chouikha_C5', witness, True, reason, INCONCLUSIVE,
                            details={'holds': holds, 'part_i': holds1, 'part_ii': holds2})


def prop2_chain(g, grid):
    """
    x g'' < 0  =>  g^2 - 2Gg' > 0  =>  x(g/x)' < 0, and the mirrored chain. The first or second link holding on
    the whole grid gives an increasing (mirrored: decreasing) period; it needs g''(0) = 0.
    """
    g = as_expr(g)
    grid = _check_grid(grid)
    d = _derivatives(g, grid, 2)
    G = _potentials(g, grid)
    w1 = grid * d[:, 2]
    w2 = d[:, 0] ** 2 - 2.0 * G * d[:, 1]
    w3 = (grid * d[:, 1] - d[:, 0]) / grid
    s1, s2, s3 = signs(w1), signs(w2), signs(w3)
    _, gp0, gpp0 = derivatives_at(g, 0.0, 2)
    applicable = bool(abs(gpp0) <= SIGN_RTOL * max(1.0, gp0))

    links = []
    defects = []
    for side, mask in (('x < 0', grid < 0), ('x > 0', grid > 0)):
        if not numpy.any(mask):
            continue
        for direction in (-1, 1):
            if numpy.all(s1[mask] == direction) and not numpy.all(s2[mask] == -direction):
                defects.append("x g'' %s 0 on %s without g^2 - 2Gg' %s 0" % (
                    '<' if direction < 0 else '>', side, '>' if direction < 0 else '<'))
            if numpy.all(s2[mask] == -direction) and not numpy.all(s3[mask] == direction):
                defects.append("g^2 - 2Gg' %s 0 on %s without x(g/x)' %s 0" % (
                    '>' if direction < 0 else '<', side, '<' if direction < 0 else '>'))
    if numpy.all(s1 == -1) or numpy.all(s2 == 1):
        conclusion = INCREASING
        links.append("x g'' < 0" if numpy.all(s1 == -1) else "g^2 - 2Gg' > 0")
    elif numpy.all(s1 == 1) or numpy.all(s2 == -1):
        conclusion = DECREASING
        links.append("x g'' > 0" if numpy.all(s1 == 1) else "g^2 - 2Gg' < 0")
    else:
        conclusion = INCONCLUSIVE
    if numpy.all(s3 == -1):
        links.append("x(g/x)' < 0")
    elif numpy.all(s3 == 1):
        links.append("x(g/x)' > 0")

    reason = "holding links: %s" % (', '.join(links) if links else 'none')
    if not applicable:
        reason = "g''(0) = %.6g != 0, the chain needs g''(0) = 0; " % gpp0 + reason
    if defects:
        logger.error("prop2_chain implication violated: %s", '; '.join(defects))
        reason += "; implication defect: " + '; '.join(defects)
    witness = [(float(x), float(v)) for x, v in zip(grid, w1)]
    return CriterionVerdict('prop2_chain', witness, applicable, reason, conclusion,
                            details={'x_gpp': w1.tolist(), 'g2_2Ggp': w2.tolist(), 'x_dgx': w3.tolist(),
                                     'defects': defects})


def corollary3_check(g, b_lo, b_hi, n=8, settings=None):
    """verdict of the conservative period curve of g between the amplitudes b_lo and b_hi"""
    curve = period_curve_conservative(g, potential(g, b_lo), potential(g, b_hi), n, settings)
    return monotonicity_verdict(curve)


# Lienard criteria

def sabatini_C_second(sys, x, step=1e-4):
    """C''(x): exact for polynomial or conservative systems, second central difference otherwise"""
    if sys.is_conservative:
        return derivatives_at(sys.g, x, 2)[2] / sys.gp0
    try:
        f = polynomial_coefficients(sys.f)
        g = polynomial_coefficients(sys.g)
    except NotPolynomial:
        c = [lienard.sabatini_C(sys, u) for u in (x - step, x, x + step)]
        return (c[0] - 2.0 * c[1] + c[2]) / step ** 2
    moment = P.polyint(P.polymul([0.0, 1.0], f))
    square = P.polymul(moment, moment)
    C = P.polysub(g, square[3:] if square.size > 3 else [0.0]) / sys.gp0
    return float(P.polyval(x, P.polyder(C, 2)))


def proposition3_convexity(sys, grid):
    """
    x C''(x) < 0 gives an increasing period, > 0 a decreasing one and C'' = 0 an isochronous candidate.
    Needs g''(0) = f''(0) = 0.
    """
    grid = _check_grid(grid)
    values = numpy.array([x * sabatini_C_second(sys, x) for x in grid])
    scale = max(1.0, abs(sys.gp0))
    applicable = abs(sys.gpp0) <= SIGN_RTOL * scale and abs(sys.fpp0) <= SIGN_RTOL * scale
    reason = "g''(0) = f''(0) = 0" if applicable else \
        "needs g''(0) = f''(0) = 0, got %.6g and %.6g" % (sys.gpp0, sys.fpp0)
    return CriterionVerdict('proposition3_convexity', _witness(grid, values), applicable, reason,
                            _monotone(signs(values), DECREASING, INCREASING, ISOCHRONOUS))


def sigma_sign(sys, grid):
    """sigma <= 0 gives a decreasing period, >= 0 an increasing one, sigma = 0 an isochronous candidate"""
    grid = _check_grid(grid)
    values = numpy.array([lienard.sigma(sys, x) for x in grid])
    xc = numpy.array([x * lienard.sabatini_C(sys, x) for x in grid])
    scale = max(1.0, abs(sys.gp0))
    positive = bool(numpy.all(xc > 0))
    flat = abs(sys.gpp0) <= SIGN_RTOL * scale and abs(sys.fpp0) <= SIGN_RTOL * scale
    applicable = positive and flat
    if applicable:
        reason = "x C(x) > 0 on the grid and g''(0) = f''(0) = 0"
    elif not positive:
        reason = "x C(x) > 0 fails on the grid"
    else:
        reason = "needs g''(0) = f''(0) = 0, got %.6g and %.6g" % (sys.gpp0, sys.fpp0)
    return CriterionVerdict('sigma_sign', _witness(grid, values), applicable, reason,
                            _monotone(signs(values), INCREASING, DECREASING, ISOCHRONOUS))


def _local_verdicts(sys):
    Q = theorem1_Q(sys)
    q = CriterionVerdict('theorem1_Q', [(AT0, Q)], True, "sign of Q",
                         _monotone(signs([Q]), DECREASING, INCREASING, ISOCHRONOUS))
    value, phi_ccc = lemma2_center(sys)
    l2 = CriterionVerdict('lemma2_center', [(AT0, value)], True, "f'(0)g''(0) - 2g'(0)f''(0) = %.6g" % value,
                          NOT_A_CENTER if signs([value])[0] != 0 else INCONCLUSIVE,
                          details={'phi_ccc': phi_ccc})
    try:
        (fp_plus, fp_minus), (fpp_plus, fpp_minus) = corollary4_targets(sys)
    except (Inapplicable, NoRealTarget) as e:
        c4 = CriterionVerdict('corollary4', [], False, str(e), INCONCLUSIVE)
    else:
        matches = any(math.isclose(sys.fp0, a, rel_tol=1e-9, abs_tol=1e-9)
                      and math.isclose(sys.fpp0, b, rel_tol=1e-9, abs_tol=1e-9)
                      for a, b in ((fp_plus, fpp_plus), (fp_minus, fpp_minus)))
        c4 = CriterionVerdict('corollary4', [(AT0, fp_plus), (AT0, fpp_plus)], True,
                              "isochrony needs (f'(0), f''(0)) = +-(%.6g, %.6g); the system %s"
                              % (fp_plus, fpp_plus, 'matches' if matches else 'does not match'),
                              INCONCLUSIVE, details={'targets_fp0': [fp_plus, fp_minus],
                                                     'targets_fpp0': [fpp_plus, fpp_minus], 'matches': matches})
    return q, l2, c4


def _conservative_verdicts(sys, grid, notes):
    g = sys.g
    verdicts = [opial_sign(g, grid)]
    c1, c0 = chow_wang(g, grid)
    verdicts += [c1, c0, schaaf(g, grid), rothe(g, grid)]
    left_edge = well_edges(g, WellSettings())[0]
    bound = derivative_zero_left(g, left_edge)
    grid_neg = grid[(grid < 0) & (grid > bound)]
    grid_pos = grid[grid > 0]
    try:
        c5 = chouikha_c5(g, grid_neg, grid_pos)
    except UndefinedWitness as e:
        c5 = CriterionVerdict('chouikha_C5', [], False, str(e), INCONCLUSIVE)
    else:
        notes.append(C5_READING)
        if c5.details['holds']:
            c0.reason += "; (C5) holds on the grid, which implies (C0)"
    verdicts += [c5, prop2_chain(g, grid)]
    return verdicts


def _inapplicable_conservative():
    return [CriterionVerdict(name, [], False, "applies to conservative systems (f = 0) only", INCONCLUSIVE)
            for name in CONSERVATIVE_ONLY]


def _curve_conclusion(numeric, q_verdict):
    return {INCREASING: INCREASING, DECREASING: DECREASING, CONSTANT: ISOCHRONOUS}.get(
        numeric, q_verdict.conclusion)


def classify(sys, grid_config=None, curve_config=None, settings=None, quadrature=None):
    """
    evaluates every criterion on a system and compares them with a numeric period curve

    A Lemma 2 violation ends the classification with not_a_center once a return map probe confirms that the
    orbit near 0 does not close; an unconfirmed violation is reported as a note.

    Args:
        sys: SystemSpec
        grid_config: GridConfig of the criteria grid
        curve_config: CurveConfig of the numeric period curve
        settings: IntegratorSettings of the return map
        quadrature: QuadratureSettings of the conservative period integral

    Returns:
        ClassificationReport

    """
    if not isinstance(sys, SystemSpec):
        raise TypeError("you must pass a valid SystemSpec instance")
    grid_config = grid_config or GridConfig()
    curve_config = curve_config or CurveConfig()
    settings = settings or IntegratorSettings.from_env()
    quadrature = quadrature or QuadratureSettings()
    notes = []

    T0, K = expansion_coefficient(sys)
    Q = theorem1_Q(sys)
    expansion = {'T0': T0, 'K': K}
    center = center_condition(sys)
    q_verdict, l2_verdict, c4_verdict = _local_verdicts(sys)
    cap = lienard.small_amplitude_cap(sys)
    guard = 100.0 * settings.rtol

    def not_a_center(reason, c, phi):
        notes.append(reason)
        center.update({'probe_c': c, 'probe_phi': phi})
        logger.info("classify: not a center (%s)", reason)
        return ClassificationReport(sys, [l2_verdict], expansion, Q, NOT_A_CENTER, None, NOT_A_CENTER, True,
                                    center, notes)

    if l2_verdict.conclusion == NOT_A_CENTER:
        probe = min(0.1, 0.5 * cap)
        try:
            result = lienard.return_map(sys, probe, settings=settings, cap=cap)
        except NoReturn as e:
            return not_a_center("return map probe at c=%.6g does not return: %s" % (probe, e), probe, None)
        if abs(result.phi) > guard:
            return not_a_center("return map probe at c=%.6g: phi=%.6g, predicted cubic term %.6g"
                                % (probe, result.phi, center['phi_cubic'] * probe ** 3), probe, result.phi)
        message = ("f'(0)g''(0) - 2g'(0)f''(0) = %.6g predicts a non-center, but the orbit through c=%.6g closes "
                   "(phi=%.3g); f'(0)g''(0) - g'(0)f''(0) = %.6g" % (center['lemma2'], probe, result.phi,
                                                                       center['unit_factor']))
        warnings.warn(message, RuntimeWarning)
        notes.append(message)
        center.update({'probe_c': probe, 'probe_phi': result.phi})
        l2_verdict = CriterionVerdict('lemma2_center', l2_verdict.witness, True,
                                      l2_verdict.reason + "; not confirmed by the return map", INCONCLUSIVE,
                                      details=l2_verdict.details)

    # curve range and criteria grid
    amp_hi = min(curve_config.amplitude_hi, curve_config.clip * cap)
    amp_lo = min(curve_config.amplitude_lo, 0.25 * amp_hi)
    try:
        if sys.is_conservative:
            c_lo, c_hi = potential(sys.g, amp_lo), potential(sys.g, amp_hi)
            if curve_config.cmax is not None:
                c_hi = min(c_hi, curve_config.cmax)
            if not c_hi > c_lo:
                raise ConfigurationError("curve top %.6g is below the lowest sampled energy %.6g" % (c_hi, c_lo))
            curve = period_curve_conservative(sys.g, c_lo, c_hi, curve_config.n, quadrature,
                                              workers=curve_config.workers)
            top = c_hi
        else:
            if curve_config.cmax is not None:
                amp_hi = min(amp_hi, curve_config.cmax)
            if not amp_hi > amp_lo:
                raise ConfigurationError("curve top %.6g is below the lowest sampled amplitude %.6g"
                                         % (amp_hi, amp_lo))
            curve = lienard.period_curve_lienard(sys, amp_lo, amp_hi, curve_config.n, settings.rtol, settings,
                                                 workers=curve_config.workers, cap=cap)
            top = potential(sys.g, amp_hi)
    except NotACenter as e:
        return not_a_center(str(e), e.c, e.phi)
    numeric = monotonicity_verdict(curve)
    tp = turning_points(sys.g, top)
    grid = default_grid(tp.a, tp.b, grid_config)

    if sys.is_conservative:
        verdicts = _conservative_verdicts(sys, grid, notes)
    else:
        verdicts = _inapplicable_conservative()
    verdicts += [q_verdict, l2_verdict, c4_verdict, proposition3_convexity(sys, grid), sigma_sign(sys, grid)]
    verdicts.sort(key=lambda v: CRITERIA.index(v.name))

    if abs(sys.gpp0) > SIGN_RTOL * max(1.0, sys.gp0) and not sys.is_conservative and numeric == CONSTANT:
        conservative = corollary3_check(sys.g, amp_lo, amp_hi, curve_config.n, quadrature)
        if conservative != DECREASING:
            message = ("the Lienard period looks constant but the conservative period of the same g is %s, "
                       "not decreasing" % conservative)
            warnings.warn(message, RuntimeWarning)
            notes.append(message)
        else:
            notes.append("conservative period of the same g is decreasing, as required for an isochronous "
                         "Lienard perturbation")

    final = _curve_conclusion(numeric, q_verdict)
    target = final if numeric != MIXED else None
    agreement = all(v.conclusion == target for v in verdicts if v.conclusion != INCONCLUSIVE)
    if sys.corollary5_applicable:
        notes.append("Rayleigh equation with F even and F''(0) != 0: the period is increasing near 0")
    logger.info("classify f=%s g=%s: curve %s, final %s, agreement %s", sys.f_text, sys.g_text, numeric, final,
                agreement)
    return ClassificationReport(sys, verdicts, expansion, Q, numeric, curve, final, agreement, center, notes,
                                [float(x) for x in grid])
