import math

import numpy
import pytest
from scipy import optimize, special

from periodlab.conservative import (CONSTANT, DECREASING, ENERGY, INCREASING, MIXED, QUADRATURE, PeriodCurve, Sample,
                                    geometric_grid, monotonicity_verdict, period_conservative,
                                    period_curve_conservative, potential, sample_map, turning_points, well_range)
from periodlab.config import QuadratureSettings, WellSettings
from periodlab.errors import DegenerateWell, EnergyOutOfRange, TooFewSamples


def agm_period(amplitude):
    """pendulum period 4K(sin(amplitude/2)) with K from the arithmetic-geometric mean"""
    k = math.sin(0.5 * amplitude)
    a, b = 1.0, math.sqrt(1.0 - k * k)
    while abs(a - b) > 1e-16:
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 4.0 * math.pi / (2.0 * a)


def test_potential():
    assert potential("x + x^3", 1.0) == 0.75
    assert potential("x", -2.0) == 2.0
    assert potential("sin(x)", 0.5 * math.pi) == pytest.approx(1.0, rel=1e-12)
    assert potential("exp(x) - 1", 0.0) == 0.0


def test_potential_quadrature_knobs():
    # sqrt has an unbounded derivative at 0, one Gauss-Kronrod panel is visibly off
    accurate = potential("sqrt(x)", 1.0)
    coarse = potential("sqrt(x)", 1.0, rel_tol=1e-3, max_depth=0)
    assert accurate == pytest.approx(2 / 3, rel=1e-9)
    assert abs(coarse - 2 / 3) > 1e-8
    assert coarse == pytest.approx(2 / 3, rel=1e-3)
    assert potential("x + x^3", 1.0, rel_tol=1e-3, max_depth=0) == 0.75


def test_well_range_examples():
    harmonic = well_range("x")
    assert harmonic.c_max == pytest.approx(50.0, rel=1e-5)
    assert (harmonic.a_min, harmonic.b_max) == pytest.approx((-10.0, 10.0), rel=1e-5)
    assert well_range("x + x^2").c_max == pytest.approx(1 / 6, rel=1e-5)
    softening = well_range("x - x^3")
    assert softening.c_max == pytest.approx(0.25, rel=1e-5)
    assert -1.0 < softening.a_min < -0.99 and 0.99 < softening.b_max < 1.0


def test_well_range_respects_cap():
    assert well_range("x", WellSettings(cap=2.0)).c_max == pytest.approx(2.0, rel=1e-5)


def test_well_range_rejects_degenerate_wells():
    with pytest.raises(DegenerateWell):
        well_range("x^2")
    with pytest.raises(DegenerateWell):
        well_range("0")


def test_turning_points_harmonic():
    tp = turning_points("x", 0.125)
    assert tp.a == pytest.approx(-0.5, rel=1e-14)
    assert tp.b == pytest.approx(0.5, rel=1e-14)
    assert tp.c == 0.125


def test_turning_points_quadratic_well():
    tp = turning_points("x + x^2", 0.1)

    def residual(x):
        return x * x / 2 + x ** 3 / 3 - 0.1

    assert tp.a == pytest.approx(optimize.brentq(residual, -1.0, 0.0, xtol=1e-16), rel=1e-12)
    assert tp.b == pytest.approx(optimize.brentq(residual, 0.0, 1.0, xtol=1e-16), rel=1e-12)
    assert tp.a == pytest.approx(-0.567, abs=1e-3)
    assert tp.b == pytest.approx(0.398, abs=1e-3)


@pytest.mark.parametrize('g, c', [("x - x^3", 0.2), ("x + x^2", 0.15), ("sin(x)", 1.5), ("x + x^3", 3.0)])
def test_turning_point_residuals(g, c):
    tp = turning_points(g, c)
    assert abs(potential(g, tp.a) - c) <= 1e-12 * max(1.0, c)
    assert abs(potential(g, tp.b) - c) <= 1e-12 * max(1.0, c)
    assert tp.a < 0 < tp.b


def test_turning_points_outside_well():
    with pytest.raises(EnergyOutOfRange):
        turning_points("x", 1000.0)
    with pytest.raises(EnergyOutOfRange):
        turning_points("x", 0.0)


@pytest.mark.parametrize('c', [0.01, 0.125, 1.0])
def test_harmonic_period(c):
    assert period_conservative("x", c) == pytest.approx(2 * math.pi, abs=1e-8)


def test_pendulum_period():
    T = period_conservative("sin(x)", 1.0 - math.cos(0.5 * math.pi))
    assert T == pytest.approx(agm_period(0.5 * math.pi), abs=1e-8)
    assert T == pytest.approx(4.0 * special.ellipk(0.5), abs=1e-8)
    assert T == pytest.approx(7.4163, abs=1e-4)


def test_hardening_spring_is_faster():
    c = potential("x + x^3", 0.5)
    T = period_conservative("x + x^3", c)
    assert T < 2 * math.pi
    precise = period_conservative("x + x^3", c, QuadratureSettings(tol=1e-12, max_level=14))
    assert T == pytest.approx(precise, abs=1e-9)


def test_scaling_law():
    T = period_conservative("x + x^2", 0.05)
    assert period_conservative("4*(x + x^2)", 0.2) == pytest.approx(0.5 * T, abs=1e-8)
    T = period_conservative("sin(x)", 0.7)
    assert period_conservative("9*sin(x)", 6.3) == pytest.approx(T / 3.0, abs=1e-8)


def test_geometric_grid():
    grid = geometric_grid(0.01, 0.2, 8)
    assert grid[0] == 0.01 and grid[-1] == 0.2
    ratios = grid[1:] / grid[:-1]
    numpy.testing.assert_allclose(ratios, ratios[0], rtol=1e-12)


def test_sample_map_keeps_order():
    params = list(range(10))
    assert sample_map(lambda p: p * p, params, workers=4) == [p * p for p in params]


def test_harmonic_curve_is_constant():
    curve = period_curve_conservative("x", 0.01, 2.0, 5)
    assert (curve.parameterization, curve.method) == (ENERGY, QUADRATURE)
    numpy.testing.assert_allclose(curve.periods, 2 * math.pi, atol=1e-10)
    assert all(s.phi is None for s in curve.samples)
    assert monotonicity_verdict(curve) == CONSTANT


def test_softening_and_hardening_curves():
    softening = period_curve_conservative("x - x^3", 0.01, 0.2, 8)
    assert numpy.all(numpy.diff(softening.periods) > 0)
    assert monotonicity_verdict(softening) == INCREASING
    hardening = period_curve_conservative("x + x^3", 0.01, 0.2, 8, workers=2)
    assert numpy.all(numpy.diff(hardening.periods) < 0)
    assert monotonicity_verdict(hardening) == DECREASING


def test_curve_range_checks():
    with pytest.raises(EnergyOutOfRange):
        period_curve_conservative("x - x^3", 0.01, 0.3, 5)
    with pytest.raises(TooFewSamples):
        period_curve_conservative("x", 0.1, 0.2, 1)


def test_monotonicity_verdict_on_constructed_curves():
    mixed = PeriodCurve((Sample(1.0, 1.0), Sample(2.0, 2.0), Sample(3.0, 1.5)), ENERGY, QUADRATURE, 1e-10)
    assert monotonicity_verdict(mixed) == MIXED
    flat = PeriodCurve(tuple(Sample(float(k), 2.0 + 1e-10 * k) for k in range(1, 5)), ENERGY, QUADRATURE, 1e-10)
    assert monotonicity_verdict(flat) == CONSTANT
    with pytest.raises(TooFewSamples):
        monotonicity_verdict(PeriodCurve((Sample(1.0, 1.0), Sample(2.0, 2.0)), ENERGY, QUADRATURE, 1e-10))


def test_period_curve_validation():
    with pytest.raises(ValueError):
        PeriodCurve((Sample(2.0, 1.0), Sample(1.0, 1.0)), ENERGY, QUADRATURE, 1e-10)
    with pytest.raises(ValueError):
        PeriodCurve((Sample(1.0, 0.0),), ENERGY, QUADRATURE, 1e-10)
