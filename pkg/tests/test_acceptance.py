"""
End-to-end checks of the builtin systems and of the small-amplitude expansion against the numerics.
"""
import math

import numpy
import pytest

from periodlab.conservative import period_conservative, period_curve_conservative, turning_points
from periodlab.criteria import NOT_A_CENTER, classify, expansion_coefficient, theorem1_Q
from periodlab.lienard import (isochronicity_residual, period_curve_lienard, period_lienard, return_map,
                               sigma)
from periodlab.registry import BUILTINS, get_builtin
from periodlab.system import validate_system

from .test_conservative import agm_period


def richardson_K(sys, amplitudes=(0.02, 0.04, 0.08)):
    """quadratic coefficient of T(c) - T0 with the cubic and quartic terms eliminated"""
    T0, _ = expansion_coefficient(sys)
    c = numpy.array(amplitudes)
    rhs = numpy.array([period_lienard(sys, b, tol=1e-12) for b in amplitudes]) - T0
    return numpy.linalg.solve(numpy.stack([c ** 2, c ** 3, c ** 4], axis=1), rhs)[0]


def test_every_builtin_reaches_its_expected_conclusion(builtin):
    report = classify(builtin.system())
    assert report.final_conclusion == builtin.expected
    assert report.agreement


def test_builtins_validate():
    assert len(BUILTINS) >= 8
    for entry in BUILTINS:
        sys = entry.system()
        assert sys.gp0 > 0


@pytest.mark.parametrize('c', [0.01, 0.1, 1.0])
def test_harmonic_exactness(c):
    sys = get_builtin('harmonic').system()
    assert period_conservative(sys.g, c) == pytest.approx(2 * math.pi, abs=1e-8)
    assert return_map(sys, c).T == pytest.approx(2 * math.pi, abs=1e-8)


def test_pendulum_oracle():
    T = period_conservative("sin(x)", 1.0)
    assert T == pytest.approx(agm_period(0.5 * math.pi), abs=1e-8)
    assert turning_points("sin(x)", 1.0).b == pytest.approx(0.5 * math.pi, rel=1e-10)


@pytest.mark.parametrize('f, g, K', [
    ("x", "x", math.pi / 12),
    ("0", "x + x^2", 5 * math.pi / 6),
    ("0", "x - x^3", 3 * math.pi / 4),
    ("2*x", "x + x^3", -5 * math.pi / 12),
])
def test_expansion_matches_numerics(f, g, K):
    sys = validate_system(f, g)
    _, predicted = expansion_coefficient(sys)
    assert predicted == pytest.approx(K, rel=1e-14)
    assert predicted == pytest.approx(-math.pi * theorem1_Q(sys) / (8 * sys.gp0 ** 2.5), rel=1e-14)
    assert richardson_K(sys) == pytest.approx(K, rel=0.05)


def test_sabatini_isochrone():
    sys = get_builtin('sabatini_isochrone').system()
    for c in (0.1, 0.3, 0.5):
        assert abs(period_lienard(sys, c) - 2 * math.pi) <= 1e-6
    assert theorem1_Q(sys) == pytest.approx(0.0, abs=1e-15)
    assert isochronicity_residual(sys, numpy.linspace(-0.5, 0.5, 41)) <= 1e-12
    assert all(abs(sigma(sys, x)) <= 1e-9 for x in numpy.linspace(0.05, 0.5, 10))


def test_center_condition_quantitative():
    sys = get_builtin('noncenter').system()
    phi = return_map(sys, 0.025, tol=1e-12).phi
    assert phi / 0.025 ** 3 == pytest.approx(-math.pi / 4, rel=0.1)
    assert classify(sys).final_conclusion == NOT_A_CENTER


def test_hardening_spring_ladder():
    report = classify(get_builtin('hardening').system())
    for name in ('opial', 'chow_wang_C0', 'rothe_C4', 'schaaf_C3', 'theorem1_Q'):
        assert report.verdict(name).conclusion == 'decreasing', name


def test_odd_lienard_perturbations_keep_an_increasing_period(rng):
    checked = 0
    while checked < 5:
        a1, a3 = rng.uniform(-1.0, 1.0, 2)
        b = rng.uniform(0.5, 2.0)
        g = "x - %.17g*x^3" % b
        conservative = period_curve_conservative(g, 0.002, 0.03, 5)
        if conservative.periods[-1] <= conservative.periods[0]:
            continue
        for sign in (1.0, -1.0):
            sys = validate_system("%.17g*x + %.17g*x^3" % (sign * a1, sign * a3), g)
            curve = period_curve_lienard(sys, 0.05, 0.2, 4)
            assert numpy.all(numpy.diff(curve.periods) > 10 * curve.tolerance)
        checked += 1


def test_scaling_law():
    T = period_lienard(validate_system("x", "x - x^3"), 0.2)
    scaled = period_lienard(validate_system("3*x", "9*(x - x^3)"), 0.2)
    assert scaled == pytest.approx(T / 3.0, abs=1e-7)
    assert period_conservative("9*(x - x^3)", 9 * 0.01) == pytest.approx(period_conservative("x - x^3", 0.01) / 3,
                                                                          abs=1e-7)
