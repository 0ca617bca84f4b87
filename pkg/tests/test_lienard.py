import math

import numpy
import pytest

from periodlab.conservative import AMPLITUDE, CONSTANT, INCREASING, RETURN_MAP, monotonicity_verdict, \
    period_conservative, potential
from periodlab.errors import AmplitudeOutOfRange, NotACenter, NotAtOrigin, StepUnderflow, TooFewSamples
from periodlab.lienard import (PhaseState, integrate_step, isochronicity_residual, period_curve_lienard,
                               period_lienard, rayleigh_to_lienard, return_map, sabatini_C, sabatini_series,
                               sabatini_switch, sigma, sigma_from_C, small_amplitude_cap, vector_field)
from periodlab.system import validate_system

from .conftest import random_polynomial


def fit_expansion(sys, amplitudes=(0.02, 0.04, 0.08)):
    """K, L, M of T - T0 = K c^2 + L c^3 + M c^4 through three return map periods"""
    T0 = 2 * math.pi / math.sqrt(sys.gp0)
    c = numpy.array(amplitudes)
    rhs = numpy.array([period_lienard(sys, a, tol=1e-12) for a in amplitudes]) - T0
    return numpy.linalg.solve(numpy.stack([c ** 2, c ** 3, c ** 4], axis=1), rhs)


def test_vector_field_examples(harmonic):
    assert vector_field(harmonic, (1.0, 0.0)) == (0.0, 1.0)
    assert vector_field(harmonic, (0.0, 1.0)) == (-1.0, 0.0)
    assert vector_field(validate_system("x", "x"), PhaseState(1.0, 1.0, 0.0)) == (-1.0, 0.0)


def test_vector_field_rescales_by_stiffness():
    dx, dy = vector_field(validate_system("0", "4*x"), (1.0, 1.0))
    assert (dx, dy) == (-2.0, 2.0)


def test_integrate_step_full_rotation(harmonic):
    state = PhaseState(1.0, 0.0, 0.0)
    h = 1e-2
    while state.t < 2 * math.pi:
        state, h = integrate_step(harmonic, state, min(h, 2 * math.pi - state.t), 1e-10)
        assert state.x ** 2 + state.y ** 2 == pytest.approx(1.0, abs=1e-8)
        if 2 * math.pi - state.t < 1e-13:
            break
    assert state.x == pytest.approx(1.0, abs=1e-8)
    assert state.y == pytest.approx(0.0, abs=1e-8)


def test_integrate_step_conserves_energy(harmonic):
    state = PhaseState(0.5, 0.0, 0.0)
    h = 1e-2
    for _ in range(100):
        state, h = integrate_step(harmonic, state, h, 1e-10)
    assert state.x ** 2 + state.y ** 2 == pytest.approx(0.25, abs=1e-8)


def test_integrate_step_underflow(harmonic, noncenter):
    for sys in (harmonic, noncenter):
        with pytest.raises(StepUnderflow):
            integrate_step(sys, PhaseState(0.1, 0.0, 0.0), 1e-20, 1e-10)


def test_small_amplitude_cap(harmonic, noncenter):
    assert small_amplitude_cap(harmonic) == pytest.approx(5.0)
    assert small_amplitude_cap(noncenter) == pytest.approx(0.5)


@pytest.mark.parametrize('c', [0.01, 0.1, 0.5, 1.0])
def test_harmonic_return_map(harmonic, c):
    result = return_map(harmonic, c)
    assert result.T == pytest.approx(2 * math.pi, abs=1e-8)
    assert abs(result.phi) <= 1e-8
    assert result.c == c and result.steps > 0


@pytest.mark.parametrize('c', [0.1, 0.3, 0.5])
def test_isochrone_return_map(isochrone, c):
    result = return_map(isochrone, c)
    assert result.T == pytest.approx(2 * math.pi, abs=1e-6)
    assert abs(result.phi) <= 1e-6


def test_noncenter_displacement_is_cubic(noncenter):
    for c in (0.1, 0.05, 0.025):
        phi = return_map(noncenter, c, tol=1e-12).phi
        assert phi / c ** 3 == pytest.approx(-math.pi / 4, rel=0.1)


def test_return_map_amplitude_range(harmonic):
    with pytest.raises(AmplitudeOutOfRange):
        return_map(harmonic, 6.0)
    with pytest.raises(AmplitudeOutOfRange):
        return_map(harmonic, 0.0)
    with pytest.raises(AmplitudeOutOfRange):
        return_map(harmonic, 0.5, cap=0.25)


def test_symmetric_systems_close():
    sys = validate_system("x + x^3", "x + x^3")
    for c in (0.1, 0.3):
        result = return_map(sys, c)
        assert abs(result.phi) <= 100 * result.tolerance


def test_period_curve_of_harmonic(harmonic):
    curve = period_curve_lienard(harmonic, 0.05, 2.0, 5)
    assert (curve.parameterization, curve.method) == (AMPLITUDE, RETURN_MAP)
    assert curve.tolerance == pytest.approx(100 * 1e-10)
    numpy.testing.assert_allclose(curve.periods, 2 * math.pi, atol=1e-8)
    assert monotonicity_verdict(curve) == CONSTANT


def test_period_curve_of_damped_linear():
    sys = validate_system("x", "x")
    curve = period_curve_lienard(sys, 0.05, 0.4, 6, workers=2)
    assert numpy.all(numpy.diff(curve.periods) > 0)
    assert monotonicity_verdict(curve) == INCREASING
    numpy.testing.assert_allclose(curve.periods, 2 * math.pi + math.pi / 12 * curve.params ** 2, rtol=2e-3)


def test_damped_linear_expansion_coefficient():
    K, _, _ = fit_expansion(validate_system("x", "x"))
    assert K == pytest.approx(math.pi / 12, rel=0.05)


def test_period_curve_rejects_noncenter(noncenter):
    with pytest.raises(NotACenter) as info:
        period_curve_lienard(noncenter, 0.05, 0.2, 4)
    assert info.value.c == pytest.approx(0.05)
    assert info.value.phi < 0


def test_period_curve_range_checks(harmonic):
    with pytest.raises(AmplitudeOutOfRange):
        period_curve_lienard(harmonic, 0.2, 0.1, 4)
    with pytest.raises(TooFewSamples):
        period_curve_lienard(harmonic, 0.1, 0.2, 1)


def test_time_rescaling():
    slow = validate_system("x", "x + x^3")
    fast = validate_system("2*x", "4*(x + x^3)")
    assert period_lienard(fast, 0.2) == pytest.approx(0.5 * period_lienard(slow, 0.2), abs=1e-7)


def test_reversed_damping_keeps_the_period():
    forward = validate_system("x", "x")
    backward = validate_system("-x", "x")
    assert period_lienard(backward, 0.3) == pytest.approx(period_lienard(forward, 0.3), abs=1e-8)


def test_return_map_matches_quadrature():
    g = "x - x^3"
    T = period_lienard(validate_system("0", g), 0.3)
    assert T == pytest.approx(period_conservative(g, potential(g, 0.3)), abs=1e-6)


def test_return_map_matches_quadrature_for_random_wells(rng):
    for _ in range(5):
        g, _ = random_polynomial(rng, 3, linear=1.0, scale=0.3)
        sys = validate_system("0", g)
        T = period_lienard(sys, 0.2)
        assert T == pytest.approx(period_conservative(g, potential(g, 0.2)), abs=1e-6)


def test_sabatini_C_examples(isochrone):
    assert sabatini_C(isochrone, 0.3) == pytest.approx(0.3, abs=1e-15)
    assert sabatini_C(validate_system("x", "x"), 0.3) == pytest.approx(0.297, rel=1e-14)
    conservative = validate_system("0", "2*x + sin(x)")
    assert sabatini_C(conservative, 0.7) == pytest.approx((1.4 + math.sin(0.7)) / 3.0, rel=1e-14)


def test_sabatini_C_series_matches_direct_formula():
    sys = validate_system("x + x^2", "x + x^2 - x^3")
    for x in (-0.05, 0.02, 0.05):
        series = sabatini_C(sys, x, x_switch=math.inf)
        direct = sabatini_C(sys, x, x_switch=0.0)
        assert series == pytest.approx(direct, rel=1e-12)


def test_sabatini_C_is_continuous_at_the_switch(rng, polynomial_factory):
    for _ in range(10):
        g, _ = polynomial_factory(3, linear=rng.uniform(0.5, 2.0))
        f, _ = polynomial_factory(3)
        sys = validate_system(f, g)
        switch = sabatini_switch(sys)
        for x in (-switch, switch):
            series = sabatini_C(sys, x)
            assert series == pytest.approx(sabatini_C(sys, x, x_switch=0.0), abs=1e-9)
            assert series == pytest.approx(sabatini_C(sys, x * (1 + 1e-9)), abs=1e-9)


def test_sabatini_series_low_order_terms():
    sys = validate_system("x", "x + x^2 + x^3")
    coeffs = sabatini_series(sys, order=4)
    # C''(0) = g''(0)/g'(0), C'''(0) = g'''(0)/g'(0) - 2f'(0)^2/(3g'(0))
    assert coeffs[:4] == pytest.approx([0.0, 1.0, 1.0, (6.0 - 2.0 / 3.0) / 6.0])


def test_sigma_examples(harmonic, isochrone):
    assert sigma(validate_system("0", "x + x^3"), 0.5) == pytest.approx(-0.03125, rel=1e-14)
    for x in (-0.4, 0.2, 0.6):
        assert sigma(isochrone, x) == pytest.approx(0.0, abs=1e-15)
        assert sigma(harmonic, x) == 0.0


@pytest.mark.parametrize('f, g', [("x", "x + x^3"), ("x^3", "x - x^3/2"), ("x + x^2", "x + x^2")])
def test_sigma_matches_derivative_of_C(f, g):
    sys = validate_system(f, g)
    for x in numpy.linspace(0.1, 0.8, 8):
        assert sigma(sys, x) == pytest.approx(sigma_from_C(sys, x), abs=1e-6)


def test_isochronicity_residual(harmonic, isochrone):
    grid = numpy.linspace(-0.5, 0.5, 21)
    assert isochronicity_residual(isochrone, grid) <= 1e-12
    assert isochronicity_residual(harmonic, grid) == 0.0
    assert isochronicity_residual(validate_system("0", "x + x^2"), [-0.25, 0.25]) == pytest.approx(0.0625)


def test_rayleigh_to_lienard():
    sys = rayleigh_to_lienard("x^2")
    assert (sys.f_text, sys.g_text, sys.origin) == ("2*x", "x", 'rayleigh')
    assert sys.corollary5_applicable is True
    sys = rayleigh_to_lienard("x^3")
    assert sys.f_text == "3*x^2"
    assert sys.corollary5_applicable is False
    sys = rayleigh_to_lienard("x^2 + x^4")
    assert sys.f_text == "2*x + 4*x^3"
    assert sys.corollary5_applicable is True


def test_rayleigh_to_lienard_non_polynomial():
    sys = rayleigh_to_lienard("1 - cos(x)")
    assert sys.f_at(0.3) == pytest.approx(math.sin(0.3))
    assert sys.corollary5_applicable is True


def test_rayleigh_needs_the_origin():
    with pytest.raises(NotAtOrigin):
        rayleigh_to_lienard("1 + x^2")
    with pytest.raises(NotAtOrigin):
        rayleigh_to_lienard("x + x^2")
