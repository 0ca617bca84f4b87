import numpy
import pytest

from periodlab.expr import polynomial_expr
from periodlab.registry import BUILTINS
from periodlab.system import validate_system


@pytest.fixture(params=[entry.key for entry in BUILTINS])
def builtin(request):
    return next(entry for entry in BUILTINS if entry.key == request.param)


@pytest.fixture
def harmonic():
    return validate_system('0', 'x')


@pytest.fixture
def isochrone():
    return validate_system('x', 'x + x^3/9')


@pytest.fixture
def noncenter():
    return validate_system('x^2', 'x + x^2')


@pytest.fixture
def rng():
    return numpy.random.default_rng(20241019)


def random_polynomial(rng, degree, zero_at_origin=True, linear=None, scale=1.0):
    """polynomial expression with coefficients uniform in [-scale, scale]"""
    coeffs = rng.uniform(-scale, scale, degree + 1)
    if zero_at_origin:
        coeffs[0] = 0.0
    if linear is not None:
        coeffs[1] = linear
    return polynomial_expr(coeffs), coeffs


@pytest.fixture
def polynomial_factory(rng):
    def make(degree, **kwargs):
        return random_polynomial(rng, degree, **kwargs)
    return make
