"""
Truncated Taylor arithmetic ("jets") over parsed expressions, structural polynomial handling and adaptive
Gauss-Kronrod quadrature.

A jet of order N at x0 stores coeffs[k] = h^(k)(x0)/k!, k = 0..N. Derivatives are only converted to the raw
convention in derivatives_at.
"""
import functools
import logging
import math

import numpy
from numpy.polynomial import polynomial as P

from .errors import DomainError, NotPolynomial
from .expr import Add, Binary, Call, Const, Div, Mul, Neg, Pow, Sub, Var, as_expr, compile_expr, polynomial_expr

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 4


def _mul(a, b):
    return numpy.convolve(a, b)[:len(a)]


def _div(a, b):
    if b[0] == 0:
        raise DomainError("division by a jet with zero constant term")
    q = numpy.zeros_like(a)
    q[0] = a[0] / b[0]
    for k in range(1, len(a)):
        q[k] = (a[k] - numpy.dot(b[1:k + 1], q[k - 1::-1][:k])) / b[0]
    return q


def _exp(a):
    e = numpy.zeros_like(a)
    e[0] = math.exp(a[0])
    j = numpy.arange(len(a), dtype=float)
    for k in range(1, len(a)):
        e[k] = numpy.dot(j[1:k + 1] * a[1:k + 1], e[k - 1::-1][:k]) / k
    return e


def _sincos(a):
    s = numpy.zeros_like(a)
    c = numpy.zeros_like(a)
    s[0] = math.sin(a[0])
    c[0] = math.cos(a[0])
    j = numpy.arange(len(a), dtype=float)
    for k in range(1, len(a)):
        ja = j[1:k + 1] * a[1:k + 1]
        s[k] = numpy.dot(ja, c[k - 1::-1][:k]) / k
        c[k] = -numpy.dot(ja, s[k - 1::-1][:k]) / k
    return s, c


def _sqrt(a):
    if a[0] < 0:
        raise DomainError("square root of a negative number")
    if a[0] == 0 and len(a) > 1:
        raise DomainError("square root is not differentiable at 0")
    r = numpy.zeros_like(a)
    r[0] = math.sqrt(a[0])
    for k in range(1, len(a)):
        r[k] = (a[k] - numpy.dot(r[1:k], r[k - 1:0:-1])) / (2.0 * r[0])
    return r


def _atan(a):
    n = len(a)
    t = numpy.zeros_like(a)
    t[0] = math.atan(a[0])
    if n == 1:
        return t
    # atan(a)' = a' / (1 + a^2), integrated term by term
    da = a[1:] * numpy.arange(1, n)
    denominator = _mul(a, a)[:n - 1]
    denominator[0] += 1.0
    w = _div(da, denominator)
    t[1:] = w / numpy.arange(1, n)
    return t


class Jet:
    """
    truncated Taylor expansion of a function at base, to a fixed order. Supports +, -, *, /, integer powers and
    the functions sin, cos, exp, sqrt, atan; scalars are promoted to constant jets.
    """
    __array_priority__ = 1000

    def __init__(self, base, coeffs):
        self.base = float(base)
        self.coeffs = numpy.array(coeffs, dtype=float)
        if self.coeffs.ndim != 1 or len(self.coeffs) == 0:
            raise ValueError("a jet needs a one-dimensional, non-empty coefficient array")

    @property
    def order(self):
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, base, value, order):
        coeffs = numpy.zeros(order + 1)
        coeffs[0] = value
        return cls(base, coeffs)

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.base != self.base or other.order != self.order:
                raise ValueError("jet arithmetic needs equal base and order")
            return other.coeffs
        if isinstance(other, (int, float, numpy.floating, numpy.integer)):
            c = numpy.zeros_like(self.coeffs)
            c[0] = other
            return c
        return NotImplemented

    def _new(self, coeffs):
        return Jet(self.base, coeffs)

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return self._new(self.coeffs + c)

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return self._new(self.coeffs - c)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return self._new(c - self.coeffs)

    def __neg__(self):
        return self._new(-self.coeffs)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return self._new(_mul(self.coeffs, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return self._new(_div(self.coeffs, c))

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return self._new(_div(c, self.coeffs))

    def __pow__(self, n):
        if not isinstance(n, (int, numpy.integer)) or n < 0:
            raise ValueError("jets support nonnegative integer powers only")
        result = numpy.zeros_like(self.coeffs)
        result[0] = 1.0
        square = self.coeffs
        n = int(n)
        while n:
            if n & 1:
                result = _mul(result, square)
            n >>= 1
            if n:
                square = _mul(square, square)
        return self._new(result)

    def sin(self):
        return self._new(_sincos(self.coeffs)[0])

    def cos(self):
        return self._new(_sincos(self.coeffs)[1])

    def exp(self):
        return self._new(_exp(self.coeffs))

    def sqrt(self):
        return self._new(_sqrt(self.coeffs))

    def atan(self):
        return self._new(_atan(self.coeffs))

    def derivatives(self):
        """[h(x0), h'(x0), ..., h^(N)(x0)]"""
        return self.coeffs * numpy.array([math.factorial(k) for k in range(len(self.coeffs))], dtype=float)

    def __repr__(self):
        return "Jet(base=%r, coeffs=%s)" % (self.base, numpy.array2string(self.coeffs, precision=17))


def seed(x0, order):
    """jet of the identity function at x0"""
    if order < 0:
        raise ValueError("jet order must be nonnegative")
    coeffs = numpy.zeros(order + 1)
    coeffs[0] = x0
    if order >= 1:
        coeffs[1] = 1.0
    return Jet(x0, coeffs)


def _eval_jet(node, x):
    if isinstance(node, Const):
        return Jet.constant(x.base, node.value, x.order)
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval_jet(node.operand, x)
    if isinstance(node, Add):
        return _eval_jet(node.left, x) + _eval_jet(node.right, x)
    if isinstance(node, Sub):
        return _eval_jet(node.left, x) - _eval_jet(node.right, x)
    if isinstance(node, Mul):
        return _eval_jet(node.left, x) * _eval_jet(node.right, x)
    if isinstance(node, Div):
        return _eval_jet(node.left, x) / _eval_jet(node.right, x)
    if isinstance(node, Pow):
        return _eval_jet(node.base, x) ** node.exponent
    if isinstance(node, Call):
        return getattr(_eval_jet(node.arg, x), node.name)()
    raise TypeError("not an expression node: %r" % (node,))


def eval_jet(expr, x0, order=DEFAULT_ORDER):
    """
    Taylor jet of an expression at x0

    Args:
        expr: Expr or expression text
        x0: expansion point
        order: truncation order N

    Returns:
        Jet with coeffs[k] = h^(k)(x0)/k!

    Raises:
        DomainError: the expression is singular at x0

    """
    return _eval_jet(as_expr(expr), seed(float(x0), order))


def derivatives_at(expr, x0, k):
    """[h(x0), h'(x0), ..., h^(k)(x0)]"""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return eval_jet(expr, x0, k).derivatives()


# polynomials

@functools.lru_cache(maxsize=256)
def _poly(node):
    if isinstance(node, Const):
        return (float(node.value),)
    if isinstance(node, Var):
        return (0.0, 1.0)
    if isinstance(node, Call):
        raise NotPolynomial("%s(...) is not a polynomial" % node.name)
    if isinstance(node, Neg):
        return tuple(-numpy.asarray(_poly(node.operand)))
    if isinstance(node, Pow):
        return tuple(P.polypow(_poly(node.base), node.exponent))
    if not isinstance(node, Binary):
        raise TypeError("not an expression node: %r" % (node,))
    left = _poly(node.left)
    right = _poly(node.right)
    if isinstance(node, Add):
        c = P.polyadd(left, right)
    elif isinstance(node, Sub):
        c = P.polysub(left, right)
    elif isinstance(node, Mul):
        c = P.polymul(left, right)
    elif isinstance(node, Div):
        divisor = P.polytrim(right)
        if len(divisor) > 1:
            raise NotPolynomial("division by a non-constant expression")
        if divisor[0] == 0:
            raise DomainError("division by zero")
        c = numpy.asarray(left) / divisor[0]
    return tuple(P.polytrim(c))


def polynomial_coefficients(expr):
    """
    coefficients (increasing order) of a pure polynomial expression, detected structurally

    Raises:
        NotPolynomial: the expression contains a function call or a division by a non-constant

    """
    return numpy.array(_poly(as_expr(expr)))


def is_polynomial(expr):
    try:
        polynomial_coefficients(expr)
    except NotPolynomial:
        return False
    return True


def poly_antiderivative(expr):
    """polynomial primitive with zero constant term, as an Expr"""
    return polynomial_expr(P.polyint(polynomial_coefficients(expr)))


def poly_derivative(expr):
    return polynomial_expr(P.polyder(polynomial_coefficients(expr)))


# Gauss-Kronrod 7/15 nodes on [-1, 1] (QUADPACK)
XGK = numpy.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0])
WGK = numpy.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
# Gauss weights of the nodes XGK[1], XGK[3], XGK[5], XGK[7]
WG = numpy.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

_NODES = numpy.concatenate([-XGK[:-1], XGK[::-1]])
_KRONROD = numpy.concatenate([WGK[:-1], WGK[::-1]])
_GAUSS = numpy.zeros(15)
_GAUSS[[1, 3, 5]] = WG[:3]
_GAUSS[7] = WG[3]
_GAUSS[[13, 11, 9]] = WG[:3]


def _gk15(fun, a, b):
    half = 0.5 * (b - a)
    values = fun(0.5 * (a + b) + half * _NODES)
    kronrod = half * numpy.dot(_KRONROD, values)
    gauss = half * numpy.dot(_GAUSS, values)
    return kronrod, abs(kronrod - gauss)


def gauss_kronrod(fun, a, b, rel_tol=1e-12, max_depth=40):
    """
    adaptive Gauss-Kronrod quadrature by recursive bisection

    Args:
        fun: vectorized integrand
        a: lower limit
        b: upper limit
        rel_tol: relative tolerance of the whole integral
        max_depth: deepest bisection level

    Returns:
        float

    """
    if a == b:
        return 0.0
    whole, error = _gk15(fun, a, b)
    scale = abs(whole)
    width = abs(b - a)

    def refine(lo, hi, estimate, error, depth):
        if error <= rel_tol * max(scale, 1e-300) * abs(hi - lo) / width or error == 0.0:
            return estimate
        if depth >= max_depth:
            logger.debug("gauss_kronrod: depth %d reached on [%g, %g], error %.3g", depth, lo, hi, error)
            return estimate
        mid = 0.5 * (lo + hi)
        left, left_error = _gk15(fun, lo, mid)
        right, right_error = _gk15(fun, mid, hi)
        return refine(lo, mid, left, left_error, depth + 1) + refine(mid, hi, right, right_error, depth + 1)

    return float(refine(a, b, whole, error, 0))


def moment_integral(f, x, rel_tol=1e-12, max_depth=40):
    """
    int_0^x s*f(s) ds, exactly for polynomial f, by adaptive Gauss-Kronrod otherwise
    """
    f = as_expr(f)
    x = float(x)
    if x == 0.0:
        return 0.0
    try:
        coeffs = polynomial_coefficients(f)
    except NotPolynomial:
        fun = compile_expr(f)
        return gauss_kronrod(lambda s: s * fun(s), 0.0, x, rel_tol=rel_tol, max_depth=max_depth)
    return float(P.polyval(x, P.polyint(P.polymul([0.0, 1.0], coeffs))))
