import logging
from dataclasses import dataclass

import numpy

from .errors import DomainError, NonpositiveStiffness, NotAtOrigin
from .expr import Expr, as_expr, compile_expr, evaluate, is_zero_literal, to_source
from .jets import DEFAULT_ORDER, eval_jet

logger = logging.getLogger(__name__)

ORIGIN_TOL = 1e-12
_PROBES = numpy.linspace(-1.0, 1.0, 9)


@dataclass(frozen=True)
class SystemSpec:
    """
    validated Lienard system x'' + f(x)x' + g(x) = 0 with the derivatives at 0 used by the criteria.
    Built by validate_system (or rayleigh_to_lienard), never by hand.
    """
    f: Expr
    g: Expr
    f0: float
    fp0: float
    fpp0: float
    gp0: float
    gpp0: float
    gppp0: float
    is_conservative: bool
    origin: str = 'user'
    corollary5_applicable: bool = None

    @property
    def f_text(self):
        return to_source(self.f)

    @property
    def g_text(self):
        return to_source(self.g)

    def f_at(self, x):
        return compile_expr(self.f)(x)

    def g_at(self, x):
        return compile_expr(self.g)(x)

    def derivatives_at_0(self):
        return {
            'f0': self.f0, 'fp0': self.fp0, 'fpp0': self.fpp0,
            'gp0': self.gp0, 'gpp0': self.gpp0, 'gppp0': self.gppp0,
        }


def _vanishes(f, jet):
    if is_zero_literal(f):
        return True
    if numpy.any(jet.coeffs[:3] != 0.0):
        return False
    try:
        return bool(numpy.all(evaluate(f, _PROBES) == 0.0))
    except DomainError:
        return False


def validate_system(f_source, g_source, origin='user', corollary5_applicable=None):
    """
    parses and validates f and g

    Args:
        f_source: damping f(x), Expr or text ("0" for a conservative system)
        g_source: restoring force g(x), Expr or text
        origin: 'user', 'builtin' or 'rayleigh'
        corollary5_applicable: only set by rayleigh_to_lienard

    Returns:
        SystemSpec

    Raises:
        NotAtOrigin: f(0) or g(0) differs from 0 by more than 1e-12
        NonpositiveStiffness: g'(0) <= 0

    """
    f = as_expr(f_source)
    g = as_expr(g_source)
    f_jet = eval_jet(f, 0.0, DEFAULT_ORDER)
    g_jet = eval_jet(g, 0.0, DEFAULT_ORDER)
    fd = f_jet.derivatives()
    gd = g_jet.derivatives()
    if abs(fd[0]) > ORIGIN_TOL:
        raise NotAtOrigin("f(0) = %.17g, the equilibrium must sit at the origin" % fd[0])
    if abs(gd[0]) > ORIGIN_TOL:
        raise NotAtOrigin("g(0) = %.17g, the equilibrium must sit at the origin" % gd[0])
    if not gd[1] > 0:
        raise NonpositiveStiffness("g'(0) = %.17g, a center needs g'(0) > 0" % gd[1])
    spec = SystemSpec(f=f, g=g, f0=float(fd[0]), fp0=float(fd[1]), fpp0=float(fd[2]), gp0=float(gd[1]),
                      gpp0=float(gd[2]), gppp0=float(gd[3]), is_conservative=_vanishes(f, f_jet), origin=origin,
                      corollary5_applicable=corollary5_applicable)
    logger.debug("validated system f=%s g=%s: %s", spec.f_text, spec.g_text, spec.derivatives_at_0())
    return spec
