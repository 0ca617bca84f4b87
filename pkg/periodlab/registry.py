"""
Builtin example systems. The registry is also the fixture list of the acceptance tests, so every entry carries
the conclusion classify is expected to reach.
"""
import logging
from dataclasses import dataclass

from .errors import UnknownKey
from .lienard import rayleigh_to_lienard
from .system import validate_system

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BuiltinEntry:
    key: str
    f: str
    g: str
    expected: str
    provenance: str
    rayleigh_F: str = None

    def system(self):
        """validated SystemSpec of the entry; Rayleigh entries go through the Rayleigh reduction"""
        if self.rayleigh_F is not None:
            return rayleigh_to_lienard(self.rayleigh_F)
        return validate_system(self.f, self.g, origin='builtin')

    def describe(self):
        equation = "x'' + F(x') + x = 0 with F(y) = %s" % self.rayleigh_F if self.rayleigh_F else \
            "x'' + (%s)x' + %s = 0" % (self.f, self.g)
        return "%s: %s, expected %s (%s)" % (self.key, equation, self.expected, self.provenance)


BUILTINS = (
    BuiltinEntry('harmonic', '0', 'x', 'isochronous_candidate',
                 "linear oscillator, every orbit has period 2*pi"),
    BuiltinEntry('pendulum', '0', 'sin(x)', 'increasing',
                 "mathematical pendulum, period 4K(sin(A/2)) at amplitude A"),
    BuiltinEntry('softening', '0', 'x - x^3', 'increasing',
                 "softening spring, x g''(x) < 0 and g''(0) = 0"),
    BuiltinEntry('hardening', '0', 'x + x^3', 'decreasing',
                 "hardening spring, x g''(x) > 0 and g''(0) = 0"),
    BuiltinEntry('quadratic_well', '0', 'x + x^2', 'increasing',
                 "asymmetric well, g'' > 0 and x(g''(0)g' - g'(0)g'') >= 0"),
    BuiltinEntry('sabatini_isochrone', 'x', 'x + x^3/9', 'isochronous_candidate',
                 "isochronous Lienard center, C(x) = x"),
    BuiltinEntry('damped_linear', 'x', 'x', 'increasing',
                 "linear restoring force with odd damping, Q = -2/3"),
    BuiltinEntry('noncenter', 'x^2', 'x + x^2', 'not_a_center',
                 "f'(0)g''(0) - 2g'(0)f''(0) = -4 != 0, the orbits spiral"),
    BuiltinEntry('rayleigh_example', '2*x', 'x', 'increasing',
                 "Rayleigh equation with even F and F''(0) != 0", rayleigh_F='x^2'),
)


def builtin_keys():
    return [entry.key for entry in BUILTINS]


def get_builtin(key):
    """
    Raises:
        UnknownKey: no entry is registered under key

    """
    for entry in BUILTINS:
        if entry.key == key:
            return entry
    raise UnknownKey("unknown builtin %r, choose one of %s" % (key, ', '.join(builtin_keys())))
