"""
Exception hierarchy of periodlab. Every error raised on purpose by the library derives from PeriodLabError, so
callers (and the command line front-end) can tell modelling outcomes apart from programming errors.
"""


class PeriodLabError(Exception):
    """base class of all periodlab errors"""


class ConfigurationError(PeriodLabError):
    """malformed setting, e.g. an unreadable PERIODLAB_TOL value"""


# expression front-end

class ExpressionError(PeriodLabError):
    """
    base class of tokenizer and parser errors. position is the character offset in the source, if known.
    """
    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class IllegalCharacter(ExpressionError):
    pass


class MalformedNumber(ExpressionError):
    pass


class UnexpectedToken(ExpressionError):
    pass


class UnknownIdentifier(ExpressionError):
    pass


class UnbalancedParentheses(ExpressionError):
    pass


class DomainError(PeriodLabError, ArithmeticError):
    """evaluation outside the natural domain: division by zero, sqrt of a negative number"""


class SystemValidationError(PeriodLabError):
    pass


class NotAtOrigin(SystemValidationError):
    pass


class NonpositiveStiffness(SystemValidationError):
    pass


class NotPolynomial(PeriodLabError):
    pass


# period computations

class DegenerateWell(PeriodLabError):
    pass


class EnergyOutOfRange(PeriodLabError):
    pass


class AmplitudeOutOfRange(PeriodLabError):
    pass


class QuadratureNoConvergence(PeriodLabError):
    pass


class TooFewSamples(PeriodLabError):
    pass


class StepUnderflow(PeriodLabError):
    pass


class NoReturn(PeriodLabError):
    pass


class NotACenter(PeriodLabError):
    """
    the return map displacement exceeds the closed-orbit guard. c and phi are the offending amplitude and
    displacement.
    """
    def __init__(self, message, c=None, phi=None):
        super().__init__(message)
        self.c = c
        self.phi = phi


# criteria

class UndefinedWitness(PeriodLabError):
    pass


class NoRealTarget(PeriodLabError):
    pass


class Inapplicable(PeriodLabError):
    pass


class UnknownKey(PeriodLabError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ''


# report

class InvalidReport(PeriodLabError):
    """a report document does not validate against REPORT_SCHEMA"""
