"""
Expression front-end: tokenizer, recursive descent parser, printer and evaluator for the one-variable functions
f(x) and g(x) of a Lienard equation.

grammar (whitespace is insignificant):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := atom ('^' uint)*          towers are right associative: x^2^3 == x^8
    atom   := number | 'x' | func '(' expr ')' | '(' expr ')'
    func   := sin | cos | exp | sqrt | atan
"""
import functools
import logging
import math
from collections import namedtuple
from dataclasses import dataclass

import numpy

from .errors import (DomainError, IllegalCharacter, MalformedNumber, UnbalancedParentheses, UnexpectedToken,
                     UnknownIdentifier)

logger = logging.getLogger(__name__)

VARIABLE = 'x'
FUNCTIONS = ('sin', 'cos', 'exp', 'sqrt', 'atan')
OPERATORS = '+-*/^'

Token = namedtuple('Token', ['kind', 'text', 'position'])
Token.__doc__ = "kind is one of 'number', 'identifier', 'operator', 'lparen', 'rparen'"


# AST

class Expr:
    """base class of all expression nodes. Nodes are immutable, hashable and compare structurally."""
    precedence = 5

    def __str__(self):
        return to_source(self)


@dataclass(frozen=True)
class Const(Expr):
    value: float

    @property
    def precedence(self):
        # a negative literal prints with a leading minus and binds like unary negation
        return 3 if self.value < 0 else 5


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr
    precedence = 3


@dataclass(frozen=True)
class Binary(Expr):
    left: Expr
    right: Expr
    symbol = None


@dataclass(frozen=True)
class Add(Binary):
    symbol = '+'
    precedence = 1


@dataclass(frozen=True)
class Sub(Binary):
    symbol = '-'
    precedence = 1


@dataclass(frozen=True)
class Mul(Binary):
    symbol = '*'
    precedence = 2


@dataclass(frozen=True)
class Div(Binary):
    symbol = '/'
    precedence = 2


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int
    precedence = 4

    def __post_init__(self):
        if not isinstance(self.exponent, int) or self.exponent < 0:
            raise ValueError("power exponents must be nonnegative integers, got %r" % (self.exponent,))


@dataclass(frozen=True)
class Call(Expr):
    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in FUNCTIONS:
            raise ValueError("unknown function %r" % (self.name,))


BINARY = {'+': Add, '-': Sub, '*': Mul, '/': Div}


# tokenizer

def _scan_number(source, start):
    """returns the end offset of the decimal literal starting at start"""
    n = len(source)
    i = start
    digits = 0
    while i < n and source[i].isdigit():
        i += 1
        digits += 1
    if i < n and source[i] == '.':
        i += 1
        while i < n and source[i].isdigit():
            i += 1
            digits += 1
    if digits == 0:
        raise MalformedNumber("malformed number at offset %d" % start, start)
    if i < n and source[i] in 'eE':
        i += 1
        if i < n and source[i] in '+-':
            i += 1
        exp_start = i
        while i < n and source[i].isdigit():
            i += 1
        if i == exp_start:
            raise MalformedNumber("malformed exponent in number at offset %d" % start, start)
    if i < n and (source[i] == '.' or source[i].isalpha() and source[i] in 'eE'):
        raise MalformedNumber("malformed number at offset %d" % start, start)
    return i


def tokenize(source):
    """
    splits an expression into tokens

    Args:
        source: expression text

    Returns:
        list of Token

    """
    if not isinstance(source, str):
        raise TypeError("expression source must be a string")
    tokens = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
        elif c.isdigit() or (c == '.' and i + 1 < n and source[i + 1].isdigit()):
            end = _scan_number(source, i)
            tokens.append(Token('number', source[i:end], i))
            i = end
        elif c == '.':
            raise MalformedNumber("malformed number at offset %d" % i, i)
        elif c.isascii() and (c.isalpha() or c == '_'):
            end = i
            while end < n and source[end].isascii() and (source[end].isalnum() or source[end] == '_'):
                end += 1
            tokens.append(Token('identifier', source[i:end], i))
            i = end
        elif c in OPERATORS:
            tokens.append(Token('operator', c, i))
            i += 1
        elif c == '(':
            tokens.append(Token('lparen', c, i))
            i += 1
        elif c == ')':
            tokens.append(Token('rparen', c, i))
            i += 1
        else:
            raise IllegalCharacter("illegal character %r at offset %d" % (c, i), i)
    return tokens


# parser

class _Parser:
    def __init__(self, source, tokens):
        self.source = source
        self.tokens = tokens
        self.index = 0
        self.depth = 0

    def peek(self):
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def advance(self):
        token = self.peek()
        self.index += 1
        return token

    def unexpected(self, token, expected):
        if token is None:
            return UnexpectedToken("unexpected end of input, expected %s" % expected, len(self.source))
        if token.kind == 'rparen' and self.depth == 0:
            return UnbalancedParentheses("unmatched ')' at offset %d" % token.position, token.position)
        return UnexpectedToken("unexpected %r at offset %d, expected %s" % (token.text, token.position, expected),
                               token.position)

    def parse(self):
        if not self.tokens:
            raise UnexpectedToken("empty expression", 0)
        tree = self.expr()
        if self.peek() is not None:
            raise self.unexpected(self.peek(), "an operator or end of input")
        return tree

    def expr(self):
        left = self.term()
        while self.peek() is not None and self.peek().text in ('+', '-') and self.peek().kind == 'operator':
            op = self.advance().text
            left = BINARY[op](left, self.term())
        return left

    def term(self):
        left = self.factor()
        while self.peek() is not None and self.peek().text in ('*', '/') and self.peek().kind == 'operator':
            op = self.advance().text
            left = BINARY[op](left, self.factor())
        return left

    def factor(self):
        token = self.peek()
        if token is not None and token.kind == 'operator' and token.text == '-':
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        exponents = []
        while self.peek() is not None and self.peek().kind == 'operator' and self.peek().text == '^':
            self.advance()
            token = self.advance()
            if token is None or token.kind != 'number' or not token.text.isdigit():
                raise self.unexpected(token, "a nonnegative integer exponent")
            exponents.append(int(token.text))
        if not exponents:
            return base
        exponent = exponents[-1]
        for e in reversed(exponents[:-1]):
            exponent = e ** exponent
        return Pow(base, exponent)

    def group(self, opening):
        self.depth += 1
        inner = self.expr()
        closing = self.advance()
        if closing is None:
            raise UnbalancedParentheses("'(' at offset %d is never closed" % opening.position, opening.position)
        if closing.kind != 'rparen':
            raise self.unexpected(closing, "')'")
        self.depth -= 1
        return inner

    def atom(self):
        token = self.advance()
        if token is None:
            raise self.unexpected(None, "a number, 'x', a function or '('")
        if token.kind == 'number':
            value = float(token.text)
            if not math.isfinite(value):
                raise MalformedNumber("number %s at offset %d overflows a double" % (token.text, token.position),
                                      token.position)
            return Const(value)
        if token.kind == 'lparen':
            return self.group(token)
        if token.kind == 'identifier':
            if token.text == VARIABLE:
                return Var()
            if token.text not in FUNCTIONS:
                raise UnknownIdentifier("unknown identifier %r at offset %d" % (token.text, token.position),
                                        token.position)
            opening = self.advance()
            if opening is None or opening.kind != 'lparen':
                raise self.unexpected(opening, "'(' after %s" % token.text)
            return Call(token.text, self.group(opening))
        raise self.unexpected(token, "a number, 'x', a function or '('")


@functools.lru_cache(maxsize=256)
def parse(source):
    """
    parses an expression in the single variable x

    Args:
        source: expression text, e.g. "x - x^3" or "x*(1 + sin(x))"

    Returns:
        Expr

    """
    tree = _Parser(source, tokenize(source)).parse()
    logger.debug("parsed %r as %r", source, tree)
    return tree


def as_expr(expr):
    """accepts either an Expr or its source text"""
    if isinstance(expr, Expr):
        return expr
    if isinstance(expr, str):
        return parse(expr)
    raise TypeError("you must pass a valid Expr instance or expression text")


# printer

def _format_number(value):
    if float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def to_source(expr):
    """
    prints an expression with the minimal parentheses; parse(to_source(e)) rebuilds e for every parsed e.
    """
    if isinstance(expr, Const):
        return _format_number(expr.value)
    if isinstance(expr, Var):
        return VARIABLE
    if isinstance(expr, Neg):
        inner = to_source(expr.operand)
        if expr.operand.precedence < Neg.precedence:
            inner = '(' + inner + ')'
        return '-' + inner
    if isinstance(expr, Binary):
        left = to_source(expr.left)
        if expr.left.precedence < expr.precedence:
            left = '(' + left + ')'
        right = to_source(expr.right)
        if expr.right.precedence <= expr.precedence:
            right = '(' + right + ')'
        if expr.precedence == 1:
            return '%s %s %s' % (left, expr.symbol, right)
        return '%s%s%s' % (left, expr.symbol, right)
    if isinstance(expr, Pow):
        base = to_source(expr.base)
        if expr.base.precedence < 5:
            base = '(' + base + ')'
        return '%s^%d' % (base, expr.exponent)
    if isinstance(expr, Call):
        return '%s(%s)' % (expr.name, to_source(expr.arg))
    raise TypeError("not an expression node: %r" % (expr,))


# evaluation

def _divide(a, b):
    if numpy.any(numpy.asarray(b) == 0):
        raise DomainError("division by zero")
    return a / b


def _sqrt(a):
    if numpy.any(numpy.asarray(a) < 0):
        raise DomainError("square root of a negative number")
    return numpy.sqrt(a)


UNARY = {
    'sin': numpy.sin,
    'cos': numpy.cos,
    'exp': numpy.exp,
    'sqrt': _sqrt,
    'atan': numpy.arctan,
}


@functools.lru_cache(maxsize=256)
def compile_expr(expr):
    """
    turns an expression tree into a closure x -> value, valid for floats and numpy arrays alike
    """
    if isinstance(expr, Const):
        value = float(expr.value)
        return lambda x: value + 0.0 * x
    if isinstance(expr, Var):
        return lambda x: x
    if isinstance(expr, Neg):
        inner = compile_expr(expr.operand)
        return lambda x: -inner(x)
    if isinstance(expr, Binary):
        left = compile_expr(expr.left)
        right = compile_expr(expr.right)
        if isinstance(expr, Add):
            return lambda x: left(x) + right(x)
        if isinstance(expr, Sub):
            return lambda x: left(x) - right(x)
        if isinstance(expr, Mul):
            return lambda x: left(x) * right(x)
        return lambda x: _divide(left(x), right(x))
    if isinstance(expr, Pow):
        base = compile_expr(expr.base)
        n = expr.exponent
        return lambda x: base(x) ** n
    if isinstance(expr, Call):
        inner = compile_expr(expr.arg)
        fun = UNARY[expr.name]
        return lambda x: fun(inner(x))
    raise TypeError("not an expression node: %r" % (expr,))


def evaluate(expr, x):
    """
    evaluates an expression in IEEE double precision

    Args:
        expr: Expr or expression text
        x: float or numpy array of floats

    Returns:
        float, or an array shaped like x

    Raises:
        DomainError: division by zero or square root of a negative number

    """
    fun = compile_expr(as_expr(expr))
    if numpy.ndim(x) == 0:
        with numpy.errstate(over='ignore'):
            return float(fun(float(x)))
    with numpy.errstate(over='ignore'):
        return fun(numpy.asarray(x, dtype=float))


def is_zero_literal(expr):
    """True for the constant 0, possibly negated"""
    expr = as_expr(expr)
    while isinstance(expr, Neg):
        expr = expr.operand
    return isinstance(expr, Const) and expr.value == 0.0


def polynomial_expr(coeffs):
    """
    builds c0 + c1*x + c2*x^2 + ... from increasing-order coefficients, skipping zero terms
    """
    terms = []
    for k, c in enumerate(coeffs):
        c = float(c)
        if c == 0.0:
            continue
        if k == 0:
            monomial = None
        elif k == 1:
            monomial = Var()
        else:
            monomial = Pow(Var(), k)
        if monomial is None:
            term = Const(abs(c))
        elif abs(c) == 1.0:
            term = monomial
        else:
            term = Mul(Const(abs(c)), monomial)
        terms.append((c < 0, term))
    if not terms:
        return Const(0.0)
    negative, tree = terms[0]
    if negative:
        tree = Neg(tree)
    for negative, term in terms[1:]:
        tree = Sub(tree, term) if negative else Add(tree, term)
    return tree


def differentiate(expr):
    """
    structural d/dx by the sum, product, quotient and chain rules. No simplification beyond dropping
    multiplications by the constants 0 and 1.
    """
    expr = as_expr(expr)
    if isinstance(expr, Const):
        return Const(0.0)
    if isinstance(expr, Var):
        return Const(1.0)
    if isinstance(expr, Neg):
        return _neg(differentiate(expr.operand))
    if isinstance(expr, (Add, Sub)):
        left, right = differentiate(expr.left), differentiate(expr.right)
        if is_zero_literal(right):
            return left
        if is_zero_literal(left):
            return right if isinstance(expr, Add) else _neg(right)
        return type(expr)(left, right)
    if isinstance(expr, Mul):
        return _add(_mul(differentiate(expr.left), expr.right), _mul(expr.left, differentiate(expr.right)))
    if isinstance(expr, Div):
        numerator = _sub(_mul(differentiate(expr.left), expr.right), _mul(expr.left, differentiate(expr.right)))
        return Div(numerator, Pow(expr.right, 2))
    if isinstance(expr, Pow):
        if expr.exponent == 0:
            return Const(0.0)
        outer = Const(float(expr.exponent)) if expr.exponent == 1 else \
            _mul(Const(float(expr.exponent)), expr.base if expr.exponent == 2 else Pow(expr.base, expr.exponent - 1))
        return _mul(outer, differentiate(expr.base))
    if isinstance(expr, Call):
        u = expr.arg
        if expr.name == 'sin':
            outer = Call('cos', u)
        elif expr.name == 'cos':
            outer = Neg(Call('sin', u))
        elif expr.name == 'exp':
            outer = expr
        elif expr.name == 'sqrt':
            outer = Div(Const(1.0), Mul(Const(2.0), expr))
        else:
            outer = Div(Const(1.0), Add(Const(1.0), Pow(u, 2)))
        return _mul(outer, differentiate(u))
    raise TypeError("not an expression node: %r" % (expr,))


def _is_one(expr):
    return isinstance(expr, Const) and expr.value == 1.0


def _neg(a):
    return Const(0.0) if is_zero_literal(a) else Neg(a)


def _add(a, b):
    if is_zero_literal(a):
        return b
    if is_zero_literal(b):
        return a
    return Add(a, b)


def _sub(a, b):
    if is_zero_literal(b):
        return a
    if is_zero_literal(a):
        return _neg(b)
    return Sub(a, b)


def _mul(a, b):
    if is_zero_literal(a) or is_zero_literal(b):
        return Const(0.0)
    if _is_one(a):
        return b
    if _is_one(b):
        return a
    return Mul(a, b)
