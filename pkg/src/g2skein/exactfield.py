"""Exact rational functions in one variable q with rational coefficients.

Values are stored as a coprime pair of integer polynomials.  Rational
coefficients are absorbed into the pair, negative powers of q are cleared
into the denominator, the joint integer content is removed and the
denominator has a positive leading coefficient, so two equal functions always
have identical representations.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, lcm
from numbers import Rational
from typing import Mapping, Union

import mpmath

from . import _poly as P

__all__ = [
    "RatFunc",
    "FieldError",
    "FieldDivisionByZero",
    "EvaluationError",
    "RatFuncParseError",
    "arith",
    "equals",
    "eval_at",
    "Q",
    "ONE",
    "ZERO",
]


class FieldError(ValueError):
    """Base class for errors raised by the rational-function field."""


class FieldDivisionByZero(FieldError, ZeroDivisionError):
    pass


class EvaluationError(FieldError):
    pass


class RatFuncParseError(FieldError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.reason = message
        self.position = position


Scalar = Union[int, Fraction]


def _normalize(num: P.Poly, den: P.Poly) -> tuple[P.Poly, P.Poly]:
    if not den:
        raise FieldDivisionByZero("zero denominator")
    if not num:
        return P.ZERO, P.ONE
    # strip common powers of q before the general gcd, it is by far the most
    # common factor in this field
    z = min(P.trailing_zeros(num), P.trailing_zeros(den))
    if z:
        num, den = num[z:], den[z:]
    if len(den) > 1 and len(num) > 1:
        g = P.poly_gcd(num, den)
        if len(g) > 1:
            num = P.divexact(num, g)
            den = P.divexact(den, g)
    c = gcd(P.content(num), P.content(den))
    if den[-1] < 0:
        c = -c
    if c != 1:
        num = tuple(x // c for x in num)
        den = tuple(x // c for x in den)
    return num, den


class RatFunc:
    """An element of Q(q), immutable and hashable."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=P.ZERO, den=P.ONE):
        num = P.strip(num)
        den = P.strip(den)
        self.num, self.den = _normalize(num, den)
        self._hash = None

    @classmethod
    def _make(cls, num: P.Poly, den: P.Poly) -> "RatFunc":
        # trusted constructor for already normalized pairs
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    # ---- constructors -------------------------------------------------
    @classmethod
    def const(cls, value: Scalar) -> "RatFunc":
        value = Fraction(value)
        if value == 0:
            return ZERO
        return cls._make((value.numerator,), (value.denominator,))

    @classmethod
    def q(cls) -> "RatFunc":
        return Q

    @classmethod
    def laurent(cls, terms: Mapping[int, Scalar]) -> "RatFunc":
        """Build sum(c * q**k) from {k: c}; k may be negative, c rational."""
        terms = {k: Fraction(c) for k, c in terms.items() if c}
        if not terms:
            return ZERO
        low = min(min(terms), 0)
        common = lcm(*(c.denominator for c in terms.values()))
        num = [0] * (max(terms) - low + 1)
        for k, c in terms.items():
            num[k - low] = int(c * common)
        den = P.shift((common,), -low)
        return cls(tuple(num), den)

    @classmethod
    def from_coeffs(cls, num, den=(1,)) -> "RatFunc":
        """Ascending rational coefficient lists for numerator and denominator."""
        num = [Fraction(c) for c in num]
        den = [Fraction(c) for c in den]
        m = lcm(*(c.denominator for c in num + den)) if num + den else 1
        return cls(tuple(int(c * m) for c in num), tuple(int(c * m) for c in den))

    @classmethod
    def parse(cls, text: str) -> "RatFunc":
        return _Parser(text).parse()

    @staticmethod
    def coerce(value) -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, (int, Fraction)) or isinstance(value, Rational):
            return RatFunc.const(Fraction(value))
        raise TypeError(f"cannot use {type(value).__name__} as a rational function")

    # ---- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return Fraction(self.num[0] if self.num else 0, self.den[0])

    def __bool__(self) -> bool:
        return bool(self.num)

    # ---- arithmetic ---------------------------------------------------
    def __neg__(self) -> "RatFunc":
        return RatFunc._make(P.neg(self.num), self.den)

    def __pos__(self) -> "RatFunc":
        return self

    def __add__(self, other) -> "RatFunc":
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return RatFunc(P.add(self.num, other.num), self.den)
        num = P.add(P.mul(self.num, other.den), P.mul(other.num, self.den))
        return RatFunc(num, P.mul(self.den, other.den))

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) - self

    def __mul__(self, other) -> "RatFunc":
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        # cross-cancel first so the products stay small
        g1 = P.poly_gcd(self.num, other.den) if len(other.den) > 1 else P.ONE
        g2 = P.poly_gcd(other.num, self.den) if len(self.den) > 1 else P.ONE
        a = P.divexact(self.num, g1) if len(g1) > 1 else self.num
        d = P.divexact(other.den, g1) if len(g1) > 1 else other.den
        b = P.divexact(other.num, g2) if len(g2) > 1 else other.num
        c = P.divexact(self.den, g2) if len(g2) > 1 else self.den
        return RatFunc(P.mul(a, b), P.mul(c, d))

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise FieldDivisionByZero("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other) -> "RatFunc":
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if not other.num:
            raise FieldDivisionByZero(f"division of {self} by zero")
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) / self

    def __pow__(self, n: int) -> "RatFunc":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc._make(P.power(self.num, n), P.power(self.den, n)) if n else ONE

    # ---- comparison ---------------------------------------------------
    def __eq__(self, other) -> bool:
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # ---- evaluation ---------------------------------------------------
    def eval_at(self, qval):
        return eval_at(self, qval)

    # ---- text ---------------------------------------------------------
    def __str__(self) -> str:
        if len(self.den) == 1 and self.den[0] == 1:
            return f"({_render_poly(self.num)})"
        return f"({_render_poly(self.num)})/({_render_poly(self.den)})"

    def __repr__(self) -> str:
        return f"RatFunc({str(self)!r})"


def _render_poly(p: P.Poly) -> str:
    if not p:
        return "0"
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = f"{mag}"
        elif k == 1:
            body = f"{mag}*q"
        else:
            body = f"{mag}*q^{k}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+" if c > 0 else "-") + body)
    return "".join(parts)


ZERO = RatFunc._make(P.ZERO, P.ONE)
ONE = RatFunc._make(P.ONE, P.ONE)
Q = RatFunc._make((0, 1), P.ONE)


_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(\*\*|[-+*/^()]))")


class _Parser:
    """Recursive-descent reader for +, -, *, /, ^ over integers and q."""

    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise RatFuncParseError(f"unexpected character {text[pos]!r}", pos)
            start = m.start(m.lastindex)
            if m.group(1):
                self.tokens.append(("int", m.group(1), start))
            elif m.group(2):
                self.tokens.append(("q", "q", start))
            else:
                op = "^" if m.group(3) == "**" else m.group(3)
                self.tokens.append(("op", op, start))
            pos = m.end()
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def _take(self):
        tok = self._peek()
        self.i += 1
        return tok

    def _expect(self, value: str):
        kind, val, pos = self._take()
        if val != value:
            raise RatFuncParseError(f"expected {value!r}", pos)

    def parse(self) -> RatFunc:
        if not self.tokens:
            raise RatFuncParseError("empty expression", 0)
        value = self._expr()
        kind, val, pos = self._peek()
        if kind != "end":
            raise RatFuncParseError(f"unexpected {val!r}", pos)
        return value

    def _expr(self) -> RatFunc:
        sign = 1
        if self._peek()[1] in ("+", "-"):
            sign = -1 if self._take()[1] == "-" else 1
        value = self._term()
        if sign < 0:
            value = -value
        while self._peek()[1] in ("+", "-"):
            op = self._take()[1]
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self) -> RatFunc:
        value = self._power()
        while self._peek()[1] in ("*", "/"):
            op, pos = self._take()[1:]
            rhs = self._power()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise RatFuncParseError("division by zero", pos)
                value = value / rhs
        return value

    def _power(self) -> RatFunc:
        base = self._atom()
        if self._peek()[1] == "^":
            self._take()
            sign = 1
            if self._peek()[1] in ("+", "-"):
                sign = -1 if self._take()[1] == "-" else 1
            kind, val, pos = self._take()
            if kind != "int":
                raise RatFuncParseError("expected integer exponent", pos)
            exp = sign * int(val)
            if exp < 0 and base.is_zero():
                raise RatFuncParseError("negative power of zero", pos)
            base = base**exp
        return base

    def _atom(self) -> RatFunc:
        kind, val, pos = self._take()
        if kind == "int":
            return RatFunc.const(int(val))
        if kind == "q":
            return Q
        if val == "(":
            value = self._expr()
            self._expect(")")
            return value
        if val == "-":
            return -self._atom()
        raise RatFuncParseError(f"unexpected {val or 'end of input'!r}", pos)


# ---- module-level operations -------------------------------------------

_OPS = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
}


def arith(x: RatFunc, y: RatFunc | None, operator: str) -> RatFunc:
    """Apply one of add, sub, mul, div, neg (neg ignores y)."""
    if operator == "neg":
        return -x
    try:
        return _OPS[operator](x, y)
    except KeyError:
        raise ValueError(f"unknown operator {operator!r}") from None


def equals(x: RatFunc, y: RatFunc) -> bool:
    """Cross-multiplication test, independent of the stored normal form."""
    x, y = RatFunc.coerce(x), RatFunc.coerce(y)
    return not P.sub(P.mul(x.num, y.den), P.mul(y.num, x.den))


def _is_interval(v) -> bool:
    return isinstance(v, mpmath.ctx_iv.ivmpf)


def eval_at(x: RatFunc, qval):
    """Substitute q = qval.

    Integers, Fractions and decimal strings give an exact Fraction.  Floats
    give a float, mpmath numbers give an mpmath number and mpmath intervals
    give an interval enclosure.
    """
    x = RatFunc.coerce(x)
    if isinstance(qval, str):
        qval = Fraction(qval)
    if _is_interval(qval):
        if not qval.a > 0:
            raise EvaluationError(f"q must be positive, got {qval}")
        num = P.evaluate(x.num, qval)
        den = P.evaluate(x.den, qval)
        if 0 in den:
            raise EvaluationError(f"denominator of {x} may vanish on {qval}")
        return num / den
    if isinstance(qval, bool):
        raise TypeError("boolean is not a valid q")
    if isinstance(qval, Rational) and not isinstance(qval, Fraction):
        qval = Fraction(qval)
    if not qval > 0:
        raise EvaluationError(f"q must be positive, got {qval}")
    den = P.evaluate(x.den, qval)
    if den == 0:
        raise EvaluationError(f"denominator of {x} vanishes at q={qval}")
    num = P.evaluate(x.num, qval)
    if isinstance(qval, Fraction):
        return Fraction(num) / den
    return num / den
