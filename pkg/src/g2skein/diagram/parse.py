"""Reader for the diagram expression language.

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := scalar? factor (('.'|'*') factor)*
    factor := generator | '(' expr ')' | 'adj(' expr ')' | 'rot(' expr ')' | 'tr(' expr ')'
    scalar := '[' rational function of q ']'

``.`` composes (the left factor is applied after the right one) and ``*`` is
the horizontal tensor product.  Both bind left to right at the same level.
"""

from __future__ import annotations

import re

from ..exactfield import RatFunc, RatFuncParseError
from . import maps
from .maps import ArityError
from .morphism import Morphism, adjoint, compose, rotate, tensor, trace_close

__all__ = ["parse", "ExpressionError"]


class ExpressionError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_GENERATORS = {
    "id": (maps.identity, 1),
    "cup": (maps.cup, 2),
    "cap": (maps.cap, 2),
    "split": (maps.split, 2),
    "merge": (maps.merge, 2),
}
_WRAPPERS = {"adj": adjoint, "rot": rotate, "tr": trace_close}

_TOKEN = re.compile(r"\s*(?:([A-Za-z_]\w*)|(\d+)|(\[)|([-+.*(),]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionError(f"unexpected character {text[pos + stripped]!r}", pos + stripped)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("name", m.group(1), start))
            pos = m.end()
        elif m.group(2):
            out.append(("int", m.group(2), start))
            pos = m.end()
        elif m.group(3):
            close = text.find("]", start)
            if close < 0:
                raise ExpressionError("unterminated scalar", start)
            out.append(("scalar", text[start + 1 : close], start + 1))
            pos = close + 1
        else:
            out.append(("op", m.group(4), start))
            pos = m.end()
    out.append(("end", "", n))
    return out


class _Reader:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value or kind not in ("op",):
            raise ExpressionError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def expr(self) -> Morphism:
        sign = None
        if self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            sign = self.take()[1]
        value = self.term()
        if sign == "-":
            value = -value
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op, pos = self.take()[1:]
            rhs = self.term()
            if (rhs.k, rhs.m) != (value.k, value.m):
                raise ExpressionError(
                    f"cannot add Mor({value.k},{value.m}) and Mor({rhs.k},{rhs.m})", pos
                )
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Morphism:
        scalar = None
        if self.peek()[0] == "scalar":
            _, text, pos = self.take()
            try:
                scalar = RatFunc.parse(text)
            except RatFuncParseError as exc:
                raise ExpressionError(f"bad scalar: {exc.reason}", pos + exc.position) from None
        value = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in (".", "*"):
            op, pos = self.take()[1:]
            rhs = self.factor()
            if op == ".":
                if rhs.m != value.k:
                    raise ExpressionError(
                        f"arity mismatch: Mor({value.k},{value.m}) after Mor({rhs.k},{rhs.m})", pos
                    )
                value = compose(value, rhs)
            else:
                value = tensor(value, rhs)
        if scalar is not None:
            value = value.scale(scalar)
        return value

    def factor(self) -> Morphism:
        kind, val, pos = self.take()
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect(")")
            return value
        if kind != "name":
            raise ExpressionError(f"expected a generator or '(', found {val or 'end of input'!r}", pos)
        if val in _WRAPPERS:
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            try:
                return _WRAPPERS[val](inner)
            except ArityError as exc:
                raise ExpressionError(str(exc), pos) from None
        if val not in _GENERATORS:
            raise ExpressionError(f"unknown generator {val!r}", pos)
        fn, nargs = _GENERATORS[val]
        self.expect("(")
        args = []
        for j in range(nargs):
            if j:
                self.expect(",")
            k2, v2, p2 = self.take()
            if k2 != "int":
                raise ExpressionError(f"expected integer argument, found {v2 or 'end of input'!r}", p2)
            args.append(int(v2))
        self.expect(")")
        try:
            return Morphism.of(fn(*args))
        except ArityError as exc:
            raise ExpressionError(str(exc), pos) from None


def parse(expression: str) -> Morphism:
    reader = _Reader(expression)
    if reader.peek()[0] == "end":
        raise ExpressionError("empty expression", 0)
    value = reader.expr()
    kind, val, pos = reader.peek()
    if kind != "end":
        raise ExpressionError(f"unexpected {val!r}", pos)
    return value
