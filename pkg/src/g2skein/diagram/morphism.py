"""Formal linear combinations of diagrams with rational-function coefficients."""

from __future__ import annotations

from typing import Iterable, Iterator

from ..exactfield import ONE, ZERO, RatFunc
from . import maps
from .maps import ArityError, Diagram

__all__ = ["Morphism", "build", "BASIS_NAMES", "describe"]


class Morphism:
    """An element of Mor(k, m): sum of coefficient * diagram.

    Terms are keyed by canonical diagram key, zero coefficients are dropped,
    and iteration is in sorted diagram order.
    """

    __slots__ = ("k", "m", "_terms")

    def __init__(self, k: int, m: int, terms: Iterable[tuple[RatFunc, Diagram]] = ()):
        self.k = k
        self.m = m
        acc: dict[tuple, list] = {}
        for coef, d in terms:
            if (d.k, d.m) != (k, m):
                raise ArityError(f"diagram in Mor({d.k},{d.m}) added to Mor({k},{m})")
            coef = RatFunc.coerce(coef)
            key = d.key()
            if key in acc:
                acc[key][0] = acc[key][0] + coef
            else:
                acc[key] = [coef, d]
        self._terms = {key: (c, d) for key, (c, d) in acc.items() if not c.is_zero()}

    @classmethod
    def of(cls, d: Diagram, coef=ONE) -> "Morphism":
        return cls(d.k, d.m, [(coef, d)])

    @classmethod
    def zero(cls, k: int, m: int) -> "Morphism":
        return cls(k, m)

    def terms(self) -> list[tuple[RatFunc, Diagram]]:
        return [self._terms[key][:2] for key in sorted(self._terms, key=lambda t: maps._sort_key(self._terms[t][1]))]

    def __iter__(self) -> Iterator[tuple[RatFunc, Diagram]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, d: Diagram) -> RatFunc:
        entry = self._terms.get(d.key())
        return entry[0] if entry else ZERO

    def is_zero(self) -> bool:
        return not self._terms

    def _check_same(self, other: "Morphism") -> None:
        if (self.k, self.m) != (other.k, other.m):
            raise ArityError(f"cannot add Mor({self.k},{self.m}) and Mor({other.k},{other.m})")

    def __add__(self, other: "Morphism") -> "Morphism":
        self._check_same(other)
        return Morphism(self.k, self.m, self.terms() + other.terms())

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-other)

    def __neg__(self) -> "Morphism":
        return Morphism(self.k, self.m, [(-c, d) for c, d in self.terms()])

    def scale(self, s) -> "Morphism":
        s = RatFunc.coerce(s)
        return Morphism(self.k, self.m, [(s * c, d) for c, d in self.terms()])

    def __rmul__(self, s) -> "Morphism":
        return self.scale(s)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.k, self.m) == (other.k, other.m) and {
            key: c for key, (c, _) in self._terms.items()
        } == {key: c for key, (c, _) in other._terms.items()}

    def __hash__(self):
        return hash((self.k, self.m, frozenset((key, c) for key, (c, _) in self._terms.items())))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"[{c}]*{describe(d)}" for c, d in self.terms())

    def __repr__(self) -> str:
        return f"Morphism(Mor({self.k},{self.m}): {self})"


def _bilinear(op, f: Morphism, g: Morphism, k: int, m: int) -> Morphism:
    return Morphism(k, m, [(a * b, op(x, y)) for a, x in f.terms() for b, y in g.terms()])


def compose(f: Morphism, g: Morphism) -> Morphism:
    """f ∘ g (g first)."""
    if g.m != f.k:
        raise ArityError(f"cannot compose Mor({f.k},{f.m}) after Mor({g.k},{g.m})")
    return _bilinear(maps.compose, f, g, g.k, f.m)


def tensor(f: Morphism, g: Morphism) -> Morphism:
    return _bilinear(maps.tensor, f, g, f.k + g.k, f.m + g.m)


def adjoint(f: Morphism) -> Morphism:
    # coefficients are real rational functions, so conjugation is trivial
    return Morphism(f.m, f.k, [(c, maps.adjoint(d)) for c, d in f.terms()])


def rotate(f: Morphism) -> Morphism:
    if f.k != f.m:
        raise ArityError(f"rotate needs k = m, got Mor({f.k},{f.m})")
    return Morphism(f.k, f.m, [(c, maps.rotate(d)) for c, d in f.terms()])


def trace_close(f: Morphism) -> Morphism:
    if f.k != f.m:
        raise ArityError(f"trace needs k = m, got Mor({f.k},{f.m})")
    return Morphism(0, 0, [(c, maps.trace_close(d)) for c, d in f.terms()])


_BUILD = {
    "compose": compose,
    "tensor": tensor,
    "adjoint": adjoint,
    "rotate": rotate,
    "trace_close": trace_close,
}


def build(op: str, *args: Morphism) -> Morphism:
    try:
        fn = _BUILD[op]
    except KeyError:
        raise ValueError(f"unknown build operation {op!r}") from None
    return fn(*args)


# ---- names for the small diagrams this package talks about ------------------

_I = maps.compose(maps.split(1, 1), maps.merge(1, 1))

BASIS_NAMES: dict[tuple, str] = {
    maps.tensor(maps.identity(1), maps.identity(1)).key(): "id2",
    maps.compose(maps.cup(0, 1), maps.cap(0, 1)).key(): "E",
    _I.key(): "I",
    maps.rotate(_I).key(): "H",
    maps.identity(0).key(): "empty",
    maps.identity(1).key(): "id1",
}


def describe(d: Diagram) -> str:
    name = BASIS_NAMES.get(d.key())
    if name is not None:
        return name
    if d.is_closed and d.num_vertices == 0:
        return f"loop^{d.loops}"
    rot = ",".join(map(str, d.rot))
    inv = ",".join(map(str, d.inv))
    return f"D{d.k}_{d.m}<loops={d.loops};rot={rot};inv={inv}>"
