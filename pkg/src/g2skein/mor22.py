"""The four-dimensional algebra Mor(2,2) in the basis (id2, E, I, H)."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import skein
from .diagram import maps
from .diagram.morphism import Morphism, adjoint as morphism_adjoint
from .exactfield import ONE, ZERO, RatFunc, eval_at

__all__ = [
    "BASIS",
    "Mor22Element",
    "basis_diagrams",
    "structure_constants",
    "multiply",
    "trace",
    "adjoint",
    "IdempotentSet",
    "idempotents",
    "spectral_structure_constants",
    "gram_matrix",
    "gram_positivity",
    "leading_minors",
    "solve",
]

BASIS = ("id2", "E", "I", "H")


def basis_diagrams() -> dict[str, maps.Diagram]:
    i = maps.compose(maps.split(1, 1), maps.merge(1, 1))
    return {
        "id2": maps.identity(2),
        "E": maps.compose(maps.cup(0, 1), maps.cap(0, 1)),
        "I": i,
        "H": maps.rotate(i),
    }


@dataclass(frozen=True)
class Mor22Element:
    coeffs: tuple[RatFunc, RatFunc, RatFunc, RatFunc]

    def __post_init__(self):
        if len(self.coeffs) != 4:
            raise ValueError("Mor(2,2) elements have four coordinates")
        object.__setattr__(self, "coeffs", tuple(RatFunc.coerce(c) for c in self.coeffs))

    @classmethod
    def basis(cls, name: str) -> "Mor22Element":
        return cls(tuple(ONE if n == name else ZERO for n in BASIS))

    @classmethod
    def zero(cls) -> "Mor22Element":
        return cls((ZERO,) * 4)

    @classmethod
    def from_morphism(cls, m: Morphism) -> "Mor22Element":
        if (m.k, m.m) != (2, 2):
            raise ValueError(f"expected Mor(2,2), got Mor({m.k},{m.m})")
        m = skein.reduce(m)
        diagrams = basis_diagrams()
        return cls(tuple(m.coefficient(diagrams[n]) for n in BASIS))

    def to_morphism(self) -> Morphism:
        diagrams = basis_diagrams()
        return Morphism(2, 2, [(c, diagrams[n]) for c, n in zip(self.coeffs, BASIS)])

    def __getitem__(self, name: str) -> RatFunc:
        return self.coeffs[BASIS.index(name)]

    def __add__(self, other: "Mor22Element") -> "Mor22Element":
        return Mor22Element(tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Mor22Element") -> "Mor22Element":
        return Mor22Element(tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Mor22Element":
        return Mor22Element(tuple(-x for x in self.coeffs))

    def scale(self, s) -> "Mor22Element":
        s = RatFunc.coerce(s)
        return Mor22Element(tuple(s * x for x in self.coeffs))

    __rmul__ = scale

    def __mul__(self, other: "Mor22Element") -> "Mor22Element":
        return multiply(self, other)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def eval_at(self, qval) -> tuple:
        return tuple(eval_at(c, qval) for c in self.coeffs)

    def __str__(self) -> str:
        parts = [f"[{c}]*{n}" for c, n in zip(self.coeffs, BASIS) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"


_lock = threading.RLock()
_cache: dict[str, object] = {}


def _once(name: str, compute):
    value = _cache.get(name)
    if value is None:
        with _lock:
            value = _cache.get(name)
            if value is None:
                value = _cache[name] = compute()
    return value


def _skein_table() -> dict[tuple[str, str], Mor22Element]:
    diagrams = basis_diagrams()
    table = {}
    for x in BASIS:
        for y in BASIS:
            composite = Morphism.of(maps.compose(diagrams[x], diagrams[y]))
            table[x, y] = Mor22Element.from_morphism(composite)
    return table


def structure_constants() -> dict[tuple[str, str], Mor22Element]:
    """Products of basis elements, x∘y, computed by skein reduction once."""
    return _once("table", _skein_table)


def _bilinear(x: Mor22Element, y: Mor22Element, table) -> Mor22Element:
    out = [ZERO] * 4
    for cx, nx in zip(x.coeffs, BASIS):
        if cx.is_zero():
            continue
        for cy, ny in zip(y.coeffs, BASIS):
            if cy.is_zero():
                continue
            s = cx * cy
            for i, c in enumerate(table[nx, ny].coeffs):
                if not c.is_zero():
                    out[i] = out[i] + s * c
    return Mor22Element(tuple(out))


def multiply(x: Mor22Element, y: Mor22Element) -> Mor22Element:
    return _bilinear(x, y, structure_constants())


def _basis_traces() -> tuple[RatFunc, ...]:
    diagrams = basis_diagrams()
    return tuple(skein.eval_diagram(maps.trace_close(diagrams[n])) for n in BASIS)


def basis_traces() -> tuple[RatFunc, ...]:
    return _once("traces", _basis_traces)


def trace(x: Mor22Element) -> RatFunc:
    return sum((c * t for c, t in zip(x.coeffs, basis_traces())), ZERO)


def adjoint(x: Mor22Element) -> Mor22Element:
    return Mor22Element.from_morphism(morphism_adjoint(x.to_morphism()))


# ---- idempotents --------------------------------------------------------------------


def _y(sign: int) -> Mor22Element:
    k = skein.constants()
    d, c, xi = k.delta, k.c, k.xi
    s = sign * xi
    return Mor22Element(
        (
            (-(d + 1) * c**2 + s + 1) / (2 * s),
            (d * (c**2 - 2 * c - 2) - s + c**2 - 2 * c - 1) / (2 * d * s),
            -(d * (c + 2) * c + s + c**2 + 1) / (2 * s),
            (d * c + d + c) / s,
        )
    )


@dataclass(frozen=True)
class IdempotentSet:
    p_triv: Mor22Element
    p_X: Mor22Element
    y_plus: Mor22Element
    y_minus: Mor22Element

    def as_dict(self) -> dict[str, Mor22Element]:
        return {"p_triv": self.p_triv, "p_X": self.p_X, "y_plus": self.y_plus, "y_minus": self.y_minus}

    def check(self) -> dict[str, bool]:
        """Symbolic checks: idempotent, orthogonal, complete, self-adjoint."""
        items = list(self.as_dict().items())
        out = {}
        for name, p in items:
            out[f"idempotent:{name}"] = multiply(p, p) == p
            out[f"self_adjoint:{name}"] = adjoint(p) == p
        for i, (n1, p1) in enumerate(items):
            for n2, p2 in items[i + 1 :]:
                out[f"orthogonal:{n1},{n2}"] = multiply(p1, p2).is_zero()
        total = Mor22Element.zero()
        for _, p in items:
            total = total + p
        out["complete"] = total == Mor22Element.basis("id2")
        return out


def _idempotents() -> IdempotentSet:
    k = skein.constants()
    ids = IdempotentSet(
        p_triv=Mor22Element.basis("E").scale(1 / k.delta),
        p_X=Mor22Element.basis("I"),
        y_plus=_y(+1),
        y_minus=_y(-1),
    )
    failed = [name for name, ok in ids.check().items() if not ok]
    if failed:
        raise ArithmeticError(f"idempotent identities failed: {', '.join(failed)}")
    return ids


def idempotents() -> IdempotentSet:
    return _once("idempotents", _idempotents)


def unchecked_idempotents() -> IdempotentSet:
    """The four elements straight from their formulas, without verification."""
    k = skein.constants()
    return IdempotentSet(Mor22Element.basis("E").scale(1 / k.delta), Mor22Element.basis("I"), _y(+1), _y(-1))


# ---- spectral reconstruction ------------------------------------------------------------


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Gaussian elimination over any field whose elements support ==0 tests."""
    n = len(matrix)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ArithmeticError("singular system")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * w for v, w in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def eigenvalues(u: Mor22Element, projections: Iterable[Mor22Element]) -> list[RatFunc]:
    """Coordinates of u in the basis of minimal idempotents."""
    ps = list(projections)
    matrix = [[p.coeffs[i] for p in ps] for i in range(4)]
    return solve(matrix, list(u.coeffs))


def _spectral_table() -> dict[tuple[str, str], Mor22Element]:
    ids = unchecked_idempotents()
    ps = [ids.p_triv, ids.p_X, ids.y_plus, ids.y_minus]
    lam = {n: eigenvalues(Mor22Element.basis(n), ps) for n in BASIS}
    table = {}
    for x in BASIS:
        for y in BASIS:
            out = Mor22Element.zero()
            for lx, ly, p in zip(lam[x], lam[y], ps):
                out = out + p.scale(lx * ly)
            table[x, y] = out
    return table


def spectral_structure_constants() -> dict[tuple[str, str], Mor22Element]:
    """Products of basis elements recomputed from the idempotent decomposition."""
    return _once("spectral", _spectral_table)


# ---- positivity -----------------------------------------------------------------------------


def gram_matrix(qval) -> list[list]:
    """G[u][v] = trace(u* v) at q = qval over the basis."""
    if isinstance(qval, (int, str)):
        qval = Fraction(qval)
    out = []
    for u in BASIS:
        eu = adjoint(Mor22Element.basis(u))
        out.append([eval_at(trace(multiply(eu, Mor22Element.basis(v))), qval) for v in BASIS])
    return out


def _det(m: list[list]):
    n = len(m)
    a = [list(r) for r in m]
    det = 1
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[pivot][col] == 0:
            return 0 * det
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det = det * a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return det


def leading_minors(m: list[list]) -> list:
    return [_det([row[:k] for row in m[:k]]) for k in range(1, len(m) + 1)]


def gram_positivity(qval) -> tuple[list[list], list, bool]:
    """Gram matrix, its leading principal minors and the positive-definite flag."""
    g = gram_matrix(qval)
    minors = leading_minors(g)
    return g, minors, all(x > 0 for x in minors)
