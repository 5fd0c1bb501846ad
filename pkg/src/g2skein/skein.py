"""Skein evaluation for the quantum G2 trivalent category.

Closed diagrams are evaluated to scalars and small open morphisms are reduced
by repeatedly replacing a loop, a piece hanging off a single edge, or an
internal face of size at most five.

Internally, scalars live in a ring small enough to avoid gcd computations:
Laurent polynomials divided by powers of Psi = q^4+q^2+1 and Phi = q^8+1,
the only denominators that occur in the relation coefficients.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from . import _poly as P
from .diagram import maps
from .diagram.maps import Diagram, DiagramError, MapBuilder
from .diagram.morphism import BASIS_NAMES, Morphism
from .exactfield import RatFunc

__all__ = [
    "SkeinConstants",
    "constants",
    "eval_closed",
    "eval_diagram",
    "reduce",
    "confluence_check",
    "Evaluator",
    "SkeinError",
    "IrreducibleResidue",
    "NoReducibleFace",
]


class SkeinError(RuntimeError):
    pass


class NoReducibleFace(SkeinError):
    pass


class IrreducibleResidue(SkeinError):
    pass


# ---- constants ----------------------------------------------------------------


@dataclass(frozen=True)
class SkeinConstants:
    delta: RatFunc
    a: RatFunc
    b: RatFunc
    c: RatFunc
    f: RatFunc
    g: RatFunc
    xi: RatFunc

    def radicand(self) -> RatFunc:
        """The expression whose square root is xi."""
        d, c = self.delta, self.c
        return d * d * c**4 + 2 * d * (c**4 - 2 * c**3 - c**2 + 4 * c + 2) + (c**2 - 2 * c - 1) ** 2


@lru_cache(maxsize=None)
def constants() -> SkeinConstants:
    q = RatFunc.q()
    qi = 1 / q
    delta = q**10 + q**8 + q**2 + 1 + qi**2 + qi**8 + qi**10
    plus = q + 1 + qi
    minus = q - 1 + qi
    q44 = q**4 + qi**4
    a = (q**2 + qi**2) / (plus * minus * q44)
    b = 1 / (plus * minus * q44**2)
    c = -(q**2 - 1 + qi**2) / q44
    f = -1 / (plus * minus * q44)
    g = -1 / (plus**2 * minus**2 * q44**2)
    xi = (1 + q**2) ** 2 * (1 - q**2 + q**6 - q**8 + q**10 - q**14 + q**16) / (q**6 * (1 + q**8))
    return SkeinConstants(delta, a, b, c, f, g, xi)


# ---- fast scalar ring -------------------------------------------------------------

_PSI = (1, 0, 1, 0, 1)
_PHI = (1, 0, 0, 0, 0, 0, 0, 0, 1)


@lru_cache(maxsize=None)
def _psi_pow(n: int) -> tuple:
    return P.power(_PSI, n)


@lru_cache(maxsize=None)
def _phi_pow(n: int) -> tuple:
    return P.power(_PHI, n)


class Scalar:
    """num * q**e / (Psi**i * Phi**j) with num an integer polynomial."""

    __slots__ = ("num", "e", "i", "j")

    def __init__(self, num: tuple, e: int = 0, i: int = 0, j: int = 0):
        num = P.strip(num)
        if not num:
            e = i = j = 0
        else:
            z = P.trailing_zeros(num)
            if z:
                num = num[z:]
                e += z
        self.num, self.e, self.i, self.j = num, e, i, j

    def is_zero(self) -> bool:
        return not self.num

    def _lift(self, i: int, j: int) -> tuple:
        num = self.num
        if i > self.i:
            num = P.mul(num, _psi_pow(i - self.i))
        if j > self.j:
            num = P.mul(num, _phi_pow(j - self.j))
        return num

    def __add__(self, other: "Scalar") -> "Scalar":
        if not other.num:
            return self
        if not self.num:
            return other
        i, j = max(self.i, other.i), max(self.j, other.j)
        x, y = self._lift(i, j), other._lift(i, j)
        e = min(self.e, other.e)
        return Scalar(P.add(P.shift(x, self.e - e), P.shift(y, other.e - e)), e, i, j)

    def __mul__(self, other: "Scalar") -> "Scalar":
        if not self.num or not other.num:
            return ZERO
        return Scalar(P.mul(self.num, other.num), self.e + other.e, self.i + other.i, self.j + other.j)

    def __pow__(self, n: int) -> "Scalar":
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def to_ratfunc(self) -> RatFunc:
        if not self.num:
            return RatFunc()
        den = P.mul(_psi_pow(self.i), _phi_pow(self.j))
        num = self.num
        if self.e >= 0:
            num = P.shift(num, self.e)
        else:
            den = P.shift(den, -self.e)
        return RatFunc(num, den)


ZERO = Scalar(())
ONE = Scalar((1,))
_DELTA = Scalar((1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1), -10)
_A = Scalar((1, 0, 0, 0, 1), 4, 1, 1)
_B = Scalar((1,), 10, 1, 2)
_C = Scalar((-1, 0, 1, 0, -1), 2, 0, 1)
_F = Scalar((-1,), 6, 1, 1)
_G = Scalar((-1,), 12, 2, 2)


def fast_constants() -> dict[str, Scalar]:
    return {"delta": _DELTA, "a": _A, "b": _B, "c": _C, "f": _F, "g": _G}


# ---- face replacement -------------------------------------------------------------


def _builder(d: Diagram) -> MapBuilder:
    b = MapBuilder()
    b.absorb(d)
    b.bottom = list(d.bottom)
    b.top = list(d.top)
    return b


def _copy(b: MapBuilder) -> MapBuilder:
    out = MapBuilder()
    out.rot = dict(b.rot)
    out.inv = dict(b.inv)
    out.bottom = list(b.bottom)
    out.top = list(b.top)
    out.loops = b.loops
    out._next = b._next
    return out


def _attach(b: MapBuilder, leg: int, h: int) -> None:
    """Connect the outside end of stub `leg` to the new half-edge h."""
    b.pair(b.inv[leg], h)
    b.delete(leg)


def _vertex(b: MapBuilder, legs) -> list[int]:
    """New vertex whose counterclockwise half-edges run to the given targets.

    A target is either a leg stub (int) or None for a half-edge left for the
    caller to pair.
    """
    hs = [b.half() for _ in range(3)]
    b.vertex(*hs)
    for h, leg in zip(hs, legs):
        if leg is not None:
            _attach(b, leg, h)
    return hs


def _arc(b: MapBuilder, x: int, y: int) -> None:
    b.fuse(x, y)


def _tree2(b, L0, L1, L2, L3):
    ha = _vertex(b, (L0, L1, None))
    hb = _vertex(b, (L2, L3, None))
    b.pair(ha[2], hb[2])


def _tree3(b, L0, L1, L2, L3, L4):
    ha = _vertex(b, (L0, L1, None))
    hm = _vertex(b, (None, L2, None))
    hb = _vertex(b, (L3, L4, None))
    b.pair(ha[2], hm[0])
    b.pair(hm[2], hb[2])


def _arc_vertex(b, L0, L1, L2, L3, L4):
    _arc(b, L0, L1)
    _vertex(b, (L2, L3, L4))


def _rotations(n: int, fn: Callable) -> list[Callable]:
    def make(r):
        return lambda b, L: fn(b, *(L[(r + t) % n] for t in range(n)))

    return [make(r) for r in range(n)]


# size -> list of (coefficient, template builder); templates get legs in
# counterclockwise order around the removed face
_TEMPLATES: dict[int, list[tuple[Scalar, Callable]]] = {
    2: [(ONE, lambda b, L: _arc(b, L[0], L[1]))],
    3: [(_C, lambda b, L: _vertex(b, L))],
    4: [(_A, fn) for fn in _rotations(4, _tree2)[:2]]
    + [
        (_B, lambda b, L: (_arc(b, L[0], L[1]), _arc(b, L[2], L[3]))),
        (_B, lambda b, L: (_arc(b, L[1], L[2]), _arc(b, L[3], L[0]))),
    ],
    5: [(_F, fn) for fn in _rotations(5, _tree3)] + [(_G, fn) for fn in _rotations(5, _arc_vertex)],
}


def _face_is_simple(d: Diagram, face: list[int]) -> bool:
    vid = maps.vertex_of(d)
    return len({vid[h] for h in face}) == len(face)


def _candidate_faces(d: Diagram) -> list[list[int]]:
    return [f for f in maps.internal_faces(d) if len(f) <= 5 and _face_is_simple(d, f)]


def _expand(d: Diagram, face: list[int], check: bool) -> list[tuple[Scalar, Diagram]]:
    n = len(face)
    # the phi-orbit runs clockwise around an internal face
    legs_phi = [d.rot[face[(j + 1) % n]] for j in range(n)]
    legs = [legs_phi[(-i) % n] for i in range(n)]
    base = _builder(d)
    for h in face:
        base.delete(d.inv[h])
        base.delete(h)
    for leg in legs:
        base.rot[leg] = leg
    out = []
    for coef, template in _TEMPLATES[n]:
        b = _copy(base)
        template(b, legs)
        out.append((coef, b.freeze(check=check)))
    return out


# ---- evaluator ----------------------------------------------------------------------


class Evaluator:
    """Rewrite engine with a memo table.

    strategy "smallest" always rewrites the smallest reducible face (ties go
    to the face holding the smallest half-edge label).  "random" picks a
    reducible face uniformly with the supplied rng.
    """

    def __init__(self, strategy: str = "smallest", rng: random.Random | None = None, check: bool = False):
        if strategy not in ("smallest", "random"):
            raise ValueError(f"unknown strategy {strategy!r}")
        if strategy == "random" and rng is None:
            rng = random.Random(0)
        self.strategy = strategy
        self.rng = rng
        self.check = check
        self.closed_memo: dict[tuple, Scalar] = {}
        self.open_memo: dict[tuple, dict] = {}
        self.steps = 0

    def _pick(self, faces: list[list[int]]) -> list[int]:
        if self.strategy == "random":
            return self.rng.choice(faces)
        return min(faces, key=lambda f: (len(f), min(f)))

    # closed -------------------------------------------------------------
    def closed(self, d: Diagram) -> Scalar:
        if not d.is_closed:
            raise DiagramError("closed evaluation needs a diagram in Mor(0,0)")
        scale = _DELTA**d.loops if d.loops else ONE
        if d.size == 0:
            return scale
        if d.loops:
            d = d.with_loops(0)
        return scale * self._connected_product(d)

    def _connected_product(self, d: Diagram) -> Scalar:
        key = d.key()
        hit = self.closed_memo.get(key)
        if hit is not None:
            return hit
        _, comps = maps.closed_components(d)
        if len(comps) > 1:
            value = ONE
            for c in comps:
                value = value * self._connected_product(c)
                if value.is_zero():
                    break
        else:
            value = self._connected(d)
        self.closed_memo[key] = value
        return value

    def _connected(self, d: Diagram) -> Scalar:
        if maps.vanishes_by_pop(d):
            return ZERO
        faces = _candidate_faces(d)
        if not faces:
            raise NoReducibleFace(f"no reducible face found in {d!r}")
        self.steps += 1
        total = ZERO
        for coef, child in _expand(d, self._pick(faces), self.check):
            total = total + coef * self.closed(child)
        return total

    # open ---------------------------------------------------------------
    def open(self, d: Diagram) -> dict[tuple, tuple[Scalar, Diagram]]:
        """Reduced form of a single diagram as {key: (scalar, diagram)}."""
        key = d.key()
        hit = self.open_memo.get(key)
        if hit is not None:
            return hit
        scale = _DELTA**d.loops if d.loops else ONE
        main, comps = maps.closed_components(d.with_loops(0))
        for c in comps:
            scale = scale * self._connected_product(c)
        result: dict[tuple, tuple[Scalar, Diagram]] = {}
        if not scale.is_zero() and not maps.vanishes_by_pop(main):
            faces = _candidate_faces(main)
            if not faces:
                result[main.key()] = (scale, main)
            else:
                self.steps += 1
                for coef, child in _expand(main, self._pick(faces), self.check):
                    for k2, (s2, d2) in self.open(child).items():
                        s = scale * coef * s2
                        if k2 in result:
                            s = result[k2][0] + s
                        result[k2] = (s, d2)
        self.open_memo[key] = result
        return result


_local = threading.local()


def _default() -> Evaluator:
    ev = getattr(_local, "evaluator", None)
    if ev is None:
        ev = _local.evaluator = Evaluator()
    return ev


def _as_morphism(m) -> Morphism:
    return Morphism.of(m) if isinstance(m, Diagram) else m


def eval_diagram(d: Diagram, evaluator: Evaluator | None = None) -> RatFunc:
    return (evaluator or _default()).closed(d).to_ratfunc()


def eval_closed(m, evaluator: Evaluator | None = None) -> RatFunc:
    """Scalar value of a closed Morphism (or closed Diagram)."""
    m = _as_morphism(m)
    if (m.k, m.m) != (0, 0):
        raise DiagramError(f"eval_closed needs Mor(0,0), got Mor({m.k},{m.m})")
    ev = evaluator or _default()
    total = RatFunc()
    for coef, d in m.terms():
        total = total + coef * ev.closed(d).to_ratfunc()
    return total


def reduce(m, evaluator: Evaluator | None = None) -> Morphism:
    """Reduce a morphism with k + m <= 4 to diagrams without reducible interior."""
    m = _as_morphism(m)
    if m.k + m.m > 4:
        raise ValueError(f"reduce handles k + m <= 4, got Mor({m.k},{m.m})")
    ev = evaluator or _default()
    acc: dict[tuple, list] = {}
    for coef, d in m.terms():
        for key, (s, d2) in ev.open(d).items():
            term = coef * s.to_ratfunc()
            if key in acc:
                acc[key][0] = acc[key][0] + term
            else:
                acc[key] = [term, d2]
    out = Morphism(m.k, m.m, [(c, d) for c, d in acc.values()])
    if (m.k, m.m) == (2, 2):
        for _, d in out.terms():
            if d.key() not in BASIS_NAMES:
                raise IrreducibleResidue(f"reduction left a non-basis diagram {d!r}")
    return out


def confluence_check(m, trials: int, seed: int) -> bool:
    """Evaluate with `trials` random face orders; True iff all values agree."""
    if trials < 1:
        raise ValueError("trials must be positive")
    m = _as_morphism(m)
    values = []
    for t in range(trials):
        ev = Evaluator("random", random.Random(f"{seed}:{t}"))
        values.append(eval_closed(m, ev))
    return all(v == values[0] for v in values)
