"""Dense univariate polynomials over the integers.

A polynomial is a tuple of Python ints in ascending order of degree with no
trailing zeros; the zero polynomial is the empty tuple.  Everything here is a
plain function so the hot paths stay cheap.
"""

from __future__ import annotations

from math import gcd, isqrt
from typing import Iterable, Sequence

Poly = tuple  # tuple[int, ...]

ZERO: Poly = ()
ONE: Poly = (1,)

# above this many coefficients, multiplication goes through Kronecker packing
_KRONECKER_CUTOFF = 24


def strip(coeffs: Iterable[int]) -> Poly:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(p: Poly) -> int:
    return len(p) - 1


def lc(p: Poly) -> int:
    return p[-1]


def neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def add(p: Poly, r: Poly) -> Poly:
    if len(p) < len(r):
        p, r = r, p
    out = list(p)
    for i, c in enumerate(r):
        out[i] += c
    return strip(out)


def sub(p: Poly, r: Poly) -> Poly:
    return add(p, neg(r))


def scale(p: Poly, k: int) -> Poly:
    if k == 0:
        return ZERO
    return tuple(k * c for c in p)


def shift(p: Poly, n: int) -> Poly:
    """Multiply by q**n, n >= 0."""
    if not p or n == 0:
        return p
    return (0,) * n + p


def _schoolbook(p: Poly, r: Poly) -> Poly:
    out = [0] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(r):
                out[i + j] += a * b
    return strip(out)


def _pack(p: Poly, bits: int) -> int:
    v = 0
    for c in reversed(p):
        v = (v << bits) + c
    return v


def _unpack(v: int, bits: int) -> list[int]:
    base = 1 << bits
    half = base >> 1
    mask = base - 1
    out = []
    while v:
        d = v & mask
        if d >= half:
            d -= base
        out.append(d)
        v = (v - d) >> bits
    return out


def mul(p: Poly, r: Poly) -> Poly:
    if not p or not r:
        return ZERO
    if min(len(p), len(r)) < _KRONECKER_CUTOFF:
        return _schoolbook(p, r)
    bound = max(map(abs, p)) * max(map(abs, r)) * min(len(p), len(r))
    bits = bound.bit_length() + 2
    return strip(_unpack(_pack(p, bits) * _pack(r, bits), bits))


def power(p: Poly, n: int) -> Poly:
    out = ONE
    base = p
    while n:
        if n & 1:
            out = mul(out, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return out


def content(p: Poly) -> int:
    g = 0
    for c in p:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def primitive(p: Poly) -> Poly:
    """Primitive part with positive leading coefficient."""
    if not p:
        return p
    g = content(p)
    if p[-1] < 0:
        g = -g
    if g == 1:
        return p
    return tuple(c // g for c in p)


def divexact(p: Poly, d: Poly) -> Poly | None:
    """Quotient p / d over the integers, or None if d does not divide p."""
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    if not p:
        return ZERO
    if len(p) < len(d):
        return None
    rem = list(p)
    dl = d[-1]
    dn = len(d)
    quo = [0] * (len(p) - dn + 1)
    for i in range(len(quo) - 1, -1, -1):
        top = rem[i + dn - 1]
        if top == 0:
            continue
        k, r = divmod(top, dl)
        if r:
            return None
        quo[i] = k
        for j, c in enumerate(d):
            rem[i + j] -= k * c
    if any(rem):
        return None
    return strip(quo)


def pseudo_rem(p: Poly, d: Poly) -> Poly:
    rem = list(p)
    dl = d[-1]
    dn = len(d)
    while len(rem) >= dn and rem:
        top = rem[-1]
        off = len(rem) - dn
        rem = [dl * c for c in rem]
        for j, c in enumerate(d):
            rem[off + j] -= top * c
        rem = list(strip(rem))
    return tuple(rem)


def _prs_gcd(p: Poly, r: Poly) -> Poly:
    p, r = primitive(p), primitive(r)
    if len(p) < len(r):
        p, r = r, p
    while r:
        p, r = r, primitive(pseudo_rem(p, r))
    return primitive(p)


def _eval_int(p: Poly, x: int) -> int:
    v = 0
    for c in reversed(p):
        v = v * x + c
    return v


def _interpolate(h: int, x: int) -> Poly:
    out = []
    half = x // 2
    while h:
        g = h % x
        if g > half:
            g -= x
        out.append(g)
        h = (h - g) // x
    return strip(out)


def _heu_gcd(p: Poly, r: Poly) -> Poly | None:
    # Char, Geddes and Gonnet heuristic: gcd of values at a large integer,
    # read back as a polynomial, accepted only if it divides both inputs.
    pn = max(map(abs, p))
    rn = max(map(abs, r))
    b = 2 * min(pn, rn) + 29
    x = max(min(b, 99 * isqrt(b)), 2 * min(pn // abs(p[-1]), rn // abs(r[-1])) + 2)
    for _ in range(6):
        pv = _eval_int(p, x)
        rv = _eval_int(r, x)
        if pv and rv:
            h = primitive(_interpolate(gcd(pv, rv), x))
            if h and divexact(p, h) is not None and divexact(r, h) is not None:
                return h
        x = 73794 * x * isqrt(isqrt(x)) // 27011
    return None


def poly_gcd(p: Poly, r: Poly) -> Poly:
    """Primitive gcd of two integer polynomials (positive leading coefficient)."""
    if not p:
        return primitive(r)
    if not r:
        return primitive(p)
    p, r = primitive(p), primitive(r)
    if len(p) == 1 or len(r) == 1:
        return ONE
    h = _heu_gcd(p, r)
    if h is None:
        h = _prs_gcd(p, r)
    return h


def trailing_zeros(p: Poly) -> int:
    n = 0
    for c in p:
        if c:
            return n
        n += 1
    return n


def evaluate(p: Sequence, x):
    """Horner evaluation; works for int, Fraction, float and mpmath values."""
    v = 0
    for c in reversed(p):
        v = v * x + c
    return v
