"""The fusion-algebra corner, the admissibility function f and its certificate.

The corner at the trivial object is a polynomial algebra in h = Δ(H) and
x = Δ(X).  A one-dimensional representation sends (h, x) to (α, t), and

    f(α, t) = γ_{α,t}(Δ(rot y₋))

must be non-negative at admissible points.  Near the trivial point (0, δ),
f is negative whenever q ≠ 1, and `certificate` produces the explicit radius.
"""

from __future__ import annotations

import csv
import io
import os
from contextlib import contextmanager
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from decimal import Context, Decimal
from fractions import Fraction
from typing import Iterable, Mapping

import mpmath

from . import mor22, skein
from .diagram.morphism import rotate as morphism_rotate
from .exactfield import ONE, ZERO, RatFunc, eval_at

__all__ = [
    "FusionPoly",
    "delta_map",
    "change_of_basis_coefficients",
    "kappa",
    "h_basis",
    "h_basis_inverse",
    "f_poly",
    "f_poly_displayed",
    "f_poly_rotation",
    "Partials",
    "partials",
    "closed_forms",
    "sign_certificate",
    "Certificate",
    "certificate",
    "sample_check",
    "ScanRow",
    "scan",
    "write_csv",
]


class FusionPoly:
    """Polynomial in two commuting variables with RatFunc coefficients.

    Exponents are pairs (i, j) for vars[0]**i * vars[1]**j.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, terms: Mapping[tuple[int, int], RatFunc] = None, vars: tuple[str, str] = ("h", "x")):
        self.vars = tuple(vars)
        clean = {}
        for exp, c in (terms or {}).items():
            c = RatFunc.coerce(c)
            if not c.is_zero():
                clean[tuple(exp)] = c
        self.terms = clean

    @classmethod
    def const(cls, c, vars=("h", "x")) -> "FusionPoly":
        return cls({(0, 0): c}, vars)

    @classmethod
    def var(cls, index: int, vars=("h", "x")) -> "FusionPoly":
        return cls({(1, 0) if index == 0 else (0, 1): ONE}, vars)

    def _same(self, other: "FusionPoly") -> None:
        if self.vars != other.vars:
            raise ValueError(f"variables differ: {self.vars} vs {other.vars}")

    def coefficient(self, i: int, j: int) -> RatFunc:
        return self.terms.get((i, j), ZERO)

    def __add__(self, other) -> "FusionPoly":
        if not isinstance(other, FusionPoly):
            other = FusionPoly.const(other, self.vars)
        self._same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return FusionPoly(out, self.vars)

    __radd__ = __add__

    def __neg__(self) -> "FusionPoly":
        return FusionPoly({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other) -> "FusionPoly":
        return self + (-other if isinstance(other, FusionPoly) else -RatFunc.coerce(other))

    def __rsub__(self, other) -> "FusionPoly":
        return (-self) + other

    def __mul__(self, other) -> "FusionPoly":
        if not isinstance(other, FusionPoly):
            s = RatFunc.coerce(other)
            return FusionPoly({e: s * c for e, c in self.terms.items()}, self.vars)
        self._same(other)
        out: dict[tuple[int, int], RatFunc] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                e = (i1 + i2, j1 + j2)
                out[e] = out.get(e, ZERO) + c1 * c2
        return FusionPoly(out, self.vars)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "FusionPoly":
        out = FusionPoly.const(ONE, self.vars)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, FusionPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def substitute(self, first: "FusionPoly", second: "FusionPoly") -> "FusionPoly":
        """Replace the two variables by polynomials (which share their own variables)."""
        out = FusionPoly({}, first.vars)
        for (i, j), c in self.terms.items():
            out = out + (first**i) * (second**j) * c
        return out

    def rename(self, vars: tuple[str, str]) -> "FusionPoly":
        return FusionPoly(self.terms, vars)

    def derivative(self, index: int) -> "FusionPoly":
        out = {}
        for (i, j), c in self.terms.items():
            k = (i, j)[index]
            if k:
                e = (i - 1, j) if index == 0 else (i, j - 1)
                out[e] = c * k
        return FusionPoly(out, self.vars)

    def at(self, first: RatFunc, second: RatFunc) -> RatFunc:
        """Substitute symbolic values for both variables."""
        total = ZERO
        for (i, j), c in self.terms.items():
            total = total + c * first**i * second**j
        return total

    def evaluate(self, qval, first, second):
        """Numeric value at q = qval and the given point."""
        total = 0
        for (i, j), c in self.terms.items():
            total = total + eval_at(c, qval) * first**i * second**j
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        a, b = self.vars
        parts = []
        for (i, j), c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                [f"{a}^{i}" if i > 1 else a] * (i > 0) + [f"{b}^{j}" if j > 1 else b] * (j > 0)
            )
            parts.append(f"[{c}]" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    __repr__ = __str__


def delta_map(x: mor22.Mor22Element) -> FusionPoly:
    """Δ on Mor(2,2): id2 ↦ x², E ↦ δ, I ↦ x, H ↦ h."""
    delta = skein.constants().delta
    h = FusionPoly.var(0)
    xv = FusionPoly.var(1)
    images = {"id2": xv * xv, "E": FusionPoly.const(delta), "I": xv, "H": h}
    out = FusionPoly()
    for c, name in zip(x.coeffs, mor22.BASIS):
        out = out + images[name] * c
    return out


# ---- change of basis between Δ(y₊) and Δ(H) ------------------------------------------


def change_of_basis_coefficients() -> dict[str, RatFunc]:
    """κ, A, B, C with Δ(H) = κ (Y − A x² − B + C x), Y = Δ(y₊)."""
    k = skein.constants()
    d, c, xi = k.delta, k.c, k.xi
    q = RatFunc.q()
    return {
        "kappa": q**4 * (1 + q**2) ** 2 / ((1 + q**2 + q**4) * (1 + q**8)),
        "A": (-(d + 1) * c**2 + xi + 1) / (2 * xi),
        "B": (d * (c**2 - 2 * c - 2) - xi + c**2 - 2 * c - 1) / (2 * xi),
        "C": (d * (c + 2) * c + xi + c**2 + 1) / (2 * xi),
    }


def kappa() -> RatFunc:
    return change_of_basis_coefficients()["kappa"]


def h_basis(p: FusionPoly) -> FusionPoly:
    """Rewrite a polynomial in (y, x), y = Δ(y₊), as a polynomial in (h, x)."""
    if p.vars != ("y", "x"):
        raise ValueError("h_basis expects a polynomial in (y, x)")
    k = change_of_basis_coefficients()
    h = FusionPoly.var(0)
    x = FusionPoly.var(1)
    y_image = h * (1 / k["kappa"]) + x * x * k["A"] + FusionPoly.const(k["B"]) - x * k["C"]
    return p.substitute(y_image, x)


def h_basis_inverse(p: FusionPoly) -> FusionPoly:
    """Rewrite a polynomial in (h, x) as a polynomial in (y, x)."""
    if p.vars != ("h", "x"):
        raise ValueError("h_basis_inverse expects a polynomial in (h, x)")
    k = change_of_basis_coefficients()
    vars = ("y", "x")
    y = FusionPoly.var(0, vars)
    x = FusionPoly.var(1, vars)
    h_image = (y - x * x * k["A"] - FusionPoly.const(k["B"], vars) + x * k["C"]) * k["kappa"]
    return p.substitute(h_image, x)


# ---- the admissibility function -------------------------------------------------------------

F_VARS = ("alpha", "t")


def f_poly_displayed() -> FusionPoly:
    """f(α, t) transcribed term by term from its closed formula."""
    k = skein.constants()
    d, c, xi = k.delta, k.c, k.xi
    return FusionPoly(
        {
            (0, 0): d * (-(d + 1) * c**2 - xi + 1) / (-2 * xi),
            (0, 2): (d * (c**2 - 2 * c - 2) + xi + c**2 - 2 * c - 1) / (-2 * d * xi),
            (1, 0): -(d * (c + 2) * c - xi + c**2 + 1) / (-2 * xi),
            (0, 1): (d * c + d + c) / (-xi),
        },
        F_VARS,
    )


def f_poly_rotation() -> FusionPoly:
    """f(α, t) = γ_{α,t}(Δ(rot y₋)), with the rotation done on diagrams."""
    y_minus = mor22.idempotents().y_minus
    rotated = mor22.Mor22Element.from_morphism(morphism_rotate(y_minus.to_morphism()))
    return delta_map(rotated).rename(F_VARS)


def f_poly() -> FusionPoly:
    """f(α, t), after checking that both derivations agree exactly."""
    displayed = f_poly_displayed()
    if displayed != f_poly_rotation():
        raise ArithmeticError("closed formula for f disagrees with the rotation derivation")
    return displayed


@dataclass(frozen=True)
class Partials:
    f_alpha: RatFunc
    f_t: RatFunc
    f_tt: RatFunc


def partials(f: FusionPoly | None = None) -> Partials:
    """First and second derivatives of f at the trivial point (0, δ)."""
    f = f or f_poly()
    delta = skein.constants().delta
    zero = RatFunc()
    fa = f.derivative(0)
    ft = f.derivative(1)
    ftt = ft.derivative(1)
    return Partials(fa.at(zero, delta), ft.at(zero, delta), ftt.at(zero, delta))


def closed_forms() -> Partials:
    q = RatFunc.q()
    psi = 1 + q**2 + q**4
    return Partials(
        f_alpha=-(1 + q**2 + 2 * q**4 + q**6 + q**8) / (q + q**3) ** 2,
        f_t=(q**2 - 1) ** 2 * psi / q**4,
        f_tt=2 * q**6 * psi / ((1 + q**2) ** 2 * (1 + q**2 + q**4 + q**6 + q**8 + q**10 + q**12)),
    )


def intermediate_forms() -> Partials:
    """The derivatives written in δ, c, ξ before simplification."""
    k = skein.constants()
    d, c, xi = k.delta, k.c, k.xi
    return Partials(
        f_alpha=(d * (c + 2) * c - xi + c**2 + 1) / (2 * xi),
        f_t=(d + 1) * (c**2 - c - 1) / (-xi) - 1,
        f_tt=2 * f_poly_displayed().coefficient(0, 2),
    )


def _positive_coefficients(p: tuple) -> bool:
    return bool(p) and all(x >= 0 for x in p)


def _square_root_poly(p: tuple) -> tuple | None:
    """Integer polynomial r with r² = p, if one exists (positive leading coefficient)."""
    from . import _poly as P

    if not p:
        return ()
    if len(p) % 2 == 0:
        return None
    n = (len(p) - 1) // 2
    lead = p[-1]
    root = int(round(lead**0.5)) if lead > 0 else 0
    if root * root != lead:
        return None
    r = [0] * (n + 1)
    r[n] = root
    for k in range(n - 1, -1, -1):
        # coefficient of q^(n+k) in r² fixes r[k]
        acc = p[n + k] - sum(r[i] * r[n + k - i] for i in range(k + 1, n + 1) if 0 <= n + k - i <= n)
        if acc % (2 * root):
            return None
        r[k] = acc // (2 * root)
    return tuple(r) if P.mul(tuple(r), tuple(r)) == tuple(p) else None


def sign_certificate() -> dict[str, bool]:
    """Term-by-term sign arguments valid for every q > 0.

    * f_alpha = -N/D with N having positive coefficients and D the square of
      a polynomial with positive coefficients, so f_alpha < 0.
    * f_t = (q²-1)²·S/q⁴ with S having positive coefficients, so f_t > 0
      except at q = 1 where it vanishes.
    * f_tt has numerator and denominator with positive coefficients.
    """
    from . import _poly as P

    p = partials()
    out = {}
    neg = -p.f_alpha
    root = _square_root_poly(neg.den)
    out["f_alpha_negative"] = (
        _positive_coefficients(neg.num) and root is not None and _positive_coefficients(root)
    )
    q2m1_sq = P.power((-1, 0, 1), 2)
    rest = P.divexact(p.f_t.num, q2m1_sq)
    out["f_t_positive_off_1"] = (
        rest is not None
        and _positive_coefficients(rest)
        and _positive_coefficients(p.f_t.den)
        and p.f_t.eval_at(1) == 0
    )
    out["f_tt_positive"] = _positive_coefficients(p.f_tt.num) and _positive_coefficients(p.f_tt.den)
    return out


# ---- certificate ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    qval: object
    f_alpha: object
    f_t: object
    f_tt: object
    lam: object
    M: object
    epsilon: object
    status: str

    def record(self) -> dict[str, str]:
        def show(v):
            if isinstance(v, Fraction):
                return f"{v} (~{_decimal(v, 12)})" if v.denominator != 1 else str(v)
            return str(v)

        return {
            "qval": show(self.qval),
            "f_alpha": show(self.f_alpha),
            "f_t": show(self.f_t),
            "lambda": show(self.lam),
            "M": show(self.M),
            "epsilon": show(self.epsilon),
            "status": self.status,
        }

    def as_json(self) -> dict:
        def conv(v):
            if isinstance(v, Fraction):
                return {"exact": str(v), "approx": float(v)}
            if isinstance(v, (mpmath.mpf, mpmath.ctx_iv.ivmpf)):
                return str(v)
            return v

        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return {k: conv(v) for k, v in d.items()}


def _is_interval(v) -> bool:
    return isinstance(v, mpmath.ctx_iv.ivmpf)


def certificate(qval, precision: int = 64) -> Certificate:
    """Property-(T) witness at q = qval.

    Rational input (int, Fraction, float, decimal string) is handled exactly.
    mpmath reals are enclosed in intervals at the given precision and signs are
    read off the interval bounds.
    """
    if isinstance(qval, str):
        qval = Fraction(qval)
    if isinstance(qval, (int, float)) and not isinstance(qval, bool):
        qval = Fraction(qval)
    if isinstance(qval, Fraction):
        if qval <= 0:
            raise ValueError(f"q must be positive, got {qval}")
        return _certificate_exact(qval)
    if isinstance(qval, mpmath.mpf):
        if qval <= 0:
            raise ValueError(f"q must be positive, got {qval}")
        return _certificate_interval(qval, max(precision, 64))
    raise TypeError(f"unsupported q value {qval!r}")


def _certificate_exact(qval: Fraction) -> Certificate:
    forms = closed_forms()
    fa = eval_at(forms.f_alpha, qval)
    ft = eval_at(forms.f_t, qval)
    ftt = eval_at(forms.f_tt, qval)
    lam = ftt / 2
    M = max(fa, -ft)
    certified = fa < 0 and ft > 0
    eps = abs(M) / lam if M < 0 and certified else Fraction(0)
    return Certificate(qval, fa, ft, ftt, lam, M, eps, "certified" if certified else "degenerate")


@contextmanager
def _interval_precision(bits: int):
    saved = mpmath.iv.prec
    mpmath.iv.prec = bits
    try:
        yield
    finally:
        mpmath.iv.prec = saved


def _certificate_interval(qval, precision: int) -> Certificate:
    forms = closed_forms()
    with _interval_precision(precision):
        qi = mpmath.iv.mpf(qval)
        fa = eval_at(forms.f_alpha, qi)
        ft = eval_at(forms.f_t, qi)
        ftt = eval_at(forms.f_tt, qi)
        certified = fa.b < 0 and ft.a > 0
        mids = [v.mid for v in (fa, ft, ftt)]
    with mpmath.workprec(precision):
        fa_m, ft_m, ftt_m = (mpmath.mpf(v) for v in mids)
        lam = ftt_m / 2
        M = max(fa_m, -ft_m)
        eps = abs(M) / lam if certified else mpmath.mpf(0)
    return Certificate(qval, fa_m, ft_m, ftt_m, lam, M, eps, "certified" if certified else "degenerate")


def _fourth_quadrant_points(eps: Fraction, n_radii: int, n_angles: int) -> Iterable[tuple[Fraction, Fraction]]:
    # exact unit vectors from the rational parametrisation of the circle
    for a in range(n_angles):
        u = Fraction(a, n_angles - 1)
        ux = (1 - u * u) / (1 + u * u)
        uy = -2 * u / (1 + u * u)
        for r in range(1, n_radii + 1):
            rad = eps * Fraction(r, n_radii + 1)
            yield rad * ux, rad * uy


def sample_check(cert: Certificate, samples: int = 10_000) -> tuple[int, bool, object]:
    """Evaluate f(x, δ+y) on fourth-quadrant points with 0 < |v| < ε.

    Returns (number of points, all negative, largest value seen).  Exact for
    rational q.
    """
    if cert.status != "certified":
        raise ValueError("sample_check needs a certified certificate")
    side = max(2, int(round(samples**0.5)))
    q = cert.qval
    exact = isinstance(q, Fraction)
    f = f_poly_displayed()
    coeffs = {e: eval_at(c, q if exact else mpmath.mpf(q)) for e, c in f.terms.items()}
    delta = eval_at(skein.constants().delta, q if exact else mpmath.mpf(q))
    eps = cert.epsilon if exact else Fraction(str(mpmath.nstr(cert.epsilon * (1 - mpmath.mpf(2) ** -40), 30)))
    count = 0
    worst = None
    for x, y in _fourth_quadrant_points(eps, side, side):
        if not exact:
            x, y = mpmath.mpf(x.numerator) / x.denominator, mpmath.mpf(y.numerator) / y.denominator
        t = delta + y
        val = sum(c * x**i * t**j for (i, j), c in coeffs.items())
        count += 1
        if worst is None or val > worst:
            worst = val
    return count, worst < 0, worst


# ---- grid scan ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    alpha: Fraction
    t: Fraction
    f: Fraction
    prefilter: str


def _decimal(v: Fraction, digits: int) -> str:
    ctx = Context(prec=digits)
    d = ctx.divide(Decimal(v.numerator), Decimal(v.denominator))
    s = format(d, "g")
    return "0" if d == 0 else s


def _grid(lo: Fraction, hi: Fraction, steps: int) -> list[Fraction]:
    return [lo + (hi - lo) * Fraction(i, steps - 1) for i in range(steps)]


def _classify(alpha: Fraction, t: Fraction, f: Fraction, delta: Fraction) -> str:
    reasons = []
    if alpha < 0:
        reasons.append("alpha<0")
    if abs(t) > delta:
        reasons.append("|t|>delta")
    if f < 0:
        reasons.append("f<0")
    return "pass" if not reasons else "reject:" + ";".join(reasons)


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("G2SKEIN_THREADS", "1"))
    if threads < 1:
        raise ValueError("thread count must be at least 1")
    return threads


def scan(qval, alpha_range: tuple, t_range: tuple, steps: int, threads: int | None = None) -> list[ScanRow]:
    """Evaluate f on a steps × steps grid (α outer), plus the trivial point if in range."""
    qval = Fraction(qval)
    if qval <= 0:
        raise ValueError("q must be positive")
    if steps < 2:
        raise ValueError("steps must be at least 2")
    a0, a1 = (Fraction(v) for v in alpha_range)
    t0, t1 = (Fraction(v) for v in t_range)
    if a0 > a1 or t0 > t1:
        raise ValueError("ranges must satisfy lo <= hi")
    f = f_poly_displayed()
    coeffs = {e: eval_at(c, qval) for e, c in f.terms.items()}
    delta = eval_at(skein.constants().delta, qval)

    def value(a, t):
        return sum(c * a**i * t**j for (i, j), c in coeffs.items())

    alphas = _grid(a0, a1, steps)
    ts = _grid(t0, t1, steps)
    points = [(a, t) for a in alphas for t in ts]
    if a0 <= 0 <= a1 and t0 <= delta <= t1 and (Fraction(0), delta) not in set(points):
        points.append((Fraction(0), delta))
        points.sort()

    def row(p):
        a, t = p
        v = value(a, t)
        return ScanRow(a, t, v, _classify(a, t, v, delta))

    n = _threads(threads)
    if n == 1:
        return [row(p) for p in points]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(row, points))


def write_csv(rows: Iterable[ScanRow], out: io.TextIOBase, digits: int = 12) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["alpha", "t", "f", "prefilter"])
    for r in rows:
        w.writerow([_decimal(r.alpha, digits), _decimal(r.t, digits), _decimal(r.f, digits), r.prefilter])
