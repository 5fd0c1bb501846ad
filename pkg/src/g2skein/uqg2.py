"""Numeric checks on the 7-dimensional unitary representation of U_q(g2).

Matrices are real at real q.  Double precision uses float64 numpy arrays;
higher precision uses numpy object arrays of mpmath numbers, evaluated under
``mpmath.workprec``.  Half-integer powers of q enter through s = sqrt(q).
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import skein
from .exactfield import eval_at

__all__ = [
    "CARTAN",
    "D",
    "INNER",
    "Rep7",
    "build_rep",
    "Report",
    "verify_relations",
    "DualityData",
    "duality_data",
    "duality_suite",
    "invariant_dims",
    "basis_consistency",
    "full_report",
]

CARTAN = ((2, -3), (-1, 2))
D = (1, 3)
INNER = tuple(tuple(D[i] * CARTAN[i][j] for j in range(2)) for i in range(2))

DIM = 7


class _Backend:
    """Scalar and array helpers for one working precision."""

    def __init__(self, precision: int):
        self.precision = precision
        self.exact = precision > 53

    def num(self, v):
        if self.exact:
            if isinstance(v, Fraction):
                return mpmath.mpf(v.numerator) / v.denominator
            return mpmath.mpf(v)
        return float(v)

    def sqrt(self, v):
        return mpmath.sqrt(v) if self.exact else float(np.sqrt(v))

    def zeros(self, n: int, m: int | None = None):
        m = n if m is None else m
        if self.exact:
            a = np.empty((n, m), dtype=object)
            a.fill(mpmath.mpf(0))
            return a
        return np.zeros((n, m))

    def eye(self, n: int):
        a = self.zeros(n)
        for i in range(n):
            a[i, i] = self.num(1)
        return a

    def diag(self, values):
        a = self.zeros(len(values))
        for i, v in enumerate(values):
            a[i, i] = v
        return a

    def maxabs(self, a) -> float:
        a = np.asarray(a)
        if a.size == 0:
            return 0.0
        return float(max(abs(x) for x in a.flat))

    @contextlib.contextmanager
    def active(self):
        if self.exact:
            with mpmath.workprec(self.precision):
                yield
        else:
            yield


@dataclass
class Rep7:
    qval: object
    precision: int
    E: tuple
    F: tuple
    K: tuple
    Kinv: tuple
    backend: _Backend = field(repr=False)
    flagged: bool = False

    @property
    def q(self):
        return self.backend.num(self.qval)

    def qi(self, i: int):
        return self.q ** D[i]

    def qnum(self, n: int, qi):
        """Quantum integer [n] at base qi."""
        return (qi**n - qi ** (-n)) / (qi - 1 / qi)


def _coerce_q(qval):
    if isinstance(qval, str):
        qval = Fraction(qval)
    if isinstance(qval, int) and not isinstance(qval, bool):
        qval = Fraction(qval)
    if not qval > 0:
        raise ValueError(f"q must be positive, got {qval}")
    return qval


def build_rep(qval, precision: int = 53) -> Rep7:
    """The seven-dimensional representation at q = qval.

    q = 1 is allowed but flagged, since the relations degenerate there.
    """
    qval = _coerce_q(qval)
    be = _Backend(precision)
    with be.active():
        q = be.num(qval)
        s = be.sqrt(q)
        two = q + 1 / q
        r2 = be.sqrt(two)
        e1 = be.zeros(DIM)
        e1[0, 1] = s
        e1[2, 3] = q * r2
        e1[3, 4] = r2
        e1[5, 6] = s
        e2 = be.zeros(DIM)
        e2[1, 2] = s**3
        e2[4, 5] = s**3
        k1 = be.diag([q, 1 / q, q**2, be.num(1), q**-2, q, 1 / q])
        k2 = be.diag([be.num(1), q**3, q**-3, be.num(1), q**3, q**-3, be.num(1)])
        k1i = be.diag([1 / k1[i, i] for i in range(DIM)])
        k2i = be.diag([1 / k2[i, i] for i in range(DIM)])
        # E_i^* = F_i K_i, so F_i = E_i^† K_i^{-1}
        f1 = e1.T @ k1i
        f2 = e2.T @ k2i
    return Rep7(qval, precision, (e1, e2), (f1, f2), (k1, k2), (k1i, k2i), be, flagged=(qval == 1))


# ---- reports --------------------------------------------------------------------------


@dataclass
class Report:
    tol: float
    entries: dict = field(default_factory=dict)

    def add(self, name: str, residual: float, status: str | None = None, tol: float | None = None) -> None:
        if status is None:
            status = "pass" if residual <= (self.tol if tol is None else tol) else "fail"
        self.entries[name] = (float(residual), status)

    def merge(self, other: "Report") -> "Report":
        self.entries.update(other.entries)
        return self

    @property
    def ok(self) -> bool:
        return all(st == "pass" for _, st in self.entries.values())

    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "inconclusive": 0}
        for _, st in self.entries.values():
            out[st] = out.get(st, 0) + 1
        return out

    def lines(self) -> list[str]:
        out = [f"{name} {res:.3e} {st}" for name, (res, st) in sorted(self.entries.items())]
        c = self.counts()
        verdict = "pass" if self.ok else "fail"
        out.append(
            f"summary {len(self.entries)} checks, {c['pass']} pass, {c['fail']} fail, "
            f"{c['inconclusive']} inconclusive: {verdict}"
        )
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def _qbinom(rep: Rep7, m: int, k: int, qi):
    def fact(n):
        out = 1
        for j in range(1, n + 1):
            out = out * rep.qnum(j, qi)
        return out

    return fact(m) / (fact(k) * fact(m - k))


def _mpow(rep: Rep7, a, n: int):
    out = rep.backend.eye(DIM)
    for _ in range(n):
        out = out @ a
    return out


def verify_relations(rep: Rep7, tol: float = 1e-9) -> Report:
    """Max-norm residuals of the defining relations and the star structure."""
    if rep.flagged:
        raise ValueError("the relations degenerate at q = 1 (q_i - 1/q_i vanishes)")
    rep_report = Report(tol)
    be = rep.backend
    E, F, K, Ki = rep.E, rep.F, rep.K, rep.Kinv
    with be.active():
        one = be.eye(DIM)
        for i in range(2):
            n = i + 1
            qi = rep.qi(i)
            rep_report.add(f"K{n}Kinv", max(be.maxabs(K[i] @ Ki[i] - one), be.maxabs(Ki[i] @ K[i] - one)))
            for j in range(2):
                m = j + 1
                a = CARTAN[i][j]
                rep_report.add(f"K{n}E{m}K{n}inv", be.maxabs(K[i] @ E[j] @ Ki[i] - qi**a * E[j]))
                rep_report.add(f"K{n}F{m}K{n}inv", be.maxabs(K[i] @ F[j] @ Ki[i] - qi ** (-a) * F[j]))
                target = (K[i] - Ki[i]) / (qi - 1 / qi) if i == j else be.zeros(DIM)
                rep_report.add(f"[E{n},F{m}]", be.maxabs(E[i] @ F[j] - F[j] @ E[i] - target))
                if i != j:
                    order = 1 - a
                    for name, X in (("E", E), ("F", F)):
                        total = be.zeros(DIM)
                        for k in range(order + 1):
                            coef = (-1) ** k * _qbinom(rep, order, k, qi)
                            total = total + coef * (_mpow(rep, X[i], k) @ X[j] @ _mpow(rep, X[i], order - k))
                        rep_report.add(f"serre_{name}{n}{m}", be.maxabs(total))
        rep_report.add("K1K2_commute", be.maxabs(K[0] @ K[1] - K[1] @ K[0]))
        for i in range(2):
            n = i + 1
            rep_report.add(f"star_K{n}", be.maxabs(K[i].T - K[i]))
            rep_report.add(f"star_E{n}", be.maxabs(E[i].T - F[i] @ K[i]))
            rep_report.add(f"star_F{n}", be.maxabs(F[i].T - Ki[i] @ E[i]))
    return rep_report


# ---- duality ----------------------------------------------------------------------------------


@dataclass
class DualityData:
    W: object
    T: object
    R: object  # column vector of length 49, index a*7 + b for v_a ⊗ v_b


def duality_data(rep: Rep7) -> DualityData:
    be = rep.backend
    with be.active():
        k2rho = [rep.K[0][i, i] ** 10 * rep.K[1][i, i] ** 6 for i in range(DIM)]
        W = be.diag([1 / be.sqrt(v) for v in k2rho])
        T = be.zeros(DIM)
        for i in range(1, DIM + 1):
            # T v_i = (-1)^(i+1) vbar_(8-i), 1-based
            T[DIM - i, i - 1] = be.num((-1) ** (i + 1))
        # R = (1 ⊗ T^* j(W)) rbar with rbar = Σ v_i ⊗ vbar_i; j(W) = W^T on the conjugate space
        TjW = T.T @ W.T
        R = be.zeros(DIM * DIM, 1)
        for i in range(DIM):
            for b in range(DIM):
                R[i * DIM + b, 0] = TjW[b, i]
    return DualityData(W, T, R)


def _kron(*mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def _dual_rep(rep: Rep7) -> dict[str, object]:
    """Unitary dual in the conjugate basis: pibar(x) = pi(Rhat(x))^T."""
    out = {}
    for i in range(2):
        n = i + 1
        qi = rep.qi(i)
        out[f"K{n}"] = rep.Kinv[i].T
        out[f"E{n}"] = (-qi * rep.Kinv[i] @ rep.E[i]).T
        out[f"F{n}"] = (-(1 / qi) * rep.F[i] @ rep.K[i]).T
    return out


def duality_suite(rep: Rep7, tol: float = 1e-9) -> Report:
    be = rep.backend
    report = Report(tol)
    dd = duality_data(rep)
    with be.active():
        W, T, R = dd.W, dd.T, dd.R
        one = be.eye(DIM)
        pairs = [W[i, i] * W[DIM - 1 - i, DIM - 1 - i] for i in range(DIM)]
        report.add("W_i*W_(8-i)", max(abs(p - 1) for p in pairs), tol=min(tol, 1e-12))
        report.add("T_unitary", be.maxabs(T.T @ T - one), tol=min(tol, 1e-12))
        report.add("T_jW", be.maxabs(T.T @ W.T - be.diag([1 / W[i, i] for i in range(DIM)]) @ T.T))
        bar = _dual_rep(rep)
        gens = {}
        for i in range(2):
            n = i + 1
            gens[f"K{n}"] = rep.K[i]
            gens[f"E{n}"] = rep.E[i]
            gens[f"F{n}"] = rep.F[i]
        worst = max(be.maxabs(T @ gens[g] - bar[g] @ T) for g in sorted(gens))
        report.add("T_intertwines", worst)
        Rs = R.T  # real entries, so R^* is the transpose
        left = _kron(one, Rs) @ _kron(R, one)
        right = _kron(Rs, one) @ _kron(one, R)
        report.add("conjugate_eq_left", be.maxabs(left - one))
        report.add("conjugate_eq_right", be.maxabs(right - one))
        middle = _kron(one, R, one)
        sym_left = _kron(one, one, Rs) @ (middle @ R)
        sym_right = _kron(Rs, one, one) @ (middle @ R)
        report.add("self_duality_left", be.maxabs(sym_left - R))
        report.add("self_duality_right", be.maxabs(sym_right - R))
        norm = (Rs @ R)[0, 0]
        delta = eval_at(skein.constants().delta, rep.qval if isinstance(rep.qval, Fraction) else rep.q)
        report.add("RdaggerR=delta", abs(norm - be.num(delta)))
        trace_k2rho_inv = sum(W[i, i] ** 2 for i in range(DIM))
        report.add("qdim=delta", abs(trace_k2rho_inv - be.num(delta)))
    return report


# ---- invariants -------------------------------------------------------------------------------


def _tensor_generators(rep: Rep7, n: int) -> list:
    """E_i, F_i and K_i - 1 acting on H^{⊗n} through the iterated coproduct."""
    E = [np.asarray(x, dtype=float) for x in rep.E]
    F = [np.asarray(x, dtype=float) for x in rep.F]
    K = [np.asarray(x, dtype=float) for x in rep.K]
    Ki = [np.asarray(x, dtype=float) for x in rep.Kinv]
    one = np.eye(DIM)
    ops = []
    for i in range(2):
        e_tot = 0
        f_tot = 0
        for pos in range(n):
            e_tot = e_tot + _kron(*([K[i]] * pos + [E[i]] + [one] * (n - pos - 1)))
            f_tot = f_tot + _kron(*([one] * pos + [F[i]] + [Ki[i]] * (n - pos - 1)))
        ops += [e_tot, f_tot, _kron(*([K[i]] * n)) - np.eye(DIM**n)]
    return ops


def invariant_dims(rep: Rep7, n: int, threshold: float = 1e-6, gap: float = 1e3) -> tuple[int, float, str]:
    """Dimension of the invariant subspace of H^{⊗n}, 1 <= n <= 3.

    Singular values of the stacked generators are compared with
    threshold * (largest singular value).  Returns (dimension, observed gap,
    status); the status is "inconclusive" when the gap is below `gap`.
    Always computed in double precision.
    """
    if not 1 <= n <= 3:
        raise ValueError("n must be 1, 2 or 3")
    stacked = np.vstack(_tensor_generators(rep, n))
    sv = np.linalg.svd(stacked, compute_uv=False)
    full = np.zeros(DIM**n)
    full[: len(sv)] = sv
    scale = full.max() if full.max() > 0 else 1.0
    rel = full / scale
    kept = rel[rel >= threshold]
    dropped = rel[rel < threshold]
    if len(dropped):
        observed = kept.min() / max(dropped.max(), np.finfo(float).tiny) if len(kept) else np.inf
    else:
        observed = kept.min() / threshold
    status = "pass" if observed >= gap else "inconclusive"
    return int(len(dropped)), float(observed), status


# ---- basis normalisations -------------------------------------------------------------------


BASIS_WORDS = (
    # (index, power of q, power of [2], word of F's applied right to left)
    (1, Fraction(1, 2), Fraction(0), (1,)),
    (2, Fraction(2), Fraction(0), (1, 2)),
    (3, Fraction(3), Fraction(1, 2), (1, 2, 1)),
    (4, Fraction(3), Fraction(-1), (1, 2, 1, 1)),
    (5, Fraction(9, 2), Fraction(-1), (1, 2, 1, 1, 2)),
    (6, Fraction(5), Fraction(-1), (1, 2, 1, 1, 2, 1)),
)


def basis_consistency(rep: Rep7) -> list[tuple[str, float, float | None]]:
    """Rebuild v1..v6 from v0 using the stated normalisations.

    Returns (name, distance to the basis vector, scale factor if the result
    is a multiple of it).  These are informational: the displayed matrices
    are the ground truth, and mismatches are reported rather than repaired.
    """
    q = float(rep.qval)
    two = q + 1 / q
    F = [np.asarray(x, dtype=float) for x in rep.F]
    out = []
    for idx, qpow, twopow, word in BASIS_WORDS:
        v = np.zeros(DIM)
        v[0] = 1.0
        for letter in word:
            v = F[letter - 1] @ v
        v = v * q ** float(qpow) * two ** float(twopow)
        target = np.zeros(DIM)
        target[idx] = 1.0
        ratio = v[idx] if np.allclose(np.delete(v, idx), 0) else None
        out.append((f"v{idx}", float(np.abs(v - target).max()), ratio))
    return out


def full_report(qval, tol: float = 1e-9, precision: int = 53) -> Report:
    rep = build_rep(qval, precision)
    report = verify_relations(rep, tol)
    report.merge(duality_suite(rep, tol))
    expected = {1: 0, 2: 1, 3: 1}
    for n, want in expected.items():
        dim, observed, status = invariant_dims(rep, n)
        if status == "pass" and dim != want:
            status = "fail"
        report.add(f"invariant_dim_{n}={want}", abs(dim - want), status)
    return report
