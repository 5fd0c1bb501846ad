"""Acceptance criteria as runnable checks.

Each criterion returns a Result; ``run_all`` prints one pass/fail line per
criterion.  Shared by the test-suite and ``g2skein selftest``.
"""

from __future__ import annotations

import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable

from . import mor22, skein, spectrum, uqg2
from .diagram import catalog, maps
from .exactfield import RatFunc, eval_at

__all__ = ["Result", "CRITERIA", "run", "run_all"]


@dataclass
class Result:
    number: int
    title: str
    checks: dict[str, bool] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def line(self, timings: bool = True) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        clock = f", {self.seconds:.2f}s" if timings else ""
        tail = f" ({', '.join(self.failures())})" if not self.ok else ""
        return f"[{verdict}] {self.number}. {self.title} [{len(self.checks)} checks{clock}]{tail}"


class _Timer:
    """Records each timed block and whether it stayed inside its budget."""

    def __init__(self, checks: dict[str, bool]):
        self.checks = checks

    def run(self, name: str, budget: float, fn: Callable[[], bool]) -> None:
        start = time.perf_counter()
        ok = bool(fn())
        elapsed = time.perf_counter() - start
        self.checks[name] = ok
        self.checks[f"{name}:under_{budget:g}s"] = elapsed < budget


def symbolic_identities() -> Result:
    res = Result(1, "symbolic identities")
    t = _Timer(res.checks)
    k = skein.constants()
    t.run("xi_squared_is_radicand", 5, lambda: k.xi * k.xi == k.radicand())
    closed_xi = RatFunc.parse("(1+q^2)^2*(1-q^2+q^6-q^8+q^10-q^14+q^16)/(q^6*(1+q^8))")
    t.run("xi_closed_form", 5, lambda: k.xi == closed_xi)
    kappa_closed = RatFunc.parse("(1+q^2+q^4)*(1+q^8)/(q^4*(1+q^2)^2)")
    t.run("H_coefficient_closed_form", 5, lambda: (k.delta * k.c + k.delta + k.c) / k.xi == kappa_closed)

    def derivatives():
        p, c, m = spectrum.partials(), spectrum.closed_forms(), spectrum.intermediate_forms()
        return p == c == m

    t.run("derivative_closed_forms", 5, derivatives)
    t.run("derivative_signs", 5, lambda: all(spectrum.sign_certificate().values()))
    t.run("f_vanishes_at_trivial_point", 5, lambda: spectrum.f_poly().at(RatFunc(), k.delta).is_zero())
    return res


def skein_evaluation(seed: int = 0) -> Result:
    res = Result(2, "skein evaluation")
    t = _Timer(res.checks)
    k = skein.constants()
    t.run("loop", 1, lambda: skein.eval_diagram(catalog.loop()) == k.delta)
    t.run("theta", 1, lambda: skein.eval_diagram(catalog.theta()) == k.delta)
    t.run("K4", 1, lambda: skein.eval_diagram(catalog.k4()) == k.c * k.delta)

    graphs = catalog.standard_catalog(seed=seed)
    t.run("tadpoles_vanish", 1, lambda: all(skein.eval_diagram(catalog.with_tadpole(d)).is_zero()
                                            for name, d in graphs if name != "loop"))

    rng = random.Random(seed)

    def multiplicative():
        for _ in range(20):
            (_, x), (_, y) = rng.choice(graphs), rng.choice(graphs)
            joint = skein.eval_diagram(maps.tensor(x, y))
            if joint != skein.eval_diagram(x) * skein.eval_diagram(y):
                return False
        return True

    t.run("disjoint_union_multiplicative", 20, multiplicative)
    for name, d in graphs:
        t.run(f"confluence:{name}", 10, lambda d=d: skein.confluence_check(d, trials=10, seed=seed))
    return res


def mor22_suite() -> Result:
    res = Result(3, "Mor(2,2) idempotents and structure constants")
    t = _Timer(res.checks)
    ids = mor22.unchecked_idempotents()
    for name, ok in ids.check().items():
        res.checks[name] = ok
    t.run("skein_equals_spectral", 30, lambda: mor22.structure_constants() == mor22.spectral_structure_constants())
    k = skein.constants()
    res.checks["trace_y_sum"] = mor22.trace(ids.y_plus) + mor22.trace(ids.y_minus) == k.delta**2 - k.delta - 1
    traces = tuple(eval_at(mor22.trace(p), 1) for p in (ids.p_triv, ids.p_X, ids.y_plus, ids.y_minus))
    res.checks["classical_traces"] = traces == (1, 7, 14, 27) and sum(traces) == 49
    return res


CERTIFIED_Q = (Fraction(1, 2), Fraction(9, 10), Fraction(11, 10), Fraction(2))


def certificate_suite(samples: int = 10_000) -> Result:
    res = Result(4, "property (T) certificate")
    t = _Timer(res.checks)
    for qv in CERTIFIED_Q:
        def check(qv=qv):
            cert = spectrum.certificate(qv)
            if cert.status != "certified" or not cert.epsilon > 0:
                return False
            count, negative, _ = spectrum.sample_check(cert, samples)
            return count >= samples and negative

        t.run(f"certified_q={qv}", 5, check)
    one = spectrum.certificate(1)
    res.checks["q=1_f_t_zero"] = one.f_t == 0
    res.checks["q=1_degenerate"] = one.status == "degenerate"
    return res


def rotation_oracle() -> Result:
    res = Result(5, "rotation-consistency oracle")
    t = _Timer(res.checks)
    t.run("f_rotation_equals_closed", 30, lambda: spectrum.f_poly_rotation() == spectrum.f_poly_displayed())
    return res


def appendix_suite() -> Result:
    res = Result(6, "U_q(g2) appendix")
    start = time.perf_counter()
    for qv in ("0.8", "1.3"):
        report = uqg2.full_report(Fraction(qv))
        for name, (_, status) in report.entries.items():
            res.checks[f"q={qv}:{name}"] = status == "pass"
    res.checks["under_10s"] = time.perf_counter() - start < 10
    return res


def gram_suite() -> Result:
    res = Result(7, "Gram positivity")
    for qv in (Fraction(9, 10), Fraction(11, 10), Fraction(2)):
        _, minors, ok = mor22.gram_positivity(qv)
        res.checks[f"q={qv}"] = ok and all(float(m) > 0 for m in minors)
    return res


CRITERIA: tuple[Callable[[], Result], ...] = (
    symbolic_identities,
    skein_evaluation,
    mor22_suite,
    certificate_suite,
    rotation_oracle,
    appendix_suite,
    gram_suite,
)


def run(criterion: Callable[[], Result]) -> Result:
    start = time.perf_counter()
    try:
        res = criterion()
    except Exception as exc:  # a crash is a failed criterion, not an aborted run
        base = getattr(criterion, "func", criterion)
        number = CRITERIA.index(base) + 1 if base in CRITERIA else 0
        res = Result(number, base.__name__, {f"raised {type(exc).__name__}: {exc}": False})
    res.seconds = time.perf_counter() - start
    return res


def run_all(out=None, timings: bool = True, seed: int = 0) -> list[Result]:
    """Run every criterion, printing one line each.  Without timings the output is reproducible."""
    out = out or sys.stdout
    results = []
    for criterion in CRITERIA:
        res = run(partial(criterion, seed=seed) if criterion is skein_evaluation else criterion)
        print(res.line(timings), file=out, flush=True)
        results.append(res)
    passed = sum(r.ok for r in results)
    print(f"acceptance: {passed}/{len(results)} criteria passed", file=out)
    return results
