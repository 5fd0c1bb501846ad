from fractions import Fraction

import mpmath
import numpy as np
import pytest

from g2skein import skein, uqg2
from g2skein.exactfield import eval_at

Q13 = Fraction(13, 10)


@pytest.fixture(scope="module")
def rep13():
    return uqg2.build_rep(Q13)


def test_matrix_entries(rep13):
    q = 1.3
    assert rep13.E[0][0, 1] == pytest.approx(q**0.5)
    assert np.allclose(np.diag(rep13.K[0]), [q, 1 / q, q**2, 1, q**-2, q, 1 / q])
    assert rep13.F[0][1, 0] == pytest.approx(q**-0.5)


def test_cartan_data():
    assert uqg2.INNER == ((2, -3), (-3, 6))
    assert uqg2.INNER[0][1] == uqg2.INNER[1][0]


@pytest.mark.parametrize("qv", ["0.8", "1.3"])
def test_relations_hold(qv):
    report = uqg2.verify_relations(uqg2.build_rep(Fraction(qv)))
    assert report.ok, report.lines()
    names = set(report.entries)
    assert {"[E1,F1]", "[E1,F2]", "serre_E12", "serre_F21", "star_E1"} <= names
    assert report.entries["[E1,F1]"][0] <= 1e-9
    assert report.entries["[E1,F2]"][0] <= 1e-9


@pytest.mark.parametrize("qv", ["0.8", "1.3"])
def test_duality_suite(qv):
    report = uqg2.duality_suite(uqg2.build_rep(Fraction(qv)))
    assert report.ok, report.lines()
    assert report.entries["W_i*W_(8-i)"][0] <= 1e-12
    assert report.entries["T_unitary"][0] <= 1e-12
    for name in ("conjugate_eq_left", "conjugate_eq_right", "self_duality_left", "self_duality_right"):
        assert report.entries[name][0] <= 1e-9


def test_quantum_dimension_matches_loop_value(rep13):
    data = uqg2.duality_data(rep13)
    rr = float((data.R.T @ data.R)[0, 0])
    assert rr == pytest.approx(float(eval_at(skein.constants().delta, Q13)), abs=1e-9)
    k2rho_inv = sum(w * w for w in np.diag(data.W))
    assert k2rho_inv == pytest.approx(rr, abs=1e-9)


@pytest.mark.parametrize("n, expected", [(1, 0), (2, 1), (3, 1)])
def test_invariant_dimensions(rep13, n, expected):
    dim, gap, status = uqg2.invariant_dims(rep13, n)
    assert (dim, status) == (expected, "pass")
    assert gap >= 1e3


def test_residuals_shrink_with_precision():
    low = uqg2.verify_relations(uqg2.build_rep(Q13, 53))
    high = uqg2.verify_relations(uqg2.build_rep(Q13, 128))
    assert high.ok
    worst_low = max(r for r, _ in low.entries.values())
    worst_high = max(r for r, _ in high.entries.values())
    assert worst_high < 1e-30 < worst_low or worst_low == 0


def test_high_precision_duality():
    report = uqg2.duality_suite(uqg2.build_rep(Fraction(4, 5), 96))
    assert report.ok
    assert max(r for r, _ in report.entries.values()) < 1e-20


def test_full_report_format():
    report = uqg2.full_report("1.3")
    lines = report.lines()
    assert lines == sorted(lines[:-1]) + [lines[-1]]
    name, residual, status = lines[0].split()
    float(residual)
    assert status in {"pass", "fail", "inconclusive"}
    assert lines[-1].startswith(f"summary {len(report.entries)} checks")
    assert lines[-1].endswith(": pass")


def test_report_counts_failures():
    report = uqg2.Report(1e-9)
    report.add("small", 1e-12)
    report.add("large", 1.0)
    report.add("unsure", 0.0, "inconclusive")
    assert not report.ok
    assert report.counts() == {"pass": 1, "fail": 1, "inconclusive": 1}
    assert report.lines()[-1].endswith(": fail")


def test_tolerance_is_respected():
    assert not uqg2.full_report("1.3", tol=1e-30).ok


def test_q_one_is_flagged():
    rep = uqg2.build_rep(1)
    assert rep.flagged
    with pytest.raises(ValueError):
        uqg2.verify_relations(rep)
    with pytest.raises(ValueError):
        uqg2.build_rep(0)


def test_basis_normalisation_diagnostics(rep13):
    rows = {name: (dist, ratio) for name, dist, ratio in uqg2.basis_consistency(rep13)}
    for name in ("v1", "v2", "v4", "v5", "v6"):
        assert rows[name][0] < 1e-12
    # the stated normalisation of v3 is off by the quantum integer [2]
    assert rows["v3"][1] == pytest.approx(1.3 + 1 / 1.3)


def test_mpmath_entries_at_high_precision():
    rep = uqg2.build_rep(Q13, 128)
    with mpmath.workprec(128):
        assert abs(rep.E[0][0, 1] - mpmath.sqrt(mpmath.mpf(13) / 10)) < mpmath.mpf(2) ** -120
