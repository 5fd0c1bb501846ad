import io
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from g2skein import mor22, skein, spectrum
from g2skein.exactfield import RatFunc, eval_at
from g2skein.spectrum import FusionPoly

K = skein.constants()
ZERO = RatFunc()
positive_q = st.fractions(min_value=Fraction(1, 20), max_value=Fraction(20), max_denominator=50)


# ---- the Δ map and the change of basis ------------------------------------------------


def test_delta_map_on_basis():
    x = FusionPoly.var(1)
    h = FusionPoly.var(0)
    assert spectrum.delta_map(mor22.Mor22Element.basis("I")) == x
    assert spectrum.delta_map(mor22.Mor22Element.basis("E")) == FusionPoly.const(K.delta)
    assert spectrum.delta_map(mor22.Mor22Element.basis("H")) == h
    assert spectrum.delta_map(mor22.Mor22Element.basis("id2")) == x * x


def test_kappa_closed_form():
    closed = RatFunc.parse("(1+q^2+q^4)*(1+q^8)/(q^4*(1+q^2)^2)")
    assert (K.delta * K.c + K.delta + K.c) / K.xi == closed
    assert spectrum.kappa() == 1 / closed


def test_delta_of_y_plus_in_h_basis():
    y = FusionPoly.var(0, ("y", "x"))
    direct = spectrum.delta_map(mor22.idempotents().y_plus)
    assert spectrum.h_basis(y) == direct
    assert spectrum.h_basis(y).evaluate(1, 0, 7) == 14


poly_terms = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)),
    st.sampled_from([RatFunc.const(1), RatFunc.const(-3), RatFunc.q(), 1 / (1 + RatFunc.q())]),
    max_size=4,
)


@given(poly_terms)
def test_change_of_basis_round_trip(terms):
    p = FusionPoly(terms)
    assert spectrum.h_basis(spectrum.h_basis_inverse(p)) == p


def test_h_basis_checks_variables():
    with pytest.raises(ValueError):
        spectrum.h_basis(FusionPoly.var(0))
    with pytest.raises(ValueError):
        spectrum.h_basis_inverse(FusionPoly.var(0, ("y", "x")))


# ---- the function f --------------------------------------------------------------------------


def test_two_derivations_agree():
    assert spectrum.f_poly_rotation() == spectrum.f_poly_displayed()
    assert spectrum.f_poly() == spectrum.f_poly_displayed()


def test_f_vanishes_at_trivial_point():
    assert spectrum.f_poly().at(ZERO, K.delta).is_zero()


def test_f_coefficients_at_one():
    f = spectrum.f_poly()
    got = {e: eval_at(c, 1) for e, c in f.terms.items()}
    assert got == {
        (0, 0): Fraction(21, 4),
        (0, 2): Fraction(3, 28),
        (1, 0): Fraction(-3, 2),
        (0, 1): Fraction(-3, 2),
    }
    assert f.evaluate(1, 0, 7) == 0


def test_f_is_exactly_quadratic():
    f = spectrum.f_poly()
    fa, ft = f.derivative(0), f.derivative(1)
    assert fa.derivative(0).terms == {}
    assert fa.derivative(1).terms == {}
    assert ft.derivative(1).derivative(1).terms == {}
    assert ft.derivative(1).degree() == 0


def test_partials_match_closed_and_intermediate_forms():
    p = spectrum.partials()
    assert p == spectrum.closed_forms()
    assert p == spectrum.intermediate_forms()


def test_partial_values():
    p = spectrum.partials()
    assert eval_at(p.f_t, 1) == 0
    assert eval_at(p.f_alpha, 1) == Fraction(-3, 2)
    assert eval_at(p.f_alpha, 2) == Fraction(-357, 100)
    assert eval_at(p.f_t, 2) == Fraction(189, 16)
    assert eval_at(p.f_tt, 2) == Fraction(2688, 136525)


def test_sign_certificate():
    assert spectrum.sign_certificate() == {
        "f_alpha_negative": True,
        "f_t_positive_off_1": True,
        "f_tt_positive": True,
    }


@given(positive_q)
def test_signs_at_sampled_q(qv):
    p = spectrum.partials()
    assert eval_at(p.f_alpha, qv) < 0
    assert eval_at(p.f_tt, qv) > 0
    if qv != 1:
        assert eval_at(p.f_t, qv) > 0


def test_square_root_helper():
    assert spectrum._square_root_poly((1, 2, 1)) == (1, 1)
    assert spectrum._square_root_poly((1, 0, 2)) is None
    assert spectrum._square_root_poly((1, 2)) is None


# ---- certificates ----------------------------------------------------------------------------


def test_certificate_at_two_uses_half_the_second_derivative():
    cert = spectrum.certificate(2)
    assert cert.status == "certified"
    assert cert.M == Fraction(-357, 100)
    assert cert.f_tt == Fraction(2688, 136525)
    assert cert.lam == Fraction(1344, 136525)
    assert cert.epsilon == abs(cert.M) / cert.lam == Fraction(92837, 256)
    assert float(cert.epsilon) == pytest.approx(362.64, abs=0.01)


def test_certificate_degenerate_at_one():
    cert = spectrum.certificate(1)
    assert cert.status == "degenerate"
    assert cert.f_t == 0
    assert cert.epsilon == 0
    with pytest.raises(ValueError):
        spectrum.sample_check(cert)


def test_certificate_inputs():
    assert spectrum.certificate("1.1").status == "certified"
    assert spectrum.certificate(1.1).epsilon > 0
    assert spectrum.certificate(Fraction(1, 2)).epsilon == spectrum.certificate(2).epsilon
    with pytest.raises(ValueError):
        spectrum.certificate(0)
    with pytest.raises(TypeError):
        spectrum.certificate(object())


def test_interval_certificate():
    cert = spectrum.certificate(mpmath.mpf(2), precision=80)
    assert cert.status == "certified"
    assert abs(cert.epsilon - mpmath.mpf(92837) / 256) < mpmath.mpf(10) ** -15
    assert spectrum.certificate(mpmath.mpf(1)).status == "degenerate"


def test_certificate_record_and_json():
    cert = spectrum.certificate(2)
    record = cert.record()
    assert list(record) == ["qval", "f_alpha", "f_t", "lambda", "M", "epsilon", "status"]
    assert record["epsilon"].startswith("92837/256")
    data = cert.as_json()
    assert data["status"] == "certified"
    assert data["lambda"]["exact"] == "1344/136525"


@pytest.mark.parametrize("qv", [Fraction(1, 2), Fraction(9, 10), Fraction(11, 10), Fraction(2)])
def test_fourth_quadrant_samples_are_negative(qv):
    cert = spectrum.certificate(qv)
    count, negative, worst = spectrum.sample_check(cert, 10_000)
    assert count >= 10_000
    assert negative and worst < 0


def test_samples_beyond_epsilon_can_fail():
    # far outside the certified radius the quadratic term wins
    cert = spectrum.certificate(2)
    far = spectrum.Certificate(**{**cert.__dict__, "epsilon": cert.epsilon * 5})
    _, negative, _ = spectrum.sample_check(far, 400)
    assert not negative


# ---- scanning ----------------------------------------------------------------------------------


def rows_by_point(rows):
    return {(r.alpha, r.t): r for r in rows}


def test_scan_includes_trivial_point():
    delta = eval_at(K.delta, 2)
    rows = rows_by_point(spectrum.scan(2, (-1, 1), (0, 2 * delta), 3))
    trivial = rows[(0, delta)]
    assert trivial.f == 0 and trivial.prefilter == "pass"


def test_scan_prefilter_reasons():
    delta = eval_at(K.delta, 2)
    rows = rows_by_point(spectrum.scan(2, (-1, 0), (0, delta + 1), 2))
    assert rows[(-1, 0)].prefilter.startswith("reject:alpha<0")
    assert "|t|>delta" in rows[(0, delta + 1)].prefilter
    assert rows[(0, delta + 1)].prefilter.startswith("reject:")


def test_scan_is_schedule_independent():
    one = spectrum.scan("1.3", (0, 2), (-5, 20), 9, threads=1)
    many = spectrum.scan("1.3", (0, 2), (-5, 20), 9, threads=4)
    assert one == many
    a, b = io.StringIO(), io.StringIO()
    spectrum.write_csv(one, a)
    spectrum.write_csv(many, b)
    assert a.getvalue() == b.getvalue()


def test_scan_thread_count_from_environment(monkeypatch):
    monkeypatch.setenv("G2SKEIN_THREADS", "3")
    assert spectrum._threads(None) == 3
    monkeypatch.setenv("G2SKEIN_THREADS", "0")
    with pytest.raises(ValueError):
        spectrum._threads(None)


def test_scan_arguments_validated():
    with pytest.raises(ValueError):
        spectrum.scan(2, (0, 1), (0, 1), 1)
    with pytest.raises(ValueError):
        spectrum.scan(2, (1, 0), (0, 1), 3)
    with pytest.raises(ValueError):
        spectrum.scan(-1, (0, 1), (0, 1), 3)


def test_csv_format():
    out = io.StringIO()
    spectrum.write_csv(spectrum.scan(2, (0, 1), (0, 1), 2), out, digits=6)
    lines = out.getvalue().splitlines()
    assert lines[0] == "alpha,t,f,prefilter"
    assert len(lines) == 5
    alpha, t, f, flag = lines[1].split(",")
    assert (alpha, t) == ("0", "0")
    assert len(f.replace("-", "").replace(".", "")) <= 6
    assert flag == "pass"


@given(positive_q, st.fractions(min_value=0, max_value=3, max_denominator=10))
def test_f_matches_polynomial_evaluation(qv, alpha):
    assume(qv != 1)
    delta = eval_at(K.delta, qv)
    (row,) = [r for r in spectrum.scan(qv, (alpha, alpha + 1), (delta, delta + 1), 2) if r.alpha == alpha and r.t == delta]
    assert row.f == spectrum.f_poly().evaluate(qv, alpha, delta)
