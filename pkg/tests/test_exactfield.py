from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from g2skein import _poly as P
from g2skein import skein
from g2skein.exactfield import (
    EvaluationError,
    FieldDivisionByZero,
    RatFunc,
    RatFuncParseError,
    arith,
    equals,
    eval_at,
)

q = RatFunc.q()

coeffs = st.lists(st.integers(-6, 6), min_size=1, max_size=5)


@st.composite
def ratfuncs(draw, nonzero=False):
    num = draw(coeffs)
    den = draw(coeffs.filter(lambda c: any(c)))
    x = RatFunc(tuple(num), tuple(den))
    if nonzero:
        assume(not x.is_zero())
    return x


rational_q = st.fractions(min_value=Fraction(1, 10), max_value=Fraction(5), max_denominator=12)


def laurent_values(terms: dict[int, int], qv: Fraction) -> Fraction:
    """Direct evaluation of sum c*q^k with Fractions, used as an oracle."""
    return sum((Fraction(c) * qv**k for k, c in terms.items()), Fraction(0))


DELTA_TERMS = {10: 1, 8: 1, 2: 1, 0: 1, -2: 1, -8: 1, -10: 1}


# ---- documented examples -------------------------------------------------------------


def test_additive_inverse():
    assert arith(q, q, "sub").is_zero()
    assert (q + (-q)).is_zero()


@given(ratfuncs(nonzero=True))
def test_self_division_is_one(x):
    assert arith(x, x, "div") == 1


def test_normalisation_cancels_common_factor():
    assert equals(q**2 / q, q)
    assert RatFunc((0, 0, 1), (0, 1)) == q


def test_distinct_values_compare_unequal():
    delta = skein.constants().delta
    assert not equals(delta, delta + 1)


def test_delta_at_one_and_two():
    delta = skein.constants().delta
    assert eval_at(delta, 1) == 7
    assert eval_at(delta, 2) == Fraction(1316101, 1024)
    assert eval_at(delta, 2) == laurent_values(DELTA_TERMS, Fraction(2))


def test_xi_at_one():
    assert eval_at(skein.constants().xi, 1) == 2


def test_product_matches_hand_expansion():
    """delta*c against a dictionary convolution of the two Laurent expansions."""
    k = skein.constants()
    # c = -(q^2 - 1 + q^-2) / (q^4 + q^-4): compare delta*c*(q^4+q^-4) with a convolution
    c_num = {2: -1, 0: 1, -2: -1}
    expected: dict[int, int] = {}
    for a, x in DELTA_TERMS.items():
        for b, y in c_num.items():
            expected[a + b] = expected.get(a + b, 0) + x * y
    lhs = k.delta * k.c * (q**4 + q**-4)
    assert lhs == RatFunc.laurent(expected)


def test_xi_closed_form_and_radicand():
    k = skein.constants()
    closed = (1 + q**2) ** 2 * (1 - q**2 + q**6 - q**8 + q**10 - q**14 + q**16) / (q**6 * (1 + q**8))
    assert equals(k.xi, closed)
    d, c = k.delta, k.c
    radicand = d**2 * c**4 + 2 * d * (c**4 - 2 * c**3 - c**2 + 4 * c + 2) + (c**2 - 2 * c - 1) ** 2
    assert k.xi**2 == radicand


def test_constants_against_laurent_oracle():
    k = skein.constants()
    for qv in (Fraction(1, 3), Fraction(2), Fraction(7, 5)):
        delta = laurent_values(DELTA_TERMS, qv)
        plus = qv + 1 + 1 / qv
        minus = qv - 1 + 1 / qv
        q44 = qv**4 + qv**-4
        assert eval_at(k.delta, qv) == delta
        assert eval_at(k.a, qv) == (qv**2 + qv**-2) / (plus * minus * q44)
        assert eval_at(k.b, qv) == 1 / (plus * minus * q44**2)
        assert eval_at(k.c, qv) == -(qv**2 - 1 + qv**-2) / q44
        assert eval_at(k.f, qv) == -1 / (plus * minus * q44)
        assert eval_at(k.g, qv) == -1 / (plus**2 * minus**2 * q44**2)


def test_c_at_one():
    assert eval_at(skein.constants().c, 1) == Fraction(-1, 2)


# ---- field laws --------------------------------------------------------------------------


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_ring_laws(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x * y == y * x
    assert (x - x).is_zero()


@given(ratfuncs(nonzero=True))
def test_multiplicative_inverse(x):
    assert x * x.inverse() == 1
    assert 1 / x == x.inverse()


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_equals_is_an_equivalence(x, y, z):
    assert equals(x, x)
    assert equals(x, y) == equals(y, x)
    if equals(x, y) and equals(y, z):
        assert equals(x, z)


@given(ratfuncs(), coeffs.filter(lambda c: any(c)))
def test_equals_ignores_common_factors(x, factor):
    f = P.strip(tuple(factor))
    scaled = RatFunc(P.mul(x.num, f), P.mul(x.den, f))
    assert equals(scaled, x)
    assert hash(scaled) == hash(x)


@given(ratfuncs(), ratfuncs(), rational_q)
def test_evaluation_is_a_homomorphism(x, y, qv):
    try:
        ex, ey = eval_at(x, qv), eval_at(y, qv)
    except EvaluationError:
        assume(False)
    assert eval_at(x + y, qv) == ex + ey
    assert eval_at(x * y, qv) == ex * ey
    if ey != 0:
        assert eval_at(x / y, qv) == ex / ey


@given(ratfuncs())
def test_text_round_trip(x):
    assert RatFunc.parse(str(x)) == x


# ---- rendering, parsing, evaluation modes ---------------------------------------------------


def test_rendering_format():
    assert str(RatFunc.parse("q^2+1")) == "(1*q^2+1)"
    assert str(RatFunc.parse("(q+1)/(q^2)")) == "(1*q+1)/(1*q^2)"
    assert str(RatFunc()) == "(0)"


def test_parse_accepts_laurent_input():
    assert RatFunc.parse("q^-2 + 1") == (1 + q**2) / q**2
    assert RatFunc.parse("2*q^3 - q/3") == 2 * q**3 - q / 3


@pytest.mark.parametrize("text", ["q^", "(q+1", "q ++", "x", "1/0", ""])
def test_parse_rejects_malformed_text(text):
    with pytest.raises((RatFuncParseError, FieldDivisionByZero)):
        RatFunc.parse(text)


def test_division_by_zero():
    with pytest.raises(FieldDivisionByZero):
        q / RatFunc()


def test_evaluation_errors():
    with pytest.raises(EvaluationError):
        eval_at(1 / (q - 1), 1)
    with pytest.raises(EvaluationError):
        eval_at(q, 0)
    with pytest.raises(EvaluationError):
        eval_at(q, -2)


def test_floating_and_interval_evaluation():
    delta = skein.constants().delta
    assert eval_at(delta, 2.0) == pytest.approx(1316101 / 1024)
    with mpmath.workprec(100):
        v = eval_at(delta, mpmath.mpf(2))
        assert abs(v - mpmath.mpf(1316101) / 1024) < mpmath.mpf(2) ** -80
    box = eval_at(delta, mpmath.iv.mpf([1.9, 2.1]))
    assert 1316101 / 1024 in box


def test_decimal_string_is_exact():
    assert eval_at(q**2, "1.1") == Fraction(121, 100)


def test_poly_gcd_paths_agree():
    a = P.mul((1, 2, 1), (3, 0, -1, 5))
    b = P.mul((1, 2, 1), (2, 7))
    g = P.poly_gcd(a, b)
    assert P.primitive(g) == (1, 2, 1)
    assert P.primitive(P._prs_gcd(a, b)) == (1, 2, 1)
