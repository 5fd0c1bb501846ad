from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from g2skein import mor22, skein
from g2skein.exactfield import RatFunc, eval_at
from g2skein.mor22 import BASIS, Mor22Element

K = skein.constants()
q = RatFunc.q()


def basis(name):
    return Mor22Element.basis(name)


small = st.sampled_from([RatFunc.const(0), RatFunc.const(1), RatFunc.const(-2), q, 1 / q, q**2 + 1])
elements = st.tuples(small, small, small, small).map(Mor22Element)


def test_documented_products():
    assert basis("I") * basis("I") == basis("I")
    assert (basis("E") * basis("I")).is_zero()
    assert basis("E") * basis("E") == basis("E").scale(K.delta)
    assert basis("H") * basis("I") == basis("I").scale(K.c)
    expected = Mor22Element((K.b, K.b, K.a, K.a))
    assert basis("H") * basis("H") == expected


def test_identity_is_unit():
    for name in BASIS:
        assert basis("id2") * basis(name) == basis(name)


def test_skein_table_matches_spectral_reconstruction():
    assert mor22.structure_constants() == mor22.spectral_structure_constants()


@given(elements, elements)
def test_multiplication_commutes(x, y):
    assert x * y == y * x


@given(elements, elements, elements)
def test_multiplication_associates(x, y, z):
    assert (x * y) * z == x * (y * z)


@pytest.mark.parametrize("u", BASIS)
@pytest.mark.parametrize("v", BASIS)
def test_trace_is_cyclic(u, v):
    assert mor22.trace(basis(u) * basis(v)) == mor22.trace(basis(v) * basis(u))


def test_basis_traces():
    assert mor22.trace(basis("id2")) == K.delta**2
    assert mor22.trace(basis("E")) == K.delta
    assert mor22.trace(basis("I")) == K.delta
    assert mor22.trace(basis("H")).is_zero()


def test_idempotents_verified():
    ids = mor22.idempotents()
    assert all(ids.check().values())


def test_idempotent_traces():
    ids = mor22.idempotents()
    assert mor22.trace(ids.y_plus) + mor22.trace(ids.y_minus) == K.delta**2 - K.delta - 1
    traces = [eval_at(mor22.trace(p), 1) for p in (ids.p_triv, ids.p_X, ids.y_plus, ids.y_minus)]
    assert traces == [1, 7, 14, 27]


def test_idempotent_coefficients_at_one():
    # delta = 7, c = -1/2, xi = 2 at q = 1
    y_plus = mor22.idempotents().y_plus.eval_at(1)
    d, c, s = Fraction(7), Fraction(-1, 2), Fraction(2)
    expected = (
        (-(d + 1) * c**2 + s + 1) / (2 * s),
        (d * (c**2 - 2 * c - 2) - s + c**2 - 2 * c - 1) / (2 * d * s),
        -(d * (c + 2) * c + s + c**2 + 1) / (2 * s),
        (d * c + d + c) / s,
    )
    assert y_plus == expected


def test_eigen_reconstruction():
    ids = mor22.idempotents()
    ps = [ids.p_triv, ids.p_X, ids.y_plus, ids.y_minus]
    for name in BASIS:
        lam = mor22.eigenvalues(basis(name), ps)
        total = Mor22Element.zero()
        for value, p in zip(lam, ps):
            total = total + p.scale(value)
            assert p * basis(name) == p.scale(value)
        assert total == basis(name)


def test_adjoint_fixes_basis():
    for name in BASIS:
        assert mor22.adjoint(basis(name)) == basis(name)


def test_gram_entries_at_one():
    g = mor22.gram_matrix(1)
    assert g[0][0] == 49
    assert g[1][1] == 49


@pytest.mark.parametrize("qv", [Fraction(9, 10), Fraction(11, 10), Fraction(2), 0.9, "1.1"])
def test_gram_positive_definite(qv):
    g, minors, positive = mor22.gram_positivity(qv)
    assert positive
    assert all(float(m) > 0 for m in minors)
    assert all(g[i][j] == g[j][i] for i in range(4) for j in range(4))


def test_solve_rejects_singular_system():
    with pytest.raises(ArithmeticError):
        mor22.solve([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], [Fraction(1), Fraction(1)])


def test_element_validation():
    with pytest.raises(ValueError):
        Mor22Element((RatFunc.const(1),) * 3)
