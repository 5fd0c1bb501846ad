import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from g2skein.diagram import (
    BASIS_NAMES,
    ArityError,
    DiagramError,
    ExpressionError,
    Morphism,
    PlanarityError,
    build,
    catalog,
    maps,
    parse,
)
from g2skein.exactfield import RatFunc
from g2skein.mor22 import basis_diagrams

BASIS = basis_diagrams()
E, I, H, ID2 = BASIS["E"], BASIS["I"], BASIS["H"], BASIS["id2"]

words = st.lists(st.sampled_from(["id2", "E", "I", "H"]), min_size=1, max_size=4)


def word_diagram(word):
    d = BASIS[word[0]]
    for name in word[1:]:
        d = maps.compose(BASIS[name], d)
    return d


def relabelled(d, seed):
    perm = list(range(d.size))
    random.Random(seed).shuffle(perm)
    rot, inv, bottom, top = maps.relabel(d, perm)
    return maps.from_raw(rot, inv, bottom, top, d.loops)


# ---- generators and parsing ------------------------------------------------------------


def test_parse_basis_expressions():
    assert parse("cup(0,1) . cap(0,1)") == Morphism.of(E)
    assert parse("split(1,1) . merge(1,1)") == Morphism.of(I)
    assert parse("id(1) * id(1)") == Morphism.of(ID2)
    assert parse("rot(split(1,1).merge(1,1))") == Morphism.of(H)


def test_parse_linear_combinations():
    m = parse("[q^2+1] cup(0,1).cap(0,1) - id(2) + [1/q] id(2)")
    q = RatFunc.q()
    assert m.coefficient(E) == q**2 + 1
    assert m.coefficient(ID2) == 1 / q - 1
    assert len(m) == 2


def test_parse_closed_expression():
    m = parse("tr(id(1))")
    assert (m.k, m.m) == (0, 0)
    (coef, d), = m.terms()
    assert d.loops == 1 and d.size == 0


@pytest.mark.parametrize(
    "text, where",
    [
        ("split(1,1", 9),
        ("frob(1)", 0),
        ("id(1) + id(2)", None),
        ("cup(0,1) . cup(0,1)", None),
        ("[q^] id(1)", 3),
        ("id(1) $", 6),
        ("merge(1,3)", None),
    ],
)
def test_parse_errors_carry_positions(text, where):
    with pytest.raises((ExpressionError, DiagramError)) as info:
        parse(text)
    if where is not None:
        assert isinstance(info.value, ExpressionError)
        assert info.value.position == where


def test_build_dispatch_matches_combinators():
    e, i = Morphism.of(E), Morphism.of(I)
    assert build("compose", e, i) == Morphism.of(maps.compose(E, I))
    assert build("tensor", e, i) == Morphism.of(maps.tensor(E, I))
    assert build("adjoint", i) == i
    assert build("rotate", i) == Morphism.of(H)
    assert build("trace_close", Morphism.of(ID2)) == Morphism.of(maps.identity(0).with_loops(2))
    with pytest.raises(ValueError):
        build("twist", e)


def test_basis_names():
    assert {BASIS_NAMES[d.key()] for d in BASIS.values()} == {"id2", "E", "I", "H"}


# ---- documented examples ---------------------------------------------------------------


def test_adjoint_fixes_symmetric_diagrams():
    assert maps.adjoint(E) == E
    assert maps.adjoint(I) == I


def test_rotation_of_basis_diagrams():
    assert maps.rotate(I) == H
    assert maps.rotate(H) == I
    assert maps.rotate(ID2) == E
    assert maps.rotate(E) == ID2


def test_trace_of_identity_is_two_loops():
    d = maps.trace_close(ID2)
    assert d.is_closed and d.loops == 2 and d.size == 0


def test_face_sizes():
    assert maps.faces(catalog.theta()) == [2, 2, 2]
    assert maps.faces(catalog.k4()) == [3, 3, 3, 3]
    loop = catalog.loop()
    assert maps.faces(loop) == [] and loop.loops == 1
    assert maps.faces(catalog.prism(5)) == [4] * 5 + [5, 5]


def test_canonical_keys():
    other_e = maps.rotate(ID2)
    assert maps.canonical(other_e) == maps.canonical(E)
    assert maps.canonical(relabelled(E, 3)) == maps.canonical(E)
    assert maps.canonical(E) != maps.canonical(ID2)
    assert maps.canonical(I) != maps.canonical(H)


def test_canonical_is_injective_on_small_catalog():
    items = [ID2, E, I, H, catalog.theta(), catalog.k4(), catalog.loop(1), catalog.loop(2)]
    assert len({maps.canonical(d) for d in items}) == len(items)


# ---- invariants -------------------------------------------------------------------------------


def closure_is_planar(d):
    return maps.euler_characteristic(d) == 2 * maps._num_components_closure(d)


@pytest.mark.parametrize("name, d", catalog.standard_catalog(count=6))
def test_catalog_diagrams_are_valid(name, d):
    maps.validate(d)
    assert closure_is_planar(d)
    for a, b, c in d.vertices:
        assert d.rot[a] == b and d.rot[b] == c and d.rot[c] == a


@given(words, st.integers(0, 10_000))
def test_canonical_key_survives_relabelling(word, seed):
    d = word_diagram(word)
    assert relabelled(d, seed) == d


@given(words)
def test_full_rotation_is_identity(word):
    d = word_diagram(word)
    r = d
    for _ in range(d.k + d.m):
        r = maps.rotate(r)
    assert r == d


@given(words)
def test_adjoint_is_an_involution(word):
    d = word_diagram(word)
    assert maps.adjoint(maps.adjoint(d)) == d


@given(words, words)
def test_adjoint_reverses_composition(w1, w2):
    f, g = word_diagram(w1), word_diagram(w2)
    assert maps.adjoint(maps.compose(f, g)) == maps.compose(maps.adjoint(g), maps.adjoint(f))


@given(words)
def test_composed_words_stay_planar(word):
    d = word_diagram(word)
    assert closure_is_planar(maps.trace_close(d))


@given(st.integers(0, 10_000))
def test_random_cubic_graphs_are_planar(seed):
    d = catalog.random_cubic(8, random.Random(seed))
    assert d.num_vertices == 8
    assert closure_is_planar(d)
    assert relabelled(d, seed) == d


# ---- rejected inputs ----------------------------------------------------------------------------


def test_mirrored_vertex_is_not_planar():
    d = catalog.k4()
    a, b, c = d.vertices[0]
    rot = {h: d.rot[h] for h in range(d.size)}
    rot[a], rot[b], rot[c] = c, a, b
    inv = {h: d.inv[h] for h in range(d.size)}
    with pytest.raises(PlanarityError):
        maps.from_raw(rot, inv, [], [])


def test_broken_involution_is_rejected():
    b = maps.MapBuilder()
    x, y, z = b.half(), b.half(), b.half()
    b.pair(x, y)
    b.inv[z] = z
    b.vertex(x, y, z)
    with pytest.raises(DiagramError):
        b.freeze()


def test_arity_errors():
    with pytest.raises(ArityError):
        maps.compose(maps.identity(1), ID2)
    with pytest.raises(ArityError):
        maps.rotate(maps.split(1, 1))
    with pytest.raises(ArityError):
        maps.cup(1, 3)
    with pytest.raises(ArityError):
        Morphism(2, 2, [(RatFunc.const(1), maps.identity(1))])


def test_tadpole_and_pop_predicates():
    d = catalog.with_tadpole(catalog.theta())
    assert maps.has_tadpole(d)
    assert maps.vanishes_by_pop(d)
    assert not maps.vanishes_by_pop(catalog.k4())
    dumbbell = bridged(catalog.k4(), catalog.k4())
    assert not maps.has_tadpole(dumbbell)
    assert maps.vanishes_by_pop(dumbbell)


def bridged(left, right):
    """Two closed diagrams joined by a single new edge."""
    both = maps.tensor(left, right)
    h1, h2 = 0, left.size

    def attempt(f1, f2):
        def build_it():
            b = catalog._builder(both)
            z1 = catalog._subdivide(b, h1, f1)
            z2 = catalog._subdivide(b, h2, f2)
            b.pair(z1, z2)
            return b.freeze()

        return build_it

    return catalog._first_planar(attempt(f1, f2) for f1 in (False, True) for f2 in (False, True))


def test_closed_components_split_off():
    d = maps.tensor(I, catalog.theta())
    main, comps = maps.closed_components(d)
    assert main == I
    assert comps == [catalog.theta()]
