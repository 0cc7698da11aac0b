import pytest
from hypothesis import given, strategies as st

from adelcoh.poset import (
    DimensionVector,
    Flag,
    NotCatenaryError,
    Poset,
    PosetError,
    SimplicialComplex,
    all_dimension_vectors,
    all_flags,
    chain_poset,
    dimension_data,
    flag_poset,
    flags,
    order_complex,
)


def hasse(*primes):
    return Poset([0, *primes], [(0, p) for p in primes])


def test_order_is_transitive_closure():
    P = chain_poset(4)
    assert P.lt(0, 3) and P.leq(2, 2) and not P.lt(3, 0)
    assert P.covers == ((1, 0), (2, 1), (3, 2))


def test_cycle_rejected():
    with pytest.raises(PosetError, match="cycle"):
        Poset("ab", [("a", "b"), ("b", "a")])


def test_unknown_element_rejected():
    with pytest.raises(PosetError):
        Poset("ab", [("a", "c")])


def test_minimal_and_maximal():
    P = hasse(2, 3, 5)
    assert P.minimal == (2, 3, 5)
    assert P.maximal == (0,)


@pytest.mark.parametrize("s,expected", [
    (0, [(0,), (2,), (3,)]),
    (1, [(0, 2), (0, 3)]),
    (2, []),
])
def test_flags_of_hasse_poset(s, expected):
    assert [f.vertices for f in flags(hasse(2, 3), s)] == expected


def test_flag_faces():
    f = Flag((3, 2, 1))
    assert f.s == 2 and f.first == 3 and f.last == 1
    assert f.face(1).vertices == (3, 1)
    with pytest.raises(PosetError):
        Flag(())


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_chain_flag_count(n):
    # every non-empty subset of a chain is a flag
    assert len(all_flags(chain_poset(n))) == 2 ** n - 1


def test_dimension_of_hasse_poset():
    dd = dimension_data(hasse(2, 3))
    assert dd[0] == 1 and dd[2] == 0 and dd.max_dim == 1 and dd.codim(2) == 1


def test_not_catenary():
    # a > b > c and a > c directly as a cover
    P = Poset("abcd", [("a", "b"), ("b", "c"), ("a", "d")])
    dd = dimension_data(P, strict=False)
    assert dd.catenary is False
    with pytest.raises(NotCatenaryError) as e:
        dimension_data(P)
    assert e.value.element == "a" and e.value.lengths == (1, 2)


@pytest.mark.parametrize("r,count", [(0, 1), (1, 3), (2, 7), (3, 15)])
def test_dimension_vectors_fill_punctured_cube(r, count):
    vs = all_dimension_vectors(r)
    assert len(vs) == count
    assert len({v.characteristic(r) for v in vs}) == count


def test_insertion_position():
    assert DimensionVector((2, 0)).insertion_position(DimensionVector((2, 1, 0))) == 1
    with pytest.raises(PosetError):
        DimensionVector((1, 1))


def test_simplicial_complex_basics():
    K = SimplicialComplex([[0, 1], [1, 2], [0, 2]])
    assert K.dim == 1 and len(K.simplices) == 6
    assert K.euler_characteristic() == 0
    assert len(K.facets) == 3


def test_order_complex_of_face_poset_is_subdivision():
    K = SimplicialComplex([[0, 1, 2]])
    Kp = order_complex(K.face_poset())
    assert len(Kp.vertices) == 7
    assert Kp.euler_characteristic() == K.euler_characteristic() == 1


@given(st.lists(st.frozensets(st.integers(0, 4), min_size=1, max_size=3), min_size=1, max_size=5))
def test_subdivision_preserves_euler_characteristic(faces):
    K = SimplicialComplex(faces)
    assert order_complex(K.face_poset()).euler_characteristic() == K.euler_characteristic()


@given(st.integers(1, 5))
def test_flag_poset_faces_are_smaller(n):
    fp = flag_poset(chain_poset(n))
    for f, g in fp.covers:
        assert set(g.vertices) < set(f.vertices)
