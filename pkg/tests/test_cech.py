import random

import pytest

from adelcoh.coeff import DualCoefficientSystem, identity_rule
from adelcoh.exactla.graded import graded_cohomology
from adelcoh.exactla.modules import PresentedModule, Window, abelian_atom, identity_map
from adelcoh.exactla.scalars import Q
from adelcoh.instances.cech import (
    delta_poset,
    koszul_local_cohomology,
    parse_monomial,
    polynomial_ring,
    simplicial_cohomology,
    stable_koszul_complex,
    subdivision_compare,
)
from adelcoh.poset import SimplicialComplex
from adelcoh.suites import complexes_up_to, random_complex


@pytest.fixture(scope="module")
def xy():
    return polynomial_ring(["x", "y"])


def gens(g, *texts):
    return [parse_monomial(t, g) for t in texts]


@pytest.fixture(scope="module")
def local_xy(xy):
    g, R = xy
    return koszul_local_cohomology(g, gens(g, "x", "y"), R, Window.cube(-10, 2, 2))


def test_local_cohomology_support(local_xy):
    assert not local_xy.support(0) and not local_xy.support(1)
    h2 = local_xy.support(2)
    expected = {(a, b): 1 for a in range(-10, 0) for b in range(-10, 0)}
    assert h2 == expected


@pytest.mark.parametrize("d", range(2, 11))
def test_hilbert_value(local_xy, d):
    assert local_xy.total_dim(2, -d) == d - 1


def test_one_variable():
    g, R = polynomial_ring(["x"])
    t = koszul_local_cohomology(g, gens(g, "x"), R, Window.cube(-5, 3, 1))
    assert t.support(0) == {}
    assert t.support(1) == {(k,): 1 for k in range(-5, 0)}


@pytest.mark.parametrize("generators", [("x^2", "y", "x*y"), ("x^3", "y^2"), ("x*y", "x^2", "y^3"), ("y", "x")])
def test_radical_invariance(xy, generators):
    g, R = xy
    w = Window.cube(-4, 1, 2)
    base = koszul_local_cohomology(g, gens(g, "x", "y"), R, w)
    assert koszul_local_cohomology(g, gens(g, *generators), R, w).same_as(base)


def test_ideal_of_x_only(xy):
    # H^1_(x)(Q[x, y]) = Q[x^-1] x^-1 (x) Q[y]
    g, R = xy
    t = koszul_local_cohomology(g, gens(g, "x"), R, Window.cube(-3, 2, 2))
    assert t.support(1) == {(a, b): 1 for a in range(-3, 0) for b in range(0, 3)}
    assert not t.support(2)


@pytest.mark.parametrize("generators", [("x", "y"), ("x^2", "y"), ("x", "y", "x*y"), ("x",)])
def test_agrees_with_stable_koszul_oracle(xy, generators):
    g, R = xy
    w = Window.cube(-3, 2, 2)
    G = gens(g, *generators)
    oracle = graded_cohomology(stable_koszul_complex(g, G, R), w)
    assert koszul_local_cohomology(g, G, R, w).same_as(oracle)


def test_three_variables_top_only():
    g, R = polynomial_ring(["x", "y", "z"])
    t = koszul_local_cohomology(g, gens(g, "x", "y", "z"), R, Window.cube(-3, 0, 3))
    assert not t.support(0) and not t.support(1) and not t.support(2)
    assert t.support(3) == {(a, b, c): 1 for a in (-3, -2, -1) for b in (-3, -2, -1) for c in (-3, -2, -1)}


def test_cech_unaugmented_has_degree_zero(xy):
    # without the augmentation H^0 is M itself in non-negative degrees
    g, R = xy
    t = koszul_local_cohomology(g, gens(g, "x", "y"), R, Window.cube(-1, 1, 2), augmented=False)
    assert t.support(0) == {(a, b): 1 for a in (0, 1) for b in (0, 1)}
    assert t.support(1) == {(-1, -1): 1}


def test_parse_monomial(xy):
    g, _ = xy
    assert parse_monomial("x^2*y", g) == (2, 1)
    assert parse_monomial("1", g) == (0, 0)
    with pytest.raises(ValueError):
        parse_monomial("z", g)
    with pytest.raises(ValueError):
        parse_monomial("x^-1", g)


def test_delta_poset_sizes():
    assert len(delta_poset(3)) == 7
    assert len(delta_poset(3).minimal) == 3 and len(delta_poset(3).maximal) == 1


def _constant(K, augmented=False):
    q = PresentedModule((abelian_atom(Q),))
    P = K.face_poset()
    values = {s: q for s in P.elements}
    maps = {(s, t): identity_map(q) for (t, s) in P.covers}
    if augmented:
        from adelcoh.poset import Poset

        els = list(P.elements) + [frozenset()]
        rel = [(t, s) for (t, s) in P.covers] + [(s, frozenset()) for s in K.n_simplices(0)]
        P = Poset(els, rel)
        values[frozenset()] = q
        maps.update({(frozenset(), s): identity_map(q) for s in K.n_simplices(0)})
    return simplicial_cohomology(K, DualCoefficientSystem(P, values, maps), augmented=augmented)


def test_triangle_boundary_is_a_circle():
    K = SimplicialComplex([[0, 1], [1, 2], [0, 2]])
    t = _constant(K)
    assert t.group(0).rank == 1 and t.group(1).rank == 1


@pytest.mark.parametrize("faces,b0,b1,b2", [
    ([[0, 1, 2]], 1, 0, 0),
    ([[0], [1]], 2, 0, 0),
    ([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]], 1, 0, 1),
    ([[0, 1], [1, 2], [2, 3], [3, 0]], 1, 1, 0),
])
def test_betti_numbers(faces, b0, b1, b2):
    t = _constant(SimplicialComplex(faces))
    assert [t.group(s).rank for s in range(3)] == [b0, b1, b2]


def test_subdivision_on_complexes_up_to_three_vertices():
    q = PresentedModule((abelian_atom(Q),))
    for K in complexes_up_to(3):
        assert subdivision_compare(K, q, {s: identity_rule for s in K.simplices}).equal, K


def test_complex_enumeration_count():
    # non-empty antichains of non-empty subsets, i.e. Dedekind numbers minus two
    assert [len(complexes_up_to(n)) for n in (1, 2, 3, 4)] == [1, 4, 18, 166]


def test_random_complex_is_seeded():
    a = [random_complex(random.Random(3), 5) for _ in range(1)]
    b = [random_complex(random.Random(3), 5) for _ in range(1)]
    assert repr(a) == repr(b)
