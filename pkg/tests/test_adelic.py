import random

import pytest

from adelcoh.adelic import (
    AdelicSpec,
    AssemblyError,
    adelic_cohomology,
    assemble,
    decompose_by_dimension,
    dimension_vectors_of,
    totalized,
)
from adelcoh.coeff import LocalizationSystem, constant_system, identity_rule, invert_variables
from adelcoh.exactla.complex import ComplexError, check_complex, cohomology
from adelcoh.exactla.cube import check_faces
from adelcoh.exactla.modules import AbelianAtom, Grading, PresentedModule, Window, graded_atom, identity_map
from adelcoh.exactla.scalars import Q
from adelcoh.poset import Poset, chain_poset
from adelcoh.suites import graded_poset_spec, monotone_inversions, random_catenary_poset


def q_spec(P, policy="specializations", extra=None):
    q = PresentedModule((AbelianAtom(Q),))
    return AdelicSpec(P, constant_system(P, q), LocalizationSystem(P, {p: identity_rule for p in P}),
                      policy=policy, extra=extra or {})


def test_chain_has_cohomology_of_a_point():
    t = adelic_cohomology(q_spec(chain_poset(3)))
    assert str(t.group(0)) == "Q" and t.group(1).is_zero and t.group(2).is_zero


def test_circle_poset():
    # two maximal and two minimal elements, each maximal above both minimal: a circle
    P = Poset("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    t = adelic_cohomology(q_spec(P))
    assert str(t.group(0)) == "Q" and str(t.group(1)) == "Q"


def test_unknown_policy():
    with pytest.raises(AssemblyError):
        q_spec(chain_poset(2), policy="everything")


def test_closed_point_policy_needs_extra_maps():
    P = Poset("abcd", [("a", "c"), ("b", "d")])
    spec = q_spec(P, "all-closed-points")
    assert any(f.vertices == ("a", "d") for f in spec.flags(1))
    with pytest.raises(AssemblyError, match="closed-point"):
        assemble(spec)


def test_closed_point_policy_with_extra_maps():
    # the pseudo-flags a>d and b>c close the two chains into a circle
    P = Poset("abcd", [("a", "c"), ("b", "d")])
    q = PresentedModule((AbelianAtom(Q),))
    extra = {("a", "d"): identity_map(q), ("b", "c"): identity_map(q)}
    ac = assemble(q_spec(P, "all-closed-points", extra))
    check_complex(ac.complex)
    t = cohomology(ac.complex)
    assert str(t.group(0)) == "Q" and str(t.group(1)) == "Q"
    assert str(adelic_cohomology(q_spec(P)).group(0)) == "Q^2"


def test_augmentation_required():
    with pytest.raises(AssemblyError):
        assemble(q_spec(chain_poset(2)), augmented=True)


def test_flag_counts_of_complex():
    ac = assemble(q_spec(chain_poset(3)))
    assert [len(o) for o in ac.complex.objects] == [3, 3, 1]


def test_broken_sign_is_caught():
    ac = assemble(q_spec(chain_poset(3)))
    bad = ac.complex.differentials[0].entries
    key = next(iter(bad))
    bad[key] = -bad[key]
    with pytest.raises(ComplexError):
        check_complex(ac.complex)


@pytest.mark.parametrize("seed", range(8))
def test_cube_totalization_matches(seed):
    rng = random.Random(seed)
    P = random_catenary_poset(rng, 7, 2)
    w = Window.cube(-1, 1, 2)
    spec = graded_poset_spec(P, monotone_inversions(rng, P, 2, "mixed"), 2, w)
    cube = decompose_by_dimension(spec)
    check_faces(cube, w)
    a = adelic_cohomology(spec)
    b = cohomology(totalized(spec), w)
    assert a.same_as(b)


def test_dimension_vectors_of_hasse_like_poset():
    P = Poset([0, 2, 3], [(0, 2), (0, 3)])
    vs = {v.dims for v in dimension_vectors_of(q_spec(P))}
    assert vs == {(1,), (0,), (1, 0)}


def test_inversion_localization_on_interval():
    # Q[x] at the closed point, Q[x, 1/x] at the generic point
    g = Grading.standard(["x"])
    R = PresentedModule((graded_atom(g, "R", [0]),), g)
    P = Poset(["g", "c"], [("g", "c")])
    spec = AdelicSpec(P, constant_system(P, R),
                      LocalizationSystem(P, {"g": invert_variables({0}), "c": identity_rule}),
                      window=Window((-3,), (2,)))
    t = adelic_cohomology(spec)
    assert t.support(0) == {(d,): 1 for d in range(0, 3)}
    assert t.support(1) == {}
