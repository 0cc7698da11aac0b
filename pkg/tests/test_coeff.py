import pytest

from adelcoh.coeff import (
    CoefficientSystem,
    EulerClassSystem,
    FunctorialityError,
    LocalizationSystem,
    NonStabilizingError,
    RestrictedProduct,
    apply_rule,
    check_absorbative,
    constant_system,
    euler_localize,
    identity_rule,
    induce_on_flags,
    invert_variables,
    localize_atom,
    sum_vs_product_cokernel,
    truncated_cokernel,
)
from adelcoh.exactla.modules import (
    AbelianAtom,
    Grading,
    ModuleMap,
    PresentedModule,
    Window,
    graded_atom,
)
from adelcoh.exactla.scalars import Q, ZS
from adelcoh.instances.numberring import module_from_relations
from adelcoh.poset import Poset, chain_poset


def ring(names=("x", "y")):
    g = Grading.standard(list(names))
    return g, PresentedModule((graded_atom(g, "R", range(len(names))),), g)


def test_composite_restrictions():
    P = chain_poset(3)
    q = PresentedModule((AbelianAtom(Q),))
    sys = CoefficientSystem(P, {p: q for p in P}, {(2, 1): ModuleMap(q, q, {(0, 0): 2}),
                                                     (1, 0): ModuleMap(q, q, {(0, 0): 3})})
    assert sys.map(2, 0).entries == {(0, 0): 6}
    sys.check_functoriality()


def test_functoriality_failure_reported():
    # a square whose two composites differ
    P = Poset("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    q = PresentedModule((AbelianAtom(Q),))
    one, two = ModuleMap(q, q, {(0, 0): 1}), ModuleMap(q, q, {(0, 0): 2})
    sys = CoefficientSystem(P, {p: q for p in P}, {("a", "b"): one, ("a", "c"): one,
                                                     ("b", "d"): one, ("c", "d"): two,
                                                     ("a", "d"): one})
    with pytest.raises(FunctorialityError):
        sys.check_functoriality()


def test_restriction_against_order_rejected():
    P = chain_poset(2)
    q = PresentedModule((AbelianAtom(Q),))
    with pytest.raises(ValueError):
        CoefficientSystem(P, {p: q for p in P}, {(0, 1): ModuleMap(q, q, {})})


def test_induced_system_on_flags():
    P = chain_poset(2)
    q = PresentedModule((AbelianAtom(Q),))
    low = induce_on_flags(constant_system(P, q), "lower")
    assert len(low.poset) == 3
    low.check_functoriality()


def test_apply_rule_unit():
    g, R = ring()
    lm, unit, idx = apply_rule(invert_variables({0}), R)
    assert lm.atoms[0].inverted == frozenset({0}) and idx == [0]
    assert unit.entries == {(0, 0): 1}


@pytest.mark.parametrize("side,small,large,ok", [
    ("left", {0}, {0, 1}, True),
    ("right", {0}, {0, 1}, False),
    ("right", {0, 1}, {0}, True),
    ("left", {0, 1}, {0}, False),
])
def test_absorbative_sides(side, small, large, ok):
    # element 1 lies above element 0
    P = chain_poset(2)
    g, R = ring()
    ls = LocalizationSystem(P, {0: invert_variables(small), 1: invert_variables(large)})
    assert bool(check_absorbative(ls, side, [R])) is ok


def test_non_absorbative_detected():
    P = chain_poset(2)
    g, R = ring()
    # the smaller element inverts a variable the larger one does not
    ls = LocalizationSystem(P, {0: invert_variables({1}), 1: invert_variables({0})})
    r = check_absorbative(ls, "left", [R])
    assert not r and "left" in r.failure


def test_missing_rule_rejected():
    with pytest.raises(ValueError):
        LocalizationSystem(chain_poset(2), {0: identity_rule})


def euler_pair():
    g = Grading(("c",), (0,), (2,), 1, (("G", frozenset()), ("C", frozenset({0}))))
    P = Poset(["G", "C"], [("G", "C")])
    es = EulerClassSystem(P, {("G", "C"): ((1,),)}, {"G": "G", "C": "C"}, g)
    return g, es


def test_euler_localization_certificate():
    g, es = euler_pair()
    atom = graded_atom(g, "C", [0])
    loc, cert = localize_atom(es, ("G", "C"), atom, Window((-6,), (2,)))
    assert loc.inverted == frozenset({0})
    # c^k / c^N is first defined at stage N = -k/2
    assert cert[(-4,)] == 2 and cert[(2,)] == 0 and cert[(-3,)] is None


def test_non_stabilizing_raises():
    g, es = euler_pair()
    with pytest.raises(NonStabilizingError):
        localize_atom(es, ("G", "C"), graded_atom(g, "C", [0]), Window((-40,), (0,)), max_stage=3)


def test_abelian_euler_localization():
    P = Poset(["G", "C"], [("G", "C")])
    es = EulerClassSystem(P, {("G", "C"): (2,)})
    atom, stage = localize_atom(es, ("G", "C"), AbelianAtom(ZS({2, 3}), 4))
    assert atom is None and stage == 2
    atom, _ = localize_atom(es, ("G", "C"), AbelianAtom(ZS({2, 3})))
    assert atom == AbelianAtom(ZS({3}))


def test_inverting_two_on_z6_leaves_z3():
    P = Poset(["G", "C"], [("G", "C")])
    es = EulerClassSystem(P, {("G", "C"): (2,)})
    z6 = module_from_relations({2, 3}, [[6]]).module
    loc, unit, _ = euler_localize(es, ("G", "C"), z6)
    assert loc.atoms == (AbelianAtom(ZS({3}), 3),)
    assert len(unit.entries) == 1


def test_restricted_product_needs_torsion_free_components():
    g = Grading(("c",), (0,), (2,), 1)
    tors = PresentedModule((graded_atom(g, "R", [0], ideal=[(2,)]),), g)
    rp = RestrictedProduct(lambda i: tors, lambda i: [((1,), 1)], 2, True, tors, g)
    rep = sum_vs_product_cokernel(rp, Window((-4,), (4,)))
    assert not rep.hypothesis_ok and not rep.iso


@pytest.mark.parametrize("n", [2, 4, 8])
def test_truncations_agree_on_exceptional_indices(n):
    g = Grading(("c",), (0,), (2,), 1)
    comp = PresentedModule((graded_atom(g, "R", [0]),), g)
    rp = RestrictedProduct(lambda i: comp, lambda i: [((1,), 1)] if i <= 2 else [((0,), 3)], 2, True, comp, g)
    w = Window((-6,), (2,))
    tc = truncated_cokernel(rp, n, w)
    assert {k: v for k, v in tc.items() if v} == {(i, (d,)): 1 for i in (1, 2) for d in (-6, -4, -2)}
