import pytest
from hypothesis import given, strategies as st

from adelcoh.coeff import sum_vs_product_cokernel, truncated_cokernel
from adelcoh.exactla.modules import Window
from adelcoh.instances.torus import (
    TorusRank1Instance,
    check_composition,
    check_multiplicativity,
    check_pentagon,
    euler_exponent,
    expected_h1,
    flags_by_level,
    iterated_cokernel,
    restricted_family,
    subgroup,
    tom_dieck_filtration,
    torus_cohomology,
    torus_rank1_spec,
)


@pytest.mark.parametrize("n", range(1, 6))
def test_cohomology(n):
    inst = TorusRank1Instance.first(n)
    t = torus_cohomology(inst)
    assert t.support(0) == {(0,): 1}
    assert t.support(1) == {(-2 * k,): n for k in range(1, 7)}
    assert t.support(1) == expected_h1(inst)
    assert set(t.degrees) <= {0, 1}


def test_orders_need_not_be_consecutive():
    inst = TorusRank1Instance((2, 5), lo=-6, hi=2)
    assert torus_cohomology(inst).support(1) == {(-2,): 2, (-4,): 2, (-6,): 2}


@pytest.mark.parametrize("orders", [(), (2, 2), (0,)])
def test_bad_orders(orders):
    with pytest.raises(ValueError):
        TorusRank1Instance(orders)


def test_empty_window():
    with pytest.raises(ValueError):
        TorusRank1Instance((1,), lo=3, hi=2)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_filtration_concentrated_and_collapses(n):
    rep = tom_dieck_filtration(TorusRank1Instance.first(n))
    assert rep.concentrated and rep.collapse
    assert rep.degrees(0) == {0}
    assert rep.degrees(1) == {1}


def test_flags_by_level():
    spec = torus_rank1_spec(TorusRank1Instance.first(3))
    by = flags_by_level(spec)
    assert [str(f) for f in by[0]] == ["G"]
    assert len(by[1]) == 6


@pytest.mark.parametrize("m", [1, 2, 3])
def test_iterated_cokernel(m):
    spec = torus_rank1_spec(TorusRank1Instance.first(3))
    assert iterated_cokernel(spec, ("G", subgroup(m))) == {(d,): 1 for d in range(-12, -1, 2)}


def test_iterated_cokernel_rejects_non_chain():
    spec = torus_rank1_spec(TorusRank1Instance.first(2))
    with pytest.raises(ValueError):
        iterated_cokernel(spec, ("C1", "C2"))


@pytest.mark.parametrize("reps,m,exp", [((1, 2, 3, 4, 5, 6), 2, 3), ((1, 2, 3, 4, 5, 6), 3, 2), ((1, 5), 2, 0), ((0, 4), 4, 1)])
def test_euler_exponent(reps, m, exp):
    assert euler_exponent(reps, m) == exp


chars = st.lists(st.integers(1, 30), max_size=4)


@given(st.lists(st.tuples(chars, chars), max_size=5))
def test_euler_multiplicative(pairs):
    assert check_multiplicativity(TorusRank1Instance.first(4), pairs).ok


@pytest.mark.parametrize("n", [1, 2, 4])
def test_pentagon_and_composition(n):
    inst = TorusRank1Instance.first(n)
    assert check_pentagon(inst).ok
    assert check_composition(inst).ok


def test_restricted_family_sum_vs_product():
    rp = restricted_family()
    w = Window((-8,), (4,))
    rep = sum_vs_product_cokernel(rp, w)
    assert rep.iso and rep.hypothesis_ok
    assert not any(rep.tail_cokernel.values())
    # one copy of Q[c^-1]c^-1 per exceptional index in each negative even degree
    for (d,), per in rep.cokernel.items():
        want = 1 if d < 0 and d % 2 == 0 else 0
        assert per == {1: want, 2: want, 3: want}


@pytest.mark.parametrize("size", [3, 6, 12])
def test_truncations_agree_on_exceptional_support(size):
    rp = restricted_family()
    w = Window((-8,), (4,))
    full = sum_vs_product_cokernel(rp, w).cokernel
    trunc = truncated_cokernel(rp, size, w)
    for deg, per in full.items():
        for i, v in per.items():
            assert trunc[(i, deg)] == v
        for i in range(4, size + 1):
            assert trunc[(i, deg)] == 0
