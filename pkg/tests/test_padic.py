from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from adelcoh.instances.padic import InsufficientPrecision, PAdic, digit_stream

primes = st.sampled_from([2, 3, 5, 7])
rationals = st.fractions(max_denominator=10 ** 4).filter(lambda x: x != 0)


def test_seven_quarters():
    x = PAdic.from_rational(Fraction(7, 4), 2)
    assert x.valuation() == -2
    assert x.principal_part() == Fraction(3, 4)


def test_exact_cancellation():
    x = PAdic.from_rational(Fraction(5, 3), 5)
    assert (x + (-x)).is_exact_zero


def test_inexact_cancellation_loses_valuation():
    x = PAdic.from_digits(2, 0, [1, 0, 1])
    z = x - x
    assert z.k == 0 and z.absolute_precision == 3
    with pytest.raises(InsufficientPrecision):
        z.valuation()


@pytest.mark.parametrize("p,u", [(2, 3), (3, 5), (7, 10)])
def test_valuation_of_p_times_unit(p, u):
    assert PAdic.from_rational(p * u, p).valuation() == 1


def test_precision_is_minimum():
    a = PAdic.from_digits(3, 0, [1, 2, 1, 1])
    b = PAdic.from_digits(3, 0, [2, 0])
    assert (a + b).absolute_precision == 2
    assert (a * b).k == 2


def test_principal_part_needs_digits():
    x = PAdic.from_digits(2, -5, [1, 1])
    with pytest.raises(InsufficientPrecision):
        x.principal_part()


def test_digits_and_residue():
    x = PAdic.from_rational(Fraction(-1), 3, 4)
    assert x.digits() == [2, 2, 2, 2]
    assert x.residue(2) == 8


def test_different_primes_refused():
    with pytest.raises(ValueError):
        PAdic.from_rational(1, 2) + PAdic.from_rational(1, 3)


def test_digit_stream_is_reproducible():
    s, t = digit_stream(11, 5, -3), digit_stream(11, 5, -3)
    assert s(10).digits() == t(40).digits()[:10]
    assert s(10).valuation() == -3


@given(rationals, rationals, primes)
def test_addition_matches_fractions(x, y, p):
    a, b = PAdic.from_rational(x, p, 16), PAdic.from_rational(y, p, 16)
    s = a + b
    assert s.exact == x + y
    if x + y:
        assert s.agrees(PAdic.from_rational(x + y, p, 16))


@given(rationals, rationals, primes)
def test_inexact_arithmetic_agrees_with_exact(x, y, p):
    k = 20
    ax = PAdic.from_rational(x, p, k)
    ay = PAdic.from_rational(y, p, k)
    # strip the exact backing to exercise the digit arithmetic
    ix, iy = PAdic(p, ax.v, ax.u, ax.k), PAdic(p, ay.v, ay.u, ay.k)
    assert (ix * iy).agrees(PAdic.from_rational(x * y, p, k))
    assert (ix + iy).agrees(PAdic.from_rational(x + y, p, k))


@given(rationals, primes)
def test_principal_part_difference_is_integral(x, p):
    a = PAdic.from_rational(x, p, 24)
    rest = x - a.principal_part()
    assert rest.denominator % p != 0
    assume(a.principal_part() != 0)
    assert 0 < a.principal_part() < 1
