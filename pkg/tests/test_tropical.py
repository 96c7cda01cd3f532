import math

import pytest
from hypothesis import given, strategies as st

from tropmeas.tropical import BOTTOM, ONE, MaxPlusValue, big_oplus, odot, oplus

finite = st.floats(min_value=-1000.0, max_value=1000.0, allow_nan=False)
scalars = st.one_of(st.just(BOTTOM), finite.map(MaxPlusValue))


def test_constructor_rejects_non_finite():
    for bad in (math.nan, math.inf, -math.inf):
        with pytest.raises(ValueError):
            MaxPlusValue(bad)


def test_boundary_conversions():
    assert MaxPlusValue.from_float(-math.inf) is BOTTOM
    assert MaxPlusValue.from_float(3.5) == MaxPlusValue(3.5)
    assert BOTTOM.as_float() == -math.inf
    assert MaxPlusValue(-2.0).as_float() == -2.0
    with pytest.raises(ValueError):
        MaxPlusValue.from_float(math.inf)
    with pytest.raises(ValueError):
        BOTTOM.value


def test_oplus_examples():
    assert oplus(MaxPlusValue(3), MaxPlusValue(5)) == MaxPlusValue(5)
    x = MaxPlusValue(-7.25)
    assert oplus(BOTTOM, x) == x
    assert oplus(x, BOTTOM) == x
    assert oplus(x, x) == x


def test_odot_examples():
    assert odot(MaxPlusValue(3), MaxPlusValue(5)) == MaxPlusValue(8)
    x = MaxPlusValue(11.5)
    assert odot(ONE, x) == x
    assert odot(BOTTOM, MaxPlusValue(7)) is BOTTOM
    assert odot(MaxPlusValue(7), BOTTOM) is BOTTOM


def test_big_oplus_examples():
    vals = [MaxPlusValue(-1), MaxPlusValue(0), MaxPlusValue(-3)]
    assert big_oplus(vals) == MaxPlusValue(0)
    assert big_oplus([]) is BOTTOM
    assert big_oplus([BOTTOM, MaxPlusValue(-2)]) == MaxPlusValue(-2)


def test_odot_overflow_is_an_error_not_bottom():
    big = MaxPlusValue(1e308)
    with pytest.raises(OverflowError):
        odot(big, big)


@given(scalars, scalars, scalars)
def test_oplus_associative_exact(a, b, c):
    assert oplus(oplus(a, b), c) == oplus(a, oplus(b, c))


@given(scalars, scalars)
def test_oplus_commutative_exact(a, b):
    assert oplus(a, b) == oplus(b, a)


@given(scalars)
def test_oplus_idempotent_and_identity(a):
    assert oplus(a, a) == a
    assert oplus(a, BOTTOM) == a


@given(finite, finite, finite)
def test_odot_associative_within_1e_12(x, y, z):
    a, b, c = MaxPlusValue(x), MaxPlusValue(y), MaxPlusValue(z)
    lhs = odot(odot(a, b), c)
    rhs = odot(a, odot(b, c))
    assert abs(lhs.value - rhs.value) <= 1e-12


@given(scalars, scalars)
def test_odot_commutative_exact(a, b):
    assert odot(a, b) == odot(b, a)


@given(scalars, scalars, scalars)
def test_odot_distributes_over_oplus_exact(a, b, c):
    assert odot(a, oplus(b, c)) == oplus(odot(a, b), odot(a, c))


@given(scalars)
def test_identities(a):
    assert odot(a, ONE) == a
    assert odot(ONE, a) == a
    assert oplus(a, BOTTOM) == a


@given(finite)
def test_every_finite_value_invertible_exactly(x):
    a = MaxPlusValue(x)
    assert odot(a, MaxPlusValue(-x)) == ONE
