from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from klsym.errors import NotDivisibleError
from klsym.polys import IntPoly, RatFunc, poly_gcd

polys = st.lists(st.integers(-30, 30), min_size=0, max_size=5).map(lambda c: IntPoly([1] + c))


def test_basics():
    assert IntPoly.linear(3).coeffs == (1, -3)
    assert IntPoly([1, 2, 0, 0]).degree == 1
    assert IntPoly.one()[5] == 0
    with pytest.raises(ValueError):
        IntPoly([2, 1])
    assert (IntPoly.linear(1) * IntPoly.linear(9)).coeffs == (1, -10, 9)
    assert IntPoly.linear(2) ** 3 == IntPoly.linear(2) * IntPoly.linear(2) * IntPoly.linear(2)


@given(polys, polys)
def test_multiplication_and_exact_division_round_trip(a, b):
    prod = a * b
    assert prod.exact_div(b) == a
    assert b.divides(prod)
    assert prod.evaluate(Fraction(1, 3)) == a.evaluate(Fraction(1, 3)) * b.evaluate(Fraction(1, 3))


def test_inexact_division_raises():
    with pytest.raises(NotDivisibleError):
        IntPoly([1, -4, 3]).exact_div(IntPoly.linear(2))
    with pytest.raises(NotDivisibleError):
        IntPoly.linear(2).exact_div(IntPoly([1, 0, 1]))


@given(polys, polys, polys)
def test_gcd_recovers_common_factor(a, b, g):
    common = poly_gcd(a * g, b * g)
    assert g.divides(common)
    assert common.divides(a * g) and common.divides(b * g)


@given(polys, polys, polys)
def test_ratfunc_reduction_preserves_series(num, den, g):
    f = RatFunc(num * g, den * g)
    r = f.reduced()
    assert r.series(12) == RatFunc(num, den).series(12)
    assert r.den.degree <= den.degree


def test_ratfunc_arithmetic():
    f = RatFunc(IntPoly.linear(1), IntPoly.linear(3))
    assert f.series(4) == [1, 2, 6, 18]
    assert (f * IntPoly.linear(3)).as_poly() == IntPoly.linear(1)
    assert (f / f).as_poly() == IntPoly.one()
