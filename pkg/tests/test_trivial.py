from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from klsym.polys import IntPoly, RatFunc
from klsym.reptheory import jordan_oracle
from klsym.trivial import (
    TrivialFactorBundle,
    boundary_cohomology_factors,
    composition_count,
    empirical_infinity_factor,
    extract_nontrivial_factor,
    local_factor_at_infinity,
    local_factor_at_zero,
    m_coefficients,
    purity_check,
    trivial_factor_bundle,
    tuple_census,
)

lin = IntPoly.linear


def test_m_series_examples():
    assert m_coefficients(3, 2, 5) == [1, 0, 1, -1, 0, -1]
    for k in range(1, 9):
        m = m_coefficients(2, k, k + 3)
        assert m == [1 if u == 0 else (-1 if u == k + 1 else 0) for u in range(k + 4)]
    assert m_coefficients(4, 0, 6) == [1, 0, 0, 0, 0, 0, 0]


def test_composition_examples():
    assert composition_count(3, 2, 2) == 2
    for n, k in ((2, 3), (3, 4), (5, 2)):
        assert composition_count(n, k, 0) == 1
        assert composition_count(n, k, k * (n - 1) + 1) == 0


@given(st.integers(2, 6), st.integers(0, 9))
def test_m_series_properties(n, k):
    top = k * (n - 1) // 2
    m = m_coefficients(n, k, k * (n - 1) + 2)
    assert all(v >= 0 for v in m[: top + 1])
    # partial sums of m_k telescope to the composition count c_k(u)
    for u in range(k * (n - 1) + 1 if k else 1):
        assert sum(m[: u + 1]) == composition_count(n, k, u)
    # total multiplicity is the dimension of the invariants of a principal nilpotent
    assert sum(m[: top + 1]) == composition_count(n, k, top)


def test_local_factor_at_zero_examples():
    for k in range(6):
        assert local_factor_at_zero(2, k, 3) == lin(1)
    assert local_factor_at_zero(3, 2, 7) == lin(1) * lin(49)
    assert local_factor_at_zero(4, 0, 5) == lin(1)


@pytest.mark.parametrize("n,k", [(2, 5), (3, 2), (3, 3), (4, 4), (5, 3), (3, 6)])
def test_local_factor_at_zero_matches_jordan_oracle(n, k):
    for q in (3, 4):
        assert local_factor_at_zero(n, k, q) == jordan_oracle(n, k, q)


def test_census_examples():
    c = tuple_census(2, 2, 3, 3)
    assert c.tuples == [(1, 1)] and c.a == 1 and c.b == 0
    c = tuple_census(2, 4, 3, 3)
    assert c.tuples == [(2, 2)] and (c.a, c.b, c.c) == (1, 1, 0)
    c = tuple_census(2, 2, 5, 5)
    assert c.tuples == [(1, 1)] and (c.a, c.b) == (1, 0)
    assert tuple_census(3, 1, 7, 7).b is None


def test_infinity_examples():
    for q in (3, 5, 7, 9):
        for k in (1, 3, 5):
            assert local_factor_at_infinity(2, k, q, q if q != 9 else 3) == IntPoly.one()
    assert local_factor_at_infinity(2, 4, 3, 3) == lin(9)
    assert local_factor_at_infinity(2, 2, 3, 3) == IntPoly.one()
    with pytest.raises(ValueError):
        local_factor_at_infinity(3, 2, 5, 5)


def test_boundary_examples():
    for n in (2, 3, 4, 5):
        for k in range(1, 7):
            assert boundary_cohomology_factors(n, k, 3, 3) == (IntPoly.one(), IntPoly.one())
    assert boundary_cohomology_factors(3, 2, 2, 2) == (lin(4), lin(8))
    assert boundary_cohomology_factors(3, 1, 2, 2) == (IntPoly.one(), IntPoly.one())
    # Sym^0 is the constant sheaf: H^0 and H^2_c of G_m
    assert boundary_cohomology_factors(2, 0, 3, 3) == (lin(1), lin(3))


def test_extraction_anchor_cases():
    b = trivial_factor_bundle(2, 1, 3, 3)
    assert (b.det0, b.detInf, b.h0, b.h2) == (lin(1), IntPoly.one(), IntPoly.one(), IntPoly.one())
    assert extract_nontrivial_factor(RatFunc(lin(1), IntPoly.one()), b) == IntPoly.one()
    b0 = trivial_factor_bundle(2, 0, 3, 3)
    assert extract_nontrivial_factor(RatFunc(lin(1), lin(3)), b0) == IntPoly.one()


def test_empirical_infinity_factor_finds_low_weight_part():
    K = IntPoly([1, 0, 27])
    P = K * lin(1) * lin(3)
    assert empirical_infinity_factor(P, 3, 3) == lin(1) * lin(3)
    assert empirical_infinity_factor(K, 3, 3) == IntPoly.one()


def test_purity_examples():
    assert purity_check(IntPoly.one(), 3, 3).ok
    rep = purity_check(IntPoly([1, 0, 27]), 3, 3)
    assert rep.ok and rep.functional_equation
    bad = purity_check(lin(3), 3, 3)
    assert not bad.ok and bad.violations
    assert not purity_check(IntPoly([1, 0, 9]), 3, 3).functional_equation
