from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from klsym.padic import (
    congruence_check,
    d_series,
    limit_diagnostic,
    padic_valuation,
    partition_count,
    prop_exponent,
    stability_check,
)
from klsym.pipeline import analyze
from klsym.polys import IntPoly


def test_d_series_examples():
    assert d_series(2, 5) == [1, 0, 0, 0, 0, 0]
    assert d_series(3, 6) == [1, 0, 1, 0, 1, 0, 1]
    assert d_series(5, 7) == [1, 0, 1, 1, 2, 1, 3, 2]


@given(st.integers(2, 9), st.integers(0, 40))
def test_d_series_matches_partition_recursion(n, j):
    assert d_series(n, j)[j] == partition_count(j, n - 1)


def test_stability_examples():
    assert stability_check(3, 5, 5).ok
    assert stability_check(4, 3, 5).skipped
    assert stability_check(2, 9, 9).ok


@given(st.integers(2, 6), st.integers(0, 12))
def test_stability_holds_whenever_applicable(n, k):
    rep = stability_check(n, k, 12)
    assert rep.skipped == (k < n)
    assert rep.ok


def test_valuation():
    assert padic_valuation(0, 3) is None
    assert padic_valuation(54, 3) == 3
    assert padic_valuation(-5, 5) == 1


def test_congruence_examples():
    P = IntPoly([1, 5, 7])
    assert congruence_check(P, P, 3, 50).holds
    rep = congruence_check(IntPoly([1, 3]), IntPoly([1, 6]), 3, 2)
    assert not rep and rep.valuations == [None, 1]
    assert prop_exponent(11, 2, 3) == (2, 1)
    assert prop_exponent(29, 2, 3) == (3, 1)
    with pytest.raises(ValueError):
        prop_exponent(2, 2, 3)


def test_congruence_k11(registry):
    K11 = analyze(2, 11, 3, registry=registry).K
    K2 = analyze(2, 2, 3, registry=registry).K
    _, e = prop_exponent(11, 2, 3)
    assert congruence_check(K11, K2, 3, e).holds


def test_limit_diagnostic_padic_sequence(registry):
    diag = limit_diagnostic(2, 3, 3, [2, 11], r=2, precision=6, analyze=lambda k: analyze(2, k, 3, registry=registry))
    assert diag.divisible == [True, True]
    assert diag.guaranteed == [1]
    assert all(v is None or v >= 1 for v in diag.difference_valuations[0])


def test_limit_diagnostic_trivial_zeros_n3(registry):
    diag = limit_diagnostic(3, 2, 4, [3, 4], r=2, precision=6, analyze=lambda k: analyze(3, k, 4, registry=registry))
    assert diag.d_prefix == [1, 0, 1]
    assert all(diag.divisible)
    with pytest.raises(ValueError):
        limit_diagnostic(3, 2, 4, [4, 3], r=2, precision=6, analyze=lambda k: None)
