from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from klsym.cyclotomic import CycInt, cyc_to_complex
from klsym.errors import NotDivisibleError
from klsym.fields import closed_points
from klsym.frobenius import (
    CharPoly,
    charpoly_dual,
    charpoly_from_power_sums,
    charpoly_of_power,
    complete_homogeneous,
    elementary_from_power_sums,
    point_batch,
    power_sums_at_point,
    power_sums_from_elementary,
    symk_trace,
    weight_check,
)
from klsym.tower import KloostermanTower


def ci(p, v):
    return CycInt.from_int(p, v)


def test_point_power_sum_examples():
    tower = KloostermanTower(3, 1, 2)
    by_rep = {pt.representative.index: pt for pt in closed_points(3, 1, 1)}
    assert power_sums_at_point(by_rep[1], 2, tower)[0] == ci(3, 1)
    assert power_sums_at_point(by_rep[2], 2, tower)[0] == ci(3, -2)
    t3 = KloostermanTower(2, 1, 3)
    pt = closed_points(2, 1, 1)[0]
    assert power_sums_at_point(pt, 3, t3, count=1)[0] == ci(2, -1)


def test_charpoly_examples():
    assert charpoly_dual([ci(3, 1)], 2, 1, 3).e == (ci(3, 1), ci(3, 3))
    assert charpoly_dual([ci(3, -2)], 2, 1, 3).e == (ci(3, -2), ci(3, 3))
    assert charpoly_from_power_sums([ci(3, 1)], 2, 1, 3).e == (ci(3, 1), ci(3, 3))
    for q in (2, 4, 7):
        tower = KloostermanTower(*{2: (2, 1), 4: (2, 2), 7: (7, 1)}[q], 3)
        _, ps = point_batch(tower, 1, 1)
        c = charpoly_dual(ps, 3, 1, q)
        assert all(c[i].e[2] == ci(tower.p, q**3) for i in range(len(c)))


def test_power_examples():
    c = CharPoly(2, 1, 3, (ci(3, 1), ci(3, 3)))
    assert charpoly_of_power(c, 1) is c
    assert charpoly_of_power(c, 2).e == (ci(3, -5), ci(3, 9))
    c2 = CharPoly(2, 1, 3, (ci(3, -2), ci(3, 3)))
    assert charpoly_of_power(c2, 2).e == (ci(3, -2), ci(3, 9))


def test_symk_examples():
    c = CharPoly(2, 1, 3, (ci(3, 1), ci(3, 3)))
    assert symk_trace(c, 0) == ci(3, 1)
    assert symk_trace(c, 1) == c.e[0]
    assert symk_trace(c, 2) == ci(3, -2)


@st.composite
def elementary(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, 5))
    w = max(p - 1, 1)
    es = [CycInt(p, tuple(draw(st.lists(st.integers(-20, 20), min_size=w, max_size=w)))) for _ in range(n)]
    return es


@given(elementary())
def test_newton_round_trip(es):
    ps = power_sums_from_elementary(es, len(es))
    assert elementary_from_power_sums(ps) == es


def test_newton_rejects_non_integral():
    with pytest.raises(NotDivisibleError):
        elementary_from_power_sums([ci(3, 0), ci(3, 1)])


def _eigenvalues(c: CharPoly) -> np.ndarray:
    return np.roots(c.complex_coefficients())


@given(elementary(), st.integers(1, 4))
def test_power_matches_companion_matrix(es, r):
    """Numerical oracle: eigenvalues of the companion matrix raised to the r-th power."""
    n = len(es)
    c = CharPoly(n, 1, 1, tuple(es))
    coeffs = c.complex_coefficients()
    companion = np.zeros((n, n), dtype=complex)
    companion[0, :] = -np.array(coeffs[1:])
    companion[1:, :-1] += np.eye(n - 1)
    lhs = np.poly(np.linalg.matrix_power(companion, r))
    rhs = charpoly_of_power(c, r).complex_coefficients()
    scale = max(1.0, max(abs(z) for z in lhs))
    assert np.allclose(lhs, rhs, atol=1e-6 * scale)


@given(elementary(), st.integers(0, 6))
def test_complete_homogeneous_matches_monomials(es, k):
    n = len(es)
    c = CharPoly(n, 1, 1, tuple(es))
    roots = _eigenvalues(c)
    expect = sum(np.prod([roots[i] for i in combo]) for combo in itertools.combinations_with_replacement(range(n), k)) if k else 1
    got = cyc_to_complex(complete_homogeneous(c, k)[k])
    assert abs(got - expect) <= 1e-6 * max(1.0, abs(expect), max(abs(roots)) ** k)


@pytest.mark.parametrize("p,a,n,d", [(3, 1, 2, 1), (3, 1, 2, 3), (7, 1, 3, 1), (2, 2, 3, 2), (5, 1, 4, 1), (2, 1, 4, 2), (3, 1, 5, 1)])
def test_dual_route_matches_full_route(p, a, n, d):
    tower = KloostermanTower(p, a, n)
    _, ps = point_batch(tower, d, n - 1)
    full = charpoly_from_power_sums(ps, n, d, p**a)
    dual = charpoly_dual(ps[: n // 2], n, d, p**a)
    for x, y in zip(full.e, dual.e):
        assert np.array_equal(x.arr, y.arr)
    for i in range(len(full)):
        assert weight_check(full[i])


@pytest.mark.parametrize("p,a,n", [(2, 1, 2), (3, 1, 2), (2, 1, 3), (2, 2, 2), (3, 1, 3), (2, 1, 4)])
def test_predicted_top_power_sum_matches_table(p, a, n):
    """The determinant formula predicts p_n; compare with Kl_n over F_{q^{dn}}."""
    q = p**a
    tower = KloostermanTower(p, a, n)
    for d in (1, 2):
        if q ** (d * n) > 2**14:
            continue
        idx, ps = point_batch(tower, d, n)
        predicted = charpoly_from_power_sums(ps, n, d, q).power_sums(n)[n - 1]
        assert np.array_equal(predicted.arr, ps[n - 1].arr)
