from __future__ import annotations

import itertools
from functools import reduce

import numpy as np
import pytest

from klsym.cyclotomic import CycInt
from klsym.fields import build_field
from klsym.kloosterman import _conv_multimodular, character_value, coordinate_bound, kl_table_convolution, kl_table_direct


def brute_kl(field, n, lam):
    """Sum psi(x_1 + ... + x_n) over x_1...x_n = lam, by plain field arithmetic."""
    units = [field.element(i) for i in range(1, field.size)]
    total = CycInt.zero(field.p)
    for xs in itertools.product(units, repeat=n - 1):
        prod = reduce(lambda a, b: a * b, xs, field.one)
        last = lam / prod
        total = total + character_value(reduce(lambda a, b: a + b, xs, last))
    return total


def test_character_examples():
    f3, f4 = build_field(3, 1), build_field(2, 2)
    assert character_value(f3.zero) == CycInt.one(3)
    assert character_value(f3.one) == CycInt.zeta(3)
    assert character_value(f4.element((0, 1))) == CycInt.from_int(2, -1)


def test_table_examples():
    f2, f3 = build_field(2, 1), build_field(3, 1)
    assert kl_table_direct(f2, 2)[1] == CycInt.from_int(2, 1)
    t = kl_table_convolution(f3, 2)
    assert t[1] == CycInt.from_int(3, -1)
    assert t[2] == CycInt.from_int(3, 2)
    assert kl_table_convolution(f2, 3)[1] == CycInt.from_int(2, -1)
    base = kl_table_convolution(build_field(5, 1), 1)
    for i in range(1, 5):
        assert base[i] == character_value(build_field(5, 1).element(i))


@pytest.mark.parametrize("p,d,n", [(2, 2, 2), (2, 2, 3), (3, 1, 3), (3, 2, 2), (5, 1, 3), (2, 3, 2), (7, 1, 2)])
def test_routes_match_brute_force(p, d, n):
    field = build_field(p, d)
    direct = kl_table_direct(field, n)
    naive = kl_table_convolution(field, n, engine="naive")
    fft = kl_table_convolution(field, n, engine="fft")
    assert np.array_equal(direct.coords, naive.coords)
    assert np.array_equal(direct.coords, fft.coords)
    for idx in range(1, field.size):
        assert direct[idx] == brute_kl(field, n, field.element(idx))


@pytest.mark.parametrize("p,d,n", [(2, 4, 3), (3, 3, 3), (5, 2, 2), (7, 2, 3), (3, 4, 2), (11, 1, 4)])
def test_table_invariants(p, d, n):
    field = build_field(p, d)
    table = kl_table_convolution(field, n)
    Q = field.size
    # Frobenius invariance Kl(x^p) = Kl(x); sigma_t moves the argument to t^n x
    for idx in range(1, Q):
        x = field.element(idx)
        assert table[x**p] == table[x]
        if p > 2:
            t = field.element(2)
            assert table[idx].galois(2) == table[x * t**n]
        assert table[idx].conjugate() == table[x * (-field.one) ** n]
    # sum over lambda factors as (sum_{x != 0} psi(x))^n = (-1)^n
    total = CycInt(p, tuple(int(v) for v in table.coords.sum(axis=0)))
    assert total == CycInt.from_int(p, (-1) ** n)
    # Weil bound
    vals = table.complex_values()
    assert np.all(np.abs(vals) <= n * Q ** ((n - 1) / 2) * (1 + 1e-6))


def test_fft_engine_on_non_smooth_group_order():
    # 3^5 - 1 = 242 = 2 * 11^2 is not 7-smooth, so the padded FFT path runs
    field = build_field(3, 5)
    a = kl_table_convolution(field, 3, engine="fft")
    b = kl_table_convolution(field, 3, engine="naive")
    assert np.array_equal(a.coords, b.coords)


@pytest.mark.parametrize("p,d,n", [(2, 4, 5), (3, 2, 4), (5, 1, 4), (7, 1, 3), (2, 6, 6)])
def test_multimodular_route_matches_int64_route(p, d, n):
    field = build_field(p, d)
    big = _conv_multimodular(field, n, 1)
    assert np.array_equal(big.coords, kl_table_convolution(field, n).coords.astype(object))


def test_coordinates_beyond_int64():
    # F_4096, n = 12: the Weil bound is about 2^69
    field = build_field(2, 12)
    table = kl_table_convolution(field, 12)
    assert table.coords.dtype == object
    values = [int(v) for v in table.coords[:, 0]]
    assert max(abs(v) for v in values) > 2**63
    assert max(abs(v) for v in values) <= coordinate_bound(field.size, 12, 2)
    assert sum(values) == 1
    # Frobenius invariance on a few elements
    for idx in (1, 2, 3, 1000):
        x = field.element(idx)
        assert table[x**2] == table[x]
