from __future__ import annotations

from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from klsym.errors import BudgetExceeded
from klsym.polys import IntPoly
from klsym.reptheory import (
    AlgebraId,
    jordan_kernel_dimensions,
    jordan_matrices,
    jordan_oracle,
    kernel_dimensions,
    monodromy_algebra,
    symmetric_power_decomposition,
    symmetric_power_weights,
    trivial_multiplicity,
    weyl_dimension,
    weyl_product_dimension,
)


def test_weight_examples():
    assert symmetric_power_weights(2, 3).mult == {-3: 1, -1: 1, 1: 1, 3: 1}
    assert symmetric_power_weights(3, 2).mult == {-4: 1, -2: 1, 0: 2, 2: 1, 4: 1}
    assert symmetric_power_weights(5, 0).mult == {0: 1}


@given(st.integers(1, 6), st.integers(0, 7))
def test_weight_symmetry_and_parity(n, k):
    wm = symmetric_power_weights(n, k)
    assert wm.is_symmetric()
    assert wm.total == comb(n + k - 1, k)
    assert all((w - k * (n - 1)) % 2 == 0 for w in wm.mult)


def test_kernel_examples():
    assert kernel_dimensions(symmetric_power_weights(3, 2)) == {0: 1, 2: 1}
    assert kernel_dimensions(symmetric_power_weights(2, 3)) == {0: 1}
    assert kernel_dimensions(symmetric_power_weights(4, 0)) == {0: 1}


@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 6) for k in range(0, 7)])
def test_sl2_kernels_match_jordan_ranks(n, k):
    assert kernel_dimensions(symmetric_power_weights(n, k)) == jordan_kernel_dimensions(n, k)


def test_jordan_oracle_examples():
    lin = IntPoly.linear
    assert jordan_oracle(2, 5, 3) == lin(1)
    assert jordan_oracle(3, 2, 3) == lin(1) * lin(9)
    assert jordan_oracle(4, 0, 7) == lin(1)
    with pytest.raises(BudgetExceeded):
        jordan_kernel_dimensions(6, 12, budget=100)


@pytest.mark.parametrize("n,k,q", [(2, 1, 3), (2, 4, 5), (3, 2, 7), (3, 3, 2), (4, 2, 3)])
def test_canonical_triple_relation(n, k, q):
    N, F = jordan_matrices(n, k, q)
    assert np.array_equal(N.dot(F), q * F.dot(N))
    # N is nilpotent
    power = np.eye(N.shape[0], dtype=object)
    for _ in range(k * (n - 1) + 1):
        power = power.dot(N)
    assert not power.any()


def test_parse_and_str():
    assert AlgebraId.parse("g2") == AlgebraId("g2")
    assert AlgebraId.parse("sl(3)") == AlgebraId("sl", 3)
    assert AlgebraId.parse("sp(4)") == AlgebraId("sp", 2)
    assert AlgebraId.parse("so(7)") == AlgebraId("so_odd", 3)
    assert AlgebraId.parse("so(8)") == AlgebraId("so_even", 4)
    assert str(AlgebraId("so_odd", 3)) == "so(7)"
    with pytest.raises(ValueError):
        AlgebraId.parse("sp(5)")
    with pytest.raises(ValueError):
        AlgebraId.parse("e8")


def test_weyl_examples():
    g2 = AlgebraId("g2")
    assert weyl_dimension(g2, (1, 0)) == 7
    assert weyl_dimension(AlgebraId("sl", 3), 2) == 6
    assert weyl_dimension(g2, (2, 0)) == 27 == weyl_dimension(AlgebraId("so_odd", 3), 2)
    assert weyl_dimension(g2, (0, 1)) == 14  # adjoint


ALGS = [AlgebraId("sl", m) for m in range(2, 6)] + [AlgebraId("sp", m) for m in range(1, 4)]
ALGS += [AlgebraId("so_even", m) for m in range(2, 6)] + [AlgebraId("so_odd", m) for m in range(1, 6)] + [AlgebraId("g2")]


@pytest.mark.parametrize("alg", ALGS, ids=str)
def test_closed_form_matches_product_formula(alg):
    for k in range(0, 10):
        assert weyl_dimension(alg, k) == weyl_product_dimension(alg, k)
    if alg.kind == "g2":
        for a in range(4):
            for b in range(4):
                assert weyl_dimension(alg, (a, b)) == weyl_product_dimension(alg, (a, b))


def test_decomposition_examples():
    assert symmetric_power_decomposition(AlgebraId("sp", 2), 3) == [(3, 1)]
    assert symmetric_power_decomposition(AlgebraId("so_odd", 3), 4) == [(4, 1), (2, 1), (0, 1)]
    for alg in ALGS:
        assert [w for w, _ in symmetric_power_decomposition(alg, 0)] == [0]


def test_trivial_multiplicity_examples():
    assert trivial_multiplicity(AlgebraId("so_odd", 3), 4) == 1
    assert trivial_multiplicity(AlgebraId("g2"), 3) == 0
    assert trivial_multiplicity(AlgebraId("sl", 5), 2) == 0


def test_monodromy_table():
    assert monodromy_algebra(2, 3) == AlgebraId("sp", 1)
    assert monodromy_algebra(4, 2) == AlgebraId("sp", 2)
    assert monodromy_algebra(3, 5) == AlgebraId("sl", 3)
    assert monodromy_algebra(7, 2) == AlgebraId("g2")
    assert monodromy_algebra(5, 2) == AlgebraId("so_odd", 2)
