from __future__ import annotations

import numpy as np
import pytest

from klsym.fields import SubfieldEmbedding, embed_subfield
from klsym.pipeline import EngineRegistry, analyze, prime_power
from klsym.polys import IntPoly, RatFunc
from klsym.tower import KloostermanTower
from klsym.trivial import _times_boundary_over_det0, empirical_infinity_factor, trivial_factor_bundle

lin = IntPoly.linear


def test_prime_power():
    assert prime_power(9) == (3, 2)
    assert prime_power(7) == (7, 1)
    for bad in (1, 6, 12):
        with pytest.raises(ValueError):
            prime_power(bad)


def test_anchor(registry):
    res = analyze(2, 1, 3, registry=registry)
    assert res.L == RatFunc(lin(1), IntPoly.one())
    assert res.K == IntPoly.one()


@pytest.mark.parametrize("n,q,k", [(2, 3, k) for k in range(6)] + [(2, 5, k) for k in range(4)] + [(3, 4, k) for k in range(3)] + [(2, 4, 2), (3, 5, 1), (3, 3, 2)])
def test_factorization_identity_small(registry, n, q, k):
    res = analyze(n, k, q, registry=registry)
    assert res.identity_holds()
    assert res.purity.ok
    assert res.K.degree == 0 or res.split.degrees == {k * (n - 1) + 1: res.K.degree}


def test_k2_q3_is_pure_of_weight_three(registry):
    res = analyze(2, 2, 3, registry=registry)
    assert res.split.ok and res.purity.ok


def test_exceptional_pole_case(registry):
    res = analyze(3, 2, 4, registry=registry)
    b = res.bundle
    assert b.exceptional
    assert (b.h0, b.h2) == (lin(16), lin(64))
    assert res.L == RatFunc(IntPoly([1, -17, 16]), lin(64))
    assert res.K == IntPoly.one()


@pytest.mark.parametrize("n,q,k", [(2, 3, 4), (2, 3, 6), (2, 5, 4), (2, 7, 2), (3, 4, 2), (3, 7, 1), (2, 9, 2)])
def test_closed_form_infinity_matches_empirical(registry, n, q, k):
    res = analyze(n, k, q, registry=registry)
    partial = _times_boundary_over_det0(res.L, res.bundle)
    assert empirical_infinity_factor(partial, q, k * (n - 1) + 1) == res.bundle.detInf


def test_method_independence():
    a = analyze(2, 3, 3, registry=EngineRegistry(), method="direct")
    b = analyze(2, 3, 3, registry=EngineRegistry(), method="conv")
    assert a.L == b.L and a.K == b.K


@pytest.mark.parametrize("p,a,n,small,big", [(3, 1, 2, 1, 2), (2, 1, 3, 1, 3), (2, 2, 2, 1, 2), (3, 1, 3, 2, 4)])
def test_embedding_independence(p, a, n, small, big):
    """A Galois-conjugate embedding (root -> root^p) reads identical values."""
    tower = KloostermanTower(p, a, n)
    emb = tower.embedding(small, big)
    root = tower.field(big).element(emb.root)
    other_root = root**p
    images = []
    cur = tower.field(big).one
    for _ in range(tower.field(small).d):
        images.append(cur.index)
        cur = cur * other_root
    other = SubfieldEmbedding(emb.small, emb.big, other_root.index, tuple(images))
    idx = np.arange(1, tower.field(small).size, dtype=np.int64)
    table = tower.table(big)
    lhs = table.coords[table.field.log_table[emb.map_indices(idx)]]
    rhs = table.coords[table.field.log_table[other.map_indices(idx)]]
    assert np.array_equal(lhs, rhs)
    assert not np.array_equal(emb.map_indices(idx), other.map_indices(idx)) or tower.field(small).d == 1
