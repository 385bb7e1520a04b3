"""Representation-theoretic oracles.

* sl(2) weight bookkeeping on ``Sym^k`` of the n-dimensional irreducible
  representation, giving the kernel of the nilpotent ``N`` per weight.
* A brute-force Jordan model: the explicit derivation ``N`` with
  ``N(e_i) = e_(i-1)`` on the monomial basis, diagonal ``F`` with
  ``F(e_i) = q^i e_i``, and the exact kernel of ``N`` graded by ``F``.
* Weyl dimensions for the highest weights ``k L_1`` (classical algebras)
  and ``a alpha_3 + b alpha_4`` (g2), plus symmetric-power decompositions.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, prod

import numpy as np

from .errors import BudgetExceeded
from .polys import IntPoly

__all__ = [
    "WeightMultiset",
    "symmetric_power_weights",
    "kernel_dimensions",
    "jordan_matrices",
    "jordan_kernel_dimensions",
    "jordan_oracle",
    "AlgebraId",
    "weyl_dimension",
    "weyl_product_dimension",
    "symmetric_power_decomposition",
    "trivial_multiplicity",
    "monodromy_algebra",
]

JORDAN_BUDGET = 5000


# ---------------------------------------------------------------------------
# sl(2) weights

@dataclass(frozen=True)
class WeightMultiset:
    """H-eigenvalue multiplicities on ``Sym^k`` of the n-dimensional irreducible sl(2)-module."""

    n: int
    k: int
    mult: dict[int, int]

    def __getitem__(self, w: int) -> int:
        return self.mult.get(w, 0)

    @property
    def total(self) -> int:
        return sum(self.mult.values())

    @property
    def top(self) -> int:
        return self.k * (self.n - 1)

    def is_symmetric(self) -> bool:
        return all(self[-w] == m for w, m in self.mult.items())


def symmetric_power_weights(n: int, k: int) -> WeightMultiset:
    """Weights ``sum (n-1-2j) i_j`` over monomials ``e_0^(i_0) ... e_(n-1)^(i_(n-1))``."""
    counts: Counter[int] = Counter()
    for mono in itertools.combinations_with_replacement(range(n), k):
        counts[sum(n - 1 - 2 * j for j in mono)] += 1
    return WeightMultiset(n, k, dict(sorted(counts.items())))


def kernel_dimensions(wm: WeightMultiset) -> dict[int, int]:
    """``u -> dim(ker X on V^w)`` with ``w = k(n-1) - 2u`` and ``w >= 0``."""
    out: dict[int, int] = {}
    for w in range(wm.top, -1, -1):
        diff = wm[w] - wm[w + 2]
        if diff < 0:
            raise ValueError(f"weight {w} has fewer vectors than weight {w + 2}; not an sl(2)-module")
        if diff:
            out[(wm.top - w) // 2] = diff
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# explicit Jordan model

def _monomials(n: int, k: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree-k monomials in n variables."""
    out = []
    for mono in itertools.combinations_with_replacement(range(n), k):
        v = [0] * n
        for j in mono:
            v[j] += 1
        out.append(tuple(v))
    return out


def _apply_N(exps: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """Leibniz extension of ``e_i -> e_(i-1)`` (``e_0 -> 0``)."""
    out: dict[tuple[int, ...], int] = {}
    for j in range(1, len(exps)):
        if exps[j]:
            t = list(exps)
            t[j] -= 1
            t[j - 1] += 1
            key = tuple(t)
            out[key] = out.get(key, 0) + exps[j]
    return out


def _rank(rows: list[list[int]]) -> int:
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def jordan_kernel_dimensions(n: int, k: int, budget: int = JORDAN_BUDGET) -> dict[int, int]:
    """``u -> dim(ker N)`` on the F-eigenspace of eigenvalue ``q^u`` inside ``Sym^k``."""
    size = comb(k + n - 1, n - 1)
    if size > budget:
        raise BudgetExceeded(f"Sym^{k} of rank {n} has dimension {size} > {budget}")
    blocks: dict[int, list[tuple[int, ...]]] = {}
    for e in _monomials(n, k):
        blocks.setdefault(sum(j * c for j, c in enumerate(e)), []).append(e)
    out: dict[int, int] = {}
    for u, basis in sorted(blocks.items()):
        target = {e: i for i, e in enumerate(blocks.get(u - 1, []))}
        # columns: images of basis vectors, written as rows of the transpose
        rows = []
        for e in basis:
            row = [0] * len(target)
            for img, c in _apply_N(e).items():
                row[target[img]] += c
            rows.append(row)
        dim = len(basis) - (_rank(rows) if target else 0)
        if dim:
            out[u] = dim
    return out


def jordan_oracle(n: int, k: int, q: int, budget: int = JORDAN_BUDGET) -> IntPoly:
    """``det(1 - F T)`` on the kernel of ``N`` in ``Sym^k``."""
    out = IntPoly.one()
    for u, dim in jordan_kernel_dimensions(n, k, budget).items():
        out = out * IntPoly.linear(q**u) ** dim
    return out


def jordan_matrices(n: int, k: int, q: int, budget: int = JORDAN_BUDGET) -> tuple[np.ndarray, np.ndarray]:
    """Dense ``(N, F)`` on the monomial basis of ``Sym^k`` (object dtype, exact)."""
    basis = _monomials(n, k)
    if len(basis) > budget:
        raise BudgetExceeded(f"dimension {len(basis)} > {budget}")
    index = {e: i for i, e in enumerate(basis)}
    dim = len(basis)
    N = np.zeros((dim, dim), dtype=object)
    F = np.zeros((dim, dim), dtype=object)
    for e, i in index.items():
        F[i, i] = q ** sum(j * c for j, c in enumerate(e))
        for img, c in _apply_N(e).items():
            N[index[img], i] += c
    return N, F


# ---------------------------------------------------------------------------
# Lie algebras and Weyl dimensions

_KINDS = ("sl", "sp", "so_even", "so_odd", "g2")


@dataclass(frozen=True)
class AlgebraId:
    """``kind`` with rank parameter: sl(m), sp(2m), so(2m), so(2m+1), g2 (no parameter)."""

    kind: str
    m: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        if self.kind == "g2":
            if self.m not in (0, 2):
                raise ValueError("g2 takes no parameter")
            object.__setattr__(self, "m", 0)
        elif self.m < 1:
            raise ValueError(f"{self.kind} needs a positive parameter")

    @property
    def dim_v(self) -> int:
        return {
            "sl": self.m,
            "sp": 2 * self.m,
            "so_even": 2 * self.m,
            "so_odd": 2 * self.m + 1,
            "g2": 7,
        }[self.kind]

    @property
    def symmetric_form(self) -> bool:
        return self.kind in ("so_even", "so_odd", "g2")

    @classmethod
    def parse(cls, text: str) -> AlgebraId:
        """``'sl(3)'``, ``'sp(4)'``, ``'so(7)'``, ``'g2'``; the number is dim V."""
        t = text.strip().lower().replace(" ", "")
        if t in ("g2", "g_2"):
            return cls("g2")
        mt = re.fullmatch(r"(sl|sp|so)\(?(\d+)\)?", t)
        if not mt:
            raise ValueError(f"cannot parse algebra {text!r}")
        kind, dim = mt.group(1), int(mt.group(2))
        if kind == "sl":
            return cls("sl", dim)
        if dim % 2 and kind == "sp":
            raise ValueError("sp needs an even dimension")
        if kind == "sp":
            return cls("sp", dim // 2)
        return cls("so_even", dim // 2) if dim % 2 == 0 else cls("so_odd", dim // 2)

    def __str__(self) -> str:
        return "g2" if self.kind == "g2" else f"{self.kind.split('_')[0]}({self.dim_v})"


def _binom(a: int, b: int) -> int:
    return comb(a, b) if 0 <= b <= a else 0


def weyl_dimension(alg: AlgebraId, weight) -> int:
    """Closed-form dimension of the irreducible with highest weight ``k L_1`` or ``a alpha_3 + b alpha_4``."""
    if alg.kind == "g2":
        if isinstance(weight, int):
            a, b = weight, 0
        else:
            a, b = weight
        if a < 0 or b < 0:
            raise ValueError("weights must be nonnegative")
        num = (a + 1) * (a + b + 2) * (2 * a + 3 * b + 5) * (a + 2 * b + 3) * (a + 3 * b + 4) * (b + 1)
        return num // 120
    if not isinstance(weight, int) or weight < 0:
        raise ValueError(f"{alg} supports only nonnegative k L_1 weights")
    k, m = weight, alg.m
    if alg.kind == "sl":
        return _binom(k + m - 1, m - 1)
    if alg.kind == "sp":
        return _binom(k + 2 * m - 1, 2 * m - 1)
    if alg.kind == "so_even":
        return _binom(k + 2 * m - 1, k) - _binom(k + 2 * m - 3, k - 2)
    return _binom(k + 2 * m, k) - _binom(k + 2 * m - 2, k - 2)


def _positive_roots(alg: AlgebraId) -> tuple[list[tuple[Fraction, ...]], list[Fraction], tuple[Fraction, ...]]:
    """(positive roots, Gram diagonal, rho) in an orthogonal coordinate system."""
    F = Fraction
    if alg.kind == "g2":
        roots = [(F(1), F(0)), (F(3, 2), F(1, 2)), (F(1, 2), F(1, 2)), (F(0), F(1)), (F(-1, 2), F(1, 2)), (F(-3, 2), F(1, 2))]
        gram = [F(1), F(3)]
    else:
        r = alg.m
        e = lambda i: tuple(F(1) if t == i else F(0) for t in range(r))  # noqa: E731
        add = lambda x, y, s=1: tuple(a + s * b for a, b in zip(x, y))  # noqa: E731
        roots = []
        if alg.kind == "sl":
            roots = [add(e(i), e(j), -1) for i in range(r) for j in range(i + 1, r)]
        else:
            for i in range(r):
                for j in range(i + 1, r):
                    roots += [add(e(i), e(j), -1), add(e(i), e(j))]
            if alg.kind == "sp":
                roots += [tuple(2 * v for v in e(i)) for i in range(r)]
            elif alg.kind == "so_odd":
                roots += [e(i) for i in range(r)]
        gram = [F(1)] * r
    dim = len(gram)
    rho = tuple(sum(rt[i] for rt in roots) / 2 for i in range(dim))
    return roots, gram, rho


def weyl_product_dimension(alg: AlgebraId, weight) -> int:
    """Weyl's product formula evaluated directly over the positive roots."""
    roots, gram, rho = _positive_roots(alg)
    if alg.kind == "g2":
        a, b = (weight, 0) if isinstance(weight, int) else weight
        lam = (Fraction(a, 2), Fraction(a, 2) + b)  # a*alpha_3 + b*alpha_4
    else:
        lam = tuple(Fraction(weight) if i == 0 else Fraction(0) for i in range(len(gram)))
    ip = lambda x, y: sum(g * s * t for g, s, t in zip(gram, x, y))  # noqa: E731
    shifted = tuple(l + r for l, r in zip(lam, rho))
    val = prod((ip(shifted, a) / ip(rho, a) for a in roots), start=Fraction(1))
    if val.denominator != 1:
        raise ArithmeticError(f"non-integral Weyl dimension {val}")
    return int(val)


def symmetric_power_decomposition(alg: AlgebraId, k: int) -> list[tuple[int, int]]:
    """``Sym^k V`` as ``[(highest weight coefficient of L_1 or alpha_3, multiplicity)]``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if alg.symmetric_form:
        parts = [(k - 2 * i, 1) for i in range(k // 2 + 1)]
    else:
        parts = [(k, 1)]
    total = sum(weyl_dimension(alg, w) * m for w, m in parts)
    expected = _binom(k + alg.dim_v - 1, alg.dim_v - 1)
    if total != expected:
        raise AssertionError(f"dimension bookkeeping failed for {alg}, k={k}: {total} != {expected}")
    return parts


def trivial_multiplicity(alg: AlgebraId, k: int) -> int:
    """Multiplicity of the trivial representation in ``Sym^k V``."""
    return sum(m for w, m in symmetric_power_decomposition(alg, k) if w == 0)


@lru_cache(maxsize=None)
def monodromy_algebra(n: int, p: int) -> AlgebraId:
    """Lie algebra of the geometric monodromy group of the rank-n Kloosterman sheaf in characteristic p."""
    if n < 2:
        raise ValueError("rank must be at least 2")
    if n % 2 == 0:
        return AlgebraId("sp", n // 2)
    if p != 2:
        return AlgebraId("sl", n)
    if n == 7:
        return AlgebraId("g2")
    return AlgebraId("so_odd", n // 2)
