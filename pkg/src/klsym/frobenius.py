"""Frobenius characteristic polynomials at closed points of G_m.

At a closed point ``x`` of degree ``d`` the Kloosterman sheaf has trace
``Tr(F_x^j) = (-1)^(n-1) Kl_n(F_{q^(dj)}, x)``.  Newton's identities turn
those power sums into the elementary symmetric functions ``e_j`` of the
eigenvalues.  The determinant ``e_n`` is the constant ``q^(d n(n-1)/2)``.

All routines here accept either a single :class:`CycInt` or a
:class:`CycBatch` holding one value per point, so whole fields are processed
with the same code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, TypeVar, Union

import numpy as np

from .cyclotomic import CycBatch, CycInt, cyc_to_complex
from .errors import NotDivisibleError
from .fields import ClosedPoint, orbit_representatives
from .tower import KloostermanTower

__all__ = [
    "CharPoly",
    "determinant",
    "elementary_from_power_sums",
    "power_sums_from_elementary",
    "charpoly_from_power_sums",
    "charpoly_dual",
    "charpoly_of_power",
    "complete_homogeneous",
    "symk_trace",
    "power_sums_at_point",
    "point_batch",
    "weight_check",
]

Ring = Union[CycInt, CycBatch]
R = TypeVar("R", CycInt, CycBatch)


def _const(like: Ring, value: int) -> Ring:
    if isinstance(like, CycBatch):
        return CycBatch.constant(like.p, value, len(like))
    return CycInt.from_int(like.p, value)


def determinant(n: int, d: int, q: int) -> int:
    return q ** (d * n * (n - 1) // 2)


@dataclass(frozen=True)
class CharPoly:
    """Elementary symmetric functions ``e = (e_1, ..., e_n)`` of Frobenius at a point of degree ``d``.

    ``e`` entries are all :class:`CycInt` for a single point, or all
    :class:`CycBatch` when the object describes many points at once.
    """

    n: int
    d: int
    q: int
    e: tuple

    def __post_init__(self) -> None:
        if len(self.e) != self.n:
            raise ValueError(f"expected {self.n} elementary functions, got {len(self.e)}")

    @property
    def p(self) -> int:
        return self.e[0].p

    @property
    def is_batch(self) -> bool:
        return isinstance(self.e[0], CycBatch)

    def power_sums(self, count: int) -> list:
        return power_sums_from_elementary(list(self.e), count)

    def __getitem__(self, i: int) -> CharPoly:
        if not self.is_batch:
            raise TypeError("indexing is only defined for batched polynomials")
        return CharPoly(self.n, self.d, self.q, tuple(x[i] for x in self.e))

    def __len__(self) -> int:
        return len(self.e[0]) if self.is_batch else 1

    def complex_coefficients(self) -> list[complex]:
        """Coefficients of ``T^n - e_1 T^(n-1) + ... + (-1)^n e_n``, leading first."""
        if self.is_batch:
            raise TypeError("use indexing to obtain a single polynomial")
        out = [1 + 0j]
        for j, ej in enumerate(self.e, start=1):
            out.append((-1) ** j * cyc_to_complex(ej))
        return out


# ---------------------------------------------------------------------------
# Newton's identities

def elementary_from_power_sums(ps: Sequence[R]) -> list[R]:
    """``e_1..e_m`` from ``p_1..p_m``; every division by ``j`` must be exact."""
    es: list = []
    for j in range(1, len(ps) + 1):
        acc = ps[j - 1] * ((-1) ** (j - 1))
        for i in range(1, j):
            term = ps[i - 1] * es[j - i - 1]
            acc = acc + term if i % 2 == 1 else acc - term
        try:
            es.append(acc.exact_div(j))
        except NotDivisibleError as exc:
            raise NotDivisibleError(f"Newton step j={j} is not integral: {exc}") from exc
    return es


def power_sums_from_elementary(es: Sequence[R], count: int) -> list[R]:
    """``p_1..p_count`` of the roots whose elementary functions are ``es``."""
    n = len(es)
    ps: list = []
    for m in range(1, count + 1):
        acc = es[m - 1] * (m * (-1) ** (m - 1)) if m <= n else None
        for i in range(1, min(m - 1, n) + 1):
            term = es[i - 1] * ps[m - i - 1]
            if i % 2 == 0:
                term = -term
            acc = term if acc is None else acc + term
        ps.append(acc)
    return ps


def charpoly_from_power_sums(p_vec: Sequence[R], n: int, d: int, q: int) -> CharPoly:
    """Full Newton route: uses ``p_1..p_(n-1)`` and the known determinant."""
    if len(p_vec) < n - 1:
        raise ValueError(f"need {n - 1} power sums, got {len(p_vec)}")
    if n == 1:
        raise ValueError("rank 1 has no free power sums; use charpoly_dual")
    es = elementary_from_power_sums(list(p_vec[: n - 1]))
    es.append(_const(es[0], determinant(n, d, q)))
    return CharPoly(n, d, q, tuple(es))


def charpoly_dual(p_vec: Sequence[R], n: int, d: int, q: int) -> CharPoly:
    """Newton for ``e_j`` with ``j <= n/2``, then ``e_(n-j)`` from purity.

    Eigenvalues satisfy ``conj(alpha) = q^(d(n-1)) / alpha``, hence
    ``e_(n-j) = q^(d(n-1)(n-2j)/2) * conj(e_j)``.  Only power sums up to
    ``n // 2`` are consumed, which keeps every table at extension degree
    ``<= d * n // 2``.
    """
    half = n // 2
    if n == 1:
        # Kl_1 is psi itself; its value is e_1 and det = e_1
        if not p_vec:
            raise ValueError("rank 1 needs p_1")
        return CharPoly(1, d, q, (p_vec[0],))
    if len(p_vec) < half:
        raise ValueError(f"need {half} power sums, got {len(p_vec)}")
    low = elementary_from_power_sums(list(p_vec[:half]))
    es = list(low)
    for m in range(half + 1, n):
        j = n - m
        es.append(low[j - 1].conjugate() * q ** (d * (n - 1) * (n - 2 * j) // 2))
    es.append(_const(low[0], determinant(n, d, q)))
    return CharPoly(n, d, q, tuple(es))


def charpoly_of_power(c: CharPoly, r: int) -> CharPoly:
    """Characteristic data of ``F^r``: Newton applied to ``P_r, P_2r, ..., P_(n-1)r``."""
    if r < 1:
        raise ValueError("r must be at least 1")
    if r == 1:
        return c
    n = c.n
    ps = c.power_sums(n * r)
    es = elementary_from_power_sums([ps[j * r - 1] for j in range(1, n + 1)])
    return CharPoly(n, c.d * r, c.q, tuple(es))


def complete_homogeneous(c: CharPoly, k: int) -> list:
    """``h_0..h_k``; ``h_m`` is the trace of Frobenius on ``Sym^m``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    one = _const(c.e[0], 1)
    hs = [one]
    for m in range(1, k + 1):
        acc = None
        for i in range(1, min(m, c.n) + 1):
            term = c.e[i - 1] * hs[m - i]
            if i % 2 == 0:
                term = -term
            acc = term if acc is None else acc + term
        hs.append(acc)
    return hs


def symk_trace(c: CharPoly, k: int):
    return complete_homogeneous(c, k)[k]


# ---------------------------------------------------------------------------
# power sums from Kloosterman tables

def _descend(tower: KloostermanTower, point: ClosedPoint) -> tuple[int, int]:
    """(index in F_{q^d}, d) for the point's representative."""
    d = point.degree
    rep = point.representative
    level = rep.field.d // tower.a
    if level == d:
        return rep.index, d
    emb = tower.embedding(d, level)
    images = emb.map_indices(np.arange(tower.field(d).size, dtype=np.int64))
    hits = np.flatnonzero(images == rep.index)
    if hits.size != 1:
        raise ValueError("representative does not lie in the subfield of its degree")
    return int(hits[0]), d


def power_sums_at_point(point: ClosedPoint, n: int, tower: KloostermanTower, count: int | None = None) -> list[CycInt]:
    """``p_j = (-1)^(n-1) Kl_n(F_{q^(dj)}, x)`` for ``j = 1..count`` (default ``n-1``)."""
    if tower.n != n:
        raise ValueError("tower built for a different rank")
    count = n - 1 if count is None else count
    idx, d = _descend(tower, point)
    sign = (-1) ** (n - 1)
    out = []
    for j in range(1, count + 1):
        row = tower.values_at(d, np.array([idx]), j)[0]
        out.append(CycInt(tower.p, tuple(sign * int(v) for v in row)))
    return out


def point_batch(tower: KloostermanTower, d: int, count: int) -> tuple[np.ndarray, list[CycBatch]]:
    """Representatives (element indices in F_{q^d}) of the degree-``d`` points and their power sums.

    Returns ``(indices, [p_1, ..., p_count])`` with each ``p_j`` a batch.
    """
    field = tower.field(d)
    reps, degrees = orbit_representatives(field, tower.q)
    reps = reps[degrees == d]
    indices = field.exp_table[reps]
    sign = (-1) ** (tower.n - 1)
    ps = []
    for j in range(1, count + 1):
        rows = tower.values_at(d, indices, j).astype(object) * sign
        ps.append(CycBatch(tower.p, rows))
    return indices, ps


def weight_check(c: CharPoly, rel_tol: float = 1e-6) -> bool:
    """All eigenvalues have absolute value ``q^(d(n-1)/2)`` to within ``rel_tol``."""
    scale = float(c.q) ** (c.d * (c.n - 1) / 2)
    coeffs = [z / scale**j for j, z in enumerate(c.complex_coefficients())]
    roots = np.roots(coeffs)
    return bool(np.all(np.abs(np.abs(roots) - 1.0) <= rel_tol))
