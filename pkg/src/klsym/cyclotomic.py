"""Exact arithmetic in Z[zeta_p] for a small prime p.

Elements are stored in the power basis ``1, zeta, ..., zeta^(p-2)``.  The
relation ``zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))`` folds everything
else back into that basis, so equality is equality of coordinate tuples.

Besides the scalar :class:`CycInt` there are a few batch helpers working on
``(N, p-1)`` arrays of Python integers.  They are used when summing Frobenius
traces over hundreds of thousands of closed points.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import NotDivisibleError

__all__ = [
    "CycInt",
    "cyc_normalize",
    "cyc_multiply",
    "cyc_as_integer",
    "cyc_apply_galois",
    "cyc_to_complex",
    "counts_to_coords",
    "batch_mul",
    "batch_add",
    "batch_scale",
    "batch_exact_div",
    "batch_galois",
    "batch_sum",
    "CycBatch",
]


def _check_prime(p: int) -> None:
    if p < 2 or any(p % r == 0 for r in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"{p} is not prime")


def _fold(raw: Sequence[int], p: int) -> tuple[int, ...]:
    # raw has length exactly p; fold the zeta^(p-1) slot
    top = raw[p - 1]
    if p == 2:
        return (raw[0] - top,)
    return tuple(raw[i] - top for i in range(p - 1))


def cyc_normalize(raw: Sequence[int], p: int) -> "CycInt":
    """Canonical form of ``sum raw[i] * zeta^i`` with ``len(raw) <= p``."""
    if len(raw) > p:
        raise ValueError(f"raw vector has {len(raw)} entries, at most p={p} allowed")
    _check_prime(p)
    padded = [int(c) for c in raw] + [0] * (p - len(raw))
    return CycInt(p, _fold(padded, p))


@dataclass(frozen=True)
class CycInt:
    """An element of Z[zeta_p] in the power basis."""

    p: int
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.p - 1 and not (self.p == 2 and len(self.coords) == 1):
            raise ValueError(f"expected {max(self.p - 1, 1)} coordinates, got {len(self.coords)}")

    @classmethod
    def from_int(cls, p: int, value: int) -> CycInt:
        width = max(p - 1, 1)
        return cls(p, (int(value),) + (0,) * (width - 1))

    @classmethod
    def zeta(cls, p: int, power: int = 1) -> CycInt:
        """``zeta_p ** power``."""
        raw = [0] * p
        raw[power % p] = 1
        return cls(p, _fold(raw, p))

    @classmethod
    def zero(cls, p: int) -> CycInt:
        return cls.from_int(p, 0)

    @classmethod
    def one(cls, p: int) -> CycInt:
        return cls.from_int(p, 1)

    def _coerce(self, other: CycInt | int) -> CycInt:
        if isinstance(other, CycInt):
            if other.p != self.p:
                raise ValueError(f"mismatched primes {self.p} and {other.p}")
            return other
        if isinstance(other, (int, np.integer)):
            return CycInt.from_int(self.p, int(other))
        return NotImplemented

    def __add__(self, other: CycInt | int) -> CycInt:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.p, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> CycInt:
        return CycInt(self.p, tuple(-a for a in self.coords))

    def __sub__(self, other: CycInt | int) -> CycInt:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.p, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other: int) -> CycInt:
        return (-self) + other

    def __mul__(self, other: CycInt | int) -> CycInt:
        if isinstance(other, (int, np.integer)):
            c = int(other)
            return CycInt(self.p, tuple(a * c for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        if p == 2:
            return CycInt(2, (self.coords[0] * other.coords[0],))
        # product in Z[x]/(x^p - 1), then fold
        acc = [0] * p
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        acc[(i + j) % p] += a * b
        return CycInt(p, _fold(acc, p))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> CycInt:
        if e < 0:
            raise ValueError("negative powers are not defined in Z[zeta_p]")
        result = CycInt.one(self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def exact_div(self, d: int) -> CycInt:
        """Divide by a rational integer, requiring the quotient to be integral."""
        if d == 0:
            raise ZeroDivisionError
        out = []
        for a in self.coords:
            quot, rem = divmod(a, d)
            if rem:
                raise NotDivisibleError(f"{self} is not divisible by {d}")
            out.append(quot)
        return CycInt(self.p, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def as_integer(self) -> int | None:
        return cyc_as_integer(self)

    def galois(self, t: int) -> CycInt:
        return cyc_apply_galois(self, t)

    def conjugate(self) -> CycInt:
        """Complex conjugation, i.e. ``zeta -> zeta^-1``."""
        return cyc_apply_galois(self, self.p - 1)

    def __complex__(self) -> complex:
        return cyc_to_complex(self)

    def __repr__(self) -> str:
        return f"CycInt(p={self.p}, {list(self.coords)})"


def cyc_multiply(a: CycInt, b: CycInt) -> CycInt:
    return a * b


def cyc_as_integer(a: CycInt) -> int | None:
    """The rational integer ``a`` equals, or ``None`` if ``a`` is irrational."""
    if any(a.coords[1:]):
        return None
    return a.coords[0]


def cyc_apply_galois(a: CycInt, t: int) -> CycInt:
    """Image of ``a`` under the automorphism ``zeta -> zeta^t``."""
    p = a.p
    if t % p == 0:
        raise ValueError(f"t={t} is not a unit mod {p}")
    if p == 2:
        return a
    raw = [0] * p
    for i, c in enumerate(a.coords):
        raw[(i * t) % p] += c
    return CycInt(p, _fold(raw, p))


@lru_cache(maxsize=None)
def _zeta_powers(p: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * math.pi * i / p) for i in range(max(p - 1, 1)))


def cyc_to_complex(a: CycInt) -> complex:
    if a.p == 2:
        return complex(a.coords[0])
    # fsum on each part keeps the cancellation error at one ulp of the largest term
    zs = _zeta_powers(a.p)
    re = math.fsum(c * z.real for c, z in zip(a.coords, zs))
    im = math.fsum(c * z.imag for c, z in zip(a.coords, zs))
    return complex(re, im)


# ---------------------------------------------------------------------------
# batch helpers on (N, p-1) arrays

def counts_to_coords(counts: np.ndarray, p: int) -> np.ndarray:
    """Fold group-ring count vectors of shape ``(N, p)`` into power-basis coordinates."""
    counts = np.asarray(counts)
    if counts.shape[-1] != p:
        raise ValueError("last axis must have length p")
    if p == 2:
        return counts[..., :1] - counts[..., 1:2]
    return counts[..., : p - 1] - counts[..., p - 1 : p]


def _as_object(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return a
    return a.astype(object)


def batch_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Row-wise product of two ``(N, p-1)`` coordinate arrays (Python-int exact)."""
    a = _as_object(a)
    b = _as_object(b)
    if p == 2:
        return a * b
    n = a.shape[0]
    acc = np.zeros((n, p), dtype=object)
    for i in range(p - 1):
        ai = a[:, i]
        for j in range(p - 1):
            acc[:, (i + j) % p] += ai * b[:, j]
    return acc[:, : p - 1] - acc[:, p - 1 : p]


def batch_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _as_object(a) + _as_object(b)


def batch_scale(a: np.ndarray, c: int) -> np.ndarray:
    return _as_object(a) * int(c)


def batch_exact_div(a: np.ndarray, d: int) -> np.ndarray:
    a = _as_object(a)
    quot = a // d
    if np.any(quot * d != a):
        raise NotDivisibleError(f"batch entries not divisible by {d}")
    return quot


def batch_galois(a: np.ndarray, t: int, p: int) -> np.ndarray:
    if t % p == 0:
        raise ValueError(f"t={t} is not a unit mod {p}")
    if p == 2:
        return _as_object(a)
    a = _as_object(a)
    raw = np.zeros((a.shape[0], p), dtype=object)
    for i in range(p - 1):
        raw[:, (i * t) % p] += a[:, i]
    return raw[:, : p - 1] - raw[:, p - 1 : p]


def batch_sum(a: np.ndarray, weights: Iterable[int] | None = None) -> tuple[int, ...]:
    """Weighted column sums as exact Python integers."""
    a = _as_object(a)
    if weights is not None:
        w = np.asarray(list(weights), dtype=object)
        a = a * w[:, None]
    return tuple(int(sum(a[:, j].tolist())) for j in range(a.shape[1]))


class CycBatch:
    """A column of CycInt values sharing one prime, stored as an ``(N, p-1)`` object array.

    Supports the same ring operations as :class:`CycInt` so that Newton
    identities and the ``h_k`` recurrence run unchanged on whole batches.
    """

    __slots__ = ("p", "arr")

    def __init__(self, p: int, arr: np.ndarray):
        self.p = p
        self.arr = _as_object(np.asarray(arr))
        if self.arr.ndim != 2 or self.arr.shape[1] != max(p - 1, 1):
            raise ValueError("batch must have shape (N, p-1)")

    @classmethod
    def constant(cls, p: int, value: int, size: int) -> CycBatch:
        arr = np.zeros((size, max(p - 1, 1)), dtype=object)
        arr[:, 0] = int(value)
        return cls(p, arr)

    @classmethod
    def from_values(cls, values: Sequence[CycInt]) -> CycBatch:
        p = values[0].p
        return cls(p, np.array([v.coords for v in values], dtype=object))

    def __len__(self) -> int:
        return self.arr.shape[0]

    def __getitem__(self, i: int) -> CycInt:
        return CycInt(self.p, tuple(int(c) for c in self.arr[i]))

    def _coerce(self, other):
        if isinstance(other, CycBatch):
            if other.p != self.p:
                raise ValueError("mismatched primes")
            return other.arr
        if isinstance(other, CycInt):
            return np.array([other.coords], dtype=object)
        return None

    def __add__(self, other):
        if isinstance(other, (int, np.integer)):
            out = self.arr.copy()
            out[:, 0] = out[:, 0] + int(other)
            return CycBatch(self.p, out)
        return CycBatch(self.p, self.arr + self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return CycBatch(self.p, -self.arr)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return CycBatch(self.p, self.arr * int(other))
        rhs = self._coerce(other)
        if rhs.shape[0] == 1 and self.arr.shape[0] != 1:
            rhs = np.repeat(rhs, self.arr.shape[0], axis=0)
        return CycBatch(self.p, batch_mul(self.arr, rhs, self.p))

    __rmul__ = __mul__

    def exact_div(self, d: int) -> CycBatch:
        return CycBatch(self.p, batch_exact_div(self.arr, d))

    def galois(self, t: int) -> CycBatch:
        return CycBatch(self.p, batch_galois(self.arr, t, self.p))

    def conjugate(self) -> CycBatch:
        return self.galois(self.p - 1)

    def weighted_sum(self, weights: Iterable[int] | None = None) -> CycInt:
        return CycInt(self.p, batch_sum(self.arr, weights))
