"""Explicit finite fields F_{p^d}, subfield embeddings and closed points of G_m.

Elements of ``F_{p^d}`` are coefficient vectors ``(c_0, ..., c_{d-1})`` modulo a
canonical irreducible polynomial.  Internally every element is also an integer
index ``sum c_i p^i`` so that whole-field tables (discrete logs, traces) are
plain numpy arrays.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded

__all__ = [
    "DEFAULT_FIELD_BUDGET",
    "FieldDescriptor",
    "FieldElement",
    "ClosedPoint",
    "SubfieldEmbedding",
    "build_field",
    "absolute_trace",
    "dlog_table",
    "embed_subfield",
    "closed_points",
    "orbit_representatives",
    "is_irreducible",
    "prime_factors",
]

DEFAULT_FIELD_BUDGET = 2**24


def prime_factors(n: int) -> list[int]:
    out = []
    r = 2
    while r * r <= n:
        if n % r == 0:
            out.append(r)
            while n % r == 0:
                n //= r
        r += 1
    if n > 1:
        out.append(n)
    return out


def _is_prime(p: int) -> bool:
    return p >= 2 and prime_factors(p) == [p]


# ---------------------------------------------------------------------------
# dense polynomials over F_p, coefficient lists low-to-high

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df and a:
        coef = a[-1] * inv % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - coef * fc) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pmulmod(a, b, f, p):
    return _pmod(_pmul(a, b, p), f, p)


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Ben-Or test: ``gcd(f, t^(p^i) - t) = 1`` for ``1 <= i <= deg f / 2``."""
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if f[0] % p == 0:
        return False
    x = [0, 1]
    power = x
    for _ in range(d // 2):
        power = _ppowmod(power, p, f, p)
        diff = list(power) + [0] * max(0, 2 - len(power))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) > 1:
            return False
    return True


def _canonical_modulus(p: int, d: int) -> tuple[int, ...]:
    # low-to-high lexicographic order: c_0 is the most significant key
    for low in itertools.product(range(p), repeat=d):
        f = list(low) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError(f"no irreducible polynomial of degree {d} over F_{p}")


# ---------------------------------------------------------------------------

class FieldDescriptor:
    """The field F_{p^d} with its canonical modulus and multiplicative generator."""

    def __init__(self, p: int, d: int, modulus: tuple[int, ...], generator: int, budget: int):
        self.p = p
        self.d = d
        self.modulus = modulus
        self.generator = generator
        self.budget = budget
        self.size = p**d

    def __repr__(self) -> str:
        return f"FieldDescriptor(p={self.p}, d={self.d}, modulus={list(self.modulus)})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldDescriptor)
            and (self.p, self.d, self.modulus) == (other.p, other.d, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.d, self.modulus))

    # -- index/coefficient conversions ---------------------------------------
    def coeffs(self, index: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.d):
            index, r = divmod(index, self.p)
            out.append(r)
        return tuple(out)

    def index(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def element(self, value: int | Sequence[int]) -> FieldElement:
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, self.coeffs(int(value)))
        return FieldElement(self, tuple(int(c) % self.p for c in value))

    @property
    def one(self) -> FieldElement:
        return self.element(1)

    @property
    def zero(self) -> FieldElement:
        return self.element(0)

    @property
    def gen(self) -> FieldElement:
        return self.element(self.generator)

    # -- linear algebra over F_p -------------------------------------------
    def _poly_mulmod(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        r = _pmulmod(list(a), list(b), list(self.modulus), self.p)
        return tuple(r) + (0,) * (self.d - len(r))

    def mul_matrix(self, coeffs: Sequence[int]) -> np.ndarray:
        """Matrix of ``x -> a*x`` on coefficient columns."""
        cols = []
        basis = [0] * self.d
        for i in range(self.d):
            basis = [0] * self.d
            basis[i] = 1
            cols.append(self._poly_mulmod(coeffs, basis))
        return np.array(cols, dtype=np.int64).T

    @cached_property
    def trace_basis(self) -> np.ndarray:
        """``Tr(t^i)`` for ``i < d``, computed as traces of multiplication matrices."""
        mt = self.mul_matrix([0, 1] if self.d > 1 else [self.modulus[0] * -1 % self.p])
        out = np.zeros(self.d, dtype=np.int64)
        cur = np.eye(self.d, dtype=np.int64)
        for i in range(self.d):
            out[i] = int(np.trace(cur)) % self.p
            cur = (mt @ cur) % self.p
        return out

    # -- whole-field tables --------------------------------------------------
    @cached_property
    def exp_table(self) -> np.ndarray:
        """``exp_table[e]`` is the index of ``g^e`` for ``0 <= e < q-1``."""
        p, d, n = self.p, self.d, self.size - 1
        pows = np.array([p**i for i in range(d)], dtype=np.int64)
        mg = self.mul_matrix(self.coeffs(self.generator))
        block = max(1, math.isqrt(n) + 1)
        v = np.zeros((d, block), dtype=np.int64)
        v[0, 0] = 1
        for j in range(1, block):
            v[:, j] = (mg @ v[:, j - 1]) % p
        step = np.eye(d, dtype=np.int64)
        for _ in range(block):
            step = (mg @ step) % p
        out = np.empty(n, dtype=np.int64)
        cur = np.eye(d, dtype=np.int64)
        for start in range(0, n, block):
            stop = min(n, start + block)
            cols = (cur @ v[:, : stop - start]) % p
            out[start:stop] = pows @ cols
            cur = (step @ cur) % p
        return out

    @cached_property
    def log_table(self) -> np.ndarray:
        log = np.full(self.size, -1, dtype=np.int64)
        log[self.exp_table] = np.arange(self.size - 1, dtype=np.int64)
        if np.count_nonzero(log[1:] < 0):
            raise AssertionError("generator does not have full order")
        return log

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Absolute trace of every element, by index."""
        idx = np.arange(self.size, dtype=np.int64)
        acc = np.zeros(self.size, dtype=np.int64)
        for i in range(self.d):
            acc += (idx % self.p) * int(self.trace_basis[i])
            idx //= self.p
        return acc % self.p

    @cached_property
    def trace_by_exp(self) -> np.ndarray:
        return self.trace_table[self.exp_table]

    def digits(self, indices: np.ndarray) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64).copy()
        out = np.empty(idx.shape + (self.d,), dtype=np.int64)
        for i in range(self.d):
            out[..., i] = idx % self.p
            idx //= self.p
        return out

    def from_digits(self, digits: np.ndarray) -> np.ndarray:
        pows = np.array([self.p**i for i in range(self.d)], dtype=np.int64)
        return (np.asarray(digits, dtype=np.int64) % self.p) @ pows

    def mul_indices(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        log = self.log_table
        nz = (a != 0) & (b != 0)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        e = (log[a] + log[b]) % (self.size - 1)
        out[nz] = self.exp_table[np.broadcast_to(e, out.shape)[nz]]
        return out

    def add_indices(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.from_digits(self.digits(a) + self.digits(b))


@dataclass(frozen=True)
class FieldElement:
    field: FieldDescriptor
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.field.d:
            raise ValueError("coefficient vector has the wrong length")

    @property
    def index(self) -> int:
        return self.field.index(self.coeffs)

    def _check(self, other: FieldElement) -> None:
        if other.field != self.field:
            raise ValueError("elements belong to different fields")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        p = self.field.p
        return FieldElement(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> FieldElement:
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __mul__(self, other: FieldElement | int) -> FieldElement:
        if isinstance(other, int):
            p = self.field.p
            return FieldElement(self.field, tuple(a * other % p for a in self.coeffs))
        self._check(other)
        return FieldElement(self.field, self.field._poly_mulmod(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inverse() ** (-e)
        f = self.field
        r = _ppowmod(list(self.coeffs), e, list(f.modulus), f.p)
        return FieldElement(f, tuple(r) + (0,) * (f.d - len(r)))

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        return self ** (self.field.size - 2)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return self * other.inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def order(self) -> int:
        if self.is_zero():
            raise ValueError("zero has no multiplicative order")
        n = self.field.size - 1
        order = n
        for r in prime_factors(n):
            while order % r == 0 and (self ** (order // r)).index == 1:
                order //= r
        return order

    def __repr__(self) -> str:
        return f"FieldElement({list(self.coeffs)} in F_{self.field.p}^{self.field.d})"


@lru_cache(maxsize=64)
def build_field(p: int, d: int, budget: int = DEFAULT_FIELD_BUDGET) -> FieldDescriptor:
    """Deterministic construction of F_{p^d}.

    The modulus is the least monic irreducible polynomial of degree ``d`` with
    coefficients compared from the constant term upward; the generator is the
    least index with multiplicative order ``p^d - 1``.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if d < 1:
        raise ValueError("extension degree must be positive")
    if p**d > budget:
        raise BudgetExceeded(f"F_{p}^{d} has {p**d} elements, budget is {budget}")
    modulus = _canonical_modulus(p, d)
    field = FieldDescriptor(p, d, modulus, generator=1, budget=budget)
    n = p**d - 1
    factors = prime_factors(n)
    for idx in range(1, p**d):
        x = field.element(idx)
        if all((x ** (n // r)).index != 1 for r in factors):
            field.generator = idx
            return field
    raise AssertionError("multiplicative group has no generator")


def absolute_trace(x: FieldElement) -> int:
    """``Tr_{F_{p^d}/F_p}(x) = x + x^p + ... + x^{p^(d-1)}`` as a residue mod p."""
    f = x.field
    return int(np.dot(np.array(x.coeffs, dtype=np.int64), f.trace_basis) % f.p)


def dlog_table(field: FieldDescriptor, budget: int | None = None) -> np.ndarray:
    """Index -> discrete log table (``-1`` at zero)."""
    budget = field.budget if budget is None else budget
    if field.size - 1 > budget:
        raise BudgetExceeded(f"dlog table of size {field.size - 1} exceeds budget {budget}")
    return field.log_table


@dataclass(frozen=True)
class SubfieldEmbedding:
    small: FieldDescriptor
    big: FieldDescriptor
    root: int
    images: tuple[int, ...]  # indices of root^i in big, i < small.d

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.field != self.small:
            raise ValueError("element is not in the source field")
        return self.big.element(int(self.map_indices(np.array([x.index]))[0]))

    def map_indices(self, indices: np.ndarray) -> np.ndarray:
        small_digits = self.small.digits(indices)
        image_digits = self.big.digits(np.array(self.images, dtype=np.int64))
        return self.big.from_digits((small_digits @ image_digits) % self.big.p)


def embed_subfield(small: FieldDescriptor, big: FieldDescriptor, chunk: int = 1 << 16) -> SubfieldEmbedding:
    """Embedding sending ``t`` to the first root of ``small.modulus`` in ``big``."""
    if small.p != big.p or big.d % small.d:
        raise ValueError("source field is not a subfield of the target")
    p = big.p
    mod = small.modulus
    root = None
    for start in range(0, big.size, chunk):
        xs = np.arange(start, min(big.size, start + chunk), dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in reversed(mod):
            acc = big.mul_indices(acc, xs)
            # adding a prime-field constant only touches digit 0
            d0 = acc % p
            acc = acc - d0 + (d0 + c) % p
        hits = np.flatnonzero(acc == 0)
        if hits.size:
            root = int(xs[hits[0]])
            break
    if root is None:
        raise AssertionError("no root of the subfield modulus found; descriptor is corrupted")
    r = big.element(root)
    images = []
    cur = big.one
    for _ in range(small.d):
        images.append(cur.index)
        cur = cur * r
    return SubfieldEmbedding(small, big, root, tuple(images))


@dataclass(frozen=True)
class ClosedPoint:
    """A Frobenius orbit in F_{q^m}^*, where q = p^a."""

    degree: int
    representative: FieldElement
    orbit: tuple[int, ...]


def orbit_representatives(field: FieldDescriptor, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Least exponents of the ``x -> x^q`` orbits on ``field^*`` and the orbit sizes.

    Works entirely on discrete logs: Frobenius is ``e -> q*e mod (Q-1)``.
    """
    n = field.size - 1
    m = round(math.log(field.size, q))
    if q**m != field.size:
        raise ValueError("field is not an extension of F_q")
    e = np.arange(n, dtype=np.int64)
    cur = e.copy()
    least = e.copy()
    degree = np.zeros(n, dtype=np.int64)
    for j in range(1, m + 1):
        cur = (cur * q) % n if n > 1 else cur
        np.minimum(least, cur, out=least)
        fresh = (degree == 0) & (cur == e)
        degree[fresh] = j
    reps = np.flatnonzero(least == e)
    return reps, degree[reps]


def closed_points(p: int, a: int, m: int, budget: int = DEFAULT_FIELD_BUDGET) -> list[ClosedPoint]:
    """Closed points of G_m over F_q (q = p^a) whose degree divides ``m``."""
    field = build_field(p, a * m, budget)
    q = p**a
    reps, degrees = orbit_representatives(field, q)
    exp = field.exp_table
    n = field.size - 1
    out = []
    for e, deg in zip(reps.tolist(), degrees.tolist()):
        orbit = []
        cur = e
        for _ in range(deg):
            orbit.append(int(exp[cur]))
            cur = cur * q % n if n > 1 else cur
        out.append(ClosedPoint(int(deg), field.element(int(exp[e])), tuple(orbit)))
    return out
