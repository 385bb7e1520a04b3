"""Tables of Kloosterman sums Kl_n(F_Q, lambda) for every lambda in F_Q^*.

The additive character is fixed once and for all as
``psi(y) = zeta_p ** Tr_{F_Q/F_p}(y)``.  A sum of character values is then a
group-ring vector: ``counts[t]`` is the number of tuples whose trace is ``t``.
Folding the ``zeta^(p-1)`` slot gives the :class:`CycInt` value.

Two independent routes fill the table:

* ``kl_table_direct`` enumerates ``(x_1, ..., x_{n-1})`` and, for every
  ``lambda`` at once, closes the tuple with ``x_n = lambda / prod(x_i)``.
* ``kl_table_convolution`` uses that ``Kl_n`` is the multiplicative
  convolution of ``Kl_{n-1}`` with ``psi``.  In discrete-log coordinates this
  is a cyclic convolution on ``Z/(Q-1) x Z/p``, done either by a shift loop or
  by a float FFT whose rounding error is bounded before it is trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numba
import numpy as np

from .cyclotomic import CycInt, counts_to_coords
from .errors import BudgetExceeded
from .fields import FieldDescriptor, FieldElement, absolute_trace

__all__ = [
    "DIRECT_BUDGET",
    "KloostermanTable",
    "character_value",
    "kl_table_direct",
    "kl_table_convolution",
    "direct_cost",
    "coordinate_bound",
]

DIRECT_BUDGET = 2**34
NAIVE_CONV_LIMIT = 2**27
_FFT_SAFETY = 0.25
_DENSE_FFT_LIMIT = 2**22
_INT64_SAFE = 2**60


def character_value(x: FieldElement) -> CycInt:
    return CycInt.zeta(x.field.p, absolute_trace(x))


@dataclass
class KloostermanTable:
    """Kl_n over ``field`` for all nonzero arguments.

    ``coords[e]`` holds the power-basis coordinates of ``Kl_n(g^e)``, where
    ``g`` is the field's canonical generator.
    """

    field: FieldDescriptor
    n: int
    base_a: int
    coords: np.ndarray
    method: str
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    @property
    def p(self) -> int:
        return self.field.p

    def value(self, x: FieldElement | int) -> CycInt:
        idx = x.index if isinstance(x, FieldElement) else int(x)
        if idx == 0:
            raise ValueError("Kloosterman sums are indexed by nonzero elements")
        e = int(self.field.log_table[idx])
        return CycInt(self.p, tuple(int(c) for c in self.coords[e]))

    def __getitem__(self, x: FieldElement | int) -> CycInt:
        return self.value(x)

    @cached_property
    def values(self) -> dict[int, CycInt]:
        """Element index -> value, for every element of F_Q^*."""
        exp = self.field.exp_table
        return {
            int(exp[e]): CycInt(self.p, tuple(int(c) for c in row))
            for e, row in enumerate(self.coords)
        }

    def by_index(self) -> np.ndarray:
        """Coordinates arranged by element index (row 0 is unused and zero)."""
        out = np.zeros((self.field.size, self.coords.shape[1]), dtype=self.coords.dtype)
        out[self.field.exp_table] = self.coords
        return out

    def complex_values(self) -> np.ndarray:
        p = self.p
        if p == 2:
            return self.coords[:, 0].astype(np.complex128)
        z = np.exp(2j * np.pi * np.arange(p - 1) / p)
        return self.coords.astype(np.float64) @ z

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, KloostermanTable)
            and self.field == other.field
            and self.n == other.n
            and np.array_equal(self.coords, other.coords)
        )


def _base_counts(field: FieldDescriptor) -> np.ndarray:
    """One-hot trace vectors of psi, in discrete-log order."""
    n = field.size - 1
    counts = np.zeros((n, field.p), dtype=np.int64)
    counts[np.arange(n), field.trace_by_exp] = 1
    return counts


def _finish(
    field: FieldDescriptor, n: int, base_a: int, counts: np.ndarray, method: str, offsets: np.ndarray | None = None
) -> KloostermanTable:
    """Check bucket totals and fold.  ``offsets[i]`` copies of the all-ones row were removed from row ``i``."""
    expected = (field.size - 1) ** (n - 1)
    totals = counts.sum(axis=1).astype(object)
    if offsets is not None:
        totals = totals + field.p * offsets
    if np.any(totals != expected):
        raise AssertionError("bucket totals do not match the number of tuples")
    return KloostermanTable(field, n, base_a, counts_to_coords(counts, field.p), method)


# ---------------------------------------------------------------------------
# direct enumeration

def direct_cost(field: FieldDescriptor, n: int) -> int:
    """Elementary steps of the direct method: (Q-1)^(n-1) tuples times (Q-1) closures."""
    return (field.size - 1) ** n


@numba.njit(cache=True)
def _direct_kernel(tr: np.ndarray, n_vars: int, p: int) -> np.ndarray:
    N = tr.shape[0]
    counts = np.zeros((N, p), dtype=np.int64)
    idx = np.zeros(max(n_vars - 1, 1), dtype=np.int64)
    total = N ** (n_vars - 1)
    for _ in range(total):
        s_e = 0
        s_t = 0
        for i in range(n_vars - 1):
            s_e += idx[i]
            s_t += tr[idx[i]]
        s_e %= N
        s_t %= p
        # x_n = lambda / prod, in logs: l - s_e
        for lam in range(N):
            j = lam - s_e
            if j < 0:
                j += N
            t = s_t + tr[j]
            if t >= p:
                t -= p
            counts[lam, t] += 1
        # odometer
        k = 0
        while k < n_vars - 1:
            idx[k] += 1
            if idx[k] < N:
                break
            idx[k] = 0
            k += 1
    return counts


def kl_table_direct(field: FieldDescriptor, n: int, base_a: int = 1, budget: int = DIRECT_BUDGET) -> KloostermanTable:
    if n < 1:
        raise ValueError("rank must be at least 1")
    cost = direct_cost(field, n)
    if cost > budget:
        raise BudgetExceeded(f"direct Kl_{n} over F_{field.size} needs {cost} steps, budget {budget}")
    tr = np.ascontiguousarray(field.trace_by_exp)
    if n == 1:
        counts = _base_counts(field)
    else:
        counts = _direct_kernel(tr, n, field.p)
    return _finish(field, n, base_a, counts, "direct")


# ---------------------------------------------------------------------------
# multiplicative convolution

def _conv_naive(a: np.ndarray, b: np.ndarray, tr: np.ndarray) -> np.ndarray:
    # a is the one-hot psi table; shift b by every group element
    n, p = b.shape
    out = np.zeros_like(b)
    for e in range(n):
        out += np.roll(np.roll(b, e, axis=0), int(tr[e]), axis=1)
    return out


def _sq_norm(b: np.ndarray, chunk: int = 1 << 18) -> float:
    return float(sum(np.sum(np.square(b[i : i + chunk], dtype=np.float64)) for i in range(0, b.shape[0], chunk)))


def _fft_error_bound(size: int, a_sq: float, b_sq: float) -> float:
    """Heuristic worst-case rounding error of one float FFT convolution."""
    return 8.0 * max(1.0, math.log2(size)) * np.finfo(np.float64).eps * math.sqrt(a_sq * b_sq)


def _smooth_length(n: int) -> int:
    """Smallest 2^a 3^b 5^c 7^d that is at least ``n``."""
    best = 1 << max(0, (n - 1).bit_length())
    p7 = 1
    while p7 < best:
        p5 = p7
        while p5 < best:
            p3 = p5
            while p3 < best:
                m = p3
                while m < n:
                    m *= 2
                best = min(best, m)
                p3 *= 3
            p5 *= 5
        p7 *= 7
    return best


def _is_smooth(n: int) -> bool:
    for f in (2, 3, 5, 7, 11, 13):
        while n % f == 0:
            n //= f
    return n == 1


def _dense_pass(tr: np.ndarray, limb: np.ndarray, length: int, p: int) -> np.ndarray:
    """One 2-D real FFT over the whole ``Z/length x Z/p`` grid; used when it fits in memory."""
    n0 = limb.shape[0]
    a = np.zeros((n0, p), dtype=np.float64)
    a[np.arange(n0), tr] = 1.0
    fa = np.fft.rfft2(a, s=(length, p))
    del a
    fa *= np.fft.rfft2(limb.astype(np.float64), s=(length, p))
    c = np.fft.irfft2(fa, s=(length, p))
    del fa
    if length != n0:
        c[: n0 - 1] += c[n0 : 2 * n0 - 1]
    return np.ascontiguousarray(c[:n0])


def _conv_fft(tr: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact ``psi * b`` via float FFTs, one additive character at a time.

    Along the ``Z/p`` axis the transform is taken by hand: for each character
    ``chi`` the problem becomes a 1-D complex convolution of length ``Q-1``.
    Characters ``chi`` and ``p-chi`` are conjugate, so only half are computed.
    A group order with a large prime factor makes the FFT slow; the first
    axis is then zero-padded to a smooth length and folded back.  Large
    entries of ``b`` are split into limbs so each pass stays well inside
    float64 precision, and every rounded result is checked.
    """
    n0 = b.shape[0]
    length = n0 if _is_smooth(n0) else _smooth_length(2 * n0 - 1)
    a_sq = float(n0)  # psi is one-hot per row
    bits = max(1, int(b.max()).bit_length())
    b_sq = _sq_norm(b)
    limb_bits = bits

    def limb_sq(nbits: int) -> float:
        return b_sq if nbits >= bits else min(b_sq, float(b.size) * float((1 << nbits) - 1) ** 2)

    while limb_bits > 1 and _fft_error_bound(length * p, a_sq, limb_sq(limb_bits)) >= _FFT_SAFETY:
        limb_bits = (limb_bits + 1) // 2
    t = np.arange(p)
    out = np.zeros(b.shape, dtype=np.int64)
    mask = (1 << limb_bits) - 1
    for shift in range(0, bits, limb_bits):
        limb = (b >> shift) & mask if limb_bits < bits else b
        if _fft_error_bound(length * p, a_sq, _sq_norm(limb)) >= _FFT_SAFETY:
            raise ArithmeticError("FFT convolution cannot be made exact at this size")
        if length * p <= _DENSE_FFT_LIMIT:
            acc = _dense_pass(tr, limb, length, p)
        else:
            acc = np.zeros(b.shape, dtype=np.float64)
            for chi in range(p // 2 + 1):
                w = np.exp(2j * np.pi * chi * t / p)
                fa = np.fft.fft(w[tr], length)
                fa *= np.fft.fft(limb @ w, length)
                c = np.fft.ifft(fa)
                del fa
                if length != n0:
                    c[: n0 - 1] += c[n0 : 2 * n0 - 1]
                c = c[:n0]
                weight = 1.0 if (chi == 0 or 2 * chi == p) else 2.0
                acc += (weight / p) * np.real(c[:, None] * np.conj(w)[None, :])
                del c
        del limb
        for col in range(p):
            rounded = np.rint(acc[:, col])
            if np.max(np.abs(acc[:, col] - rounded), initial=0.0) > _FFT_SAFETY:
                raise ArithmeticError("FFT rounding residue too large")
            out[:, col] += rounded.astype(np.int64) << shift
        del acc
    return out


def kl_table_convolution(
    field: FieldDescriptor,
    n: int,
    base_a: int = 1,
    engine: str = "auto",
    budget: int = DIRECT_BUDGET,
) -> KloostermanTable:
    """Kl_n as the (n-1)-fold multiplicative self-convolution of psi.

    ``engine`` is ``"naive"`` (shift loop, the reference), ``"fft"``, or
    ``"auto"`` which uses the shift loop while it stays cheap.
    """
    if n < 1:
        raise ValueError("rank must be at least 1")
    size = field.size - 1
    if engine not in ("auto", "naive", "fft"):
        raise ValueError(f"unknown engine {engine!r}")
    naive_cost = (n - 1) * size * size * field.p
    if engine == "naive" and naive_cost > budget:
        raise BudgetExceeded(f"naive convolution needs {naive_cost} steps, budget {budget}")
    if coordinate_bound(field.size, n, field.p) * size >= _INT64_SAFE:
        if naive_cost > budget:
            raise BudgetExceeded(f"multi-modular convolution needs {naive_cost} steps per modulus, budget {budget}")
        return _conv_multimodular(field, n, base_a)
    use_naive = engine == "naive" or (engine == "auto" and naive_cost <= NAIVE_CONV_LIMIT)
    counts = _base_counts(field)
    base = counts if use_naive else None
    tr = field.trace_by_exp
    # the all-ones row is zero in Z[zeta_p]; stripping it keeps entries near the size of the values
    offsets = np.zeros(size, dtype=object)
    for _ in range(n - 1):
        counts = _conv_naive(base, counts, tr) if use_naive else _conv_fft(tr, counts, field.p)
        low = counts.min(axis=1)
        counts -= low[:, None]
        offsets = sum(offsets) + low.astype(object)
    return _finish(field, n, base_a, counts, "convolution", offsets)


def coordinate_bound(Q: int, n: int, p: int) -> int:
    """Bound on every power-basis coordinate of ``Kl_n(F_Q, x)``.

    Each conjugate obeys the Weil bound ``n Q^((n-1)/2)``, and recovering a
    coordinate from the conjugates costs at most a factor 2.
    """
    weil = math.isqrt(n * n * Q ** (n - 1)) + 1
    return weil if p == 2 else 2 * weil


def _moduli(bits: int, count_bits: int) -> list[int]:
    """Pairwise coprime odd moduli below ``2^bits`` whose product exceeds ``2^count_bits``."""
    out, prod, m = [], 1, (1 << bits) - 1
    while prod.bit_length() <= count_bits:
        if math.gcd(m, prod) == 1:
            out.append(m)
            prod *= m
        m -= 2
    return out


def _conv_multimodular(field: FieldDescriptor, n: int, base_a: int) -> KloostermanTable:
    """Shift-loop convolution modulo several coprime moduli, joined by CRT.

    Used when the coordinates do not fit in int64.  Each step adds ``Q-1``
    reduced rows, so moduli below ``2^62 / Q`` never overflow.
    """
    size, p = field.size - 1, field.p
    bound = coordinate_bound(field.size, n, p)
    moduli = _moduli(62 - size.bit_length(), (2 * bound + 1).bit_length())
    tr = field.trace_by_exp
    base = _base_counts(field)
    expected = (field.size - 1) ** (n - 1)
    coords = np.zeros((size, max(p - 1, 1)), dtype=object)
    modulus = 1
    for P in moduli:
        counts = base.copy()
        for _ in range(n - 1):
            counts = _conv_naive(base, counts, tr) % P
        if np.any(counts.sum(axis=1) % P != expected % P):
            raise AssertionError("bucket totals do not match the number of tuples")
        residue = counts_to_coords(counts, p).astype(object) % P
        # CRT step: coords = coords + modulus * t with t = (residue - coords) / modulus mod P
        t = ((residue - coords) * pow(modulus, -1, P)) % P
        coords = coords + modulus * t
        modulus *= P
    half = modulus // 2
    coords = np.where(coords > half, coords - modulus, coords)
    if np.any(np.abs(coords) > bound):
        raise AssertionError("CRT lift exceeds the coordinate bound")
    return KloostermanTable(field, n, base_a, coords, "convolution")
