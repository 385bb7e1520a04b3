"""Finite-precision evidence for the p-adic limit of symmetric-power L-functions."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Callable, Sequence

from .errors import NotDivisibleError
from .polys import IntPoly
from .trivial import m_coefficients

__all__ = [
    "d_series",
    "partition_count",
    "padic_valuation",
    "StabilityReport",
    "stability_check",
    "CongruenceReport",
    "congruence_check",
    "prop_exponent",
    "PadicDiagnostics",
    "limit_diagnostic",
]


def d_series(n: int, U: int) -> list[int]:
    """Coefficients ``d_0..d_U`` of ``1 / ((1-x^2)(1-x^3)...(1-x^(n-1)))``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    s = [1] + [0] * U
    for part in range(2, n):
        for j in range(part, U + 1):
            s[j] += s[j - part]
    return s


@lru_cache(maxsize=None)
def partition_count(j: int, largest: int, smallest: int = 2) -> int:
    """Partitions of ``j`` into parts from ``smallest..largest`` (recursive on the largest part)."""
    if j == 0:
        return 1
    if largest < smallest or j < 0:
        return 0
    return partition_count(j - largest, largest, smallest) + partition_count(j, largest - 1, smallest)


def padic_valuation(x: int, p: int) -> int | None:
    """``v_p(x)``; ``None`` stands for infinity."""
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass
class StabilityReport:
    n: int
    k: int
    r: int
    skipped: bool
    violations: list[tuple[int, int, int]] = dc_field(default_factory=list)  # (j, m_k(j), d_j)

    @property
    def ok(self) -> bool:
        return not self.violations


def stability_check(n: int, k: int, r: int) -> StabilityReport:
    """``m_k(j) = d_j`` for ``1 <= j <= min(k, r)``; requires ``k >= n``."""
    if k < n:
        return StabilityReport(n, k, r, skipped=True)
    top = min(k, r)
    m = m_coefficients(n, k, top)
    d = d_series(n, top)
    bad = [(j, m[j], d[j]) for j in range(1, top + 1) if m[j] != d[j]]
    return StabilityReport(n, k, r, skipped=False, violations=bad)


@dataclass
class CongruenceReport:
    p: int
    exponent: int
    valuations: list[int | None]

    @property
    def holds(self) -> bool:
        return all(v is None or v >= self.exponent for v in self.valuations)

    def __bool__(self) -> bool:
        return self.holds


def congruence_check(K1: IntPoly, K2: IntPoly, p: int, e: int) -> CongruenceReport:
    """Coefficientwise ``v_p(K1 - K2) >= e``; the shorter polynomial is padded with zeros."""
    size = max(len(K1), len(K2))
    vals = [padic_valuation(K1[i] - K2[i], p) for i in range(size)]
    return CongruenceReport(p, e, vals)


def prop_exponent(k1: int, k2: int, p: int) -> tuple[int, int]:
    """``(m, min(m, floor(k2/2)))`` where ``k1 = k2 + p^m k3`` with ``p`` not dividing ``k3``."""
    diff = k1 - k2
    if diff <= 0:
        raise ValueError("k1 must exceed k2")
    m = padic_valuation(diff, p) or 0
    return m, min(m, k2 // 2)


@dataclass
class PadicDiagnostics:
    p: int
    n: int
    q: int
    ks: list[int]
    r: int
    precision: int
    d_prefix: list[int]
    divisible: list[bool]
    difference_valuations: list[list[int | None]]  # per successive pair, per coefficient, capped
    guaranteed: list[int]  # exponent guaranteed by the congruence for each pair
    K: list[IntPoly] = dc_field(default_factory=list, repr=False)

    def nondecreasing(self) -> bool:
        """At each coefficient index, valuations of successive differences never drop."""
        cap = self.precision
        width = max((len(v) for v in self.difference_valuations), default=0)
        for i in range(width):
            seq = [cap if (i >= len(v) or v[i] is None) else min(v[i], cap) for v in self.difference_valuations]
            if any(b < a for a, b in zip(seq, seq[1:])):
                return False
        return True


def limit_diagnostic(
    n: int,
    p: int,
    q: int,
    k_sequence: Sequence[int],
    r: int,
    precision: int,
    analyze: Callable[[int], object],
) -> PadicDiagnostics:
    """Run ``analyze(k)`` along ``k_sequence`` and collect divisibility and valuation evidence.

    ``analyze`` must return an object exposing ``K`` and ``P()`` (see
    :class:`klsym.pipeline.Analysis`).
    """
    ks = list(k_sequence)
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise ValueError("k_sequence must be increasing")
    d = d_series(n, r)
    Ks: list[IntPoly] = []
    divisible = []
    for k in ks:
        res = analyze(k)
        top = min(k, r)
        factor = IntPoly.one()
        for j in range(top + 1):
            factor = factor * IntPoly.linear(q**j) ** d[j]
        P = res.P()
        if not factor.divides(P):
            raise NotDivisibleError(f"P({k},{n},T) is not divisible by the predicted trivial zeros")
        divisible.append(True)
        Ks.append(res.K)
    diffs = []
    guaranteed = []
    for (k_a, K_a), (k_b, K_b) in zip(zip(ks, Ks), zip(ks[1:], Ks[1:])):
        rep = congruence_check(K_b, K_a, p, 0)
        diffs.append([None if v is None else min(v, precision) for v in rep.valuations])
        guaranteed.append(prop_exponent(k_b, k_a, p)[1] if k_b % p else 0)
    return PadicDiagnostics(p, n, q, ks, r, precision, d, divisible, diffs, guaranteed, Ks)
