"""Trivial factors of L(k,n,T) and extraction of the pure non-trivial factor.

The local factor at 0 comes from the multiplicities ``m_k(u)``, which are the
coefficients of ``prod_{i=n}^{n+k-1}(1-x^i) / prod_{i=2}^{k}(1-x^i)``.  The
local factor at infinity (when ``n | q-1``) comes from an orbit census of
tuples ``(j_0..j_(n-1))`` with ``sum j_i zeta^i = 0``.  The H^0/H^2 factors
are driven by the trivial multiplicity in ``Sym^k`` of the monodromy algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import gcd

import mpmath
import numpy as np

from .errors import NotDivisibleError
from .fields import FieldElement, build_field
from .lfunction import reciprocal_roots, weight_split
from .polys import IntPoly, RatFunc
from .reptheory import monodromy_algebra, trivial_multiplicity

__all__ = [
    "m_coefficients",
    "composition_count",
    "composition_histogram",
    "local_factor_at_zero",
    "OrbitRecord",
    "OrbitCensus",
    "tuple_census",
    "order_n_roots",
    "local_factor_at_infinity",
    "boundary_cohomology_factors",
    "TrivialFactorBundle",
    "trivial_factor_bundle",
    "extract_nontrivial_factor",
    "PurityReport",
    "purity_check",
    "empirical_infinity_factor",
]


# ---------------------------------------------------------------------------
# local factor at 0

def _series_mul(a: list[int], b: list[int], U: int) -> list[int]:
    out = [0] * (U + 1)
    for i, x in enumerate(a[: U + 1]):
        if x:
            for j, y in enumerate(b[: U + 1 - i]):
                out[i + j] += x * y
    return out


def _series_div_one_minus(a: list[int], i: int) -> list[int]:
    """``a / (1 - x^i)``: running sums with stride ``i``."""
    out = list(a)
    for u in range(i, len(out)):
        out[u] += out[u - i]
    return out


def m_coefficients(n: int, k: int, U: int) -> list[int]:
    """``m_k(0..U)`` by series division; cross-checked against composition counts."""
    if U < 0:
        raise ValueError("U must be nonnegative")
    s = [1] + [0] * U
    for i in range(n, n + k):
        factor = [0] * (U + 1)
        factor[0] = 1
        if i <= U:
            factor[i] = -1
        s = _series_mul(s, factor, U)
    for i in range(2, k + 1):
        s = _series_div_one_minus(s, i)
    hist = composition_histogram(n, k)
    # the (1-x) cancellation behind the identity needs k >= 1; for k = 0 only u = 0 is meaningful
    span = U + 1 if k else 1
    diff = [hist.get(u, 0) - hist.get(u - 1, 0) for u in range(span)]
    if diff != s[:span]:
        raise AssertionError(f"m-series and composition differences disagree for n={n}, k={k}")
    return s


def _compositions(n: int, k: int):
    """All ``(i_0..i_(n-1))`` with nonnegative entries summing to ``k``."""
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _compositions(n - 1, k - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def composition_histogram(n: int, k: int) -> dict[int, int]:
    """``u -> c_k(u)`` by exhaustive enumeration."""
    hist: dict[int, int] = {}
    for comp in _compositions(n, k):
        u = sum(j * c for j, c in enumerate(comp))
        hist[u] = hist.get(u, 0) + 1
    return hist


def composition_count(n: int, k: int, u: int) -> int:
    return composition_histogram(n, k).get(u, 0)


def local_factor_at_zero(n: int, k: int, q: int) -> IntPoly:
    top = k * (n - 1) // 2
    m = m_coefficients(n, k, top)
    out = IntPoly.one()
    for u, mult in enumerate(m):
        if mult < 0:
            raise AssertionError(f"negative multiplicity m_{k}({u}) = {mult}")
        out = out * IntPoly.linear(q**u) ** mult
    return out


# ---------------------------------------------------------------------------
# census at infinity

def _rotate(j: tuple[int, ...]) -> tuple[int, ...]:
    """sigma(j_0..j_(n-1)) = (j_(n-1), j_0, ..., j_(n-2))."""
    return (j[-1],) + j[:-1]


def _signed_vector(j: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """v_j accumulated monomial by monomial."""
    n = len(j)
    acc: dict[tuple[int, ...], int] = {}
    cur = j
    for i in range(n):
        sign = (-1) ** sum(j[n - t] for t in range(1, i + 1))
        acc[cur] = acc.get(cur, 0) + sign
        cur = _rotate(cur)
    return {mono: c for mono, c in acc.items() if c}


@dataclass(frozen=True)
class OrbitRecord:
    representative: tuple[int, ...]
    size: int
    signed_nonzero: bool
    parity: int


@dataclass
class OrbitCensus:
    n: int
    k: int
    p: int
    q: int
    zeta: FieldElement
    tuples: list[tuple[int, ...]]
    orbits: list[OrbitRecord]

    @property
    def a(self) -> int:
        return len(self.orbits)

    @property
    def b(self) -> int | None:
        if self.k % 2:
            return None
        return sum(o.signed_nonzero for o in self.orbits)

    @property
    def c(self) -> int | None:
        if self.k % 2:
            return None
        return sum(o.signed_nonzero and o.parity == 1 for o in self.orbits)


def order_n_roots(q: int, p: int, n: int) -> list[FieldElement]:
    """Every element of exact order ``n`` in F_q."""
    field = build_field(p, round(np.log(q) / np.log(p)))
    Q = field.size
    if (Q - 1) % n:
        raise ValueError(f"n={n} does not divide q-1={Q - 1}")
    g = field.gen
    step = (Q - 1) // n
    return [g ** (step * t) for t in range(1, n + 1) if gcd(t, n) == 1]


def tuple_census(n: int, k: int, q: int, p: int, zeta: FieldElement | None = None) -> OrbitCensus:
    """Census of ``S_k(n,p)`` with ``zeta = g^((q-1)/n)`` unless another root is supplied."""
    a = round(np.log(q) / np.log(p))
    if p**a != q:
        raise ValueError(f"q={q} is not a power of p={p}")
    if (q - 1) % n:
        raise ValueError(f"n={n} does not divide q-1={q - 1}")
    field = build_field(p, a)
    if zeta is None:
        zeta = field.gen ** ((q - 1) // n)
    if zeta.order() != n:
        raise ValueError("zeta must have exact order n")
    powers = [(zeta**i).coeffs for i in range(n)]
    tuples = []
    for j in _compositions(n, k):
        acc = [0] * field.d
        for ji, vec in zip(j, powers):
            for t, v in enumerate(vec):
                acc[t] += ji * v
        if all(x % p == 0 for x in acc):
            tuples.append(j)
    members = set(tuples)
    seen: set[tuple[int, ...]] = set()
    orbits = []
    for j in sorted(tuples):
        if j in seen:
            continue
        orbit = [j]
        cur = _rotate(j)
        while cur != j:
            if cur not in members:
                raise AssertionError(f"S_k is not stable under rotation: {cur}")
            orbit.append(cur)
            cur = _rotate(cur)
        seen.update(orbit)
        rep = min(orbit)
        flags = {bool(_signed_vector(t)) for t in orbit}
        if k % 2 == 0 and len(flags) != 1:
            raise AssertionError(f"v_j != 0 is not constant on the orbit of {rep}")
        parity = sum(i * x for i, x in enumerate(rep)) % 2
        orbits.append(OrbitRecord(rep, len(set(orbit)), bool(_signed_vector(rep)), parity))
    orbits.sort(key=lambda o: o.representative)
    return OrbitCensus(n, k, p, q, zeta, sorted(tuples), orbits)


def local_factor_at_infinity(n: int, k: int, q: int, p: int, census: OrbitCensus | None = None) -> IntPoly:
    """Closed-form factor at infinity, valid when ``n | q-1``."""
    if (q - 1) % n:
        raise ValueError(f"n={n} does not divide q-1={q - 1}")
    if n % 2 == 1:
        census = census or tuple_census(n, k, q, p)
        return IntPoly.linear(q ** (k * (n - 1) // 2)) ** census.a
    if k % 2 == 1:
        return IntPoly.one()
    census = census or tuple_census(n, k, q, p)
    w = q ** (k * (n - 1) // 2)
    b, c = census.b, census.c
    minus, plus = IntPoly.linear(w), IntPoly.linear(-w)
    if (q - 1) % (2 * n) == 0:
        return minus**b
    if n % 4 == 0 or k % 4 == 0:
        return plus**c * minus ** (b - c)
    return minus**c * plus ** (b - c)


# ---------------------------------------------------------------------------
# H^0 and H^2

def boundary_cohomology_factors(n: int, k: int, q: int, p: int) -> tuple[IntPoly, IntPoly]:
    """``(det(1-FT|H^0), det(1-FT|H^2))`` from the trivial summand of ``Sym^k``."""
    if trivial_multiplicity(monodromy_algebra(n, p), k) == 0:
        return IntPoly.one(), IntPoly.one()
    w = k * (n - 1)
    return IntPoly.linear(q ** (w // 2)), IntPoly.linear(q ** ((w + 2) // 2))


# ---------------------------------------------------------------------------
# extraction

@dataclass
class TrivialFactorBundle:
    n: int
    k: int
    q: int
    p: int
    det0: IntPoly
    detInf: IntPoly | None
    h0: IntPoly
    h2: IntPoly
    exceptional: bool
    inf_source: str  # "closed-form", "empirical", or "unavailable"
    census: OrbitCensus | None = None


def trivial_factor_bundle(n: int, k: int, q: int, p: int) -> TrivialFactorBundle:
    det0 = local_factor_at_zero(n, k, q)
    h0, h2 = boundary_cohomology_factors(n, k, q, p)
    exceptional = p == 2 and n % 2 == 1 and k % 2 == 0 and k > 0
    census = None
    if (q - 1) % n == 0:
        census = tuple_census(n, k, q, p)
        detInf, source = local_factor_at_infinity(n, k, q, p, census), "closed-form"
    else:
        detInf, source = None, "unavailable"
    return TrivialFactorBundle(n, k, q, p, det0, detInf, h0, h2, exceptional, source, census)


def _times_boundary_over_det0(L: RatFunc, bundle: TrivialFactorBundle) -> IntPoly:
    top = L.num * bundle.h0 * bundle.h2
    return top.exact_div(L.den).exact_div(bundle.det0)


def extract_nontrivial_factor(L: RatFunc, bundle: TrivialFactorBundle, allow_empirical: bool = True) -> IntPoly:
    """``K = L h0 h2 / (det0 detInf)``; every division must be exact."""
    partial = _times_boundary_over_det0(L, bundle)
    if bundle.detInf is None:
        if not allow_empirical:
            raise ValueError("no closed-form factor at infinity and empirical fallback disabled")
        bundle.detInf = empirical_infinity_factor(partial, bundle.q, bundle.k * (bundle.n - 1) + 1)
        bundle.inf_source = "empirical"
    return partial.exact_div(bundle.detInf)


def _integer_poly_from_roots(roots: list[complex], prec_digits: int) -> IntPoly:
    with mpmath.workdps(prec_digits):
        coeffs = [mpmath.mpc(1)]
        for r in roots:
            r = mpmath.mpc(r)
            nxt = coeffs + [mpmath.mpc(0)]
            for i in range(len(coeffs)):
                nxt[i + 1] -= r * coeffs[i]
            coeffs = nxt
        out = []
        for c in coeffs:
            v = int(mpmath.nint(c.real))
            if abs(c.real - v) > 0.25 or abs(c.imag) > 0.25:
                raise ArithmeticError("sub-weight roots do not form an integer polynomial")
            out.append(v)
    return IntPoly(out)


def empirical_infinity_factor(P: IntPoly, q: int, weight: int) -> IntPoly:
    """The factor of ``P`` collecting reciprocal roots of weight below ``weight``.

    The rounded candidate is accepted only if it divides ``P`` exactly.
    """
    split = weight_split(P, q)
    roots = [r for r, w in zip(split.roots, split.weights) if w is not None and w < weight]
    if not roots:
        return IntPoly.one()
    digits = max(len(str(abs(c))) for c in P.coeffs)
    # refine low roots at high precision before rounding
    with mpmath.workdps(2 * digits + 40):
        poly = [int(c) for c in reversed(P.coeffs)]
        refined = []
        for r in roots:
            z = mpmath.findroot(lambda t: mpmath.polyval(poly, t), mpmath.mpc(1 / r))
            refined.append(1 / z)
        cand = _integer_poly_from_roots(refined, 2 * digits + 40)
    if not cand.divides(P):
        raise NotDivisibleError("empirical factor at infinity does not divide the polynomial")
    return cand


# ---------------------------------------------------------------------------
# purity

@dataclass
class PurityReport:
    weight: int
    q: int
    degree: int
    max_rel_error: float
    violations: list[complex] = dc_field(default_factory=list)
    functional_equation: bool = True
    sign: int = 1

    @property
    def ok(self) -> bool:
        return not self.violations and self.functional_equation


def purity_check(K: IntPoly, q: int, w: int, rel_tol: float = 1e-6) -> PurityReport:
    """Reciprocal roots have ``|alpha| = q^(w/2)`` and coefficients satisfy ``c_(D-i) q^(w i) = +-c_D c_i``."""
    D = K.degree
    target = float(q) ** (w / 2)
    violations = []
    worst = 0.0
    for a in reciprocal_roots(K):
        err = abs(abs(a) / target - 1)
        worst = max(worst, err)
        if err > rel_tol:
            violations.append(a)
    c = K.coeffs
    fe = True
    sign = 1
    if D:
        # c_D^2 = q^(wD) when the root multiset is stable under alpha -> q^w/alpha
        cD = c[D]
        if cD * cD != q ** (w * D):
            fe = False
        else:
            sign = 1 if cD > 0 else -1
            fe = all(c[D - i] * q ** (w * i) == cD * c[i] for i in range(D + 1))
    return PurityReport(w, q, D, worst, violations, fe, sign)
