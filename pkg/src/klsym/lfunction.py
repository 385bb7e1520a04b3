"""Global power sums, the L-series, and exact rational reconstruction of L(k,n,T)."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

import mpmath
import numpy as np

from .cyclotomic import CycBatch
from .errors import BudgetExceeded, IntegralityError, ReconstructionError
from .frobenius import CharPoly, charpoly_dual, charpoly_from_power_sums, charpoly_of_power, complete_homogeneous
from .fields import orbit_representatives
from .polys import IntPoly, RatFunc, _rational_gcd
from .tower import KloostermanTower

__all__ = [
    "PowerSumSequence",
    "LocalEngine",
    "global_power_sum",
    "series_from_power_sums",
    "rational_reconstruct",
    "WeightSplit",
    "weight_split",
    "LResult",
    "compute_l_function",
]

log = logging.getLogger(__name__)

DEFAULT_SLACK = 3


@dataclass
class PowerSumSequence:
    """``S[m-1]`` is the global trace sum over ``F_{q^m}^*`` of Frobenius on ``Sym^k``."""

    k: int
    n: int
    q: int
    S: list[int]

    def __len__(self) -> int:
        return len(self.S)


class LocalEngine:
    """Frobenius data at all closed points, organized by degree.

    ``route="dual"`` needs Kloosterman tables only up to extension degree
    ``d * (n // 2)``; ``route="full"`` consumes ``p_1..p_(n-1)``.  Points
    with identical power-sum vectors share one characteristic polynomial and
    carry a multiplicity weight.
    """

    def __init__(self, tower: KloostermanTower, route: str = "dual"):
        if route not in ("dual", "full"):
            raise ValueError(f"unknown route {route!r}")
        self.tower = tower
        self.route = route
        self._base: dict[int, tuple[CharPoly, list[int]]] = {}
        self._powers: dict[tuple[int, int], CharPoly] = {}
        self._traces: dict[tuple[int, int], list[int]] = {}

    @property
    def n(self) -> int:
        return self.tower.n

    @property
    def q(self) -> int:
        return self.tower.q

    @property
    def p(self) -> int:
        return self.tower.p

    def needed_power_sums(self) -> int:
        n = self.n
        if n == 1:
            return 1
        return n // 2 if self.route == "dual" else n - 1

    def base(self, d: int) -> tuple[CharPoly, list[int]]:
        """Batched characteristic data of the distinct degree-``d`` points, with multiplicities."""
        if d not in self._base:
            tower = self.tower
            field = tower.field(d)
            reps, degrees = orbit_representatives(field, tower.q)
            indices = field.exp_table[reps[degrees == d]]
            count = self.needed_power_sums()
            rows = np.hstack([tower.values_at(d, indices, j) for j in range(1, count + 1)])
            uniq, weights = np.unique(rows, axis=0, return_counts=True)
            width = rows.shape[1] // count
            sign = (-1) ** (self.n - 1)
            ps = [CycBatch(self.p, uniq[:, j * width : (j + 1) * width].astype(object) * sign) for j in range(count)]
            if self.route == "dual":
                c = charpoly_dual(ps, self.n, d, self.q)
            else:
                c = charpoly_from_power_sums(ps, self.n, d, self.q)
            self._base[d] = (c, [int(w) for w in weights])
        return self._base[d]

    def power(self, d: int, r: int) -> CharPoly:
        key = (d, r)
        if key not in self._powers:
            self._powers[key] = charpoly_of_power(self.base(d)[0], r)
        return self._powers[key]

    def traces(self, m: int, kmax: int) -> list[int]:
        """``[S_m(k) for k in 0..kmax]``."""
        for (mm, kk), vals in self._traces.items():
            if mm == m and kk >= kmax:
                return vals[: kmax + 1]
        store = self.tower.store
        cached = store.load_power_sums(self.p, self.tower.a, self.n, m) if hasattr(store, "load_power_sums") else None
        if cached is not None and len(cached) > kmax:
            self._traces[(m, len(cached) - 1)] = cached
            return cached[: kmax + 1]
        totals = [None] * (kmax + 1)
        for d in range(1, m + 1):
            if m % d:
                continue
            c = self.power(d, m // d)
            _, weights = self.base(d)
            hs = complete_homogeneous(c, kmax)
            for k, h in enumerate(hs):
                contrib = h.weighted_sum(weights) * d
                totals[k] = contrib if totals[k] is None else totals[k] + contrib
        out = []
        for k, total in enumerate(totals):
            value = total.as_integer()
            if value is None:
                raise IntegralityError(f"S_{m} for k={k} is not rational: {total}")
            _check_bound(value, k, self.n, self.q, m)
            out.append(value)
        self._traces[(m, kmax)] = out
        if hasattr(store, "store_power_sums") and self.route == "dual":
            store.store_power_sums(self.p, self.tower.a, self.n, m, out)
        return out


def _check_bound(value: int, k: int, n: int, q: int, m: int) -> None:
    # |S| <= (q^m-1) C(k+n-1,n-1) q^(mk(n-1)/2) (1+1e-6), compared after squaring
    base = (q**m - 1) * comb(k + n - 1, n - 1)
    lhs = value * value * 10**12
    rhs = base * base * q ** (m * k * (n - 1)) * (10**6 + 1) ** 2
    if lhs > rhs:
        raise AssertionError(f"S_{m}={value} violates the Weil bound for k={k}")


def global_power_sum(k: int, n: int, q: int, m: int, engine: LocalEngine) -> int:
    if engine.n != n or engine.q != q:
        raise ValueError("engine built for different parameters")
    return engine.traces(m, k)[k]


def series_from_power_sums(seq: PowerSumSequence) -> list[int]:
    """Coefficients ``a_0..a_M`` of ``exp(sum S_m T^m / m)`` via ``m a_m = sum S_i a_(m-i)``."""
    a = [1]
    for m in range(1, len(seq.S) + 1):
        total = sum(seq.S[i - 1] * a[m - i] for i in range(1, m + 1))
        quot, rem = divmod(total, m)
        if rem:
            raise IntegralityError(f"L-series coefficient {m} is not an integer")
        a.append(quot)
    return a


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction], nvars: int) -> list[Fraction] | None:
    """One solution of a possibly singular system (free variables set to 0), or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    row = 0
    for col in range(nvars):
        piv = next((i for i in range(row, len(aug)) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for i in range(len(aug)):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    for i in range(row, len(aug)):
        if aug[i][nvars] != 0:
            return None
    sol = [Fraction(0)] * nvars
    for i, col in enumerate(pivots):
        sol[col] = aug[i][nvars]
    return sol


def rational_reconstruct(prefix: list[int], max_num_deg: int, max_den_deg: int, slack: int = DEFAULT_SLACK) -> RatFunc:
    """Smallest-denominator ``num/den`` whose expansion matches all of ``prefix``.

    The denominator is solved from coefficients ``N+1..N+D``; everything else
    in the prefix, including the final ``slack`` terms, only verifies.
    """
    if prefix[0] != 1:
        raise ReconstructionError("series must start with 1")
    if len(prefix) < max_num_deg + max_den_deg + 1 + slack:
        raise ReconstructionError("prefix too short for the requested degrees and slack")
    c = [Fraction(v) for v in prefix]
    L = len(prefix)
    N = max_num_deg
    for D in range(0, max_den_deg + 1):
        rows = [[c[i - j] if i - j >= 0 else Fraction(0) for j in range(1, D + 1)] for i in range(N + 1, N + D + 1)]
        rhs = [-c[i] for i in range(N + 1, N + D + 1)]
        sol = _solve_exact(rows, rhs, D) if D else []
        if sol is None:
            continue
        den = [Fraction(1)] + sol
        prod = [sum(den[j] * c[i - j] for j in range(0, min(i, D) + 1)) for i in range(L)]
        if any(prod[i] != 0 for i in range(N + 1, L)):
            continue
        return _reduce_fractional(prod[: N + 1], den)
    raise ReconstructionError(f"no rational function with deg num <= {N}, deg den <= {max_den_deg} fits")


def _reduce_fractional(num: list[Fraction], den: list[Fraction]) -> RatFunc:
    g = _rational_gcd(num, den) if len(den) > 1 else [Fraction(1)]
    g = [v / g[0] for v in g]

    def divide(f: list[Fraction]) -> list[Fraction]:
        f = list(f)
        out = [Fraction(0)] * max(1, len(f) - len(g) + 1)
        for i in range(len(out)):
            coef = f[i]
            out[i] = coef
            for j, b in enumerate(g):
                if i + j < len(f):
                    f[i + j] -= coef * b
        if any(f):
            raise ReconstructionError("gcd does not divide exactly")
        return out

    n2, d2 = divide(num), divide(den)
    if any(v.denominator != 1 for v in n2 + d2):
        raise IntegralityError("reconstructed rational function has non-integer coefficients")
    return RatFunc(IntPoly(int(v) for v in n2), IntPoly(int(v) for v in d2))


@dataclass
class WeightSplit:
    """Root moduli of a polynomial grouped by weight ``w``, where ``|alpha| = q^(w/2)``."""

    degrees: dict[Fraction, int]
    unmatched: list[float] = dc_field(default_factory=list)
    roots: list[complex] = dc_field(default_factory=list, repr=False)
    weights: list[Fraction | None] = dc_field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return not self.unmatched


def reciprocal_roots(P: IntPoly) -> list[complex]:
    """``alpha`` with ``P(T) = prod (1 - alpha T)``."""
    if P.degree == 0:
        return []
    digits = max(len(str(abs(c))) for c in P.coeffs)
    with mpmath.workdps(max(40, 2 * digits + 20)):
        # coefficients read leading-first give prod (x - alpha) directly
        roots = mpmath.polyroots([int(c) for c in P.coeffs], maxsteps=400, extraprec=4 * digits + 60)
        return [complex(r) for r in roots]


def weight_split(P: IntPoly, q: int, rel_tol: float = 1e-6) -> WeightSplit:
    degrees: dict[Fraction, int] = {}
    unmatched: list[float] = []
    weights: list[Fraction | None] = []
    roots = reciprocal_roots(P)
    lq = float(np.log(q))
    for a in roots:
        w_est = 2 * float(np.log(abs(a))) / lq
        w = Fraction(round(2 * w_est), 2)
        target = float(q) ** (float(w) / 2)
        if abs(abs(a) / target - 1) <= rel_tol:
            degrees[w] = degrees.get(w, 0) + 1
            weights.append(w)
        else:
            unmatched.append(w_est)
            weights.append(None)
    return WeightSplit(dict(sorted(degrees.items())), unmatched, roots, weights)


@dataclass
class LResult:
    k: int
    n: int
    q: int
    L: RatFunc
    M: int
    power_sums: list[int]
    prefix: list[int]
    slack: int


def _fit(prefix: list[int], slack: int) -> RatFunc | None:
    M = len(prefix) - 1
    budget = M - slack
    if budget < 0:
        return None
    for D in range(0, budget + 1):
        try:
            return rational_reconstruct(prefix, budget - D, D, slack)
        except ReconstructionError:
            continue
    return None


def compute_l_function(
    engine: LocalEngine,
    k: int,
    m_start: int = 4,
    m_max: int = 20,
    slack: int = DEFAULT_SLACK,
) -> LResult:
    """Escalate the number of power sums by one until two consecutive fits agree."""
    n, q = engine.n, engine.q
    S: list[int] = []
    prev: RatFunc | None = None
    M = 0
    while True:
        M += 1
        if M > m_max:
            raise BudgetExceeded(f"L({k},{n},T) over F_{q} did not stabilize with m <= {m_max}")
        S.append(global_power_sum(k, n, q, M, engine))
        if M < m_start:
            continue
        prefix = series_from_power_sums(PowerSumSequence(k, n, q, S))
        fit = _fit(prefix, slack)
        log.debug("k=%d M=%d fit=%s", k, M, fit)
        if fit is not None and fit == prev:
            return LResult(k, n, q, fit, M, list(S), prefix, slack)
        prev = fit
