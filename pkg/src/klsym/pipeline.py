"""End-to-end computation of L(k,n,T), its trivial factors, and the pure factor K."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .fields import DEFAULT_FIELD_BUDGET
from .lfunction import DEFAULT_SLACK, LocalEngine, LResult, WeightSplit, compute_l_function, weight_split
from .polys import IntPoly
from .tower import KloostermanTower, TableStore
from .trivial import PurityReport, TrivialFactorBundle, extract_nontrivial_factor, purity_check, trivial_factor_bundle

__all__ = ["Analysis", "EngineRegistry", "analyze", "default_registry", "prime_power"]

log = logging.getLogger(__name__)


def prime_power(q: int) -> tuple[int, int]:
    """``(p, a)`` with ``q = p^a``."""
    if q < 2:
        raise ValueError(f"q={q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    a, r = 0, q
    while r % p == 0:
        r //= p
        a += 1
    if r != 1:
        raise ValueError(f"q={q} is not a prime power")
    return p, a


class EngineRegistry:
    """One :class:`LocalEngine` per ``(p, a, n, method)`` so runs over many ``k`` share tables."""

    def __init__(self, budget: int = DEFAULT_FIELD_BUDGET, store: TableStore | None = None):
        self.budget = budget
        self.store = store
        self._engines: dict[tuple, LocalEngine] = {}

    def engine(self, p: int, a: int, n: int, method: str = "conv", route: str = "dual") -> LocalEngine:
        key = (p, a, n, method, route)
        if key not in self._engines:
            tower = KloostermanTower(p, a, n, method=method, budget=self.budget, store=self.store)
            self._engines[key] = LocalEngine(tower, route=route)
        return self._engines[key]

    def clear(self) -> None:
        self._engines.clear()


_DEFAULT = EngineRegistry()


def default_registry() -> EngineRegistry:
    return _DEFAULT


@dataclass
class Analysis:
    n: int
    k: int
    p: int
    q: int
    lresult: LResult
    bundle: TrivialFactorBundle
    K: IntPoly
    purity: PurityReport
    split: WeightSplit

    @property
    def L(self):
        return self.lresult.L

    @property
    def weight(self) -> int:
        return self.k * (self.n - 1) + 1

    def identity_holds(self) -> bool:
        """``L h0 h2 == K det0 detInf`` as rational functions, checked by cross-multiplication."""
        b = self.bundle
        lhs = self.L.num * b.h0 * b.h2
        rhs = self.K * b.det0 * b.detInf * self.L.den
        return lhs == rhs

    def P(self) -> IntPoly:
        """``K det0 detInf``."""
        return self.K * self.bundle.det0 * self.bundle.detInf


def analyze(
    n: int,
    k: int,
    q: int,
    registry: EngineRegistry | None = None,
    method: str = "conv",
    m_max: int = 20,
    slack: int = DEFAULT_SLACK,
    allow_empirical: bool = True,
) -> Analysis:
    p, a = prime_power(q)
    registry = registry or _DEFAULT
    engine = registry.engine(p, a, n, method)
    lres = compute_l_function(engine, k, m_max=m_max, slack=slack)
    bundle = trivial_factor_bundle(n, k, q, p)
    K = extract_nontrivial_factor(lres.L, bundle, allow_empirical=allow_empirical)
    w = k * (n - 1) + 1
    report = purity_check(K, q, w)
    split = weight_split(K, q)
    log.info("n=%d k=%d q=%d L=%s K=%s", n, k, q, lres.L, K)
    return Analysis(n, k, p, q, lres, bundle, K, report, split)
