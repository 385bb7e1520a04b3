"""Invariant suites behind ``klsym verify``."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Callable

from .padic import congruence_check, d_series, partition_count, prop_exponent, stability_check
from .pipeline import EngineRegistry, analyze, prime_power
from .reptheory import (
    AlgebraId,
    jordan_kernel_dimensions,
    kernel_dimensions,
    monodromy_algebra,
    symmetric_power_weights,
    trivial_multiplicity,
    weyl_dimension,
    weyl_product_dimension,
)
from .trivial import boundary_cohomology_factors, composition_histogram, m_coefficients, order_n_roots, tuple_census

__all__ = ["Check", "SUITES", "run_suite"]


@dataclass
class Check:
    name: str
    params: dict
    passed: bool
    detail: str = ""

    def line(self) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        tail = f" ({self.detail})" if self.detail else ""
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} {params}{tail}"


@dataclass
class SuiteConfig:
    nmax: int = 5
    kmax: int = 8
    q: int | None = None
    n: int | None = None
    k: int | None = None
    m_max: int = 20
    registry: EngineRegistry = dc_field(default_factory=EngineRegistry)


def _three_way(n: int, k: int) -> tuple[bool, str]:
    top = k * (n - 1) // 2
    series = m_coefficients(n, k, k * (n - 1))
    hist = composition_histogram(n, k)
    comp = [hist.get(u, 0) - hist.get(u - 1, 0) for u in range(k * (n - 1) + 1)]
    sl2 = kernel_dimensions(symmetric_power_weights(n, k))
    jordan = jordan_kernel_dimensions(n, k)
    ok = series == comp
    for u in range(k * (n - 1) + 1):
        if u <= top:
            ok &= series[u] == sl2.get(u, 0) == jordan.get(u, 0)
        else:
            ok &= sl2.get(u, 0) == 0 and jordan.get(u, 0) == 0
    return ok, f"deg det0={sum(series[: top + 1])}"


def suite_mseries(cfg: SuiteConfig) -> list[Check]:
    out = []
    for n in range(2, cfg.nmax + 1):
        for k in range(0, cfg.kmax + 1):
            ok, detail = _three_way(n, k)
            out.append(Check("mseries.three_way", {"n": n, "k": k}, ok, detail))
    return out


def census_checks(n: int, q: int, k: int) -> list[Check]:
    p, _ = prime_power(q)
    params = {"n": n, "q": q, "k": k}
    try:
        base = tuple_census(n, k, q, p)
    except AssertionError as exc:
        return [Check("census.structure", params, False, str(exc))]
    out = [Check("census.structure", params, True, f"a={base.a} b={base.b} c={base.c}")]
    members = set(base.tuples)
    stable = all((t[-1],) + t[:-1] in members for t in base.tuples)
    out.append(Check("census.sigma_stable", params, stable))
    # odd n only ever consumes a; c can legitimately move with the root there
    key = (lambda c: (c.a, c.b, c.c)) if n % 2 == 0 else (lambda c: c.a)
    same = True
    for zeta in order_n_roots(q, p, n):
        same &= key(tuple_census(n, k, q, p, zeta=zeta)) == key(base)
    out.append(Check("census.root_independent", params, same))
    return out


def suite_census(cfg: SuiteConfig) -> list[Check]:
    cases = [(2, q, 10) for q in (3, 5, 7, 9, 11, 13)] + [(3, q, 6) for q in (4, 7, 13)]
    if cfg.q is not None and cfg.n is not None:
        cases = [(cfg.n, cfg.q, cfg.kmax)]
    out = []
    for n, q, kmax in cases:
        for k in range(0, kmax + 1):
            out.extend(census_checks(n, q, k))
    return out


def _analysis_cases(cfg: SuiteConfig) -> list[tuple[int, int, int]]:
    if cfg.q is not None and cfg.n is not None:
        ks = [cfg.k] if cfg.k is not None else range(cfg.kmax + 1)
        return [(cfg.n, cfg.q, k) for k in ks]
    return [(2, 3, k) for k in range(9)] + [(2, 5, k) for k in range(7)] + [(3, 7, k) for k in range(3)] + [(3, 4, k) for k in range(3)]


def suite_factorization(cfg: SuiteConfig) -> list[Check]:
    out = []
    for n, q, k in _analysis_cases(cfg):
        params = {"n": n, "q": q, "k": k}
        try:
            res = analyze(n, k, q, registry=cfg.registry, m_max=cfg.m_max)
            out.append(Check("factorization.identity", params, res.identity_holds(), f"K={list(res.K.coeffs)}"))
        except ArithmeticError as exc:
            out.append(Check("factorization.identity", params, False, str(exc)))
    return out


def suite_purity(cfg: SuiteConfig) -> list[Check]:
    out = []
    for n, q, k in _analysis_cases(cfg):
        res = analyze(n, k, q, registry=cfg.registry, m_max=cfg.m_max)
        rep = res.purity
        out.append(Check("purity.moduli", {"n": n, "q": q, "k": k}, not rep.violations, f"max rel err {rep.max_rel_error:.2e}"))
        out.append(Check("purity.functional_equation", {"n": n, "q": q, "k": k}, rep.functional_equation))
    return out


def suite_congruence(cfg: SuiteConfig) -> list[Check]:
    out = []
    base = analyze(2, 2, 3, registry=cfg.registry, m_max=cfg.m_max).K
    for k1 in (11, 29):
        K1 = analyze(2, k1, 3, registry=cfg.registry, m_max=cfg.m_max).K
        m, e = prop_exponent(k1, 2, 3)
        rep = congruence_check(K1, base, 3, e)
        out.append(Check("congruence.prop", {"p": 3, "n": 2, "k1": k1, "k2": 2, "m": m, "e": e}, rep.holds, f"valuations={rep.valuations}"))
    return out


def suite_padic(cfg: SuiteConfig) -> list[Check]:
    out = []
    for n in range(2, 9):
        d = d_series(n, 40)
        ok = all(d[j] == partition_count(j, n - 1) for j in range(41))
        out.append(Check("padic.d_series", {"n": n, "jmax": 40}, ok))
    for n in range(2, cfg.nmax + 1):
        for k in range(n, 11):
            rep = stability_check(n, k, 10)
            out.append(Check("padic.stability", {"n": n, "k": k, "r": 10}, rep.ok, str(rep.violations or "")))
    return out


def suite_repdims(cfg: SuiteConfig) -> list[Check]:
    out = [Check("repdims.g2_standard", {"a": 1, "b": 0}, weyl_dimension(AlgebraId("g2"), (1, 0)) == 7)]
    algs = [AlgebraId("so_even", m) for m in range(2, 6)] + [AlgebraId("so_odd", m) for m in range(1, 6)] + [AlgebraId("g2")]
    for alg in algs:
        dv = alg.dim_v
        ok = all(
            weyl_dimension(alg, k) == comb(k + dv - 1, dv - 1) - (comb(k + dv - 3, dv - 1) if k >= 2 else 0)
            for k in range(13)
        )
        out.append(Check("repdims.telescoping", {"alg": str(alg), "kmax": 12}, ok))
        cross = all(weyl_dimension(alg, k) == weyl_product_dimension(alg, k) for k in range(13))
        out.append(Check("repdims.product_formula", {"alg": str(alg), "kmax": 12}, cross))
    for alg in algs + [AlgebraId("sl", 3), AlgebraId("sl", 5), AlgebraId("sp", 2), AlgebraId("sp", 3)]:
        expect = (lambda k: int(k % 2 == 0)) if alg.symmetric_form else (lambda k: int(k == 0))
        ok = all(trivial_multiplicity(alg, k) == expect(k) for k in range(13))
        out.append(Check("repdims.trivial_multiplicity", {"alg": str(alg), "kmax": 12}, ok))
    # the H^0/H^2 factors are nontrivial exactly when the monodromy has a trivial summand
    agree = True
    for n in range(2, 9):
        for p in (2, 3, 5):
            for k in range(0, 9):
                h0, _ = boundary_cohomology_factors(n, k, p, p)
                agree &= (h0.degree == 1) == (trivial_multiplicity(monodromy_algebra(n, p), k) == 1)
    out.append(Check("repdims.corollary_agreement", {"nmax": 8, "kmax": 8}, agree))
    return out


SUITES: dict[str, Callable[[SuiteConfig], list[Check]]] = {
    "mseries": suite_mseries,
    "census": suite_census,
    "factorization": suite_factorization,
    "purity": suite_purity,
    "congruence": suite_congruence,
    "padic": suite_padic,
    "repdims": suite_repdims,
}


def run_suite(name: str, cfg: SuiteConfig | None = None) -> list[Check]:
    cfg = cfg or SuiteConfig()
    if name == "all":
        return [c for key in SUITES for c in SUITES[key](cfg)]
    return SUITES[name](cfg)
