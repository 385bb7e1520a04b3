"""Command-line entry point.

``klsym compute <what>`` emits canonical JSON, ``klsym verify <suite>`` prints
one PASS/FAIL line per check, and ``klsym report`` writes CSV tables with
matching figures.  The compute targets are also accepted at top level, so
``klsym factors ...`` is the same as ``klsym compute factors ...``.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from .cache import CacheError, DiskCache
from .errors import BudgetExceeded, IntegralityError, NotDivisibleError, ReconstructionError
from .fields import DEFAULT_FIELD_BUDGET, build_field
from .kloosterman import kl_table_convolution, kl_table_direct
from .lfunction import compute_l_function, reciprocal_roots
from .padic import congruence_check, limit_diagnostic
from .pipeline import EngineRegistry, analyze, prime_power
from .polys import IntPoly
from .reptheory import AlgebraId, weyl_dimension
from .trivial import trivial_factor_bundle
from .verify import SUITES, SuiteConfig, run_suite

__all__ = ["main", "canonical_json", "build_parser"]

log = logging.getLogger(__name__)

COMPUTE_TARGETS = ("kl-table", "lfunction", "factors", "nontrivial", "repdim", "padic")
EXIT_ERROR = 2


class UsageError(ValueError):
    """Bad parameter combination, reported as error JSON."""


# ---------------------------------------------------------------------------
# canonical JSON

def _encode(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, IntPoly):
        return [str(c) for c in obj.coeffs]
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return _encode(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    """Sorted keys, compact separators, every integer as a decimal string."""
    return json.dumps(_encode(obj), sort_keys=True, separators=(",", ":"))


def _emit(payload: dict, out: str | None) -> None:
    text = canonical_json(payload) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# parameter resolution

def _resolve_q(args) -> tuple[int, int, int]:
    if args.q is not None:
        p, a = prime_power(args.q)
        if args.p is not None and args.p != p:
            raise UsageError(f"q={args.q} is not a power of p={args.p}")
        return p, a, args.q
    if args.p is None:
        raise UsageError("give --q or --p (with optional --a)")
    p, a = prime_power(args.p)
    if a != 1:
        raise UsageError(f"p={args.p} is not prime")
    return args.p, args.a, args.p**args.a


def _require(args, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")


def _check_rank(n: int) -> None:
    if n < 2:
        raise UsageError(f"rank n={n} must be at least 2")


def _registry(args) -> EngineRegistry:
    store = None if args.no_cache else DiskCache(args.cache_dir)
    return EngineRegistry(budget=args.budget, store=store)


def _parse_ks(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------------------
# compute targets

def _compute_kl_table(args) -> dict:
    _require(args, "n")
    p, a, q = _resolve_q(args)
    if args.n < 1:
        raise UsageError("n must be positive")
    m = args.m or 1
    field = build_field(p, a * m, args.budget)
    store = None if args.no_cache else DiskCache(args.cache_dir)
    table = store.load(field, args.n, a, m) if store else None
    if table is None:
        route = kl_table_direct if args.method == "direct" else kl_table_convolution
        table = route(field, args.n, a)
        if store:
            store.store(table, m)
    values = [
        {"x": list(field.coeffs(idx)), "kl": list(map(int, table.coords[int(field.log_table[idx])]))}
        for idx in range(1, field.size)
    ]
    return {
        "p": p,
        "a": a,
        "q": q,
        "m": m,
        "n": args.n,
        "modulus": list(field.modulus),
        "generator": list(field.coeffs(field.generator)),
        "basis": f"coordinates in 1, zeta_{p}, ..., zeta_{p}^{max(p - 2, 0)}",
        "values": values,
    }


def _compute_lfunction(args) -> dict:
    _require(args, "n", "k")
    _check_rank(args.n)
    p, a, q = _resolve_q(args)
    engine = _registry(args).engine(p, a, args.n, args.method)
    res = compute_l_function(engine, args.k, m_max=args.m_max)
    return {
        "n": args.n,
        "k": args.k,
        "q": q,
        "num": res.L.num,
        "den": res.L.den,
        "m_used": res.M,
        "power_sums": res.power_sums,
    }


def _bundle_payload(bundle) -> dict:
    census = bundle.census
    return {
        "det0": bundle.det0,
        "detInf": bundle.detInf,
        "h0": bundle.h0,
        "h2": bundle.h2,
        "exceptional_pole": bundle.exceptional,
        "detInf_source": bundle.inf_source,
        "census": None if census is None else {"a": census.a, "b": census.b, "c": census.c},
    }


def _compute_factors(args) -> dict:
    _require(args, "n", "k")
    _check_rank(args.n)
    p, a, q = _resolve_q(args)
    if (q - 1) % args.n:
        raise UsageError(f"n={args.n} does not divide q-1={q - 1}; no closed-form factor at infinity")
    bundle = trivial_factor_bundle(args.n, args.k, q, p)
    return {"n": args.n, "k": args.k, "q": q, **_bundle_payload(bundle)}


def _compute_nontrivial(args) -> dict:
    _require(args, "n", "k")
    _check_rank(args.n)
    p, a, q = _resolve_q(args)
    res = analyze(args.n, args.k, q, registry=_registry(args), method=args.method, m_max=args.m_max)
    bundle = _bundle_payload(res.bundle)
    bundle["detInf"] = res.bundle.detInf if res.bundle.detInf is not None else res.P().exact_div(res.K * res.bundle.det0)
    rep = res.purity
    return {
        "n": args.n,
        "k": args.k,
        "q": q,
        "K": res.K,
        "degree": res.K.degree,
        "weight": res.weight,
        "num": res.L.num,
        "den": res.L.den,
        "identity_holds": res.identity_holds(),
        "purity": {
            "ok": rep.ok,
            "max_rel_error": float(f"{rep.max_rel_error:.3e}"),
            "functional_equation": rep.functional_equation,
            "sign": rep.sign,
        },
        **bundle,
    }


def _compute_repdim(args) -> dict:
    _require(args, "k")
    alg = AlgebraId.parse(args.alg)
    weight = (args.k, args.b) if alg.kind == "g2" else args.k
    if alg.kind != "g2" and args.b:
        raise UsageError("--b applies only to g2")
    return {"alg": str(alg), "weight": list(weight) if isinstance(weight, tuple) else weight, "dim": weyl_dimension(alg, weight)}


def _compute_padic(args) -> dict:
    _require(args, "n", "ks")
    _check_rank(args.n)
    p, a, q = _resolve_q(args)
    ks = _parse_ks(args.ks)
    registry = _registry(args)
    diag = limit_diagnostic(
        args.n, p, q, ks, args.r, args.precision,
        lambda k: analyze(args.n, k, q, registry=registry, method=args.method, m_max=args.m_max),
    )
    return {
        "n": args.n,
        "q": q,
        "ks": ks,
        "r": args.r,
        "precision": args.precision,
        "d_prefix": diag.d_prefix,
        "divisible": diag.divisible,
        "difference_valuations": diag.difference_valuations,
        "guaranteed": diag.guaranteed,
        "nondecreasing": diag.nondecreasing(),
        "K": {str(k): K for k, K in zip(ks, diag.K)},
    }


_COMPUTE = {
    "kl-table": _compute_kl_table,
    "lfunction": _compute_lfunction,
    "factors": _compute_factors,
    "nontrivial": _compute_nontrivial,
    "repdim": _compute_repdim,
    "padic": _compute_padic,
}


def run_compute(args) -> int:
    payload = _COMPUTE[args.target](args)
    _emit({"command": args.target, "result": payload}, args.out)
    return 0


# ---------------------------------------------------------------------------
# verify

def run_verify(args) -> int:
    q = None
    if args.q is not None or args.p is not None:
        _, _, q = _resolve_q(args)
    cfg = SuiteConfig(
        nmax=args.nmax,
        kmax=args.kmax,
        q=q,
        n=args.n,
        k=args.k,
        m_max=args.m_max,
        registry=_registry(args),
    )
    checks = run_suite(args.suite, cfg)
    lines = [c.line() for c in checks]
    failed = sum(not c.passed for c in checks)
    lines.append(f"{'PASS' if not failed else 'FAIL'} {args.suite}: {len(checks) - failed}/{len(checks)} checks")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return 0 if not failed else 1


# ---------------------------------------------------------------------------
# report

def _write_csv(path: Path, header: Sequence[str], rows: list[Sequence]) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def run_report(args) -> int:
    from . import plotting  # matplotlib only when a report is requested

    _require(args, "n")
    _check_rank(args.n)
    p, a, q = _resolve_q(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    registry = _registry(args)
    ks = _parse_ks(args.ks) if args.ks else list(range(args.kmax + 1))

    summary, coeffs, roots = [], [], {}
    results = {}
    for k in ks:
        res = analyze(args.n, k, q, registry=registry, method=args.method, m_max=args.m_max)
        results[k] = res
        b = res.bundle
        detInf = b.detInf if b.detInf is not None else res.P().exact_div(res.K * b.det0)
        summary.append({
            "k": k,
            "m_used": res.lresult.M,
            "deg_num": res.L.num.degree,
            "deg_den": res.L.den.degree,
            "deg_det0": b.det0.degree,
            "deg_detInf": detInf.degree,
            "deg_K": res.K.degree,
            "identity": res.identity_holds(),
            "purity_ok": res.purity.ok,
            "max_rel_error": f"{res.purity.max_rel_error:.3e}",
        })
        for name, poly in (("num", res.L.num), ("den", res.L.den), ("det0", b.det0), ("detInf", detInf), ("K", res.K)):
            coeffs.extend((k, name, i, str(c)) for i, c in enumerate(poly.coeffs))
        roots[k] = [complex(r) for r in reciprocal_roots(res.K)] if res.K.degree else []

    header = list(summary[0].keys()) if summary else ["k"]
    _write_csv(out_dir / "summary.csv", header, [[row[h] for h in header] for row in summary])
    _write_csv(out_dir / "coefficients.csv", ["k", "factor", "index", "coefficient"], coeffs)
    figures = [
        plotting.plot_normalized_roots(roots, q, args.n, out_dir / "roots.png"),
        plotting.plot_factor_degrees(summary, out_dir / "degrees.png"),
    ]
    if len(ks) >= 2:
        diffs = []
        for k1, k2 in zip(ks, ks[1:]):
            K1, K2 = results[k1].K, results[k2].K
            rep = congruence_check(K2, K1, p, 0)
            diffs.append(rep.valuations)
        _write_csv(
            out_dir / "valuations.csv",
            ["k_from", "k_to", "index", "valuation"],
            [(k1, k2, i, "inf" if v is None else v) for (k1, k2), row in zip(zip(ks, ks[1:]), diffs) for i, v in enumerate(row)],
        )
        figures.append(plotting.plot_valuations(ks, diffs, args.precision, out_dir / "valuations.png"))
    _emit(
        {"command": "report", "result": {"n": args.n, "q": q, "ks": ks, "files": sorted(str(f.name) for f in out_dir.iterdir())}},
        args.out,
    )
    return 0


# ---------------------------------------------------------------------------
# parser

def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("field and sheaf")
    g.add_argument("--p", type=int, help="characteristic")
    g.add_argument("--a", type=int, default=1, help="q = p^a when --q is absent")
    g.add_argument("--q", type=int, help="size of the base field")
    g.add_argument("--n", type=int, help="rank of the Kloosterman sheaf")
    g.add_argument("--k", type=int, help="symmetric power")
    r = parser.add_argument_group("resources")
    r.add_argument("--m-max", type=int, default=20, help="largest extension degree used for power sums")
    r.add_argument("--budget", type=int, default=DEFAULT_FIELD_BUDGET, help="largest field size built")
    r.add_argument("--cache-dir", default=".klcache")
    r.add_argument("--no-cache", action="store_true", help="do not read or write the on-disk cache")
    r.add_argument("--method", choices=("direct", "conv"), default="conv", help="Kloosterman table route")
    parser.add_argument("--out", help="write output here instead of stdout")
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="klsym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    comp = sub.add_parser("compute", help="compute one object and emit canonical JSON")
    comp.add_argument("target", choices=COMPUTE_TARGETS)
    _common(comp)
    comp.add_argument("--m", type=int, help="kl-table: extension degree over F_q")
    comp.add_argument("--alg", default="g2", help="repdim: sl(N), sp(N), so(N) or g2")
    comp.add_argument("--b", type=int, default=0, help="repdim: second g2 weight coordinate")
    comp.add_argument("--ks", help="padic: comma-separated increasing k values")
    comp.add_argument("--r", type=int, default=2, help="padic: trivial-zero depth checked")
    comp.add_argument("--precision", type=int, default=8, help="padic: valuation cap")

    ver = sub.add_parser("verify", help="run an invariant suite")
    ver.add_argument("suite", choices=(*SUITES, "all"))
    _common(ver)
    ver.add_argument("--nmax", type=int, default=5)
    ver.add_argument("--kmax", type=int, default=8)

    rep = sub.add_parser("report", help="CSV tables and figures over a range of k")
    _common(rep)
    rep.add_argument("--kmax", type=int, default=6)
    rep.add_argument("--ks", help="comma-separated k values (overrides --kmax)")
    rep.add_argument("--precision", type=int, default=8, help="valuation cap in the heat map")
    rep.add_argument("--out-dir", default="klsym-report")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] in COMPUTE_TARGETS:
        argv.insert(0, "compute")
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "compute":
            return run_compute(args)
        if args.command == "verify":
            return run_verify(args)
        return run_report(args)
    except (UsageError, ValueError, BudgetExceeded, NotDivisibleError, ReconstructionError, IntegralityError, CacheError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, None)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
