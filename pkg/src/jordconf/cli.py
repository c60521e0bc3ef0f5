"""Command-line driver: run verification suites and export algebra catalogs."""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence

from .report import VerificationReport, report_emit
from .suites import RUNNERS, SUITES, Config, SuiteReport, _Stop

CATALOGS = ("J0", "J1", "J2", "JS1", "K2", "CK6", "JCK4", "JCK4_J3")


def run_suite(name: str, config: Optional[Config] = None) -> VerificationReport:
    """Run one suite (or "all") and return its report."""
    cfg = config or Config()
    cfg.validate()
    if name == "all":
        return _merge("all", cfg, [run_suite(s, cfg) for s in SUITES])
    if name not in RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    rep = SuiteReport(name, cfg.echo())
    rep.fail_fast = cfg.fail_fast
    start = time.perf_counter()
    try:
        RUNNERS[name](cfg, rep)
    except _Stop as stop:
        rep.note(f"stopped at the first failure ({stop.args[0]})")
    rep.wall_time = time.perf_counter() - start
    return rep


def _run_one(args) -> VerificationReport:
    name, cfg = args
    return run_suite(name, cfg)


def _merge(name: str, cfg: Config, reports: Sequence[VerificationReport]) -> VerificationReport:
    out = VerificationReport(name, cfg.echo())
    out.wall_time = 0.0
    for r in reports:
        out.extend(r)
        out.wall_time += r.wall_time or 0.0
    return out


def run_parallel(names: Sequence[str], cfg: Config, jobs: int) -> VerificationReport:
    """Run suites in worker processes; the merged report does not depend on scheduling."""
    cfg.validate()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        reports = list(pool.map(_run_one, [(n, cfg) for n in names]))
    return _merge("all", cfg, reports)


def build_catalog(name: str) -> Dict:
    from . import constructions as C
    from .conformal import to_catalog
    if name in ("J0", "J1", "J2"):
        alg = C.build_Jn(int(name[1]))
    elif name == "JS1":
        alg = C.build_JS1()
    elif name == "K2":
        alg = C.build_Kn(2)
    elif name == "CK6":
        alg = C.build_CK6()[0]
    elif name == "JCK4":
        alg = C.build_JCK4_from_CK6().algebra
    elif name == "JCK4_J3":
        alg = C.build_JCK4_in_J3()[0]
    else:
        raise ValueError(f"unknown catalog {name!r}; choose from {', '.join(CATALOGS)}")
    return to_catalog(alg)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="jordconf",
        description="Exact verification of Jordan and Lie conformal superalgebra identities.")
    p.add_argument("--suite", default="all", choices=SUITES + ("all",),
                   help="suite to run (default: all)")
    p.add_argument("--n", type=int, default=None,
                   help="restrict suites to this number of odd variables")
    p.add_argument("--tmin", type=int, default=-3, help="lowest mode in the coefficient window")
    p.add_argument("--tmax", type=int, default=3, help="highest mode in the coefficient window")
    p.add_argument("--max-tdeg", type=int, default=2, help="t-degree bound for monomial enumerations")
    p.add_argument("--max-ddeg", type=int, default=None, help="∂-degree bound for span membership")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p.add_argument("--samples", type=int, default=1000, help="number of sampled K_6 triples")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--fail-fast", action="store_true", help="stop a suite at its first failure")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for --suite all")
    p.add_argument("--timing", action="store_true", help="include wall time in the report")
    p.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    p.add_argument("--catalog", choices=CATALOGS, default=None,
                   help="print the catalog of a built algebra as JSON and exit")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.catalog:
        sys.stdout.write(json.dumps(build_catalog(args.catalog), indent=2, ensure_ascii=False) + "\n")
        return 0
    cfg = Config(n=args.n, tmin=args.tmin, tmax=args.tmax, max_tdeg=args.max_tdeg,
                 max_ddeg=args.max_ddeg, seed=args.seed, samples=args.samples,
                 fail_fast=args.fail_fast)
    try:
        cfg.validate()
    except ValueError as exc:
        print(f"jordconf: {exc}", file=sys.stderr)
        return 2
    if args.suite == "all" and args.jobs > 1:
        report = run_parallel(SUITES, cfg, args.jobs)
    else:
        report = run_suite(args.suite, cfg)
    text = report_emit(report, args.format, timing=args.timing)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
