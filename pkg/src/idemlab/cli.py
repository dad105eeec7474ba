"""Command-line front end: ``idemlab info|covers|idem|verify-table|oracle``.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import cache as cache_mod
from .abelian import quotient_map
from .covers import idem_inf, idem_iter, idem_set, sur_cov_classes, sur_gensub_classes
from .groupfile import GroupFileError, load_group, parse_group_file
from .grpcore import CapExceeded, DEFAULT_SUBGROUP_CAP, GroupError
from .homlab import DEFAULT_BUDGET, SearchBudgetExceeded
from .homology import h2_loc
from .report import (
    Caps,
    abelian_json,
    compare_row,
    corpus_dir,
    group_record,
    info_record,
    load_table,
    member_label,
    skip_record,
)

log = logging.getLogger("idemlab")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str]
    cap_order: int
    budget: int
    cache_dir: str | None
    output: str | None
    jobs: int

    def __post_init__(self):
        if self.cap_order < 1 or self.budget < 1 or self.jobs < 1:
            raise UsageError("caps, budget and jobs must be positive")

    @property
    def caps(self) -> Caps:
        return Caps(self.cap_order, self.budget)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(cfg: RunConfig, obj) -> None:
    text = _dump(obj)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _say(cfg: RunConfig, line: str) -> None:
    # human-readable lines go to stdout only when JSON goes to a file
    print(line, file=sys.stdout if cfg.output else sys.stderr)


def _setup_cache(cache_dir: str | None, disabled: bool) -> None:
    if disabled:
        cache_mod.set_active_cache(None)
        return
    root = Path(cache_dir) if cache_dir else cache_mod.default_cache_dir()
    cache_mod.set_active_cache(cache_mod.Cache(root))


def _load(path: str, cap: int):
    try:
        spec = parse_group_file(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    return spec, load_group(spec, cap=cap)


# -- subcommands ------------------------------------------------------------------


def cmd_info(cfg: RunConfig) -> int:
    spec, G = _load(cfg.inputs[0], cfg.cap_order)
    _emit(cfg, {"command": "info", "record": info_record(G, spec.name)})
    return EXIT_OK


def cmd_covers(cfg: RunConfig) -> int:
    spec, G = _load(cfg.inputs[0], cfg.cap_order)
    H, _ = h2_loc(G)
    classes = sur_gensub_classes(G, budget=cfg.budget)
    covers = {id(c) for c in sur_cov_classes(G, budget=cfg.budget)}
    out = []
    for c in classes:
        out.append(
            {
                "domain_order": c.domain.order,
                "kernel": abelian_json(quotient_map(H, c.kernel_subgroup).quotient),
                "differential_kernel_order": c.kernel_subgroup.order,
                "differential_kernel_generators": c.kernel_subgroup.generators.tolist(),
                "is_cellular_cover": id(c) in covers,
            }
        )
    _emit(
        cfg,
        {
            "command": "covers",
            "group": spec.name,
            "order": G.order,
            "h2_loc": abelian_json(H),
            "sur_gensub": out,
            "sur_gensub_count": len(out),
            "sur_cov_count": len(covers),
        },
    )
    return EXIT_OK


def cmd_idem(cfg: RunConfig, iterate: int | None, inf: bool) -> int:
    spec, G = _load(cfg.inputs[0], cfg.cap_order)
    kw = dict(cap=cfg.cap_order, budget=cfg.budget)
    if inf:
        groups, depth = idem_inf(G, **kw)
        mode = "inf"
    elif iterate:
        groups, depth, mode = idem_iter(G, iterate, **kw), iterate, "iterate"
    else:
        groups, depth, mode = [c.domain for c in idem_set(G, **kw)], 1, "idem"
    members = sorted(
        ({"order": X.order, "invariant": member_label(X, G, spec.name)} for X in groups),
        key=lambda m: (m["order"], m["invariant"]),
    )
    _emit(
        cfg,
        {
            "command": "idem",
            "group": spec.name,
            "order": G.order,
            "mode": mode,
            "depth": depth,
            "size": len(members),
            "members": members,
        },
    )
    return EXIT_OK


def _verify_one(args):
    path, caps, cache_root = args
    if cache_root is not None:
        cache_mod.set_active_cache(cache_mod.Cache(cache_root))
    t0 = time.perf_counter()
    spec = parse_group_file(path)
    try:
        G = load_group(spec, cap=caps.order)
    except CapExceeded as exc:
        return skip_record(spec.name, None, str(exc)), time.perf_counter() - t0
    try:
        rec = group_record(G, spec.name, caps)
    except (CapExceeded, SearchBudgetExceeded) as exc:
        return skip_record(spec.name, G.order, str(exc)), time.perf_counter() - t0
    return rec, time.perf_counter() - t0


def _read_expected(path: str | None) -> dict:
    if path is None:
        return load_table()
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read expected table {path}: {exc}") from exc
    return data.get("rows", data)


def cmd_verify_table(cfg: RunConfig, expected_path: str | None) -> int:
    root = Path(cfg.inputs[0]) if cfg.inputs else corpus_dir()
    if not root.is_dir():
        raise UsageError(f"{root} is not a directory")
    files = sorted(str(p) for p in root.glob("*.grp"))
    expected = _read_expected(expected_path)
    warnings = []
    if not files:
        warnings.append(f"no group files in {root}")
    # parse everything first so input errors surface before any work
    for f in files:
        parse_group_file(f)
    store = cache_mod.active_cache()
    cache_root = str(store.root) if store is not None else None
    jobs = [(f, cfg.caps, cache_root) for f in files]
    if cfg.jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            results = list(ex.map(_verify_one, jobs))
    else:
        results = [_verify_one(j) for j in jobs]
    records = []
    summary = {"pass": 0, "fail": 0, "skip": 0}
    for rec, dt in results:
        if rec.get("status") == "SKIP":
            summary["skip"] += 1
            records.append(rec)
            _say(cfg, f"SKIP {rec['group']}: {rec['reason']}")
            continue
        row = expected.get(rec["group"])
        ok, diff = compare_row(rec, row)
        if row is None:
            warnings.append(f"no expected row for {rec['group']}")
        out = dict(rec)
        out["status"] = "PASS" if ok else "FAIL"
        out["table_row_expected"] = row
        out["match"] = ok
        out["diff"] = diff
        records.append(out)
        summary["pass" if ok else "fail"] += 1
        line = f"{out['status']} {rec['group']} |Idem|={rec['idem_size']} H2={rec['h2']['invariant_factors']} ({dt:.2f}s)"
        _say(cfg, line)
        for d in diff:
            _say(cfg, f"    {d}")
    for w in warnings:
        _say(cfg, f"warning: {w}")
    _say(cfg, f"{summary['pass']} passed, {summary['fail']} failed, {summary['skip']} skipped")
    _emit(
        cfg,
        {
            "command": "verify-table",
            "caps": {"order": cfg.cap_order, "budget": cfg.budget},
            "records": records,
            "summary": summary,
            "warnings": warnings,
        },
    )
    return EXIT_FAIL if summary["fail"] else EXIT_OK


def cmd_oracle(cfg: RunConfig, suite: str) -> int:
    from .oracles import SUITES

    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}; available: {', '.join(sorted(SUITES))}")
    t0 = time.perf_counter()
    res = SUITES[suite]()
    status = "PASS" if res.ok else "FAIL"
    _say(cfg, f"{status} {suite}: {res.checks} checks, {len(res.failures)} failures ({time.perf_counter() - t0:.1f}s)")
    for f in res.failures:
        _say(cfg, f"    {f}")
    _emit(cfg, {"command": "oracle", "suite": suite, "checks": res.checks, "failures": res.failures, "status": status})
    return EXIT_OK if res.ok else EXIT_FAIL


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap-order", type=int, default=DEFAULT_SUBGROUP_CAP, help="largest group order analysed")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="hom-search budget (partial-map extensions)")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers for verify-table")
    common.add_argument("--cache-dir", default=None, help="cache directory (default $IDEMLAB_CACHE or .idemlab-cache)")
    common.add_argument("--no-cache", action="store_true", help="disable the on-disk cache")
    common.add_argument("--json", dest="output", metavar="PATH", default=None, help="write the JSON report to PATH")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="idemlab", description="Cellular covers and Idem(G) for finite groups.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("info", parents=[common], help="order, H1, H2, H2loc and structural flags")
    s.add_argument("group_file")
    s = sub.add_parser("covers", parents=[common], help="surjective generalized subgroups and covers")
    s.add_argument("group_file")
    s = sub.add_parser("idem", parents=[common], help="Idem(G), iterated or to the fixpoint")
    s.add_argument("group_file")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--iterate", type=int, metavar="N")
    g.add_argument("--inf", action="store_true")
    s = sub.add_parser("verify-table", parents=[common], help="check a corpus against the expected table rows")
    s.add_argument("corpus", nargs="?", default=None, help="directory of .grp files (default: bundled corpus)")
    s.add_argument("--expected", default=None, help="JSON file of expected rows (default: bundled table)")
    s = sub.add_parser("oracle", parents=[common], help="run a brute-force property suite")
    s.add_argument("suite")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    inputs = []
    if getattr(args, "group_file", None):
        inputs = [args.group_file]
    elif getattr(args, "corpus", None):
        inputs = [args.corpus]
    try:
        cfg = RunConfig(args.command, inputs, args.cap_order, args.budget, args.cache_dir, args.output, args.jobs)
        _setup_cache(args.cache_dir, args.no_cache)
        if args.command == "info":
            return cmd_info(cfg)
        if args.command == "covers":
            return cmd_covers(cfg)
        if args.command == "idem":
            if args.iterate is not None and args.iterate < 1:
                raise UsageError("--iterate needs a positive integer")
            return cmd_idem(cfg, args.iterate, args.inf)
        if args.command == "verify-table":
            return cmd_verify_table(cfg, args.expected)
        return cmd_oracle(cfg, args.suite)
    except GroupFileError as exc:
        print(f"idemlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"idemlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, SearchBudgetExceeded) as exc:
        # the input is outside what the configured caps allow
        print(f"idemlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GroupError as exc:
        print(f"idemlab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
