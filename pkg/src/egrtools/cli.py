"""Command-line front end: ``egr <command> ...``.

Exit codes: 0 pass/feasible/found, 1 a check failed or the case is
infeasible, 2 usage or parse error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Optional

from . import cases, lemmas
from .cycles import INFINITE, EgrParams, girth, is_egr, lambda_profile
from .errors import EgrError, MalformedEncoding
from .graph import GRAPH6_HEADER, is_regular, parse_graph6
from .search import SearchOptions, search_egr

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3


class UsageError(Exception):
    pass


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def _load_graphs(source: str) -> list[tuple[str, str]]:
    """(label, graph6 text) pairs from a file of graph6 lines or one inline string."""
    if os.path.isfile(source):
        with open(source) as fh:
            lines = [ln.strip() for ln in fh]
        out = []
        for i, ln in enumerate(lines, start=1):
            if not ln or ln == GRAPH6_HEADER:
                continue
            out.append((f"{source}:{i}", ln))
        return out
    return [(source, source)]


def _describe_graph(g: Graph) -> dict:
    gi = girth(g)
    info = {"order": g.order, "size": g.size, "degree": is_regular(g),
            "girth": None if gi is INFINITE else gi}
    if gi is not INFINITE:
        prof = lambda_profile(g)
        counts = sorted(set(prof.edge_counts.values()))
        info["lambda_range"] = [counts[0], counts[-1]] if counts else None
        info["shortest_cycles"] = prof.total_cycles
    p = is_egr(g)
    info["egr"] = None if p is None else str(p)
    return info


def cmd_check(args) -> tuple[dict, int]:
    items = []
    code = EXIT_OK
    for label, text in _load_graphs(args.graph):
        try:
            g = parse_graph6(text)
        except MalformedEncoding as exc:
            items.append({"input": label, "error": str(exc), "verdict": "fail"})
            code = EXIT_FAIL
            continue
        info = _describe_graph(g)
        info["input"] = label
        info["verdict"] = info["egr"] if info["egr"] else "fail"
        if not info["egr"]:
            code = EXIT_FAIL
        items.append(info)
    verdict = "pass" if code == EXIT_OK else "fail"
    return {"results": items, "verdict": verdict}, code


def cmd_lemmas(args) -> tuple[dict, int]:
    items = []
    code = EXIT_OK
    candidates = [parse_graph6(c) for c in args.candidate]
    for label, text in _load_graphs(args.graph):
        try:
            g = parse_graph6(text)
        except MalformedEncoding as exc:
            items.append({"input": label, "error": str(exc), "verdict": "fail"})
            code = EXIT_FAIL
            continue
        found = is_egr(g)
        k = args.k if args.k is not None else (found.k if found else is_regular(g))
        lam = args.lam if args.lam is not None else (found.lam if found else None)
        if k is None or lam is None:
            raise UsageError(f"{label}: graph is not egr; pass --k and --lambda")
        gi = girth(g)
        params = EgrParams(g.order, k, 3 if gi is INFINITE else gi, lam)
        results = lemmas.run_suite(g, params, candidates, force_exhaustive=args.exhaustive,
                                   seed=args.seed, threads=args.threads)
        ok = all(r.passed for r in results)
        if not ok:
            code = EXIT_FAIL
        items.append({"input": label, "params": str(params), "checks": [r.to_dict() for r in results],
                      "verdict": "pass" if ok else "fail"})
    return {"results": items, "verdict": "pass" if code == EXIT_OK else "fail"}, code


def cmd_profiles(args) -> tuple[dict, int]:
    profs = cases.enumerate_layer_profiles(args.k, args.g, args.lam)
    rows = [{"index": i, "counts": list(p.counts)} for i, p in enumerate(profs)]
    return {"profiles": rows, "verdict": f"found:{len(rows)}"}, EXIT_OK


def cmd_order(args) -> tuple[dict, int]:
    v = cases.upper_limit_order(args.k, args.g)
    lam = (args.k - 1) ** ((args.g - 1) // 2) - 1
    return {"order": v, "lambda": lam, "verdict": "pass"}, EXIT_OK


def _write_trace(trace_dir: str, name: str, verdict: cases.CaseVerdict) -> str:
    os.makedirs(trace_dir, exist_ok=True)
    path = os.path.join(trace_dir, name)
    with open(path, "w") as fh:
        fh.write(dumps(dict(verdict.to_dict(), schema=SCHEMA)))
        fh.write("\n")
    return path


def cmd_local(args) -> tuple[dict, int]:
    k, g, lam = args.k, args.g, args.lam
    depth = args.depth if args.depth is not None else cases.natural_depth(g)
    use_profile = g % 2 == 0 and depth == g // 2
    if use_profile:
        profs = cases.enumerate_layer_profiles(k, g, lam)
        if args.profile is not None:
            if not 0 <= args.profile < len(profs):
                raise UsageError(f"--profile must lie in 0..{len(profs) - 1}")
            profs = [profs[args.profile]]
    else:
        if args.profile is not None:
            raise UsageError("--profile only applies to even girth at depth g/2")
        profs = [None]
    runs = []
    statuses = []
    for prof in profs:
        v = cases.local_completion_search(
            k, g, lam, prof, depth, node_limit=args.budget,
            time_limit=args.timeout_secs if args.timeout_secs is not None else 3600.0,
            threads=args.threads, outside_layer=not args.no_outside)
        entry = {"profile": None if prof is None else list(prof.counts), "status": v.status,
                 "witness_count": v.witness_count, "trace_steps": len(v.trace),
                 "nodes": v.stats.get("nodes")}
        if args.trace_dir:
            tag = "root" if prof is None else "-".join(map(str, prof.counts))
            entry["trace_file"] = _write_trace(args.trace_dir, f"local_{k}_{g}_{lam}_d{depth}_{tag}.json", v)
        runs.append(entry)
        statuses.append(v.status)
    if cases.FEASIBLE in statuses:
        verdict, code = "feasible", EXIT_OK
    elif cases.UNKNOWN in statuses:
        verdict, code = "unknown", EXIT_UNKNOWN
    else:
        verdict, code = "infeasible", EXIT_FAIL
    return {"cases": runs, "depth": depth, "verdict": verdict}, code


def cmd_search(args) -> tuple[dict, int]:
    opts = SearchOptions(lambda_pruning=not args.no_lambda_pruning, threads=args.threads,
                         time_limit=args.timeout_secs)
    out = search_egr(args.k, args.g, args.lam, args.max_v, opts)
    if args.out:
        with open(args.out, "w") as fh:
            fh.writelines(s + "\n" for s in out.results)
    report = out.to_dict()
    if not out.complete:
        return dict(report, verdict="unknown"), EXIT_UNKNOWN
    return dict(report, verdict=f"found:{len(out.results)}"), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--threads", type=int, default=1, help="worker count (default 1)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampling fallbacks")
    common.add_argument("--timeout-secs", type=float, default=None, help="wall-clock budget")

    parser = argparse.ArgumentParser(prog="egr", description="Edge-girth-regular graph toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="girth, lambda profile and egr verdict")
    p.add_argument("graph", help="graph6 string or file with one graph6 per line")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("lemmas", parents=[common], help="run every structural check")
    p.add_argument("graph")
    p.add_argument("--k", type=int)
    p.add_argument("--lambda", dest="lam", type=int)
    p.add_argument("--candidate", action="append", default=[], help="graph6 of a forbidden subgraph")
    p.add_argument("--exhaustive", action="store_true", help="never sample edge sets")
    p.set_defaults(func=cmd_lemmas)

    for name, func, helptext in (("profiles", cmd_profiles, "outer-layer profiles for even girth"),
                                 ("local", cmd_local, "local completion search around a vertex"),
                                 ("search", cmd_search, "exhaustive search for small egr graphs")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("k", type=int)
        p.add_argument("g", type=int)
        p.add_argument("lam", type=int, metavar="lambda")
        p.set_defaults(func=func)
        if name == "local":
            p.add_argument("--profile", type=int, help="index into the profile table")
            p.add_argument("--depth", type=int)
            p.add_argument("--budget", type=int, default=10**8, help="node limit per work unit")
            p.add_argument("--trace-dir", help="write one JSON trace per case here")
            p.add_argument("--no-outside", action="store_true", help="stop after the outer layer")
        if name == "search":
            p.add_argument("--max-v", type=int, required=True)
            p.add_argument("--out", help="write result graph6 lines here")
            p.add_argument("--no-lambda-pruning", action="store_true")

    p = sub.add_parser("order", parents=[common], help="forced order near the upper limit")
    p.add_argument("k", type=int)
    p.add_argument("g", type=int)
    p.set_defaults(func=cmd_order)
    return parser


def _render_text(command: str, report: dict) -> str:
    lines = []
    if command in ("check", "lemmas"):
        for item in report["results"]:
            if "error" in item:
                lines.append(f"{item['input']}: error: {item['error']}")
            elif command == "check":
                lines.append(f"{item['input']}: order {item['order']}, degree {item['degree']}, "
                             f"girth {item['girth']}, lambda {item.get('lambda_range')} -> {item['verdict']}")
            else:
                lines.append(f"{item['input']}: {item['params']}")
                for c in item["checks"]:
                    extra = " (not applicable)" if "not_applicable" in c["details"] else ""
                    lines.append(f"  {'PASS' if c['passed'] else 'FAIL'} {c['check_name']}{extra}")
    elif command == "profiles":
        for row in report["profiles"]:
            lines.append(f"{row['index']}: " + " ".join(map(str, row["counts"])))
    elif command == "order":
        lines.append(f"order {report['order']} (lambda {report['lambda']})")
    elif command == "local":
        for c in report["cases"]:
            lines.append(f"profile {c['profile']}: {c['status']} ({c['nodes']} nodes, "
                         f"{c['trace_steps']} trace steps, {c['witness_count']} survivors)")
    elif command == "search":
        lines.extend(report["results"])
    lines.append(f"verdict: {report['verdict']}")
    return "\n".join(lines)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    t0 = time.monotonic()
    try:
        payload, code = args.func(args)
    except (UsageError, EgrError, ValueError) as exc:
        print(f"egr {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = {"schema": SCHEMA, "command": args.command, **payload,
              "seconds": round(time.monotonic() - t0, 3)}
    print(dumps(report) if args.json else _render_text(args.command, report))
    return code


if __name__ == "__main__":
    sys.exit(main())
