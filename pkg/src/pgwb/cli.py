"""Command line interface.

Exit codes: 0 success, 2 oracle-verified absence of a non-inner automorphism
of order p, 3 input error, 4 precondition or size limit not met.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog, oracle, report, search
from .errors import (CounterexampleAlarm, InputError, OracleInfeasible, PgwbError,
                     PreconditionError, TooLarge)
from .pc import load_group

EXIT_OK, EXIT_ALARM, EXIT_INPUT, EXIT_PRECONDITION = 0, 2, 3, 4


def _load(path):
    try:
        return load_group(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def cmd_analyze(args):
    G = _load(args.file)
    rep = report.analyze_group(G, args.file, oracle_limit=args.oracle_limit)
    text = json.dumps(rep, indent=2, sort_keys=True)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    s, r = rep["series"], rep["result"]
    print(f"{args.file}: p = {G.p}, |G| = {G.p}^{G.n}, class {s['class']}, "
          f"coclass {s['coclass']}, d = {s['d']}, exponent {s['exponent']}")
    print("reductions: " + ", ".join(f"{k}={v}" for k, v in rep["reductions"].items()))
    print(f"result: {r['status']} via {r['strategy']}, oracle agreement {r['oracle_agreement']}")
    if r["status"] == report.COUNTEREXAMPLE:
        return EXIT_ALARM
    return EXIT_OK if r["status"] == report.NONINNER_FOUND else EXIT_PRECONDITION


def cmd_search(args):
    G = _load(args.file)
    cert = search.find_noninner_order_p(G, strategy=args.strategy, oracle_limit=args.oracle_limit)
    print(json.dumps(cert.to_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_verify(args):
    rep = report.run_verification(args.dir, jobs=args.jobs, oracle_limit=args.oracle_limit)
    text = rep.to_json()
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    for g in rep.groups:
        r = g["result"]
        print(f"{g['group']['file']:40s} {r['status']:18s} {str(r['strategy']):8s} "
              f"oracle={r['oracle_agreement']}")
    for e in rep.errors:
        print(f"{e['file']:40s} error: {e['error']}: {e['message']}")
    print(json.dumps(rep.summary, sort_keys=True))
    return EXIT_ALARM if rep.alarm else EXIT_OK


def cmd_oracle(args):
    G = _load(args.file)
    A = oracle.brute_force_automorphisms(G, args.oracle_limit)
    res = oracle.noninner_bruteforce(G, args.oracle_limit)
    out = {"aut_order": len(A), "inner_order": A.inner_count,
           "counts_by_order": {str(k): v for k, v in A.counts_by_order().items()},
           "noninner_order_p": res.count,
           "example": res.example.image_exps() if res.example else None}
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK if res.exists else EXIT_ALARM


def cmd_catalog(args):
    if args.action == "list":
        for name, e in catalog.ENTRIES.items():
            print(f"{name:20s} ({e.arity})  {e.note}")
        return EXIT_OK
    if not args.name:
        raise InputError("catalog emit needs an entry name")
    name, params = args.name, args.params
    if "(" in name and not params:
        name, params = catalog.parse_entry(name)
    P = catalog.presentation(name, *params)
    sys.stdout.write(f"# {catalog.label(name, *params)}\n" + P.to_text())
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="pgwb", description="finite p-group workbench")
    sub = ap.add_subparsers(dest="command", required=True)
    limit = dict(type=int, default=oracle.DEFAULT_LIMIT, dest="oracle_limit",
                 help="bound on |G|^d for exhaustive automorphism search")

    p = sub.add_parser("analyze", help="series, reductions and a certified automorphism")
    p.add_argument("file")
    p.add_argument("--json", metavar="OUT")
    p.add_argument("--oracle-limit", **limit)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("search", help="find a non-inner automorphism of order p")
    p.add_argument("file")
    p.add_argument("--strategy", choices=search.STRATEGIES, default="auto")
    p.add_argument("--oracle-limit", **limit)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="analyze every .pcp file in a directory")
    p.add_argument("dir")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", metavar="OUT")
    p.add_argument("--oracle-limit", **limit)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exhaustive automorphism enumeration")
    p.add_argument("what", choices=["aut"])
    p.add_argument("file")
    p.add_argument("--oracle-limit", **limit)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("catalog", help="built-in groups")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("name", nargs="?")
    p.add_argument("params", nargs="*")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CounterexampleAlarm as e:
        print(f"counterexample alarm: {e}", file=sys.stderr)
        return EXIT_ALARM
    except InputError as e:
        print(f"input error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (PreconditionError, OracleInfeasible, TooLarge) as e:
        print(f"precondition unmet: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except PgwbError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
