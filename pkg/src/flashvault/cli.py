"""``bench`` command line: run the scenario tables and write CSV/plots."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bench import (Bench, budget_csv, budget_summary, default_scenario, overhead_summary,
                    run_matrix, _write)
from .calibration import Calibration
from .errors import FlashVaultError
from .sim import PLACEMENTS, placement_id

COMMANDS = {
    "cipher": "bulk_cipher",
    "boot": "secure_boot",
    "log": "tamper_log",
    "ftl": "ftl_overhead",
}


def _placements(values):
    if not values:
        return PLACEMENTS
    out = []
    for v in values:
        for p in v.split(","):
            p = placement_id(p.strip())
            if p not in out:
                out.append(p)
    return tuple(out)


def build_parser():
    ap = argparse.ArgumentParser(prog="bench", description="In-NAND crypto latency scenarios")
    ap.add_argument("command", choices=list(COMMANDS) + ["budget", "all"])
    ap.add_argument("--config", help="INI file with simulator settings ([ssd], [ftl], [fv], [ncp], [boot], [host])")
    ap.add_argument("--cycles-file", help="INI file with cycle tables, layered over the shipped ones")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", default="bench_out")
    ap.add_argument("--placement", action="append",
                    help="FV, NCP or CPU; repeat or comma-separate (default: all)")
    ap.add_argument("--steady-state", action="store_true",
                    help="run on a preconditioned drive instead of a freshly filled one")
    ap.add_argument("--enforce-bounds", action="store_true",
                    help="exit 1 if any row misses a latency bound")
    ap.add_argument("--no-plot", action="store_true")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _violations(rows):
    bad = []
    for r in rows:
        for b, met in zip(r.bounds, r.bound_met):
            if not met:
                bad.append(f"{r.scenario} {r.algorithm} {r.size} B {r.placement}: "
                           f"{r.total_ms:.3f} ms > {b:g} ms")
    return bad


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out = Path(args.out_dir)
    try:
        if args.command == "budget":
            _write(out / "budget.csv", budget_csv())
            sys.stdout.write(budget_summary())
            return 0

        cal = Calibration.load(args.cycles_file)
        if args.config:
            cal = Calibration.load(args.config, base=cal)
        bench = Bench(cal, seed=args.seed)
        placements = _placements(args.placement)

        kinds = list(COMMANDS.values()) if args.command == "all" else [COMMANDS[args.command]]
        violations = []
        for kind in kinds:
            if kind == "ftl_overhead":
                sc = default_scenario(kind)
                if args.placement:
                    sc.placements = placements[:1]
            else:
                sc = default_scenario(kind, placements, args.steady_state)
            res = run_matrix(sc, out, bench, plot=not args.no_plot)
            print(f"wrote {res['csv']}")
            if kind == "ftl_overhead":
                summ = overhead_summary(res["rows"])
                print("average overhead: " + ", ".join(f"{k} {v:.1f}%" for k, v in summ.items()))
            else:
                violations += _violations(res["rows"])
        if args.command == "all":
            _write(out / "budget.csv", budget_csv())
    except FlashVaultError as exc:
        print(f"bench: error: {exc}", file=sys.stderr)
        return 2

    for v in violations:
        print(f"bound violated: {v}", file=sys.stderr)
    if violations and args.enforce_bounds:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
