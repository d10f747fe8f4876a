#!/usr/bin/env python3
"""Outage vs required load per application for all three schedulers."""
import argparse
import dataclasses

from dualband_sched.cli import emit_results
from dualband_sched.engine import Scenario, run_experiment


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--loads", type=float, nargs="+",
                    default=[0.1e6, 0.5e6, 1e6, 2e6, 5e6])
    ap.add_argument("--m-ues", type=int, default=30)
    ap.add_argument("--drops", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--parallel", type=int, default=1)
    ap.add_argument("--out", default="results/load_sweep")
    args = ap.parse_args()

    base = Scenario(m_ues=args.m_ues, rho_policy="all_one",
                    drops=args.drops, seed=args.seed)
    sweep = {"parameter": "total_bits", "values": args.loads}
    rows = []
    for sched in ("context", "pfmrr", "rr"):
        sc = dataclasses.replace(base, scheduler=sched)
        rows.extend(run_experiment(sc, sweep, parallel=args.parallel))
    csv_path, _ = emit_results(rows, base, args.out, ["context", "pfmrr", "rr"], sweep)
    print(f"wrote {csv_path}")


if __name__ == "__main__":
    main()
