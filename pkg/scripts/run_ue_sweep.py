#!/usr/bin/env python3
"""Outage vs number of UEs for all three schedulers (one CSV)."""
import argparse
import dataclasses

from dualband_sched.cli import emit_results
from dualband_sched.engine import Scenario, run_experiment


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-values", type=int, nargs="+", default=[10, 20, 30, 40])
    ap.add_argument("--total-bits", type=float, default=1e6)
    ap.add_argument("--drops", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--parallel", type=int, default=1)
    ap.add_argument("--out", default="results/ue_sweep")
    args = ap.parse_args()

    base = Scenario(total_bits=args.total_bits, rho_policy="all_one",
                    drops=args.drops, seed=args.seed)
    sweep = {"parameter": "m_ues", "values": args.m_values}
    rows = []
    for sched in ("context", "pfmrr", "rr"):
        sc = dataclasses.replace(base, scheduler=sched)
        rows.extend(run_experiment(sc, sweep, parallel=args.parallel))
    csv_path, _ = emit_results(rows, base, args.out, ["context", "pfmrr", "rr"], sweep)
    print(f"wrote {csv_path}")


if __name__ == "__main__":
    main()
