#!/usr/bin/env python3
"""Outage distribution as the per-app beam-training overhead grows.

Writes the usual aggregate CSV plus one raw per-drop outage CSV suitable for
plotting empirical CDFs.
"""
import argparse
import csv
from pathlib import Path

from dualband_sched.cli import emit_results
from dualband_sched.engine import Scenario, aggregate, run_point, scenario_at


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--overheads-ms", type=float, nargs="+", default=[0.0, 0.4, 0.8])
    ap.add_argument("--m-ues", type=int, default=30)
    ap.add_argument("--total-bits", type=float, default=1e6)
    ap.add_argument("--drops", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--parallel", type=int, default=1)
    ap.add_argument("--out", default="results/overhead_sweep")
    args = ap.parse_args()

    base = Scenario(m_ues=args.m_ues, total_bits=args.total_bits,
                    rho_policy="all_one", drops=args.drops, seed=args.seed)
    values = [v * 1e-3 for v in args.overheads_ms]
    rows = []
    per_drop = {}
    for tp in values:
        sc = scenario_at(base, "tau_prime", tp)
        results = run_point(sc, parallel=args.parallel)
        rows.append(aggregate(results, sc, "tau_prime", tp))
        per_drop[tp] = [r.outage for r in results]
    sweep = {"parameter": "tau_prime", "values": values}
    csv_path, _ = emit_results(rows, base, args.out, ["context"], sweep)

    raw_path = Path(args.out) / "outage_samples.csv"
    with raw_path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["tau_prime", "drop", "outage"])
        for tp in values:
            for i, outage in enumerate(per_drop[tp]):
                writer.writerow([format(tp, ".9g"), i, format(outage, ".9g")])
    print(f"wrote {csv_path} and {raw_path}")


if __name__ == "__main__":
    main()
