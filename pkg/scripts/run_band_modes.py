#!/usr/bin/env python3
"""Dual-mode vs single-band operation as the network grows."""
import argparse

from dualband_sched.cli import emit_results
from dualband_sched.engine import Scenario, run_experiment, scenario_at


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-values", type=int, nargs="+", default=[10, 20, 30, 40, 50])
    ap.add_argument("--total-bits", type=float, default=0.1e6)
    ap.add_argument("--drops", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--parallel", type=int, default=1)
    ap.add_argument("--out", default="results/band_modes")
    args = ap.parse_args()

    base = Scenario(total_bits=args.total_bits, rho_policy="half_random",
                    drops=args.drops, seed=args.seed)
    rows = []
    for band in ("dual", "uw", "mmw"):
        sc = scenario_at(base, "band", band)
        rows.extend(run_experiment(
            sc, {"parameter": "m_ues", "values": args.m_values},
            parallel=args.parallel,
        ))
    csv_path, _ = emit_results(
        rows, base, args.out, ["context"],
        {"parameter": "m_ues", "values": args.m_values},
    )
    print(f"wrote {csv_path}")


if __name__ == "__main__":
    main()
