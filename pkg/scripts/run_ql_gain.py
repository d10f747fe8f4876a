#!/usr/bin/env python3
"""Gain from learned LoS classification: satisfied applications with
learning-driven mmW prioritization over satisfied applications with
deadline-only prioritization."""
import argparse
import csv
import dataclasses
from pathlib import Path

import numpy as np

from dualband_sched.engine import Scenario, run_point


def mean_satisfied(sc: Scenario, parallel: int) -> float:
    return float(np.mean([sum(r.satisfied) for r in run_point(sc, parallel)]))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-values", type=int, nargs="+", default=[10, 20, 30])
    ap.add_argument("--loads", type=float, nargs="+", default=[0.5e6, 1e6])
    ap.add_argument("--drops", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--parallel", type=int, default=1)
    ap.add_argument("--out", default="results/ql_gain")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "ql_gain.csv"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["m_ues", "total_bits", "satisfied_with_ql",
                         "satisfied_without_ql", "gain"])
        for m in args.m_values:
            for load in args.loads:
                base = Scenario(m_ues=m, total_bits=load,
                                rho_policy="half_random",
                                drops=args.drops, seed=args.seed)
                with_ql = mean_satisfied(
                    dataclasses.replace(base, los_mode="qlearn"), args.parallel)
                without = mean_satisfied(
                    dataclasses.replace(base, los_mode="none"), args.parallel)
                gain = with_ql / without if without else float("inf")
                writer.writerow([m, format(load, ".9g"),
                                 format(with_ql, ".9g"), format(without, ".9g"),
                                 format(gain, ".9g")])
                print(f"M={m} load={load:.3g}: {with_ql:.1f} vs {without:.1f} "
                      f"-> gain {gain:.3f}")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
