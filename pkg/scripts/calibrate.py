#!/usr/bin/env python3
"""Calibration run for the end-to-end acceptance target.

Runs the full pipeline over a batch of seeds at the acceptance parameters
(n=1000, p0=0.1, eta=0.25) and records, per seed: the dense split's minimum
degree, the requested and achieved factor degrees, cycle counts, and edge
coverage.  The point of the record: at this scale the minimum degree of the
dense split sits far below the requested factor degree r1 = 80 (binomial
lower tail ~ 58-68 across seeds), so the extractable regular degree — and
with it the number of peelable 2-factors, ceil-target 38 — is capped at
delta/2 ~ 29-34 regardless of how well the conversion performs.  Conversion
itself runs at 100%: every peeled 2-factor becomes a verified Hamilton
cycle.

Usage: python3 scripts/calibrate.py [--seeds 10] [--out calibration.csv]
"""
import argparse
import csv
import sys
import time

from hamdecomp.harness import run
from hamdecomp.sampler import Params, sample_gnp, split

HEADER = [
    "seed", "min_deg_g1", "r1_requested", "r_achieved", "factors",
    "achieved_cycles", "target_m_ceil", "coverage", "wall_s",
]


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--p0", type=float, default=0.1)
    ap.add_argument("--eta", type=float, default=0.25)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    rows = []
    for seed in range(args.seeds):
        params = Params(n=args.n, p0=args.p0, eta=args.eta, seed=seed)
        s = split(sample_gnp(params.n, params.p0, params.seed), params)
        t0 = time.perf_counter()
        result = run(params)
        wall = time.perf_counter() - t0
        row = [seed, s.g1.min_degree(), params.r1, result.r_achieved,
               result.n_factors, result.achieved_cycles, result.target_m,
               round(result.edge_coverage, 4), round(wall, 2)]
        rows.append(row)
        print(" ".join(f"{h}={v}" for h, v in zip(HEADER, row)))

    met = sum(1 for r in rows if r[5] >= r[6] and r[7] >= 0.70)
    print(f"\nseeds meeting >= target cycles at coverage >= 0.70: "
          f"{met}/{len(rows)}")
    print(f"min degree of dense split across seeds: "
          f"{min(r[1] for r in rows)}..{max(r[1] for r in rows)} "
          f"(requested r1 = {rows[0][2]})")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(HEADER)
            w.writerows(rows)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
