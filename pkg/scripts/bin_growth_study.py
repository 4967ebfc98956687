#!/usr/bin/env python3
"""How the selected bin count grows with sample size on standard-normal data.

A consistency prerequisite: the MDL-chosen bin count must grow with n but
stay well below sqrt(n).
"""

import argparse
import csv
import math

import numpy as np

from histcmi import FitConfig, candidate_cuts, detect_discrete_points, optimal_histogram_1d, replicate_seed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", type=int, nargs="*", default=[500, 1000, 5000, 20000])
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="bin_growth.csv")
    args = ap.parse_args()

    config = FitConfig()
    rows = []
    for n in args.ns:
        counts = []
        for rep in range(args.reps):
            rng = np.random.default_rng(replicate_seed(args.seed + n, rep))
            col = detect_discrete_points(rng.normal(size=n), config.t)
            bs = optimal_histogram_1d(col, candidate_cuts(col, config.k_init(n)),
                                      config.k_max(n))
            counts.append(bs.n_bins)
        rows.append({
            "n": n,
            "median_bins": float(np.median(counts)),
            "mean_bins": float(np.mean(counts)),
            "sqrt_n": round(math.sqrt(n), 1),
        })
        print(rows[-1])

    with open(args.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows -> {args.out}")


if __name__ == "__main__":
    main()
