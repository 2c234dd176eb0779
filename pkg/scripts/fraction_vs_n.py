"""Entangling fraction f(n) of Ginibre environments for the first-qubit cut."""
import argparse
from pathlib import Path

import numpy as np

from qdeph.ensembles import fraction_vs_n
from qdeph.io import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmin", type=int, default=3)
    ap.add_argument("--nmax", type=int, default=24)
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--threads", type=int, default=None)
    ap.add_argument("--out", type=Path, default=Path("results/fraction_vs_n.csv"))
    args = ap.parse_args()

    rows = fraction_vs_n(range(args.nmin, args.nmax + 1), args.samples, args.seed, args.threads)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(args.out, ["n", "f", "stderr"], rows)

    n, f, _ = (np.array(c) for c in zip(*rows))
    keep = (f < 1) & (n >= 6)
    if keep.sum() >= 2:
        slope, _ = np.polyfit(n[keep], np.log(1 - f[keep]), 1)
        print(f"1 - f(n) ~ exp({slope:.3f} n) over n >= 6")
    for row in rows:
        print("n={:2d}  f={:.4f} +- {:.4f}".format(*row))


if __name__ == "__main__":
    main()
