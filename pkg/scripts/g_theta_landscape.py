"""Witness of the one-parameter family g(theta) and transient negativity of the Fourier case.

Writes ``g_theta.csv`` (theta, lambda_min) and ``negativity_c3_n{n}.csv``
(t, E_N) for the product state |+>^n and the first-qubit cut.
"""
import argparse
from pathlib import Path

import numpy as np

from qdeph.dynamics import geometric_grid, negativity_trace, product_plus_state
from qdeph.io import write_csv
from qdeph.model import case_c3, g_theta
from qdeph.pt import Bipartition, witness


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=361)
    ap.add_argument("--nmax", type=int, default=6)
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    theta = np.linspace(0.0, 2 * np.pi, args.points)
    lam = [witness(g_theta(th), Bipartition.of(3, [0])) for th in theta]
    write_csv(args.out / "g_theta.csv", ["theta", "lambda_min"], zip(theta, lam))
    print(f"g(theta): most negative witness {min(lam):.4f} at theta = {theta[int(np.argmin(lam))]:.3f}")

    grid = geometric_grid(1e-3, 10.0, 120, include_zero=True)
    for n in range(3, args.nmax + 1):
        trace = negativity_trace(case_c3(n), product_plus_state(n), Bipartition.of(n, [0]), grid)
        write_csv(args.out / f"negativity_c3_n{n}.csv", ["t", "E_N"], trace)
        t, e = np.array(trace).T
        print(f"C3, n={n}: peak E_N {e.max():.4f} at t = {t[e.argmax()]:.3f}, E_N(10) = {e[-1]:.2e}")


if __name__ == "__main__":
    main()
