"""Outage probability against SNR: Monte Carlo, Gumbel and GEV closed forms.

Writes one CSV per run with the comparison columns used by ``fasevt compare``
and prints the mean log-errors over the points where the simulated outage is
at least 1e-3.

    python scripts/op_sweep.py --ports 20 --aperture 1 --seed 1 --out op.csv
"""

import argparse

import numpy as np

from fasevt.chansim import run_monte_carlo
from fasevt.cli import COMPARE_HEADER, compare_rows, write_rows
from fasevt.correlation import SystemConfig
from fasevt.surrogate import gev_params_surrogate, gumbel_params_surrogate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ports", type=int, default=20)
    ap.add_argument("--aperture", type=float, default=1.0)
    ap.add_argument("--threshold-db", type=float, default=10.0)
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--out", default="op_sweep.csv")
    args = ap.parse_args()

    cfg = SystemConfig(args.ports, args.aperture)
    s = run_monte_carlo(cfg, args.samples, args.seed)
    rows = compare_rows(s, gumbel_params_surrogate(args.ports, args.aperture),
                        gev_params_surrogate(args.ports, args.aperture),
                        args.threshold_db, [float(v) for v in range(-10, 31)])
    write_rows(args.out, COMPARE_HEADER, rows)
    used = [r for r in rows if r[1] >= 1e-3]
    print(f"{len(used)} points with MC outage >= 1e-3")
    print(f"mean log-error  gumbel {np.mean([r[4] for r in used]):.4f}  "
          f"gev {np.mean([r[6] for r in used]):.4f}")


if __name__ == "__main__":
    main()
