"""Surrogate parameters against fresh ML fits on simulated FAS channels.

    python scripts/surrogate_agreement.py --seed 1
    python scripts/surrogate_agreement.py --seed 1 --points 10,0.5 30,3
"""

import argparse

from fasevt.chansim import run_monte_carlo
from fasevt.correlation import SystemConfig
from fasevt.fit import fit_gev_mle, fit_gumbel_mle
from fasevt.surrogate import gev_params_surrogate, gumbel_params_surrogate

DEFAULT_POINTS = ["10,0.5", "10,2", "20,1", "20,5"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", nargs="+", default=DEFAULT_POINTS, help="N,W pairs")
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, required=True)
    args = ap.parse_args()

    print(f"{'N':>3} {'W':>5} | {'param':<15} {'fit':>9} {'surrogate':>9} {'diff':>8}")
    for pt in args.points:
        n_txt, w_txt = pt.split(",")
        n, w = int(n_txt), float(w_txt)
        s = run_monte_carlo(SystemConfig(n, w), args.samples, args.seed)
        gf = fit_gumbel_mle(s)
        ef = fit_gev_mle(s, gumbel_fit=gf).params
        gs, es = gumbel_params_surrogate(n, w), gev_params_surrogate(n, w)
        pairs = [
            ("gumbel scale", gf.params.scale, gs.scale),
            ("gumbel location", gf.params.location, gs.location),
            ("gev shape", ef.shape, es.shape),
            ("gev scale", ef.scale, es.scale),
            ("gev location", ef.location, es.location),
        ]
        for name, fit_v, sur_v in pairs:
            # shape is compared in absolute terms, the rest relative
            diff = sur_v - fit_v if name == "gev shape" else sur_v / fit_v - 1
            print(f"{n:>3} {w:>5g} | {name:<15} {fit_v:9.5f} {sur_v:9.5f} {diff:+8.4f}")


if __name__ == "__main__":
    main()
