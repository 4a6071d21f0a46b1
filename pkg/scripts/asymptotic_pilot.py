"""Multi-seed pilot for the report-only LIL and Chung statistics.

Runs R independent walks to n_max and prints, per checkpoint, the fraction of
walks whose running C2-LIL sup and Chung inf lie in [lo, hi]. Nothing is gated:
these laws are almost-sure limits and convergence is logarithmically slow.

    python3 scripts/asymptotic_pilot.py --n-max 10000000 --R 50
"""

import argparse

import numpy as np

from combwalk.experiments import RATE_PRESETS, asymptotic_runs
from combwalk.rng import RngStream


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n-max", type=int, default=10 ** 7)
    p.add_argument("--R", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--band", type=float, nargs=2, default=(0.5, 1.5))
    args = p.parse_args(argv)

    lo, hi = args.band
    cps, rows = asymptotic_runs(args.n_max, args.R, [RATE_PRESETS["1/log"]], RngStream(args.seed), args.threads)
    print("n,median_sup_c1,median_sup_c2,median_chung,frac_c2_in_band,frac_chung_in_band")
    for i, n in enumerate(cps):
        sup1, sup2, chung = rows[:, i, 0], rows[:, i, 1], rows[:, i, 2]
        f2 = np.mean((sup2 >= lo) & (sup2 <= hi))
        fc = np.mean((chung >= lo) & (chung <= hi))
        print(f"{n},{np.median(sup1):.4f},{np.median(sup2):.4f},{np.median(chung):.4f},{f2:.2f},{fc:.2f}")


if __name__ == "__main__":
    main()
