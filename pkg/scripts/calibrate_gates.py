"""Pilot runs behind the Monte Carlo gate tolerances.

joint-noise   TV between the model cell masses and multinomial draws of size R
              from those same masses: the floor a perfect sampler would hit.
joint-seeds   tv_joint from the real walk over several seeds.
c1-ks         raw and lattice-corrected KS of C1/n^{1/4} over several seeds.

    python3 scripts/calibrate_gates.py joint-noise --R 10000 --trials 500
    python3 scripts/calibrate_gates.py c1-ks --seeds 5
"""

import argparse

import numpy as np

from combwalk.experiments import joint_cell_masses, joint_limit_check, scaling_limit_c1
from combwalk.rng import RngStream
from combwalk.stats import total_variation


def joint_noise(R: int, trials: int, seed: int) -> np.ndarray:
    cells = joint_cell_masses()
    model = np.append(cells.ravel(), 1.0 - cells.sum())
    rng = np.random.default_rng(seed)
    return np.array([total_variation(rng.multinomial(R, model) / R, model) for _ in range(trials)])


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("what", choices=["joint-noise", "joint-seeds", "c1-ks"])
    p.add_argument("--R", type=int, default=None)
    p.add_argument("--n", type=int, default=1 << 16)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--threads", type=int, default=1)
    args = p.parse_args(argv)

    if args.what == "joint-noise":
        tv = joint_noise(args.R or 10_000, args.trials, 0)
        print(f"R={args.R or 10_000} trials={args.trials} mean={tv.mean():.4f} "
              f"p99={np.quantile(tv, 0.99):.4f} max={tv.max():.4f}")
    elif args.what == "joint-seeds":
        for s in range(args.seeds):
            rep = joint_limit_check(n=args.n, R=args.R or 10_000, rng=RngStream(s), threads=args.threads)
            print(f"seed={s} tv_joint={rep['tv_joint'].value:.4f}")
    else:
        for s in range(args.seeds):
            rep = scaling_limit_c1(n=args.n, R=args.R or 2000, rng=RngStream(s), threads=args.threads)
            print(f"seed={s} ks_raw={rep['ks_c1_dobrushin'].value:.4f} "
                  f"ks_corrected={rep['ks_c1_dobrushin_continuity_corrected'].value:.4f}")


if __name__ == "__main__":
    main()
