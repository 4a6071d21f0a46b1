"""Run every experiment at its default size and write the reports to one folder.

    python3 scripts/run_all.py --out results --seed 0
"""

import argparse
import sys

from combwalk import cli
from combwalk.experiments import EXPERIMENTS


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--out", default="results")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    args = p.parse_args(argv)

    worst = 0
    for eid in EXPERIMENTS:
        code = cli.main(["experiment", "--id", eid, "--seed", str(args.seed), "--threads", str(args.threads),
                         "--out", args.out, "--timing"])
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
