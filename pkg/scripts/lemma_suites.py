"""Run the three randomized lemma suites and keep one CSV per suite."""

import argparse
import os

from boussinesq_lab.cli import main as cli

SIZES = {"omega-lp": 200, "smallinx1-a": 100, "smallinx1-b": 100}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="out/lemmas")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    status = 0
    for kind, n in SIZES.items():
        path = os.path.join(args.out, f"{kind}.csv")
        status = max(status, cli(["verify", kind, "--samples", str(n), "--seed", str(args.seed),
                                  "--csv", path, "--workers", str(args.workers)]))
    raise SystemExit(status)


if __name__ == "__main__":
    main()
