"""Run the four long configurations and write their artifacts.

Usage: python3 scripts/run_acceptance.py [--only NAME ...] [--root out]
"""

import argparse
import os
import time

from boussinesq_lab import load_config, run
from boussinesq_lab.runner import summary_text

HERE = os.path.dirname(os.path.abspath(__file__))
NAMES = ("viscous_t2", "inviscid_t2", "strip_invB", "axisym_3d")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", nargs="*", choices=NAMES, default=list(NAMES))
    ap.add_argument("--root", default="out", help="parent directory for the run folders")
    ap.add_argument("--svg", action="store_true")
    args = ap.parse_args()
    for name in args.only:
        cfg = load_config(os.path.join(HERE, "..", "configs", f"{name}.ini"))
        out = os.path.join(args.root, name)
        t0 = time.perf_counter()
        res = run(cfg, out, svg=args.svg)
        print(f"== {name}  ({time.perf_counter() - t0:.0f} s, exit {res.exit_code})")
        print(summary_text(res))


if __name__ == "__main__":
    main()
