"""Resolution dependence of the two long inviscid runs.

For the torus it reports when the density on {0} x [0, pi] first dips
below -1e-8 and how the total energy drifts; for the channel it follows
the vorticity integral against pi t and the boundary flux.

Usage: python3 scripts/resolution_study.py torus 64 128 256
       python3 scripts/resolution_study.py strip 64 128 256
"""

import argparse
import time

import numpy as np

from boussinesq_lab import parse_config, run


def torus(n, horizon):
    res = run(parse_config(f"[grid]\nn1 = {n}\nn2 = {n}\n[run]\nhorizon = {horizon}\noutput_interval = 0.01\n"))
    rows = res.rows
    e0 = rows[0].E_P + rows[0].E_K
    scale = max(abs(e0), max(abs(r.E_P) + r.E_K for r in rows))
    first = next((r.t for r in rows if r.extra["rho_left_min"] < -1e-8), None)
    print(f"torus {n}^2: first sign break t={first}, final |grad rho|_inf={rows[-1].grad_rho_inf:.3g}, "
          f"final tracer gap h={rows[-1].h:.3g}")
    for r in rows[::25]:
        drift = abs(r.E_P + r.E_K - e0) / scale
        print(f"  t={r.t:5.2f}  drift={drift:.2e}  left_min={r.extra['rho_left_min']: .3e}  grad={r.grad_rho_inf:8.3g}")


def strip(n, horizon):
    res = run(parse_config(f"[run]\nmodel = strip-inviscid\nhorizon = {horizon}\noutput_interval = 0.25\n"
                           f"[grid]\nn1 = {n}\nn2 = {n // 2 + 1}\n"))
    print(f"strip {n}x{n // 2 + 1}: status {res.status} {res.error}")
    for r in res.rows[::2]:
        print(f"  t={r.t:5.2f}  A={r.vort_int:8.3f}  pi t={np.pi * r.t:7.3f}  flux={r.boundary_flux:8.3f}  "
              f"left_min={r.extra['rho_left_min']: .3f}  grad={r.grad_rho_inf:9.3g}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("domain", choices=("torus", "strip"))
    ap.add_argument("sizes", nargs="+", type=int)
    ap.add_argument("--horizon", type=float)
    args = ap.parse_args()
    fn = torus if args.domain == "torus" else strip
    horizon = args.horizon or (5.0 if args.domain == "torus" else 10.0)
    for n in args.sizes:
        t0 = time.perf_counter()
        with np.errstate(all="ignore"):
            fn(n, horizon)
        print(f"  ({time.perf_counter() - t0:.0f} s)")


if __name__ == "__main__":
    main()
