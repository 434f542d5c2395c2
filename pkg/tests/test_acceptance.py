"""End-to-end acceptance runs.

Each test prints a single PASS/FAIL line and the collected lines are
repeated in the terminal summary. The four long simulations are shared
through session fixtures; expect several minutes for the whole file.
"""

import dataclasses
import filecmp
import pathlib
import time

import numpy as np
import pytest

from boussinesq_lab import lemmas, parse_config, serialize_config
from boussinesq_lab.cli import main
from boussinesq_lab.diagnostics import energy_budget_residual
from boussinesq_lab.io import read_checkpoint, read_csv, write_checkpoint, write_csv
from boussinesq_lab.runner import run
from boussinesq_lab.symmetry import AXISYM, STRIP, TORUS, symmetry_project

pytestmark = pytest.mark.acceptance


def series(rows, key):
    return np.array([getattr(r, key) for r in rows])


def one_sided_rate(t, a):
    """Second-order forward difference of a at t[0] (uniform spacing)."""
    dt = t[1] - t[0]
    return (-3 * a[0] + 4 * a[1] - a[2]) / (2 * dt)


def monitor(result, name):
    return next(m for m in result.monitors if m.name == name)


def reached(result):
    return result.status == "ok" and abs(result.rows[-1].t - result.config.horizon) < 1e-9


# viscous torus ---------------------------------------------------------------------

def test_energy_budget_viscous(long_run, verdict):
    res, secs = long_run("viscous_t2")
    resid = energy_budget_residual(res.rows)
    ok = reached(res) and resid <= 1e-5 and secs <= 300
    verdict(1, ok, "energy budget, viscous torus 256^2 T=2",
            f"residual {resid:.3e} (<= 1e-5), runtime {secs:.0f} s (<= 300), status {res.status}")
    assert ok


def test_potential_energy_derivative(long_run, verdict):
    res, _ = long_run("viscous_t2")
    t, ep = series(res.rows, "t"), series(res.rows, "E_P")
    flux = np.array([r.extra["ep_prime"] for r in res.rows])
    fd = (ep[2:] - ep[:-2]) / (t[2:] - t[:-2])
    err = float(np.max(np.abs(fd - flux[1:-1])))
    budget = 1e-4 * max(ep[0], 1.0)
    ok = reached(res) and err <= budget
    verdict(2, ok, "E_P' equals the buoyancy flux", f"max error {err:.3e} (<= {budget:.3e})")
    assert ok


def test_second_derivative_decomposition(long_run, verdict):
    res, _ = long_run("viscous_t2")
    rows = res.rows
    t = series(rows, "t")
    flux = np.array([r.extra["ep_prime"] for r in rows])
    a, b, d = series(rows, "A_press"), series(rows, "B_visc"), series(rows, "delta")
    fd = (flux[2:] - flux[:-2]) / (t[2:] - t[:-2])
    scale = np.maximum.reduce([np.abs(a), np.abs(b), d, np.ones_like(d)])[1:-1]
    rel = np.abs(fd - (a + b - d)[1:-1]) / scale
    ok = reached(res) and float(rel.max()) <= 1e-3
    verdict(3, ok, "E_P'' = A + B - delta at interior outputs",
            f"max scaled error {rel.max():.3e} (<= 1e-3) over {rel.size} outputs")
    assert ok


# channel ------------------------------------------------------------------------------

def test_channel_vorticity_growth(long_run, verdict):
    res, secs = long_run("strip_invB")
    rows, info = res.rows, res.info
    t, A = series(rows, "t"), series(rows, "vort_int")
    growth = min((A[i] - info.A0) / (info.k0 * np.pi * t[i]) for i in range(1, len(t)))
    rate = one_sided_rate(t, A)
    lp = {p: monitor(res, f"omega_lp_Q:{p}").min_ratio for p in (1.0, 2.0, 4.0, np.inf)}
    bd_u = monitor(res, "bd_u").min_ratio
    checks = {
        "horizon reached": reached(res),
        "A(t) >= pi t (1 - 1%)": growth >= 0.99,
        "A'(0) = 2 pi +- 0.5%": abs(rate / (2 * np.pi) - 1) <= 5e-3,
        "omega Lp bounds": all(v >= 0.99 for v in lp.values()),
        "4 pi |u|_inf >= A": bd_u >= 0.99,
        "runtime <= 600 s": secs <= 600,
    }
    failed = [k for k, v in checks.items() if not v]
    detail = (f"last t {t[-1]:.3g} ({res.status}), min A/(pi t) {growth:.4f}, A'(0)/2pi {rate / (2 * np.pi):.5f}, "
              f"min Lp ratios {', '.join(f'{v:.3g}' for v in lp.values())}, bd_u {bd_u:.3g}, {secs:.0f} s"
              + (f"; failing: {', '.join(failed)}" if failed else ""))
    verdict(4, not failed, "channel vorticity growth, 256x129 T=10", detail)
    assert not failed, detail


# inviscid torus ---------------------------------------------------------------------------

def test_torus_sign_mechanism(long_run, verdict):
    res, _ = long_run("inviscid_t2")
    names = ("rho_sign_left", "rho_sign_right", "rhoc", "ineqA", "omup")
    mons = {n: monitor(res, n) for n in names}
    failed = [n for n, m in mons.items() if not m.passed]
    if not reached(res):
        failed.append("horizon reached")
    parts = []
    for n, m in mons.items():
        parts.append(f"{n} {m.min_ratio:.4g}" + ("" if m.passed else f" (first break t={_first_break(m):.3g})"))
    detail = ", ".join(parts) + (f"; failing: {', '.join(failed)}" if failed else "")
    verdict(5, not failed, "sign persistence and growth bounds, inviscid torus 256^2 T=5", detail)
    assert not failed, detail


def _first_break(m):
    return next(t for t, r in zip(m.times, m.ratios) if r < 0.99)


# annulus ------------------------------------------------------------------------------------

def test_swirl_production_annulus(long_run, verdict):
    res, _ = long_run("axisym_3d")
    rows, k0 = res.rows, res.info.k0
    t, A = series(rows, "t"), series(rows, "vort_int")
    rate = one_sided_rate(t, A)
    prod0 = rows[0].boundary_flux
    floor = monitor(res, "swirl_production").min_ratio * 0.1 * k0**2
    gam = np.array([max(abs(r.extra["gamma_max"]), abs(r.extra["gamma_min"])) for r in rows])
    gdrift = float(np.max(np.abs(gam - gam[0])) / gam[0])
    ek = series(rows, "E_K")
    kdrift = float(np.max(np.abs(ek - ek[0])) / ek[0])
    ln2 = np.log(2.0)
    checks = {
        "horizon reached": reached(res),
        "rate(0) = ln 2 +- 0.5%": abs(rate / ln2 - 1) <= 5e-3 and abs(prod0 / ln2 - 1) <= 5e-3,
        "rate >= k0^2/10": monitor(res, "swirl_production").passed,
        "max |r u_theta| drift <= 0.1%": gdrift <= 1e-3,
        "kinetic energy drift <= 1e-4": kdrift <= 1e-4,
    }
    failed = [k for k, v in checks.items() if not v]
    detail = (f"dA/dt(0) {rate:.6f} and boundary production {prod0:.6f} vs ln 2 {ln2:.6f}, min rate {floor:.4f}, "
              f"swirl drift {gdrift:.2e}, energy drift {kdrift:.2e}" + (f"; failing: {', '.join(failed)}" if failed else ""))
    verdict(6, not failed, "swirl production, annulus 129x128 T=5", detail)
    assert not failed, detail


# lemma suites -------------------------------------------------------------------------------

def test_vorticity_lp_suite(verdict):
    t0 = time.perf_counter()
    reports = lemmas.run_suite("omega-lp", 200, seed=0)
    secs = time.perf_counter() - t0
    bad = [i for i, r in enumerate(reports) if not r.passed]
    degenerate = sum(r.case == "degenerate" for r in reports)
    inter = all(any(c.name == "r0_bound" for c in r.checks) and any(c.name == "outer_vorticity" for c in r.checks)
                for r in reports if r.case != "degenerate")
    ok = not bad and inter and secs <= 60
    verdict(7, ok, "vorticity Lp lower bound, 200 random streamfunctions",
            f"{len(bad)} violations, {degenerate} degenerate, intermediates checked {inter}, "
            f"smallest margin {min(r.min_margin for r in reports):.3g}, {secs:.1f} s (<= 60)")
    assert ok


def test_small_delta_suites(verdict):
    t0 = time.perf_counter()
    rep_a = lemmas.run_suite("smallinx1-a", 100, seed=0)
    rep_b = lemmas.run_suite("smallinx1-b", 100, seed=0)
    secs = time.perf_counter() - t0
    bad_a = [i for i, r in enumerate(rep_a) if not r.passed]
    bad_b = [i for i, r in enumerate(rep_b) if not r.passed]
    cases = {c: sum(r.case == c for r in rep_a) for c in ("1", "2")}
    lat = max(r.intermediates["lattice_error"] / r.inputs["A"] for r in rep_a)
    external = all(any("not asserted" in n for n in r.notes) for r in rep_b)
    ok = not bad_a and not bad_b and external and secs <= 120
    verdict(8, ok, "small-delta lemma suites, 100 samples per part",
            f"part (a) {len(bad_a)} violations (case 1: {cases['1']}, case 2: {cases['2']}, max lattice error "
            f"{lat:.2%} of A), part (b) {len(bad_b)} violations, external step reported only {external}, "
            f"{secs:.1f} s (<= 120)")
    assert ok


# infrastructure --------------------------------------------------------------------------------

SMALL = "[run]\nhorizon = 0.2\noutput_interval = 0.05\ncheckpoint_times = 0.1\n[grid]\nn1 = 32\nn2 = 32\n"


def test_infrastructure_determinism(tmp_path, verdict):
    issues = []
    # config text round trip on every shipped config
    for path in sorted((pathlib.Path(__file__).resolve().parents[1] / "configs").glob("*.ini")):
        cfg = parse_config(path.read_text())
        text = serialize_config(cfg)
        if parse_config(text) != cfg or serialize_config(parse_config(text)) != text:
            issues.append(f"config {path.name}")
    # CSV and checkpoint round trips on a short run
    cfg = dataclasses.replace(parse_config(SMALL), out_dir=str(tmp_path / "r"))
    res = run(cfg)
    write_csv(tmp_path / "s.csv", res.rows, cfg.s_list, cfg.p_list)
    _, data = read_csv(tmp_path / "s.csv")
    ref = np.array([r.values(cfg.s_list, cfg.p_list) for r in res.rows])
    if not np.array_equal(data, ref, equal_nan=True):
        issues.append("csv")
    fields = {"rho": res.final_state.rho, "omega": res.final_state.omega}
    write_checkpoint(tmp_path / "c.bgl", cfg.model, (32, 32), res.final_state.t, 0.0, fields)
    _, back, _ = read_checkpoint(tmp_path / "c.bgl")
    if any(not np.array_equal(back[k], fields[k]) for k in fields):
        issues.append("checkpoint")
    # byte-identical reruns through the CLI
    ini = tmp_path / "c.ini"
    ini.write_text(SMALL)
    for d in ("a", "b"):
        main(["simulate", "--config", str(ini), "--out", str(tmp_path / d), "--svg", "--quiet"])
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    _, mismatch, errors = filecmp.cmpfiles(tmp_path / "a", tmp_path / "b", names, shallow=False)
    if mismatch or errors:
        issues.append(f"rerun differs in {mismatch + errors}")
    # projection idempotence
    rng = np.random.default_rng(0)
    worst = 0.0
    for cls in (TORUS, STRIP, AXISYM):
        for parity in cls.parities.values():
            f = rng.standard_normal((48, 40))
            once, _ = symmetry_project(f, parity)
            worst = max(worst, float(np.max(np.abs(symmetry_project(once, parity)[0] - once))))
    if worst > 1e-12:
        issues.append(f"projection moved {worst:.1e}")
    verdict(9, not issues, "config/CSV/checkpoint round trips, reruns, projection",
            f"{len(names)} artifacts compared, projection defect {worst:.1e}" + (f"; issues: {issues}" if issues else ""))
    assert not issues
