import numpy as np
import pytest
from scipy import integrate

from boussinesq_lab import diagnostics as dg
from boussinesq_lab import strip, torus
from boussinesq_lab.errors import UnsupportedDomainError
from boussinesq_lab.grids import StripGrid, TorusGrid
from boussinesq_lab.spectral import delta_functional

G = TorusGrid(64, 64)
X1, X2 = G.mesh()


def test_potential_energy():
    assert dg.potential_energy(G, 0 * X1) == 0.0
    oracle = 2 * np.pi * integrate.quad(lambda x: x * np.sin(x), -np.pi, np.pi)[0]
    assert dg.potential_energy(G, np.sin(X2)) == pytest.approx(oracle, rel=1e-13)
    assert oracle == pytest.approx(4 * np.pi**2, rel=1e-13)


def test_potential_energy_strip_quadrature():
    g = StripGrid(32, 257)
    assert dg.potential_energy(g, np.ones(g.shape)) == pytest.approx(np.pi**3, rel=1e-12)


def test_kinetic_energy_and_ep_prime():
    assert dg.kinetic_energy(G, np.sin(X2), 0 * X1) == pytest.approx(np.pi**2, rel=1e-13)
    assert dg.ep_prime(G, np.sin(X2), 0 * X1) == 0.0
    assert dg.ep_prime(G, np.sin(X2), np.sin(X2)) == pytest.approx(2 * np.pi**2, rel=1e-13)


def test_decomposition_without_flow():
    rho = np.cos(X1) * np.sin(X2) + 0.3 * np.sin(2 * X2)
    s = torus.make_state(G, rho, 0 * X1)
    a, b, d = dg.ep_second_decomposition(G, s, 0.1)
    assert abs(a) <= 1e-13 and abs(b) <= 1e-13
    assert d == delta_functional(G, rho)
    s = torus.make_state(G, np.sin(X2), 0 * X1)
    assert dg.ep_second_decomposition(G, s, 0.0)[2] == pytest.approx(0.0, abs=1e-20)
    with pytest.raises(UnsupportedDomainError):
        dg.ep_second_decomposition(StripGrid(32, 17), s, 0.0)


def _series(nu, dt, n):
    rho = np.cos(X1) * np.sin(X2) + 0.4 * np.cos(2 * X1) * np.sin(X2) + 0.2 * np.sin(2 * X2)
    omega = 0.7 * np.sin(X1) * np.sin(X2) - 0.3 * np.sin(2 * X1) * np.sin(X2)
    s = torus.make_state(G, rho, omega)
    out = [s]
    for _ in range(n):
        s = torus.step(G, s, dt, nu=nu)
        out.append(s)
    return out


@pytest.mark.parametrize("nu", [0.0, 0.05])
def test_ep_identities_by_differencing(nu):
    dt = 2e-3
    states = _series(nu, dt, 2)
    mid = states[1]
    ep = [dg.potential_energy(G, s.rho) for s in states]
    epp = [dg.ep_prime(G, s.rho, s.u2) for s in states]
    assert (ep[2] - ep[0]) / (2 * dt) == pytest.approx(epp[1], rel=1e-5)
    a, b, d = dg.ep_second_decomposition(G, mid, nu)
    assert (epp[2] - epp[0]) / (2 * dt) == pytest.approx(a + b - d, rel=1e-4)


def test_energy_budget_residual():
    states = _series(0.05, 2e-3, 1)
    row = dg.compute_row("torus-viscous", G, states[0], 0.05, (1.0,), (2.0,), {})
    assert dg.energy_budget_residual([row]) == 0.0
    with pytest.raises(ValueError):
        dg.energy_budget_residual([])


def test_vorticity_integral_and_flux():
    g = TorusGrid(256, 256)
    x1, x2 = g.mesh()
    oracle = 2 * integrate.quad(np.sin, 0, np.pi)[0] ** 2
    vi = dg.vorticity_integral(g, 2 * np.sin(x1) * np.sin(x2))
    assert vi == pytest.approx(oracle, rel=2e-4)
    # trapezoid rule for sin on [0, pi] sums to h cot(h/2) exactly
    h = g.spacing[0]
    assert vi == pytest.approx(2 * (h / np.tan(h / 2)) ** 2, rel=1e-13)
    assert dg.boundary_flux(g, np.cos(x1) * np.sin(x2)) == pytest.approx(4.0, rel=1e-4)
    sg = StripGrid(64, 65)
    sx1, _ = sg.mesh()
    assert dg.boundary_flux(sg, np.cos(sx1)) == pytest.approx(2 * np.pi, rel=1e-14)


def test_row_layout_and_nan_entries():
    s = torus.make_state(G, np.cos(X1) * np.sin(X2), 0 * X1)
    row = dg.compute_row("torus-inviscid", G, s, 0.0, (1.0, 2.0), (1.0, np.inf), {"h": 0.5})
    vals = row.values((1.0, 2.0), (1.0, np.inf))
    cols = dg.csv_columns((1.0, 2.0), (1.0, np.inf))
    assert len(vals) == len(cols)
    assert cols[:9] == ["t", "E_P", "E_K", "diss_acc", "delta", "A_press", "B_visc", "vort_int", "boundary_flux"]
    assert np.isnan(vals[cols.index("Ms:1.0")]) and vals[cols.index("h")] == 0.5
    sg = StripGrid(32, 17)
    ss = strip.make_state(sg, np.ones(sg.shape), np.zeros(sg.shape))
    srow = dg.compute_row("strip-inviscid", sg, ss, 0.0, (1.0,), (2.0,), {})
    assert np.isnan(srow.delta) and np.isnan(srow.hs[1.0])


def test_empty_horizon_gives_empty_report():
    info = dg.ScenarioInfo("torus-inviscid", k0=1.0, E0=1.0)
    assert dg.growth_monitors([], info) == []


def test_bound_result_verdicts():
    ok = dg.BoundResult("x", [0.0, 1.0], [1.2, 0.995], True)
    bad = dg.BoundResult("y", [0.0, 1.0], [1.2, 0.98], True)
    info_only = dg.BoundResult("z", [0.0], [0.1], False)
    assert ok.passed and not bad.passed and info_only.passed
    assert bad.argmin_t == 1.0 and info_only.verdict == "report"
    assert dg.ratio_ge(0.0, 0.0) == np.inf and dg.ratio_ge(-1.0, 0.0) == -np.inf
    assert dg.ratio_le(2.0, 4.0) == 2.0
