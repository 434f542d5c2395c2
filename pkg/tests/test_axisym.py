import numpy as np
import pytest

from boussinesq_lab import axisym
from boussinesq_lab.diagnostics import swirl_production, vorticity_integral
from boussinesq_lab.grids import AnnulusGrid
from boussinesq_lab.symmetry import AXISYM

G = AnnulusGrid(65, 64)
R, Z = G.mesh()


def test_poisson_zero():
    assert not axisym.poisson_annulus(G, np.zeros(G.shape)).any()


def manufactured(r, z):
    """psi* = sin z sin(r - pi) and the omega_theta that produces it."""
    s, ds = np.sin(r - np.pi), np.cos(r - np.pi)
    # -d_r((1/r) d_r psi) - (1/r) d_z^2 psi, written out by hand
    return np.sin(z) * s, np.sin(z) * (2 * s / r + ds / r**2)


def test_poisson_manufactured_second_order():
    errs = []
    for nr in (17, 33, 65, 129):
        g = AnnulusGrid(nr, 32)
        r, z = g.mesh()
        psi_star, w = manufactured(r, z)
        errs.append(np.max(np.abs(axisym.poisson_annulus(g, w) - psi_star)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(np.abs(orders - 2.0) < 0.1), orders


def test_poisson_discrete_residual():
    solver = axisym.AxisymSolver(G)
    w = np.random.default_rng(2).standard_normal(G.shape)
    wh = solver.truncate(solver.fwd(w))
    psih = solver.poisson_hat(wh)
    res = solver.tri.matvec(psih[1:-1, : solver.nk]) - wh[1:-1, : solver.nk]
    assert np.max(np.abs(res)) <= 1e-12 * np.max(np.abs(wh))


def test_radial_velocity_vanishes_on_walls():
    s = axisym.make_state(G, 0 * R, np.sin(Z) * np.sin(R - np.pi))
    assert not s.ur[[0, -1]].any()


@pytest.mark.parametrize("c", [0.0, 2.5])
def test_potential_swirl_is_steady(c):
    s = axisym.make_state(G, c / R, 0 * R)
    s1 = axisym.step_axisym(G, s, 0.02, AXISYM)
    assert np.max(np.abs(s1.u_theta - s.u_theta)) <= 1e-13
    assert np.max(np.abs(s1.omega_theta)) <= 1e-13


def test_swirl_production_rate_at_start():
    ut = 0.5 * (1 - np.cos(Z))
    s0 = axisym.make_state(G, ut, 0 * R)
    assert swirl_production(G, ut) == pytest.approx(np.log(2), rel=1e-3)
    dt = 1e-3
    s1 = axisym.step_axisym(G, s0, dt, AXISYM)
    rate = (vorticity_integral(G, s1.omega_theta) - vorticity_integral(G, s0.omega_theta)) / dt
    assert rate == pytest.approx(np.log(2), rel=5e-3)


def test_swirl_is_transported():
    s = axisym.make_state(G, 0.5 * (1 - np.cos(Z)), 0.3 * np.sin(Z) * np.sin(R - np.pi))
    gamma0 = R * s.u_theta
    for _ in range(5):
        s = axisym.step_axisym(G, s, 0.01, AXISYM)
    gamma = R * s.u_theta
    assert np.max(gamma) <= np.max(gamma0) * (1 + 1e-3)
    assert np.min(gamma) >= np.min(gamma0) - 1e-3 * np.max(gamma0)
