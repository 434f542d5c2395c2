"""Axisymmetric Euler with swirl in the annulus r in [pi, 2pi], z periodic.

Prognostic variables are Gamma = r u_theta (advected) and
zeta = omega_theta / r (advected and forced by d_z(Gamma^2) / r^4).
"""

from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft

from .errors import BlowupError
from .fd import BatchedTridiagonal, diff4
from .grids import AnnulusGrid
from .spectral import check_finite, dealias_cutoff
from .symmetry import spectral_project_1d
from .torus import check_dt


@dataclass(frozen=True)
class AxisymState:
    t: float
    u_theta: np.ndarray
    omega_theta: np.ndarray
    psi: np.ndarray
    ur: np.ndarray
    uz: np.ndarray


def annulus_operator(grid, k):
    """Tridiagonal bands of -d_r((1/r) d_r .) + (k^2/r) at interior radii.

    Returns (lower, diag, upper) with shape (nr - 2, len(k)).
    """
    r, _ = grid.coords()
    h = grid.spacing[0]
    rm = 0.5 * (r[:-1] + r[1:])  # midpoints r_{i+1/2}
    ri = r[1:-1]
    lo = -1.0 / (rm[:-1] * h**2)
    up = -1.0 / (rm[1:] * h**2)
    k = np.atleast_1d(k)
    diag = (-(lo + up))[:, None] + (k[None, :] ** 2) / ri[:, None]
    nb = k.size
    return np.repeat(lo[:, None], nb, 1), diag, np.repeat(up[:, None], nb, 1)


class AxisymSolver:
    def __init__(self, grid, symmetry=None):
        if not isinstance(grid, AnnulusGrid):
            raise TypeError("AxisymSolver needs an AnnulusGrid")
        self.grid = grid
        self.symmetry = symmetry
        nr, nz = grid.shape
        self.h = grid.spacing[0]
        r, _ = grid.coords()
        self.r = r[:, None]
        kz = np.fft.rfftfreq(nz, 1.0 / nz)
        self.nk = dealias_cutoff(nz) + 1
        self.ik = 1j * kz[None, :]
        self.ik[:, self.nk:] = 0.0
        self.tri = BatchedTridiagonal(*annulus_operator(grid, kz[: self.nk]))

    def fwd(self, f):
        return sfft.rfft(f, axis=1)

    def inv(self, fh):
        return sfft.irfft(fh, n=self.grid.nz, axis=1)

    def truncate(self, fh):
        fh = fh.copy()
        fh[:, self.nk:] = 0.0
        return fh

    def project(self, f, parity):
        fh = self.truncate(self.fwd(f))
        if self.symmetry is not None:
            fh = spectral_project_1d(fh, parity)
        return self.inv(fh)

    def poisson_hat(self, wh):
        psih = np.zeros_like(wh)
        psih[1:-1, : self.nk] = self.tri.solve(wh[1:-1, : self.nk])
        return psih

    def poisson(self, omega_theta):
        return self.inv(self.poisson_hat(self.fwd(omega_theta)))

    def velocity(self, psi_hat):
        psi = self.inv(psi_hat)
        ur = -self.inv(self.ik * psi_hat) / self.r
        uz = diff4(psi, self.h, 0) / self.r
        return psi, ur, uz

    def _parities(self):
        if self.symmetry is None:
            return 0, 0
        return self.symmetry["u_theta"][1], self.symmetry["omega_theta"][1]

    def encode(self, state):
        pg, pz = self._parities()
        return self.project(self.r * state.u_theta, pg), self.project(state.omega_theta / self.r, pz)

    def decode(self, y, t):
        gamma, zeta = y
        wt = self.r * zeta
        psi, ur, uz = self.velocity(self.poisson_hat(self.fwd(wt)))
        return AxisymState(float(t), gamma / self.r, wt, psi, ur, uz)

    def tendencies(self, gamma, zeta, t=0.0):
        gh, zh = self.fwd(gamma), self.fwd(zeta)
        _, ur, uz = self.velocity(self.poisson_hat(self.fwd(self.r * zeta)))
        adv_g = ur * diff4(gamma, self.h, 0) + uz * self.inv(self.ik * gh)
        adv_z = ur * diff4(zeta, self.h, 0) + uz * self.inv(self.ik * zh)
        g2h = self.truncate(self.fwd(gamma * gamma))
        dg = -self.inv(self.truncate(self.fwd(adv_g)))
        dz = -self.inv(self.truncate(self.fwd(adv_z))) + self.inv(self.ik * g2h) / self.r**4
        if not (np.all(np.isfinite(dg)) and np.all(np.isfinite(dz))):
            raise BlowupError(t)
        return dg, dz

    def instant(self, y):
        gamma, zeta = y
        _, ur, uz = self.velocity(self.poisson_hat(self.fwd(self.r * zeta)))
        g1 = diff4(gamma, self.h, 0)
        g2 = self.inv(self.ik * self.fwd(gamma))
        mag = g1**2 + g2**2
        out = {
            "umax": float(np.sqrt(np.max(ur**2 + uz**2))),
            "grad_rho": float(np.sqrt(np.max(mag))),
            "grad_rho_q": float(np.sqrt(np.max(mag[self.grid.q_weights2d() > 0]))),
            "gradu_sq": float("nan"),
        }
        if not all(np.isfinite(v) for k, v in out.items() if k != "gradu_sq"):
            raise BlowupError(float("nan"))
        return out

    def _stage(self, gamma, zeta):
        pg, pz = self._parities()
        return self.project(gamma, pg), self.project(zeta, pz)

    def advance(self, y, dt, t=0.0, tracers=None):
        g0, z0 = y
        a_g, a_z = self.tendencies(g0, z0, t)
        g1, z1 = self._stage(g0 + 0.5 * dt * a_g, z0 + 0.5 * dt * a_z)
        b_g, b_z = self.tendencies(g1, z1, t)
        g2, z2 = self._stage(g0 + 0.5 * dt * b_g, z0 + 0.5 * dt * b_z)
        c_g, c_z = self.tendencies(g2, z2, t)
        g3, z3 = self._stage(g0 + dt * c_g, z0 + dt * c_z)
        d_g, d_z = self.tendencies(g3, z3, t)
        gn = g0 + dt / 6.0 * (a_g + 2 * b_g + 2 * c_g + d_g)
        zn = z0 + dt / 6.0 * (a_z + 2 * b_z + 2 * c_z + d_z)
        return self._stage(gn, zn), tracers

    def step(self, state, dt):
        check_dt(self.grid, dt, float(np.sqrt(np.max(state.ur**2 + state.uz**2))))
        y, _ = self.advance(self.encode(state), dt, state.t)
        return self.decode(y, state.t + dt)


def make_state(grid, u_theta, omega_theta, t=0.0):
    s = AxisymSolver(grid)
    r = s.r
    return s.decode((check_finite(u_theta, "u_theta") * r, check_finite(omega_theta, "omega_theta") / r), t)


def poisson_annulus(grid, omega_theta):
    return AxisymSolver(grid).poisson(check_finite(omega_theta, "omega_theta"))


def step_axisym(grid, state, dt, symmetry=None):
    return AxisymSolver(grid, symmetry).step(state, dt)
