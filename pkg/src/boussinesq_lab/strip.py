"""Inviscid Boussinesq on the channel T x [0, pi] with no-flow walls.

Fourier in x1 (2/3-truncated products), fourth-order differences in x2,
and a per-wavenumber Dirichlet streamfunction solve.
"""

from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft

from .errors import BlowupError
from .fd import BatchedTridiagonal, diff4
from .grids import StripGrid
from .spectral import check_finite, dealias_cutoff
from .symmetry import spectral_project_1d
from .torus import check_dt


@dataclass(frozen=True)
class StripState:
    t: float
    rho: np.ndarray
    omega: np.ndarray
    psi: np.ndarray
    u1: np.ndarray
    u2: np.ndarray


class StripSolver:
    def __init__(self, grid, symmetry=None):
        if not isinstance(grid, StripGrid):
            raise TypeError("StripSolver needs a StripGrid")
        self.grid = grid
        self.symmetry = symmetry
        nx, nz = grid.shape
        self.h2 = grid.spacing[1]
        k = np.fft.rfftfreq(nx, 1.0 / nx)
        self.nk = dealias_cutoff(nx) + 1
        self.k = k[:, None]
        self.ik = 1j * self.k
        self.ik[self.nk:] = 0.0
        m = nz - 2
        ksq = k[: self.nk] ** 2
        off = np.full((m, self.nk), -1.0 / self.h2**2)
        diag = np.full((m, self.nk), 2.0 / self.h2**2) + ksq[None, :]
        self.tri = BatchedTridiagonal(off, diag, off)

    def fwd(self, f):
        return sfft.rfft(f, axis=0)

    def inv(self, fh):
        return sfft.irfft(fh, n=self.grid.nx, axis=0)

    def truncate(self, fh):
        fh = fh.copy()
        fh[self.nk:] = 0.0
        return fh

    def project(self, f, name):
        fh = self.truncate(self.fwd(f))
        if self.symmetry is not None:
            fh = spectral_project_1d(fh, self.symmetry[name][0])
        return self.inv(fh)

    def poisson_hat(self, wh):
        psih = np.zeros_like(wh)
        psih[: self.nk, 1:-1] = self.tri.solve(wh[: self.nk, 1:-1].T).T
        return psih

    def poisson(self, omega):
        return self.inv(self.poisson_hat(self.fwd(omega)))

    def velocity(self, psi_hat):
        psi = self.inv(psi_hat)
        u1 = diff4(psi, self.h2, 1)
        u2 = -self.inv(self.ik * psi_hat)
        return psi, u1, u2

    def encode(self, state):
        return self.project(state.rho, "rho"), self.project(state.omega, "omega")

    def decode(self, y, t):
        rho, omega = y
        psi, u1, u2 = self.velocity(self.poisson_hat(self.fwd(omega)))
        return StripState(float(t), rho, omega, psi, u1, u2)

    def tendencies(self, rho, omega, t=0.0):
        rh, wh = self.fwd(rho), self.fwd(omega)
        _, u1, u2 = self.velocity(self.poisson_hat(wh))
        rx = self.inv(self.ik * rh)
        adv_r = u1 * rx + u2 * diff4(rho, self.h2, 1)
        adv_w = u1 * self.inv(self.ik * wh) + u2 * diff4(omega, self.h2, 1)
        dr = -self.inv(self.truncate(self.fwd(adv_r)))
        dw = -self.inv(self.truncate(self.fwd(adv_w))) - rx
        if not (np.all(np.isfinite(dr)) and np.all(np.isfinite(dw))):
            raise BlowupError(t)
        return dr, dw

    def instant(self, y):
        rho, omega = y
        _, u1, u2 = self.velocity(self.poisson_hat(self.fwd(omega)))
        g1 = self.inv(self.ik * self.fwd(rho))
        g2 = diff4(rho, self.h2, 1)
        out = {
            "umax": float(np.sqrt(np.max(u1**2 + u2**2))),
            "grad_rho": float(np.sqrt(np.max(g1**2 + g2**2))),
            "grad_rho_q": float(np.sqrt(np.max((g1**2 + g2**2)[self.grid.q_weights2d() > 0]))),
            "gradu_sq": float("nan"),
        }
        if not all(np.isfinite(v) for k, v in out.items() if k != "gradu_sq"):
            raise BlowupError(float("nan"))
        return out

    def _stage(self, rho, omega):
        return self.project(rho, "rho"), self.project(omega, "omega")

    def advance(self, y, dt, t=0.0, tracers=None):
        r0, w0 = y
        a_r, a_w = self.tendencies(r0, w0, t)
        r1, w1 = self._stage(r0 + 0.5 * dt * a_r, w0 + 0.5 * dt * a_w)
        b_r, b_w = self.tendencies(r1, w1, t)
        r2, w2 = self._stage(r0 + 0.5 * dt * b_r, w0 + 0.5 * dt * b_w)
        c_r, c_w = self.tendencies(r2, w2, t)
        r3, w3 = self._stage(r0 + dt * c_r, w0 + dt * c_w)
        d_r, d_w = self.tendencies(r3, w3, t)
        rn = r0 + dt / 6.0 * (a_r + 2 * b_r + 2 * c_r + d_r)
        wn = w0 + dt / 6.0 * (a_w + 2 * b_w + 2 * c_w + d_w)
        return self._stage(rn, wn), tracers

    def step(self, state, dt):
        check_dt(self.grid, dt, float(np.sqrt(np.max(state.u1**2 + state.u2**2))))
        y, _ = self.advance(self.encode(state), dt, state.t)
        return self.decode(y, state.t + dt)


def make_state(grid, rho, omega, t=0.0):
    s = StripSolver(grid)
    return s.decode((check_finite(rho, "rho"), check_finite(omega, "omega")), t)


def poisson_dirichlet_strip(grid, omega):
    return StripSolver(grid).poisson(check_finite(omega, "omega"))


def step_strip(grid, state, dt, symmetry=None):
    return StripSolver(grid, symmetry).step(state, dt)
