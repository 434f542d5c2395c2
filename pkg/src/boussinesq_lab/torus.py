"""Pseudospectral Boussinesq solver on the periodic torus.

Prognostic fields are kept as unnormalized ``rfft2`` coefficients. The
nonlinear terms are formed in physical space from 2/3-truncated inputs
and truncated again, viscosity is integrated exactly per mode (Lawson
RK4), and the symmetry class is re-imposed after every step.
"""

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import fft as sfft

from .errors import BlowupError, DegenerateTracerWarning, StepSizeError
from .grids import TorusGrid
from .spectral import biot_savart_torus, check_finite, dealias_cutoff
from .symmetry import spectral_project

CFL = 0.5


@dataclass(frozen=True)
class TorusState:
    t: float
    rho: np.ndarray
    omega: np.ndarray
    u1: np.ndarray
    u2: np.ndarray


def make_state(grid, rho, omega, t=0.0):
    rho = check_finite(rho, "rho")
    omega = check_finite(omega, "omega")
    u1, u2 = biot_savart_torus(grid, omega)
    return TorusState(float(t), rho, omega, u1, u2)


@dataclass(frozen=True)
class TracerSet:
    """Lagrangian markers on the segment {0} x (0, pi); only x2 is stored."""

    x2: tuple
    labels: tuple = ("a", "b")
    active: bool = True

    @property
    def gap(self):
        if not self.active or len(self.x2) < 2:
            return float("nan")
        return abs(self.x2[1] - self.x2[0])


def max_stable_dt(grid, umax, cfl=CFL):
    return cfl * min(grid.spacing) / max(1.0, umax)


def check_dt(grid, dt, umax, cfl=CFL):
    limit = max_stable_dt(grid, umax, cfl)
    if dt <= 0 or dt > limit * (1 + 1e-12):
        raise StepSizeError(f"dt={dt:g} violates the CFL limit {limit:g}")


def line_interpolate(column, x2):
    """Trigonometric interpolation of samples on -pi + 2 pi j/n at points x2."""
    n = column.size
    a = np.fft.fft(column) / n
    k = np.fft.fftfreq(n, 1.0 / n)
    x = np.atleast_1d(np.asarray(x2, dtype=float))
    return np.real(np.exp(1j * np.outer(x + np.pi, k)) @ a)


class TorusSolver:
    """Stateless stepping kernel bound to a grid, viscosity and symmetry."""

    def __init__(self, grid, nu=0.0, symmetry=None):
        if not isinstance(grid, TorusGrid):
            raise TypeError("TorusSolver needs a TorusGrid")
        self.grid = grid
        self.nu = float(nu)
        self.symmetry = symmetry
        nx, ny = grid.shape
        self.k1 = (np.fft.fftfreq(nx, 1.0 / nx))[:, None]
        self.k2 = (np.fft.rfftfreq(ny, 1.0 / ny))[None, :]
        self.ksq = self.k1**2 + self.k2**2
        self.inv_ksq = np.where(self.ksq > 0, 1.0 / np.where(self.ksq > 0, self.ksq, 1.0), 0.0)
        self.mask = ((np.abs(self.k1) <= dealias_cutoff(nx)) & (self.k2 <= dealias_cutoff(ny))).astype(float)
        self.ik1 = 1j * self.k1 * self.mask
        self.ik2 = 1j * self.k2 * self.mask
        self.col = nx // 2  # x1 = 0
        self.qmask = grid.q_weights2d() > 0

    # transforms -------------------------------------------------------
    def fwd(self, f):
        return sfft.rfft2(f)

    def inv(self, fh):
        return sfft.irfft2(fh, s=self.grid.shape)

    def project(self, rh, wh):
        rh = rh * self.mask
        wh = wh * self.mask
        if self.symmetry is not None:
            rh = spectral_project(rh, self.symmetry["rho"])
            wh = spectral_project(wh, self.symmetry["omega"])
        return rh, wh

    def encode(self, state):
        return self.project(self.fwd(state.rho), self.fwd(state.omega))

    def velocity_hat(self, wh):
        psih = wh * self.inv_ksq
        return self.ik2 * psih, -self.ik1 * psih

    def decode(self, y, t):
        rh, wh = y
        u1h, u2h = self.velocity_hat(wh)
        return TorusState(float(t), self.inv(rh), self.inv(wh), self.inv(u1h), self.inv(u2h))

    # dynamics ---------------------------------------------------------
    def nonlinear(self, rh, wh, t=0.0):
        """Advective and buoyancy tendencies plus the physical u2 field."""
        u1h, u2h = self.velocity_hat(wh)
        u1, u2 = self.inv(u1h), self.inv(u2h)
        adv_r = u1 * self.inv(self.ik1 * rh) + u2 * self.inv(self.ik2 * rh)
        adv_w = u1 * self.inv(self.ik1 * wh) + u2 * self.inv(self.ik2 * wh)
        nr = -self.mask * self.fwd(adv_r)
        nw = -self.mask * self.fwd(adv_w) - self.ik1 * rh
        if not (np.all(np.isfinite(nr)) and np.all(np.isfinite(nw))):
            raise BlowupError(t)
        return nr, nw, u2

    def instant(self, y):
        """Sup of |u| and |grad rho|, and the squared L2 norm of grad u."""
        rh, wh = y
        u1h, u2h = self.velocity_hat(wh)
        u1, u2 = self.inv(u1h), self.inv(u2h)
        g1, g2 = self.inv(self.ik1 * rh), self.inv(self.ik2 * rh)
        w = self.inv(wh)
        h1, h2 = self.grid.spacing
        mag = g1**2 + g2**2
        out = {
            "umax": float(np.sqrt(np.max(u1**2 + u2**2))),
            "grad_rho": float(np.sqrt(np.max(mag))),
            "grad_rho_q": float(np.sqrt(np.max(mag[self.qmask]))),
            # for divergence-free mean-zero u on the torus |grad u|^2 integrates to |omega|^2
            "gradu_sq": float(np.sum(w**2) * h1 * h2),
        }
        if not all(np.isfinite(v) for v in out.values()):
            raise BlowupError(float("nan"))
        return out

    def advance(self, y, dt, t=0.0, tracers=None):
        """One Lawson RK4 step; returns new coefficients and tracers."""
        rh, wh = y
        e = np.exp(-0.5 * self.nu * self.ksq * dt)
        e2 = e * e
        a_r, a_w, u2a = self.nonlinear(rh, wh, t)
        b_r, b_w, u2b = self.nonlinear(rh + 0.5 * dt * a_r, e * (wh + 0.5 * dt * a_w), t)
        c_r, c_w, u2c = self.nonlinear(rh + 0.5 * dt * b_r, e * wh + 0.5 * dt * b_w, t)
        d_r, d_w, u2d = self.nonlinear(rh + dt * c_r, e2 * wh + dt * e * c_w, t)
        rn = rh + dt / 6.0 * (a_r + 2 * b_r + 2 * c_r + d_r)
        wn = e2 * wh + dt / 6.0 * (e2 * a_w + 2 * e * (b_w + c_w) + d_w)
        out = self.project(rn, wn)
        if tracers is not None and tracers.active:
            cols = [u[self.col] for u in (u2a, u2b, u2c, u2d)]
            tracers = rk4_tracers(tracers, dt, [lambda x, c=c: line_interpolate(c, x) for c in cols])
        return out, tracers

    def step(self, state, dt):
        check_dt(self.grid, dt, float(np.sqrt(np.max(state.u1**2 + state.u2**2))))
        y, _ = self.advance(self.encode(state), dt, state.t)
        return self.decode(y, state.t + dt)


def rk4_tracers(tracers, dt, stage_velocity):
    """Classical RK4 for dx2/dt = u2(0, x2) with one velocity per stage."""
    x = np.asarray(tracers.x2, dtype=float)
    k1 = stage_velocity[0](x)
    k2 = stage_velocity[1](x + 0.5 * dt * k1)
    k3 = stage_velocity[2](x + 0.5 * dt * k2)
    k4 = stage_velocity[3](x + dt * k3)
    xn = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    active = True
    if np.any((xn < 1e-6) | (xn > np.pi - 1e-6)):
        warnings.warn(f"tracer within 1e-6 of a segment endpoint: {xn}", DegenerateTracerWarning)
        active = False
    return replace(tracers, x2=tuple(float(v) for v in xn), active=active)


def rhs_torus(grid, state, nu=0.0):
    """Physical tendencies (drho/dt, domega/dt) including viscosity."""
    s = TorusSolver(grid, nu)
    rh, wh = s.fwd(state.rho) * s.mask, s.fwd(state.omega) * s.mask
    nr, nw, _ = s.nonlinear(rh, wh, state.t)
    nw = nw - nu * s.ksq * wh
    return s.inv(nr), s.inv(nw)


def step(grid, state, dt, nu=0.0, symmetry=None):
    return TorusSolver(grid, nu, symmetry).step(state, dt)


def advect_tracers(grid, state, tracers, dt):
    """Advance tracers in the frozen velocity of ``state``."""
    check_dt(grid, dt, float(np.sqrt(np.max(state.u1**2 + state.u2**2))))
    col = state.u2[grid.nx // 2]
    f = lambda x: line_interpolate(col, x)  # noqa: E731
    return rk4_tracers(tracers, dt, [f, f, f, f])
