"""Structured grids for the three model domains.

Arrays are indexed ``f[i, j]`` with ``i`` along the first coordinate
(x1 or r) and ``j`` along the second (x2 or z). Periodic axes sample
``-pi + 2*pi*j/n``, so the lattice contains 0 and pi (pi is index 0).
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigError


def periodic_nodes(n):
    return -np.pi + 2.0 * np.pi * np.arange(n) / n


def trapezoid_weights(n, h):
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return w


def periodic_q_weights(n):
    """Trapezoid weights on [0, pi] embedded in a periodic axis of n nodes."""
    h = 2.0 * np.pi / n
    w = np.zeros(n)
    w[n // 2:] = h
    w[n // 2] = 0.5 * h
    w[0] = 0.5 * h  # x = pi lives at index 0
    return w


def reflect_index(n):
    """Index map of x -> -x on a periodic axis."""
    return (-np.arange(n)) % n


def _check_periodic(name, n):
    if n < 16 or n % 2:
        raise ConfigError(f"{name} must be even and >= 16, got {n}")


def _check_bounded(name, n):
    if n < 17:
        raise ConfigError(f"{name} must be >= 17, got {n}")


class _Grid:
    periodic = (True, True)

    @property
    def size(self):
        return self.shape[0] * self.shape[1]

    def mesh(self):
        return np.meshgrid(*self.coords(), indexing="ij")

    def weights2d(self):
        w1, w2 = self.weights()
        return np.outer(w1, w2)

    def q_weights2d(self):
        w1, w2 = self.q_weights()
        return np.outer(w1, w2)

    def integrate(self, f):
        return float(np.sum(self.weights2d() * f))

    def integrate_q(self, f):
        return float(np.sum(self.q_weights2d() * f))

    def index_of(self, axis, value):
        """Grid index whose node equals ``value`` (mod 2*pi on periodic axes)."""
        c = self.coords()[axis]
        if self.periodic[axis]:
            d = np.abs(np.angle(np.exp(1j * (c - value))))
        else:
            d = np.abs(c - value)
        i = int(np.argmin(d))
        if d[i] > 1e-9:
            raise ValueError(f"{value} is not a node on axis {axis}")
        return i


@dataclass(frozen=True)
class TorusGrid(_Grid):
    nx: int
    ny: int

    kind = "torus"
    periodic = (True, True)

    def __post_init__(self):
        _check_periodic("nx", self.nx)
        _check_periodic("ny", self.ny)

    @property
    def shape(self):
        return (self.nx, self.ny)

    @property
    def spacing(self):
        return (2 * np.pi / self.nx, 2 * np.pi / self.ny)

    def coords(self):
        return periodic_nodes(self.nx), periodic_nodes(self.ny)

    def weights(self):
        h1, h2 = self.spacing
        return np.full(self.nx, h1), np.full(self.ny, h2)

    def q_weights(self):
        return periodic_q_weights(self.nx), periodic_q_weights(self.ny)

    @cached_property
    def wavenumbers(self):
        """Integer wavevector components for the full 2D FFT layout."""
        k1 = np.fft.fftfreq(self.nx, 1.0 / self.nx)
        k2 = np.fft.fftfreq(self.ny, 1.0 / self.ny)
        return np.meshgrid(k1, k2, indexing="ij")


@dataclass(frozen=True)
class StripGrid(_Grid):
    nx: int
    nz: int

    kind = "strip"
    periodic = (True, False)

    def __post_init__(self):
        _check_periodic("nx", self.nx)
        _check_bounded("nz", self.nz)

    @property
    def shape(self):
        return (self.nx, self.nz)

    @property
    def spacing(self):
        return (2 * np.pi / self.nx, np.pi / (self.nz - 1))

    def coords(self):
        return periodic_nodes(self.nx), np.linspace(0.0, np.pi, self.nz)

    def weights(self):
        h1, h2 = self.spacing
        return np.full(self.nx, h1), trapezoid_weights(self.nz, h2)

    def q_weights(self):
        return periodic_q_weights(self.nx), trapezoid_weights(self.nz, self.spacing[1])


@dataclass(frozen=True)
class AnnulusGrid(_Grid):
    """(r, z) half-plane of the annular cylinder; r in [pi, 2pi], z periodic."""

    nr: int
    nz: int

    kind = "annulus"
    periodic = (False, True)

    def __post_init__(self):
        _check_bounded("nr", self.nr)
        _check_periodic("nz", self.nz)

    @property
    def shape(self):
        return (self.nr, self.nz)

    @property
    def spacing(self):
        return (np.pi / (self.nr - 1), 2 * np.pi / self.nz)

    def coords(self):
        return np.linspace(np.pi, 2 * np.pi, self.nr), periodic_nodes(self.nz)

    def weights(self):
        h1, h2 = self.spacing
        return trapezoid_weights(self.nr, h1), np.full(self.nz, h2)

    def q_weights(self):
        return trapezoid_weights(self.nr, self.spacing[0]), periodic_q_weights(self.nz)


def grid_for_model(model, n1, n2):
    if model.startswith("torus"):
        return TorusGrid(n1, n2)
    if model.startswith("strip"):
        return StripGrid(n1, n2)
    if model.startswith("axisym"):
        return AnnulusGrid(n1, n2)
    raise ConfigError(f"unknown model {model!r}")
