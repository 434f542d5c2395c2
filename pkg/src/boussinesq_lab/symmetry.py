"""Parity classes and projection onto them.

A parity is +1 (even), -1 (odd) or 0 (no constraint, used for bounded
axes). Reflections act on periodic axes as x -> -x, which maps the node
at index j to index (-j) mod n.
"""

from dataclasses import dataclass, field

import numpy as np

from .grids import reflect_index


@dataclass(frozen=True)
class SymmetryClass:
    name: str
    parities: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.parities[key]


# rho even in x1 / odd in x2, omega odd in both; u1 odd-even, u2 even-odd.
TORUS = SymmetryClass("torus", {"rho": (1, -1), "omega": (-1, -1), "u1": (-1, 1), "u2": (1, -1), "psi": (-1, -1)})
STRIP = SymmetryClass("strip", {"rho": (1, 0), "omega": (-1, 0), "u1": (-1, 0), "u2": (1, 0), "psi": (-1, 0)})
AXISYM = SymmetryClass("axisym", {
    "u_theta": (0, 1), "omega_theta": (0, -1), "ur": (0, 1), "uz": (0, -1), "psi": (0, -1),
})


def derivative_parity(parity, axis):
    p = list(parity)
    p[axis] = -p[axis]
    return tuple(p)


def product_parity(a, b):
    return tuple(x * y for x, y in zip(a, b))


def is_consistent(cls):
    """Velocity parities reproduce the vorticity parity under the curl."""
    if "u1" not in cls.parities:
        # omega_theta = dz ur - dr uz; only the periodic z axis carries parity
        ur, uz, w = cls["ur"], cls["uz"], cls["omega_theta"]
        return -ur[1] == w[1] and uz[1] == w[1]
    u1, u2, w = cls["u1"], cls["u2"], cls["omega"]
    a = derivative_parity(u2, 0)
    b = derivative_parity(u1, 1)
    periodic = [i for i in range(2) if w[i] != 0]
    return all(a[i] == w[i] and b[i] == w[i] for i in periodic)


def reflect(f, axis):
    idx = reflect_index(f.shape[axis])
    return np.take(f, idx, axis=axis)


def symmetry_project(f, parity):
    """Average f with its signed reflections; returns (projected, distance moved)."""
    f = np.asarray(f, dtype=float)
    g = f
    for axis, s in enumerate(parity):
        if s:
            g = 0.5 * (g + s * reflect(g, axis))
    return g, float(np.max(np.abs(g - f))) if f.size else 0.0


def parity_defect(f, parity):
    """Sup-norm distance of f from its parity class."""
    return symmetry_project(f, parity)[1]


def spectral_project(fh, parity):
    """Project rfft2-layout coefficients (real transform along axis 1).

    Reflection along the full axis 0 maps k1 -> -k1; along the half
    axis 1 it maps fhat(k1, k2) -> conj(fhat(-k1, k2)).
    """
    s1, s2 = parity
    neg = reflect_index(fh.shape[0])
    g = fh
    if s1:
        g = 0.5 * (g + s1 * g[neg])
    if s2:
        g = 0.5 * (g + s2 * np.conj(g[neg]))
    return g


def spectral_project_1d(fh, parity_sign):
    """Project rfft coefficients taken along the reflected axis."""
    if not parity_sign:
        return fh
    return 0.5 * (fh + parity_sign * np.conj(fh))
