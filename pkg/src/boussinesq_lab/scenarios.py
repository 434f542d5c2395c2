"""Initial data for the four scenario families and hypothesis checks."""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import axisym, strip, torus
from .diagnostics import ScenarioInfo, kinetic_energy, q_energy, vorticity_integral
from .errors import AssumptionError, ConfigError
from .grids import AnnulusGrid, StripGrid, TorusGrid
from .spectral import lp_norm
from .symmetry import AXISYM, STRIP, TORUS, symmetry_project

SCENARIO_MODELS = {
    "viscous-t2": "torus-viscous",
    "inviscid-t2": "torus-inviscid",
    "strip-invB": "strip-inviscid",
    "axisym-3d": "axisym-euler",
}
MODEL_CLASSES = {
    "torus-viscous": TORUS,
    "torus-inviscid": TORUS,
    "strip-inviscid": STRIP,
    "axisym-euler": AXISYM,
}
PERTURB_BAND = 8


@dataclass(frozen=True)
class ScenarioSpec:
    name: str = "inviscid-t2"
    amplitude: float = 1.0
    alpha: float = 0.0
    perturbation: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.name not in SCENARIO_MODELS:
            raise ConfigError(f"unknown scenario {self.name!r}")
        if not self.amplitude > 0:
            raise AssumptionError("amplitude must be > 0 (k0 > 0)")
        if not 0 <= self.perturbation <= 1:
            raise AssumptionError("perturbation must lie in [0, 1] so the sign conditions survive")

    @property
    def model(self):
        return SCENARIO_MODELS[self.name]


def even_perturbation(seed, band=PERTURB_BAND, shift=0.0):
    """Random cosine polynomial q(x, y), even in both variables, with |q| <= 1.

    ``shift`` offsets the first variable (used to centre radial profiles).
    """
    rng = np.random.default_rng(seed)
    terms = [(m, n) for m in range(band + 1) for n in range(band + 1) if 0 < m * m + n * n <= band * band]
    a = rng.standard_normal(len(terms))
    a /= np.sum(np.abs(a))

    def q(x, y):
        out = np.zeros(np.broadcast(x, y).shape)
        for c, (m, n) in zip(a, terms):
            out = out + c * np.cos(m * (x - shift)) * np.cos(n * y)
        return out

    return q


@dataclass
class InitialData:
    spec: ScenarioSpec
    grid: object
    state: object
    info: ScenarioInfo
    tracers: object = None
    fields: dict = field(default_factory=dict)
    profile: object = None  # callable giving the density / swirl on the key line
    a: float = float("nan")
    b: float = float("nan")


def scenario_functions(spec):
    """Analytic initial fields as callables of the two grid coordinates."""
    amp, alpha, eps = spec.amplitude, spec.alpha, spec.perturbation
    q = even_perturbation(spec.seed) if eps else (lambda x, y: 0.0)
    if spec.name == "viscous-t2":
        f1 = lambda x, y: amp * (1 - np.cos(x)) * np.sin(y) * (1 + 0.5 * eps * q(x, y))  # noqa: E731
        f2 = lambda x, y: 0.0 * x * y  # noqa: E731
    elif spec.name == "inviscid-t2":
        f1 = lambda x, y: amp * np.cos(x) * np.sin(y) * (1 + 0.5 * eps * q(x, y))  # noqa: E731
        f2 = lambda x, y: alpha * np.sin(x) * np.sin(y)  # noqa: E731
    elif spec.name == "strip-invB":
        f1 = lambda x, y: amp * np.cos(x) * (1 + 0.5 * eps * q(x, y))  # noqa: E731
        f2 = lambda x, y: alpha * np.sin(x) * np.sin(y)  # noqa: E731
    else:
        qa = even_perturbation(spec.seed, shift=np.pi) if eps else (lambda x, y: 0.0)
        f1 = lambda r, z: amp * (0.5 * (1 - np.cos(z)) + eps * qa(r, z) / 16.0)  # noqa: E731
        f2 = lambda r, z: alpha * np.sin(z) * np.sin(r - np.pi)  # noqa: E731
    return f1, f2


def turning_points(profile, lo=0.0, hi=np.pi, samples=4097):
    """(k0, a, b) for a profile on [lo, hi]: its max, argmax, and the nearest
    point b < a where the profile drops to k0 / 2."""
    x = np.linspace(lo, hi, samples)
    v = profile(x)
    i = int(np.argmax(v))
    j0, j1 = max(i - 1, 0), min(i + 1, samples - 1)
    res = minimize_scalar(lambda s: -profile(s), bounds=(x[j0], x[j1]), method="bounded",
                          options={"xatol": 1e-14})
    a, k0 = float(res.x), float(-res.fun)
    if v[i] > k0:
        a, k0 = float(x[i]), float(v[i])
    below = np.nonzero((x < a) & (v < 0.5 * k0))[0]
    if below.size == 0:
        raise AssumptionError("profile never drops to k0/2 below its maximum")
    j = below[-1]
    b = brentq(lambda s: profile(s) - 0.5 * k0, x[j], min(x[j + 1], a), xtol=1e-15)
    return k0, a, float(b)


def make_scenario(spec, grid, validate=True):
    f1, f2 = scenario_functions(spec)
    X, Y = grid.mesh()
    a1, a2 = np.asarray(f1(X, Y), float), np.asarray(f2(X, Y), float)
    model = spec.model
    cls = MODEL_CLASSES[model]
    data = InitialData(spec, grid, None, ScenarioInfo(model))
    info = data.info
    if model.startswith("torus"):
        if not isinstance(grid, TorusGrid):
            raise ConfigError(f"scenario {spec.name} needs a torus grid")
        rho = symmetry_project(a1, cls["rho"])[0]
        omega = symmetry_project(a2, cls["omega"])[0]
        state = torus.make_state(grid, rho, omega)
        data.fields = {"rho": rho, "omega": omega}
        info.rho0_l2 = lp_norm(grid, rho, 2)
        info.rho0_inf = lp_norm(grid, rho, np.inf)
        if model == "torus-inviscid":
            data.profile = lambda s: f1(0.0, s)
            info.k0, data.a, data.b = turning_points(data.profile)
            data.tracers = torus.TracerSet((data.a, data.b))
    elif model == "strip-inviscid":
        if not isinstance(grid, StripGrid):
            raise ConfigError("scenario strip-invB needs a strip grid")
        rho = symmetry_project(a1, cls["rho"])[0]
        omega = symmetry_project(a2, cls["omega"])[0]
        state = strip.make_state(grid, rho, omega)
        data.fields = {"rho": rho, "omega": omega}
        data.profile = lambda s: f1(0.0, s)
        info.k0 = float(np.min(data.profile(np.linspace(0, np.pi, 4097))))
        info.rho0_l2 = lp_norm(grid, rho, 2)
        info.rho0_inf = lp_norm(grid, rho, np.inf)
    else:
        if not isinstance(grid, AnnulusGrid):
            raise ConfigError("scenario axisym-3d needs an annulus grid")
        ut = symmetry_project(a1, cls["u_theta"])[0]
        wt = symmetry_project(a2, cls["omega_theta"])[0]
        state = axisym.make_state(grid, ut, wt)
        data.fields = {"u_theta": ut, "omega_theta": wt}
        data.profile = lambda r: f1(r, np.pi)
        info.k0 = float(np.min(data.profile(np.linspace(np.pi, 2 * np.pi, 4097))))
    data.state = state
    _fill_constants(data)
    if validate:
        report = validate_assumptions(grid, data.fields, spec, info.k0)
        failed = [c for c in report if not c.passed]
        if failed:
            raise AssumptionError("; ".join(f"{c.clause}: {c.detail}" for c in failed))
    return data


def _fill_constants(data):
    grid, s, info = data.grid, data.state, data.info
    if info.model.startswith("axisym"):
        wt = s.omega_theta
        info.A0 = vorticity_integral(grid, wt)
        info.E0 = kinetic_energy(grid, s.ur, s.uz, s.u_theta) / np.pi
        info.omega0_inf = lp_norm(grid, wt, np.inf)
        info.omega0_l1 = lp_norm(grid, wt, 1)
        info.T0 = 20.0 * abs(info.A0) / info.k0**2 if info.A0 < 0 else 0.0
        return
    info.A0 = vorticity_integral(grid, s.omega)
    info.E0 = q_energy(grid, s.u1, s.u2) + 4 * np.pi * lp_norm(grid, s.rho, 1, "q")
    info.omega0_inf = lp_norm(grid, s.omega, np.inf)
    info.omega0_l1 = lp_norm(grid, s.omega, 1)
    if info.model == "strip-inviscid" and info.A0 < 0:
        info.T0 = 2.0 * abs(info.A0) / (info.k0 * np.pi)


# validation -------------------------------------------------------------------

@dataclass(frozen=True)
class Clause:
    clause: str
    passed: bool
    detail: str = ""


def _parity_clause(name, f, parity):
    scale = max(1.0, float(np.max(np.abs(f))))
    d = symmetry_project(f, parity)[1]
    return Clause(name, d <= 1e-12 * scale, f"defect {d:.3e}")


def _tail_clause(grid, f, name):
    """Smoothness proxy: negligible energy in the top third of periodic modes."""
    tot = float(np.sum(f**2))
    if tot == 0:
        return Clause(f"{name} smooth", True, "zero field")
    tail = 0.0
    for axis, per in enumerate(grid.periodic):
        if not per:
            continue
        n = f.shape[axis]
        c = np.fft.rfft(f, axis=axis)
        k = np.fft.rfftfreq(n, 1.0 / n)
        sel = [slice(None)] * 2
        sel[axis] = k > n / 3
        tail = max(tail, float(np.sum(np.abs(c[tuple(sel)]) ** 2) / np.sum(np.abs(c) ** 2)))
    return Clause(f"{name} smooth", tail <= 1e-20, f"tail fraction {tail:.3e}")


def _line(grid, f, axis, value):
    """Samples of f on the grid line where coordinate ``axis`` equals value,
    restricted to the [0, pi] part of the other coordinate when periodic."""
    i = grid.index_of(axis, value)
    v = f[i] if axis == 0 else f[:, i]
    other = 1 - axis
    if grid.periodic[other]:
        w = grid.q_weights()[other]
        v = v[w > 0]
    return v


def validate_assumptions(grid, fields, spec, k0=None):
    """List of Clause results for the hypotheses of the scenario family."""
    model = SCENARIO_MODELS[spec.name]
    cls = MODEL_CLASSES[model]
    out = []
    for name, f in fields.items():
        out.append(Clause(f"{name} finite", bool(np.all(np.isfinite(f)))))
    if not all(c.passed for c in out):
        return out
    tiny = 1e-14
    if model.startswith("torus") or model.startswith("strip"):
        rho, omega = fields["rho"], fields["omega"]
        pr, pw = cls["rho"], cls["omega"]
        out.append(_parity_clause("rho even in x1", rho, (pr[0], 0)))
        out.append(_parity_clause("omega odd in x1", omega, (pw[0], 0)))
        if model.startswith("torus"):
            out.append(_parity_clause("rho odd in x2", rho, (0, pr[1])))
            out.append(_parity_clause("omega odd in x2", omega, (0, pw[1])))
        out.append(Clause("rho not identically zero", bool(np.any(rho != 0))))
        for name, f in fields.items():
            out.append(_tail_clause(grid, f, name))
        scale = max(1.0, float(np.max(np.abs(rho))))
        left, right = _line(grid, rho, 0, 0.0), _line(grid, rho, 0, np.pi)
        if model == "torus-viscous":
            out.append(Clause("rho = 0 on the x2-axis", float(np.max(np.abs(left))) <= 1e-12 * scale))
            upper = rho[:, grid.q_weights()[1] > 0]
            out.append(Clause("rho >= 0 for x2 >= 0", float(np.min(upper)) >= -tiny * scale,
                              f"min {float(np.min(upper)):.3e}"))
        elif model == "torus-inviscid":
            out.append(Clause("rho >= 0 on {0} x [0, pi]", float(np.min(left)) >= -tiny * scale))
            out.append(Clause("rho <= 0 on {pi} x [0, pi]", float(np.max(right)) <= tiny * scale))
            kk = float(np.max(left)) if k0 is None else k0
            out.append(Clause("k0 = sup rho(0, .) > 0", kk > 0, f"k0 {kk:.6g}"))
        else:
            kk = float(np.min(left)) if k0 is None else k0
            out.append(Clause("rho >= k0 > 0 on {0} x [0, pi]", kk > 0 and float(np.min(left)) >= kk - tiny * scale,
                              f"k0 {kk:.6g}"))
            out.append(Clause("rho <= 0 on {pi} x [0, pi]", float(np.max(right)) <= tiny * scale))
        return out
    ut, wt = fields["u_theta"], fields["omega_theta"]
    out.append(_parity_clause("u_theta even in z", ut, (0, cls["u_theta"][1])))
    out.append(_parity_clause("omega_theta odd in z", wt, (0, cls["omega_theta"][1])))
    out.append(_tail_clause(grid, ut, "u_theta"))
    out.append(_tail_clause(grid, wt, "omega_theta"))
    top, bot = ut[:, grid.index_of(1, np.pi)], ut[:, grid.index_of(1, 0.0)]
    kk = float(np.min(top)) if k0 is None else k0
    out.append(Clause("u_theta >= k0 > 0 on z = pi", kk > 0 and float(np.min(top)) >= kk - tiny, f"k0 {kk:.6g}"))
    out.append(Clause("|u_theta| <= k0/8 on z = 0", float(np.max(np.abs(bot))) <= kk / 8 + tiny,
                      f"max {float(np.max(np.abs(bot))):.3e}"))
    return out


def format_validation(report):
    return "\n".join(f"{'pass' if c.passed else 'FAIL'}  {c.clause}  {c.detail}".rstrip() for c in report)
