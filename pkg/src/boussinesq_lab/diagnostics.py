"""Monitored functionals: energies, pressure/viscous decomposition,
vorticity integrals over Q, norms, and lower-bound ratio monitors."""

from dataclasses import dataclass, field

import numpy as np

from .errors import UnsupportedDomainError
from .grids import AnnulusGrid, StripGrid, TorusGrid
from .spectral import (
    delta_functional,
    derivative,
    grad_sup,
    inverse_laplacian_torus,
    laplacian_torus,
    lp_norm,
    sobolev_norm,
    spectral_diff,
    transform,
)

C0 = 1.0 / (128.0 * np.pi**2)
SLACK = 0.01
NAN = float("nan")


# energies -----------------------------------------------------------------

def potential_energy(grid, rho):
    """Integral of rho * x2 over the domain.

    On the torus x2 is a sawtooth, so the integral is taken exactly for the
    trigonometric interpolant of rho: only k1 = 0 modes contribute, each with
    the weight 2 pi (-1)^k / (i k).
    """
    if isinstance(grid, TorusGrid):
        c = transform(grid, rho).coeffs[0]
        k = np.fft.fftfreq(grid.ny, 1.0 / grid.ny)
        nz = k != 0
        w = np.zeros(grid.ny, dtype=complex)
        w[nz] = 2 * np.pi * (-1.0) ** np.abs(k[nz]) / (1j * k[nz])
        return float(np.real(2 * np.pi * np.sum(c * w)))
    if isinstance(grid, StripGrid):
        _, x2 = grid.coords()
        return grid.integrate(rho * x2[None, :])
    raise UnsupportedDomainError("potential energy needs a density field")


def kinetic_energy(grid, u1, u2, u3=None):
    """Half the integral of |u|^2; on the annulus the measure is r dr dz."""
    e = u1**2 + u2**2
    if u3 is not None:
        e = e + u3**2
    if isinstance(grid, AnnulusGrid):
        r, _ = grid.coords()
        e = e * r[:, None]
    return 0.5 * grid.integrate(e)


def ep_prime(grid, rho, u2):
    return grid.integrate(rho * u2)


def ep_second_decomposition(grid, state, nu):
    """(A_press, B_visc, delta) whose sum A + B - delta is E_P''."""
    if not isinstance(grid, TorusGrid):
        raise UnsupportedDomainError("decomposition holds on the torus only")
    f = inverse_laplacian_torus(grid, spectral_diff(state.rho, 1))
    d11 = spectral_diff(state.u1, 0)
    d12 = spectral_diff(state.u1, 1)
    d21 = spectral_diff(state.u2, 0)
    d22 = spectral_diff(state.u2, 1)
    contraction = d11**2 + 2 * d12 * d21 + d22**2
    a = grid.integrate(f * contraction)
    b = nu * grid.integrate(state.rho * laplacian_torus(grid, state.u2)) if nu else 0.0
    return a, b, delta_functional(grid, state.rho)


def energy_budget_residual(rows):
    """Max relative defect of E_P + E_K + dissipation against its initial value.

    The scale is the larger of |E(0)| and the largest |E_P| + E_K seen, so
    runs that start from zero total energy are still normalized sensibly.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("empty series")
    e0 = rows[0].E_P + rows[0].E_K
    scale = max(abs(e0), max(abs(r.E_P) + r.E_K for r in rows), 1e-300)
    return max(abs(r.E_P + r.E_K + r.diss_acc - e0) for r in rows) / scale


# Q integrals -----------------------------------------------------------------

def vorticity_integral(grid, omega):
    return grid.integrate_q(omega)


def segment(grid, f, x1):
    """Values of f on {x1} x [0, pi] with the matching trapezoid weights."""
    i = grid.index_of(0, x1)
    _, w2 = grid.q_weights()
    keep = w2 > 0
    return f[i][keep], w2[keep]


def boundary_flux(grid, rho):
    """Line integrals of rho along x1 = 0 minus along x1 = pi, x2 in [0, pi]."""
    a, w = segment(grid, rho, 0.0)
    b, _ = segment(grid, rho, np.pi)
    return float(np.sum(w * (a - b)))


def swirl_production(grid, u_theta):
    """Integral over r of (u_theta(r, pi)^2 - u_theta(r, 0)^2) / r."""
    r, _ = grid.coords()
    w1, _ = grid.weights()
    top = u_theta[:, grid.index_of(1, np.pi)]
    bot = u_theta[:, grid.index_of(1, 0.0)]
    return float(np.sum(w1 * (top**2 - bot**2) / r))


def q_energy(grid, u1, u2):
    """Integral of |u|^2 over Q (unweighted planar measure)."""
    return grid.integrate_q(u1**2 + u2**2)


# rows ------------------------------------------------------------------------

@dataclass
class DiagnosticsRow:
    t: float
    E_P: float
    E_K: float
    diss_acc: float
    delta: float
    A_press: float
    B_visc: float
    vort_int: float
    boundary_flux: float
    hs: dict
    lp_omega: dict
    u_inf: float
    grad_rho_inf: float
    F_acc: float
    h: float
    ms: dict
    eta: float
    extra: dict = field(default_factory=dict)

    def values(self, s_list, p_list):
        out = [self.t, self.E_P, self.E_K, self.diss_acc, self.delta, self.A_press,
               self.B_visc, self.vort_int, self.boundary_flux]
        out += [self.hs.get(s, NAN) for s in s_list]
        out += [self.lp_omega.get(p, NAN) for p in p_list]
        out += [self.u_inf, self.grad_rho_inf, self.F_acc, self.h]
        out += [self.ms.get(s, NAN) for s in s_list]
        out.append(self.eta)
        return out


def fmt_num(v):
    v = float(v)
    if np.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def csv_columns(s_list, p_list):
    cols = ["t", "E_P", "E_K", "diss_acc", "delta", "A_press", "B_visc", "vort_int", "boundary_flux"]
    cols += [f"Hs:{fmt_num(s)}" for s in s_list]
    cols += [f"Lp_omega:{fmt_num(p)}" for p in p_list]
    cols += ["u_inf", "grad_rho_inf", "F_acc", "h"]
    cols += [f"Ms:{fmt_num(s)}" for s in s_list]
    cols.append("eta")
    return cols


def _norms(grid, f, p_list, region):
    return {p: lp_norm(grid, f, p, region) for p in p_list}


def compute_row(model, grid, state, nu, s_list, p_list, acc):
    """Assemble a row from physical fields plus the runner's accumulators.

    ``acc`` carries diss_acc, F_acc, G_acc, h, ms, eta and gradu_acc.
    """
    extra = {k: acc.get(k, NAN) for k in ("grad_sup_acc", "gradu_acc", "G_acc")}
    common = dict(
        t=float(state.t), diss_acc=acc.get("diss_acc", 0.0), F_acc=acc.get("F_acc", 0.0),
        h=acc.get("h", NAN), ms=dict(acc.get("ms", {})), eta=acc.get("eta", NAN),
    )
    if model.startswith("axisym"):
        r, _ = grid.coords()
        ut, wt = state.u_theta, state.omega_theta
        gamma = r[:, None] * ut
        extra.update(
            lp_omega_q=_norms(grid, wt, p_list, "q"),
            u_top_min=float(np.min(ut[:, grid.index_of(1, np.pi)])),
            u_bot_absmax=float(np.max(np.abs(ut[:, grid.index_of(1, 0.0)]))),
            gamma_max=float(np.max(gamma)), gamma_min=float(np.min(gamma)),
            q_energy=q_energy(grid, state.ur, state.uz),
            grad_rho_q=grad_sup(grid, gamma, "q"),
        )
        return DiagnosticsRow(
            E_P=NAN, E_K=kinetic_energy(grid, state.ur, state.uz, ut), delta=NAN, A_press=NAN,
            B_visc=NAN, vort_int=vorticity_integral(grid, wt), boundary_flux=swirl_production(grid, ut),
            hs={s: NAN for s in s_list}, lp_omega=_norms(grid, wt, p_list, "domain"),
            u_inf=float(np.sqrt(np.max(state.ur**2 + state.uz**2))), grad_rho_inf=grad_sup(grid, gamma),
            extra=extra, **common,
        )
    rho, w, u1, u2 = state.rho, state.omega, state.u1, state.u2
    left, _ = segment(grid, rho, 0.0)
    right, _ = segment(grid, rho, np.pi)
    extra.update(
        ep_prime=ep_prime(grid, rho, u2),
        grad_u_sq=grid.integrate(w**2) if isinstance(grid, TorusGrid) else _grad_u_sq(grid, u1, u2),
        lp_omega_q=_norms(grid, w, p_list, "q"),
        rho_left_min=float(np.min(left)), rho_left_max=float(np.max(left)),
        rho_right_min=float(np.min(right)), rho_right_max=float(np.max(right)),
        rho_l1=lp_norm(grid, rho, 1), rho_l2=lp_norm(grid, rho, 2), rho_linf=lp_norm(grid, rho, np.inf),
        q_energy=q_energy(grid, u1, u2), grad_rho_q=grad_sup(grid, rho, "q"),
        u2_wall=float(np.max(np.abs(u2[:, [0, -1]]))) if isinstance(grid, StripGrid) else 0.0,
    )
    if isinstance(grid, TorusGrid):
        a, b, d = ep_second_decomposition(grid, state, nu)
        hs = {s: sobolev_norm(grid, rho, s) for s in s_list}
    else:
        a = b = d = NAN
        hs = {s: NAN for s in s_list}
    return DiagnosticsRow(
        E_P=potential_energy(grid, rho), E_K=kinetic_energy(grid, u1, u2), delta=d, A_press=a,
        B_visc=b, vort_int=vorticity_integral(grid, w), boundary_flux=boundary_flux(grid, rho),
        hs=hs, lp_omega=_norms(grid, w, p_list, "domain"),
        u_inf=float(np.sqrt(np.max(u1**2 + u2**2))), grad_rho_inf=grad_sup(grid, rho),
        extra=extra, **common,
    )


def _grad_u_sq(grid, u1, u2):
    tot = 0.0
    for u in (u1, u2):
        for ax in (0, 1):
            tot = tot + derivative(grid, u, ax) ** 2
    return grid.integrate(tot)


# bound monitors ----------------------------------------------------------------

@dataclass
class BoundResult:
    """Ratio trajectory of one bound; ratio >= 1 means the bound holds."""

    name: str
    times: list
    ratios: list
    asserted: bool

    @property
    def min_ratio(self):
        return min(self.ratios) if self.ratios else NAN

    @property
    def argmin_t(self):
        return self.times[int(np.argmin(self.ratios))] if self.ratios else NAN

    @property
    def passed(self):
        if not self.asserted or not self.ratios:
            return True
        return self.min_ratio >= 1.0 - SLACK

    @property
    def verdict(self):
        if not self.asserted:
            return "report"
        return "pass" if self.passed else "FAIL"

    def line(self):
        return f"{self.name:<28s} min_ratio={fmt_num(self.min_ratio):<24s} argmin_t={fmt_num(self.argmin_t):<22s} {self.verdict}"


def ratio_ge(measured, bound, tol=1e-12):
    """measured >= bound as a ratio; non-positive bounds hold or fail outright."""
    if bound > 0:
        return measured / bound
    return np.inf if measured >= bound - tol else -np.inf


def ratio_le(measured, bound, tol=1e-12):
    if measured > 0 and bound > 0:
        return bound / measured
    return np.inf if measured <= bound + tol else -np.inf


@dataclass
class ScenarioInfo:
    """Constants the bounds are stated in terms of."""

    model: str
    k0: float = NAN
    A0: float = 0.0
    E0: float = NAN
    T0: float = 0.0
    rho0_l2: float = NAN
    rho0_inf: float = 1.0
    omega0_inf: float = 0.0
    omega0_l1: float = 0.0


def _series(name, rows, fn, asserted=True, t_min=0.0):
    times, ratios = [], []
    for r in rows:
        if r.t < t_min:
            continue
        v = fn(r)
        if v is None or np.isnan(v):
            continue
        times.append(r.t)
        ratios.append(float(v))
    return BoundResult(name, times, ratios, asserted)


def _monotone(rows, tol=1e-8):
    out = BoundResult("vort_int_monotone", [], [], True)
    for a, b in zip(rows, rows[1:]):
        out.times.append(b.t)
        out.ratios.append(np.inf if b.vort_int >= a.vort_int - tol else -np.inf)
    return out


def _lemma_lp(rows, info, p_list, t_min):
    res = []
    for p in p_list:
        expo = 3.0 - (0.0 if np.isinf(p) else 2.0 / p)
        e_pow = -1.0 + (0.0 if np.isinf(p) else 1.0 / p)
        res.append(_series(
            f"omega_lp_Q:{fmt_num(p)}", rows,
            lambda r, p=p, expo=expo, e_pow=e_pow: ratio_ge(
                r.extra["lp_omega_q"][p], C0 * info.E0**e_pow * abs(r.vort_int) ** expo),
            t_min=t_min,
        ))
    return res


def growth_monitors(rows, info, s_list=(), p_list=()):
    """Bound checks and growth-ratio trajectories for one run's rows."""
    rows = list(rows)
    if len(rows) < 2:
        return []
    m = info.model
    tpos = [r for r in rows if r.t > 0]
    out = []
    if m == "torus-viscous":
        e0 = rows[0].E_P + rows[0].E_K
        out.append(_series("energy_bound_upper", rows, lambda r: ratio_le(r.E_P, e0, 1e-9 * e0)))
        out.append(_series("energy_bound_lower", rows, lambda r: ratio_ge(r.E_P, 0.0, 1e-9 * e0)))
        out.append(_series("kinetic_bound", rows, lambda r: ratio_le(r.E_K, e0, 1e-9 * e0)))
        out.append(_series("ep_prime_cauchy_schwarz", rows, lambda r: ratio_le(
            abs(r.extra["ep_prime"]), info.rho0_l2 * np.sqrt(2 * max(r.E_K, 0.0)), 1e-12)))
        for s in s_list:
            if s < 1:
                continue
            alpha = s - 0.5
            out.append(_series(f"hs_rate_tenth:{fmt_num(s)}", tpos, lambda r, s=s: r.t ** (-s / 10) * r.hs[s], False))
            out.append(_series(f"hs_rate_torus:{fmt_num(s)}", tpos,
                               lambda r, s=s: r.t ** (-s * (2 * s - 1) / (8 * s - 2)) * r.hs[s], False))
            out.append(_series(f"ms_window:{fmt_num(s)}", tpos,
                               lambda r, s=s, a=alpha: (r.t / 2) ** -0.5 * r.ms[s] ** (1 / s + 1 / a), False))
        out.append(_series("eta_window", tpos, lambda r: r.eta, False))
        return out
    if m == "torus-inviscid":
        k0 = info.k0
        out.append(_series("rho_sign_left", rows, lambda r: ratio_ge(r.extra["rho_left_min"], 0.0, 1e-8)))
        out.append(_series("rho_sign_right", rows, lambda r: ratio_le(r.extra["rho_right_max"], 0.0, 1e-8)))
        out.append(_series("grad_rho_small_t", rows, lambda r: ratio_ge(r.grad_rho_inf, k0 / np.pi)))
        out.append(_series("rhoc", rows, lambda r: ratio_ge(r.extra["grad_rho_q"] * r.h * 2.0 / k0, 1.0)))
        out.append(_monotone(rows))
        out.append(_series("w_mono_flux", rows, lambda r: ratio_ge(r.boundary_flux, 0.5 * k0 * r.h)))
        out.append(_series("ineqA", rows, lambda r: ratio_ge(
            r.vort_int, 0.25 * k0**2 * r.extra["G_acc"] + info.A0, 1e-12)))
        out.append(_series("omup", rows, lambda r: ratio_le(
            r.lp_omega[np.inf] if np.inf in r.lp_omega else np.nan, r.F_acc + info.omega0_inf)))
        out.append(_series("energy_Q", rows, lambda r: ratio_le(r.extra["q_energy"], info.E0)))
        out.append(_series("omlb1", rows, lambda r: ratio_ge(
            r.extra["lp_omega_q"].get(np.inf, np.nan), C0 / info.E0 * max(r.vort_int, 0.0) ** 3)))
        out.append(_series("grad_rho_sqrt_t", tpos, lambda r: r.extra["grad_sup_acc"] / np.sqrt(r.t), False))
        out.append(_series("F_three_halves", tpos, lambda r: r.F_acc / r.t**1.5, False))
        return out
    if m == "strip-inviscid":
        k0 = info.k0
        tol = 1e-6 * info.rho0_inf
        out.append(_series("rho_floor_left", rows, lambda r: ratio_ge(r.extra["rho_left_min"], k0 - tol, 0.0)))
        out.append(_series("rho_sign_right", rows, lambda r: ratio_le(r.extra["rho_right_max"], tol)))
        out.append(_series("wall_no_flow", rows, lambda r: ratio_le(r.extra["u2_wall"], 0.0, 1e-13)))
        out.append(_monotone(rows))
        out.append(_series("flux_floor", rows, lambda r: ratio_ge(r.boundary_flux, k0 * np.pi)))
        out.append(_series("ineq_A", rows, lambda r: ratio_ge(r.vort_int, k0 * np.pi * r.t + info.A0)))
        out.append(_series("energy_Q", rows, lambda r: ratio_le(r.extra["q_energy"], info.E0)))
        out += _lemma_lp(rows, info, p_list, info.T0)
        out.append(_series("bd_u", rows, lambda r: ratio_ge(4 * np.pi * r.u_inf, r.vort_int), t_min=info.T0))
        out.append(_series("omega_l1", rows, lambda r: ratio_ge(
            r.lp_omega.get(1.0, np.nan), k0 * np.pi * r.t - info.omega0_l1)))
        out.append(_series("omup", rows, lambda r: ratio_le(
            r.lp_omega.get(np.inf, np.nan), r.F_acc + info.omega0_inf)))
        frac = 0.25 if info.A0 >= 0 else 0.125
        out.append(_series("u_growth", tpos, lambda r: ratio_ge(r.u_inf, frac * k0 * r.t), t_min=info.T0))
        for p in p_list:
            expo = 3.0 - (0.0 if np.isinf(p) else 2.0 / p)
            out.append(_series(f"omega_rate:{fmt_num(p)}", tpos, lambda r, p=p, e=expo: r.lp_omega[p] / r.t**e, False))
        out.append(_series("u_rate", tpos, lambda r: r.u_inf / r.t, False))
        out.append(_series("grad_rho_rate", tpos, lambda r: r.extra["grad_sup_acc"] / r.t**2, False))
        return out
    if m == "axisym-euler":
        k0 = info.k0
        out.append(_series("u_bd1", rows, lambda r: ratio_ge(r.extra["u_top_min"], 0.5 * k0)))
        out.append(_series("u_bd2", rows, lambda r: ratio_le(r.extra["u_bot_absmax"], 0.25 * k0)))
        out.append(_series("swirl_production", rows, lambda r: ratio_ge(r.boundary_flux, 0.1 * k0**2)))
        out.append(_monotone(rows))
        out.append(_series("vort_int_linear", rows, lambda r: ratio_ge(r.vort_int, 0.1 * k0**2 * r.t + info.A0)))
        out.append(_series("energy_Q", rows, lambda r: ratio_le(r.extra["q_energy"], info.E0)))
        out += _lemma_lp(rows, info, p_list, info.T0)
        out.append(_series("euler_u_bd", rows, lambda r: ratio_ge(4 * np.pi * r.u_inf, abs(r.vort_int)), t_min=info.T0))
        out.append(_series("u_rate", tpos, lambda r: r.u_inf / r.t, False))
        return out
    raise ValueError(f"unknown model {m!r}")


def format_report(results):
    return "\n".join(r.line() for r in results)
