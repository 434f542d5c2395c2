"""Time-stepping driver shared by the three solvers.

Steps land exactly on output and checkpoint times. Time integrals
(dissipation, F(t) and the inverse-gradient integral) use the trapezoid
rule over steps; the windowed quantities M_s and eta use [t/2, t].
"""

import os
from dataclasses import dataclass, field

import numpy as np

from . import axisym, strip, torus
from .diagnostics import compute_row, energy_budget_residual, format_report, growth_monitors
from .errors import BlowupError
from .grids import grid_for_model
from .io import FIELD_ORDER, read_checkpoint, write_checkpoint, write_csv
from .scenarios import MODEL_CLASSES, format_validation, make_scenario, validate_assumptions

EXIT_OK, EXIT_INVARIANT, EXIT_BLOWUP = 0, 2, 3


def make_solver(model, grid, nu=0.0):
    cls = MODEL_CLASSES[model]
    if model.startswith("torus"):
        return torus.TorusSolver(grid, nu, cls)
    if model.startswith("strip"):
        return strip.StripSolver(grid, cls)
    return axisym.AxisymSolver(grid, cls)


def physical_fields(model, state):
    return {name: getattr(state, name) for name in FIELD_ORDER[model]}


def state_from_fields(model, grid, fields, t):
    if model.startswith("torus"):
        return torus.make_state(grid, fields["rho"], fields["omega"], t)
    if model.startswith("strip"):
        return strip.make_state(grid, fields["rho"], fields["omega"], t)
    return axisym.make_state(grid, fields["u_theta"], fields["omega_theta"], t)


def event_times(horizon, interval, checkpoints=()):
    """Sorted output times k*interval (plus the horizon) merged with checkpoints."""
    n = int(np.floor(horizon / interval + 1e-9))
    outs = [round(k * interval, 12) for k in range(n + 1)]
    if horizon - outs[-1] > 1e-9 * max(1.0, horizon):
        outs.append(float(horizon))
    times = sorted(set(outs) | {float(c) for c in checkpoints})
    return times, set(outs)


@dataclass
class RunResult:
    config: object
    rows: list
    info: object
    status: str = "ok"
    error: str = ""
    monitors: list = field(default_factory=list)
    checkpoints: list = field(default_factory=list)
    validation: list = field(default_factory=list)
    final_state: object = None
    tracer_labels: tuple = ()

    @property
    def invariants_passed(self):
        return all(m.passed for m in self.monitors)

    @property
    def exit_code(self):
        if self.status == "blowup":
            return EXIT_BLOWUP
        return EXIT_OK if self.invariants_passed else EXIT_INVARIANT


class _Accumulators:
    def __init__(self, nu, inst, tracers):
        self.nu = nu
        self.vals = dict(diss_acc=0.0, F_acc=0.0, G_acc=0.0, gradu_acc=0.0, grad_sup_acc=inst["grad_rho"])
        self.inst = inst
        self.step_t = [0.0]
        self.step_gradu = [0.0]
        self.tracers = tracers

    def update(self, dt, t_new, inst):
        a, b = self.inst, inst
        v = self.vals
        half = 0.5 * dt
        gu = half * (a["gradu_sq"] + b["gradu_sq"])
        v["gradu_acc"] += gu
        if self.nu:
            v["diss_acc"] += self.nu * gu
        v["F_acc"] += half * (a["grad_rho"] + b["grad_rho"])
        v["G_acc"] += half * (1.0 / a["grad_rho_q"] + 1.0 / b["grad_rho_q"])
        v["grad_sup_acc"] = max(v["grad_sup_acc"], b["grad_rho"])
        self.inst = inst
        self.step_t.append(t_new)
        self.step_gradu.append(v["gradu_acc"])

    def snapshot(self, t, rows, s_list):
        d = dict(self.vals)
        d["h"] = self.tracers.gap if self.tracers is not None else float("nan")
        lo = 0.5 * t
        window = [r for r in rows if r.t >= lo - 1e-12] if rows else []
        d["ms"] = {s: max([r.hs[s] for r in window], default=float("nan")) for s in s_list}
        d["eta"] = d["gradu_acc"] - float(np.interp(lo, self.step_t, self.step_gradu))
        return d


def _row(cfg, grid, state, acc_snapshot):
    fields = physical_fields(cfg.model, state)
    # rebuild from the stored fields so a checkpoint reproduces the row bit for bit
    clean = state_from_fields(cfg.model, grid, fields, state.t)
    return compute_row(cfg.model, grid, clean, cfg.nu, cfg.s_list, cfg.p_list, acc_snapshot), fields


def _history(cfg, snap, tracers):
    hist = {k: v for k, v in snap.items() if k != "ms"}
    hist["ms"] = [[s, v] for s, v in snap["ms"].items()]
    hist["s_list"] = list(cfg.s_list)
    hist["p_list"] = list(cfg.p_list)
    hist["tracers"] = list(tracers.x2) if tracers is not None else []
    return hist


def write_initial_checkpoint(cfg, path):
    """Scenario data at t=0 with the accumulators a run would start from."""
    grid = cfg.grid()
    data = make_scenario(cfg.scenario_spec(), grid)
    solver = make_solver(cfg.model, grid, cfg.nu)
    acc = _Accumulators(cfg.nu, solver.instant(solver.encode(data.state)), data.tracers)
    snap = acc.snapshot(0.0, [], cfg.s_list)
    write_checkpoint(path, cfg.model, grid.shape, 0.0, cfg.nu, data.fields, _history(cfg, snap, data.tracers))
    return data


def diagnose_checkpoint(path):
    """Recompute the diagnostics row stored implicitly in a checkpoint.

    Returns (row, s_list, p_list). Without a history trailer the
    accumulators are unknown and reported as nan.
    """
    header, fields, hist = read_checkpoint(path)
    model = header["model"]
    grid = grid_for_model(model, header["n1"], header["n2"])
    state = state_from_fields(model, grid, fields, header["t"])
    if hist is None:
        s_list, p_list = (1.0, 2.0), (1.0, 2.0, 4.0, np.inf)
        acc = {k: float("nan") for k in ("diss_acc", "F_acc", "G_acc", "gradu_acc", "grad_sup_acc", "h", "eta")}
    else:
        s_list, p_list = tuple(hist["s_list"]), tuple(hist["p_list"])
        acc = {k: v for k, v in hist.items() if k not in ("ms", "s_list", "p_list", "tracers")}
        acc["ms"] = {s: v for s, v in hist["ms"]}
    row = compute_row(model, grid, state, header["nu"], s_list, p_list, acc)
    return row, s_list, p_list


def run(cfg, out_dir=None, progress=None, svg=False):
    """Integrate ``cfg`` to its horizon; optionally write artifacts to out_dir."""
    grid = cfg.grid()
    data = make_scenario(cfg.scenario_spec(), grid)
    solver = make_solver(cfg.model, grid, cfg.nu)
    y = solver.encode(data.state)
    inst = solver.instant(y)
    acc = _Accumulators(cfg.nu, inst, data.tracers)
    result = RunResult(cfg, [], data.info, validation=validate_assumptions(grid, data.fields, data.spec, data.info.k0))
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    times, outputs = event_times(cfg.horizon, cfg.output_interval, cfg.checkpoint_times)
    # overflow on the way to blowup is caught explicitly as BlowupError
    with np.errstate(over="ignore", invalid="ignore"):
        _integrate(cfg, grid, solver, y, acc, times, outputs, out_dir, progress, result)
    result.monitors = growth_monitors(result.rows, data.info, cfg.s_list, cfg.p_list)
    if out_dir:
        write_artifacts(result, out_dir, svg)
    return result


def _integrate(cfg, grid, solver, y, acc, times, outputs, out_dir, progress, result):
    t = 0.0
    hmin = min(grid.spacing)
    try:
        for te in times:
            while t < te - 1e-12 * max(1.0, te):
                dt = cfg.cfl * hmin / max(1.0, acc.inst["umax"])
                last = te - t <= dt * (1 + 1e-9)
                if last:
                    dt = te - t
                y, acc.tracers = solver.advance(y, dt, t, acc.tracers)
                t = te if last else t + dt
                acc.update(dt, t, solver.instant(y))
            state = solver.decode(y, t)
            snap = acc.snapshot(t, result.rows, cfg.s_list)
            if te in outputs or out_dir:
                row, fields = _row(cfg, grid, state, snap)
            if te in outputs:
                result.rows.append(row)
                if progress:
                    progress(row)
            if out_dir and any(abs(te - c) < 1e-12 for c in cfg.checkpoint_times):
                path = os.path.join(out_dir, f"checkpoint_t{te:.6f}.bgl")
                write_checkpoint(path, cfg.model, grid.shape, t, cfg.nu, fields, _history(cfg, snap, acc.tracers))
                result.checkpoints.append(path)
            result.final_state = state
    except BlowupError as e:
        result.status = "blowup"
        result.error = str(e) if np.isfinite(e.t) else f"numerical blowup at t={t!r}"


def summary_text(result):
    cfg, info = result.config, result.info
    lines = [
        f"model {cfg.model}  scenario {cfg.scenario}  grid {cfg.n1}x{cfg.n2}  nu {cfg.nu!r}",
        f"status {result.status}" + (f" ({result.error})" if result.error else ""),
        f"rows {len(result.rows)}  final t {result.rows[-1].t!r}" if result.rows else "rows 0",
        f"k0 {info.k0!r}  A0 {info.A0!r}  E0 {info.E0!r}  T0 {info.T0!r}",
        "",
        "assumptions:",
        format_validation(result.validation),
        "",
    ]
    if len(result.rows) > 1 and not cfg.model.startswith("axisym"):
        lines.append(f"energy budget residual {energy_budget_residual(result.rows)!r}")
    elif len(result.rows) > 1:
        e = [r.E_K for r in result.rows]
        lines.append(f"kinetic energy drift {max(abs(v - e[0]) for v in e) / e[0]!r}")
    lines += ["", "bounds:", format_report(result.monitors), "",
              f"invariants {'pass' if result.invariants_passed else 'FAIL'}  exit {result.exit_code}"]
    return "\n".join(lines) + "\n"


def write_artifacts(result, out_dir, svg=False):
    cfg = result.config
    write_csv(os.path.join(out_dir, "series.csv"), result.rows, cfg.s_list, cfg.p_list)
    with open(os.path.join(out_dir, "summary.txt"), "w", encoding="utf-8") as fh:
        fh.write(summary_text(result))
    if svg and result.rows:
        from .plotting import plot_series

        plot_series(result.rows, os.path.join(out_dir, "series.svg"))
