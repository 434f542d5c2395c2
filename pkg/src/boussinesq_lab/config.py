"""Run configuration: INI-style text with [run], [grid], [scenario] and
[diagnostics] sections, validated into a frozen RunConfig.

Defaults (any key may be omitted):

    [run]      model = (from scenario)   nu = 0.0 (0.01 for torus-viscous)
               cfl = 0.5   horizon = 1.0   output_interval = 0.1
               checkpoint_times = (none)   out_dir = out   seed = 0
    [grid]     n1 = 64   n2 = 64
    [scenario] name = inviscid-t2 (or the one matching model)
               amplitude = 1.0   alpha = 0.0   perturbation = 0.0
    [diagnostics] s_list = 1.0, 2.0   p_list = 1.0, 2.0, 4.0, inf
"""

import configparser
import re
from dataclasses import dataclass, field, fields

import numpy as np

from .diagnostics import fmt_num
from .errors import ConfigError
from .grids import grid_for_model
from .scenarios import SCENARIO_MODELS

MODELS = tuple(SCENARIO_MODELS.values())
DEFAULT_SCENARIO = {m: s for s, m in SCENARIO_MODELS.items()}

SECTIONS = {
    "run": ("model", "nu", "cfl", "horizon", "output_interval", "checkpoint_times", "out_dir", "seed"),
    "grid": ("n1", "n2"),
    "scenario": ("name", "amplitude", "alpha", "perturbation"),
    "diagnostics": ("s_list", "p_list"),
}


@dataclass(frozen=True)
class RunConfig:
    model: str = "torus-inviscid"
    scenario: str = "inviscid-t2"
    amplitude: float = 1.0
    alpha: float = 0.0
    perturbation: float = 0.0
    n1: int = 64
    n2: int = 64
    nu: float = 0.0
    cfl: float = 0.5
    horizon: float = 1.0
    output_interval: float = 0.1
    checkpoint_times: tuple = ()
    out_dir: str = "out"
    seed: int = 0
    s_list: tuple = (1.0, 2.0)
    p_list: tuple = (1.0, 2.0, 4.0, np.inf)

    def __post_init__(self):
        validate(self)

    def scenario_spec(self):
        from .scenarios import ScenarioSpec

        return ScenarioSpec(self.scenario, self.amplitude, self.alpha, self.perturbation, self.seed)

    def grid(self):
        return grid_for_model(self.model, self.n1, self.n2)


def validate(cfg):
    if cfg.model not in MODELS:
        raise ConfigError(f"model must be one of {', '.join(MODELS)}, got {cfg.model!r}")
    if cfg.scenario not in SCENARIO_MODELS:
        raise ConfigError(f"name must be one of {', '.join(SCENARIO_MODELS)}, got {cfg.scenario!r}")
    if SCENARIO_MODELS[cfg.scenario] != cfg.model:
        raise ConfigError(f"scenario {cfg.scenario} runs on model {SCENARIO_MODELS[cfg.scenario]}, not {cfg.model}")
    if not (np.isfinite(cfg.nu) and cfg.nu >= 0):
        raise ConfigError("nu must be ≥ 0")
    if cfg.model == "torus-viscous" and cfg.nu <= 0:
        raise ConfigError("nu must be > 0 for torus-viscous")
    if cfg.model != "torus-viscous" and cfg.nu != 0:
        raise ConfigError(f"nu must be 0 for the inviscid model {cfg.model}")
    if not (0 < cfg.cfl <= 0.5):
        raise ConfigError("cfl must lie in (0, 0.5]")
    if not (np.isfinite(cfg.horizon) and cfg.horizon >= 0):
        raise ConfigError("horizon must be ≥ 0")
    if not (np.isfinite(cfg.output_interval) and cfg.output_interval > 0):
        raise ConfigError("output_interval must be > 0")
    for t in cfg.checkpoint_times:
        if not (np.isfinite(t) and 0 <= t <= cfg.horizon):
            raise ConfigError("checkpoint_times must lie in [0, horizon]")
    if cfg.seed < 0:
        raise ConfigError("seed must be ≥ 0")
    if not cfg.amplitude > 0:
        raise ConfigError("amplitude must be > 0")
    if not np.isfinite(cfg.alpha):
        raise ConfigError("alpha must be finite")
    if not 0 <= cfg.perturbation <= 1:
        raise ConfigError("perturbation must lie in [0, 1]")
    for s in cfg.s_list:
        if not -2 <= s <= 6:
            raise ConfigError("s_list entries must lie in [-2, 6]")
    for p in cfg.p_list:
        if not p >= 1:
            raise ConfigError("p_list entries must be ≥ 1")
    try:
        grid_for_model(cfg.model, cfg.n1, cfg.n2)
    except ConfigError as e:
        raise ConfigError(f"n1={cfg.n1}, n2={cfg.n2} invalid for {cfg.model}: {e}") from None


def _floats(key, text):
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"{key} must be a comma-separated list of numbers") from None


def _scalar(key, text, kind):
    try:
        return kind(text.strip())
    except ValueError:
        raise ConfigError(f"{key} must be {'an integer' if kind is int else 'a number'}, got {text.strip()!r}") from None


def _line_of(text, section, key):
    current = None
    for i, line in enumerate(text.splitlines(), 1):
        m = re.match(r"\s*\[([^\]]+)\]", line)
        if m:
            current = m.group(1).strip()
        elif current == section and re.match(rf"\s*{re.escape(key)}\s*=", line, re.IGNORECASE):
            return i
    return 0


def parse_config(text):
    parser = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#", ";"),
                                       inline_comment_prefixes=None, interpolation=None)
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as e:
        raise ConfigError(f"line {e.lineno}: key outside of a [section]") from None
    except configparser.DuplicateSectionError as e:
        raise ConfigError(f"line {e.lineno}: duplicate section [{e.section}]") from None
    except configparser.DuplicateOptionError as e:
        raise ConfigError(f"line {e.lineno}: duplicate key {e.option!r}") from None
    except configparser.ParsingError as e:
        lineno = e.errors[0][0] if e.errors else 0
        raise ConfigError(f"line {lineno}: expected key = value") from None
    raw = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(f"line {_section_line(text, section)}: unknown section [{section}]")
        for key, value in parser.items(section):
            if key not in SECTIONS[section]:
                raise ConfigError(f"line {_line_of(text, section, key)}: unknown key {key!r} in [{section}]")
            raw[(section, key)] = value
    kw = {}
    get = lambda s, k: raw.get((s, k))  # noqa: E731
    model, scen = get("run", "model"), get("scenario", "name")
    model = model.strip() if model is not None else None
    scen = scen.strip() if scen is not None else None
    if model is None and scen is None:
        model, scen = "torus-inviscid", "inviscid-t2"
    elif model is None:
        if scen not in SCENARIO_MODELS:
            raise ConfigError(f"name must be one of {', '.join(SCENARIO_MODELS)}, got {scen!r}")
        model = SCENARIO_MODELS[scen]
    elif scen is None:
        if model not in DEFAULT_SCENARIO:
            raise ConfigError(f"model must be one of {', '.join(MODELS)}, got {model!r}")
        scen = DEFAULT_SCENARIO[model]
    kw.update(model=model, scenario=scen)
    kw["nu"] = 0.01 if model == "torus-viscous" else 0.0
    for (section, key), value in raw.items():
        if key in ("model", "name"):
            continue
        if key in ("n1", "n2", "seed"):
            kw[key] = _scalar(key, value, int)
        elif key in ("checkpoint_times", "s_list", "p_list"):
            kw[key] = _floats(key, value)
        elif key == "out_dir":
            kw[key] = value.strip()
        else:
            kw[key] = _scalar(key, value, float)
    return RunConfig(**kw)


def _section_line(text, section):
    for i, line in enumerate(text.splitlines(), 1):
        if re.match(rf"\s*\[{re.escape(section)}\]", line):
            return i
    return 0


def serialize_config(cfg):
    """Canonical text: every key written, floats in repr form."""
    v = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    lst = lambda xs: ", ".join(fmt_num(x) for x in xs)  # noqa: E731
    return "\n".join([
        "[run]",
        f"model = {v['model']}",
        f"nu = {fmt_num(v['nu'])}",
        f"cfl = {fmt_num(v['cfl'])}",
        f"horizon = {fmt_num(v['horizon'])}",
        f"output_interval = {fmt_num(v['output_interval'])}",
        f"checkpoint_times = {lst(v['checkpoint_times'])}",
        f"out_dir = {v['out_dir']}",
        f"seed = {v['seed']}",
        "",
        "[grid]",
        f"n1 = {v['n1']}",
        f"n2 = {v['n2']}",
        "",
        "[scenario]",
        f"name = {v['scenario']}",
        f"amplitude = {fmt_num(v['amplitude'])}",
        f"alpha = {fmt_num(v['alpha'])}",
        f"perturbation = {fmt_num(v['perturbation'])}",
        "",
        "[diagnostics]",
        f"s_list = {lst(v['s_list'])}",
        f"p_list = {lst(v['p_list'])}",
        "",
    ])


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
