"""Command line entry point: simulate, gen-data, verify, diagnose.

Exit status: 0 success, 1 bad input or IO failure, 2 an asserted
invariant or lemma inequality failed, 3 numerical blowup.
"""

import argparse
import csv
import dataclasses
import sys

from . import lemmas
from .config import RunConfig, load_config
from .diagnostics import csv_columns, fmt_num
from .errors import AssumptionError, ConfigError
from .runner import EXIT_INVARIANT, EXIT_OK, diagnose_checkpoint, run, summary_text, write_initial_checkpoint
from .scenarios import SCENARIO_MODELS

EXIT_INPUT = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="boussinesq-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a configured simulation")
    s.add_argument("--config", required=True, help="INI run configuration")
    s.add_argument("--out", help="output directory (defaults to the config's out_dir)")
    s.add_argument("--svg", action="store_true", help="also write series.svg")
    s.add_argument("--quiet", action="store_true", help="suppress the summary on stdout")

    g = sub.add_parser("gen-data", help="write scenario initial data as a checkpoint")
    g.add_argument("--scenario", required=True, choices=sorted(SCENARIO_MODELS))
    g.add_argument("--out", required=True, help="checkpoint path")
    g.add_argument("--config", help="take grid and scenario parameters from this file")
    g.add_argument("--n1", type=int)
    g.add_argument("--n2", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--amplitude", type=float)
    g.add_argument("--alpha", type=float)
    g.add_argument("--perturbation", type=float)

    v = sub.add_parser("verify", help="run a randomized lemma suite")
    v.add_argument("kind", choices=lemmas.KINDS)
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--resolution", type=int, help="grid size per axis for the samples")
    v.add_argument("--csv", help="write one row per sample to this path")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--show", type=int, default=0, metavar="K", help="print full reports of the first K samples")

    d = sub.add_parser("diagnose", help="recompute the diagnostics row of a checkpoint")
    d.add_argument("--checkpoint", required=True)
    return p


def _simulate(args):
    cfg = load_config(args.config)
    out = args.out or cfg.out_dir
    result = run(cfg, out, svg=args.svg)
    if not args.quiet:
        sys.stdout.write(summary_text(result))
    return result.exit_code


def _gen_data(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    model = SCENARIO_MODELS[args.scenario]
    changes = {"scenario": args.scenario, "model": model}
    if model != cfg.model:
        changes["nu"] = 0.01 if model == "torus-viscous" else 0.0
        if not args.config and model == "axisym-euler":
            changes.update(n1=65, n2=64)
    for key in ("n1", "n2", "seed", "amplitude", "alpha", "perturbation"):
        val = getattr(args, key)
        if val is not None:
            changes[key] = val
    cfg = dataclasses.replace(cfg, **changes)
    data = write_initial_checkpoint(cfg, args.out)
    info = data.info
    print(f"wrote {args.out}: {cfg.scenario} on {cfg.n1}x{cfg.n2}, k0={info.k0!r} A0={info.A0!r} E0={info.E0!r}")
    return EXIT_OK


def _verify(args):
    if args.samples < 1 or args.workers < 1:
        raise ConfigError("--samples and --workers must be positive")
    reports = lemmas.run_suite(args.kind, args.samples, args.seed, args.resolution, args.workers)
    for r in reports[: args.show]:
        print(r.text())
    print(lemmas.suite_summary(args.kind, reports))
    if args.csv:
        header, rows = lemmas.suite_rows(reports, args.seed)
        with open(args.csv, "w", newline="\n", encoding="ascii") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt_num(v) if isinstance(v, float) else v for v in row])
    return EXIT_OK if all(r.passed for r in reports) else EXIT_INVARIANT


def _diagnose(args):
    row, s_list, p_list = diagnose_checkpoint(args.checkpoint)
    print(",".join(csv_columns(s_list, p_list)))
    print(",".join(fmt_num(v) for v in row.values(s_list, p_list)))
    return EXIT_OK


COMMANDS = {"simulate": _simulate, "gen-data": _gen_data, "verify": _verify, "diagnose": _diagnose}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, AssumptionError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
