"""Command line interface.

Subcommands: ``run`` (a TOML config), ``preset`` (a named scenario),
``sweep`` (bisection on the drive amplitude), ``classify`` (label an
existing timeseries CSV).  Exit codes: 0 success, 1 bad configuration
or input, 2 simulation blow-up.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import backend, io
from .analysis import classify_timeseries
from .config import load_config
from .errors import BlowUpError, HHError
from .integrate import simulate
from .presets import preset, preset_names
from .sweep import sweep_bifurcation


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hhrdnet",
        description="simulate networks of excitable reaction-diffusion "
                    "neurons on a segment")
    parser.add_argument("--backend", choices=("auto", "compiled", "python"),
                        default="auto", help="stepping backend (default auto)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a TOML configuration file")
    p_run.add_argument("--config", required=True, help="path to the TOML file")
    p_run.add_argument("--out", default=None,
                       help="output directory (overrides the config)")
    p_run.add_argument("--svg", action="store_true",
                       help="also write SVG plots")

    p_pre = sub.add_parser("preset", help="run a named scenario")
    p_pre.add_argument("name", choices=preset_names())
    p_pre.add_argument("--out", default="out", help="output directory")
    p_pre.add_argument("--scheme", choices=("rk4", "split"), default="rk4")
    p_pre.add_argument("--svg", action="store_true")

    p_sweep = sub.add_parser(
        "sweep", help="bisect the drive amplitude at the oscillation onset")
    p_sweep.add_argument("--from", dest="lo", type=float, default=5.2,
                         metavar="I0", help="lower drive amplitude")
    p_sweep.add_argument("--to", dest="hi", type=float, default=5.3,
                         metavar="I0", help="upper drive amplitude")
    p_sweep.add_argument("--width", type=float, default=0.0125,
                         help="target bracket width")
    p_sweep.add_argument("--init", default="1,1,1,1", metavar="V,N,M,H",
                         help="uniform initial condition (default 1,1,1,1)")

    p_cls = sub.add_parser("classify", help="label a timeseries CSV")
    p_cls.add_argument("--input", required=True,
                       help="path to a timeseries CSV")
    p_cls.add_argument("--window", type=float, nargs=2, default=(250.0, 500.0),
                       metavar=("T0", "T1"))
    return parser


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    t0 = time.perf_counter()
    record = simulate(cfg.network_spec(), cfg.initial_state(), cfg.time_grid,
                      cfg.scheme, cfg.probe_nodes, cfg.snapshot_times,
                      classifier=cfg.classifier)
    duration = time.perf_counter() - t0
    out_dir = args.out if args.out is not None else cfg.out_dir
    paths = io.write_run_outputs(record, out_dir, duration=duration,
                                 config_echo=cfg.echo(),
                                 backend_name=backend.active_name(),
                                 svg=args.svg or cfg.svg)
    _report(record, paths)
    return 0


def _cmd_preset(args) -> int:
    pre = preset(args.name)
    t0 = time.perf_counter()
    record = simulate(pre.spec, pre.initial_state(), pre.time_grid,
                      args.scheme, pre.probes, pre.snapshot_times)
    duration = time.perf_counter() - t0
    paths = io.write_run_outputs(record, args.out, duration=duration,
                                 preset_name=pre.name,
                                 backend_name=backend.active_name(),
                                 svg=args.svg)
    _report(record, paths)
    return 0


def _report(record, paths):
    for label in record.labels:
        print(f"neuron {label.neuron + 1}: {label.label}")
    for name, verdict in record.verdicts.items():
        print(f"{name}: {'pass' if verdict.passed else 'FAIL'}")
    print(f"wrote {paths['summary']}")


def _parse_init(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 4:
        raise HHError("--init must be four comma-separated numbers")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise HHError("--init must be four comma-separated numbers") from None


def _cmd_sweep(args) -> int:
    result = sweep_bifurcation(args.lo, args.hi, args.width,
                               init=_parse_init(args.init))
    for amp, label in result.evaluations:
        print(f"{amp:.6g} {label}")
    print(f"bracket [{result.lo:.6g}, {result.hi:.6g}] "
          f"width {result.width:.6g}")
    print(f"onset near {result.midpoint:.6g}")
    return 0


def _cmd_classify(args) -> int:
    names, data = io.read_timeseries_csv(args.input)
    if names[0] != "t":
        raise HHError(f"{args.input}: first column must be t")
    columns = {name: data[:, i + 1] for i, name in enumerate(names[1:])}
    labels = classify_timeseries(data[:, 0], columns, window=args.window)
    for label in labels:
        print(f"neuron {label.neuron + 1}: {label.label}")
    return 0


_COMMANDS = {"run": _cmd_run, "preset": _cmd_preset, "sweep": _cmd_sweep,
             "classify": _cmd_classify}


def cli_main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        backend.select(args.backend)
        return _COMMANDS[args.command](args)
    except BlowUpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (HHError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
