"""Command line entry point.

Verbs:
    qbattery simulate --config scenario.json
    qbattery figure   --id fig2 --out outdir
    qbattery optimize --mode detuning --config scenario.json
    qbattery optimize --mode ratio    --config scenario.json
    qbattery verify   --level fast

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 verification failure.  QBATTERY_OUTPUT_DIR supplies the default output
directory when a config omits output_dir (and the default --out).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import optimize, scenarios
from .errors import ConfigError, QBatteryError
from .scenarios import OUTPUT_DIR_ENV

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbattery", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario config and write its output files")
    sim.add_argument("--config", required=True, help="path to a scenario JSON file")

    fig = sub.add_parser("figure", help="write the data behind one result figure")
    fig.add_argument("--id", required=True, choices=scenarios.FIGURE_IDS)
    fig.add_argument("--out", default=None, help="output directory (default: $%s or '.')" % OUTPUT_DIR_ENV)

    opt = sub.add_parser("optimize", help="report optimal charging parameters for a config")
    opt.add_argument("--mode", required=True, choices=("detuning", "ratio"))
    opt.add_argument("--config", required=True, help="path to a scenario JSON file")

    ver = sub.add_parser("verify", help="run the oracle and cross-check suite")
    ver.add_argument("--level", default="fast", choices=("fast", "full"))
    return parser


def _cmd_simulate(args) -> int:
    result = scenarios.run_scenario(args.config)
    print(f"wrote {result.trajectory_csv}")
    print(f"wrote {result.steady_csv}")
    print(f"wrote {result.meta_json}")
    summary = {k: v for k, v in result.summary.items() if v is not None}
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_figure(args) -> int:
    out = args.out or os.environ.get(OUTPUT_DIR_ENV, ".")
    paths = scenarios.reproduce_figure(args.id, out)
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


def _cmd_optimize(args) -> int:
    config = scenarios.load_config(args.config)
    v = config.values
    if args.mode == "detuning":
        params = scenarios._params_from_values(v)
        if v["Gamma"] == 0.0:
            result = optimize.optimal_detuning_conventional(
                v["J_mag"], v["kappa_a"], v["kappa_b"], F=v["F"], omega=v["omega"]
            )
        else:
            result = optimize.optimal_detuning_shared(params)
        payload = {
            "delta_opt": result.delta_opt,
            "both_branches": list(result.both_branches),
            "achieved_E_B": result.achieved_E_B,
            "method": result.method,
            "closed_form_ok": result.closed_form_ok,
        }
    else:
        result = optimize.super_optimal_ratio(
            v["kappa_a"], v["kappa_b"], F=v["F"], Gamma=v["Gamma"] or 0.4, omega=v["omega"]
        )
        e_a, e_b, xi = result.achieved
        payload = {"y_opt": result.y_opt, "E_A": e_a, "E_B": e_b, "xi": xi}
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_verify(args) -> int:
    report = scenarios.verify(args.level)
    print(report)
    return EXIT_OK if report.passed else EXIT_VERIFY


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "figure": _cmd_figure,
        "optimize": _cmd_optimize,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QBatteryError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
