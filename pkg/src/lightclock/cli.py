"""Command-line entry point: drop, sweep-length, sweep-rs, validate."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import scenario
from .errors import ConfigError, LightClockError

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_CONFIG = 0, 1, 2, 3

log = logging.getLogger("lightclock")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lightclock",
                                description="Quantum light-clock dropped in Schwarzschild spacetime")
    p.add_argument("command", choices=("drop", "sweep-length", "sweep-rs", "validate"))
    p.add_argument("--config", metavar="PATH", help="key = value scenario file")
    p.add_argument("--rs", type=float, metavar="M", help="Schwarzschild radius [m]")
    p.add_argument("--height", type=float, metavar="M", help="drop height [m]")
    p.add_argument("--length", type=float, metavar="M", help="initial cavity length L0 [m]")
    p.add_argument("--nmax", type=int, metavar="K", help="number of output modes")
    p.add_argument("--pmax", type=int, metavar="K", help="intermediate-mode truncation")
    p.add_argument("--samples", type=int, metavar="N", help="output time samples")
    p.add_argument("--toy-scale", type=float, metavar="F", help="multiply L0 by F")
    p.add_argument("--method", choices=scenario.METHODS)
    p.add_argument("--workers", type=int, metavar="N")
    p.add_argument("--output", metavar="PATH", help="CSV output path (stdout summary only if omitted)")
    p.add_argument("--json", action="store_true", help="also write a JSON mirror next to the CSV")
    p.add_argument("--fault", choices=("coupling",), help=argparse.SUPPRESS)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _config(args) -> scenario.ScenarioConfig:
    return scenario.load_config(args.config, r_s=args.rs, drop_height=args.height, L0=args.length,
                                n_max=args.nmax, p_max=args.pmax, samples=args.samples,
                                toy_scale=args.toy_scale, method=args.method,
                                workers=args.workers, output=args.output)


def _emit(config, table, meta, json_mirror):
    if config.output:
        scenario.write_outputs(config.output, table, config, meta, json_mirror)
        log.info("wrote %s", config.output)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        config = _config(args)
        if args.command == "drop":
            res = scenario.run_drop(config)
            meta = scenario._drop_meta(res)
            _emit(config, res.table(), meta, args.json)
            print(json.dumps({**res.comparison.end(), "F_cl_closed_form": res.closed_form_F_cl,
                              "method": res.comparison.method,
                              "theta_B_qu_error": res.comparison.theta_B_qu_error}, indent=1))
        elif args.command == "sweep-length":
            sw = scenario.sweep_length(config)
            _emit(config, sw.table(), sw.meta(), args.json)
            print(json.dumps(sw.meta(), indent=1))
        elif args.command == "sweep-rs":
            sw = scenario.sweep_schwarzschild(config)
            _emit(config, sw.table(), sw.meta(), args.json)
            print(json.dumps(sw.meta(), indent=1))
        else:
            rep = scenario.validate(config, fault=args.fault)
            doc = rep.as_dict()
            if config.output:
                Path(config.output).write_text(json.dumps(doc, indent=1) + "\n")
            print(json.dumps(doc, indent=1))
            return EXIT_OK if rep.passed else EXIT_VALIDATION
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (LightClockError, ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
