#!/usr/bin/env python3
"""
Command-line entry point for the continual-learning testbed

Can be run as:
  clreg run --config run.json --out runs/ewc
  clreg sweep --config run.json --lambdas 0,0.5,5 --out runs/sweep
  clreg shuffle --config run.json --n 5 --out runs/shuffle
  clreg probe fisher --config run.json --out runs/probes
  clreg metrics --matrix runs/ewc/R.csv
  clreg serve
"""

import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from .errors import ClregError, ConfigError, NumericalError
from .metrics.continual import AccuracyMatrix, bwt, final_acc, fwt, learning_curve, mean_acc, read_accuracy_csv
from .runner import (
    PROBE_KINDS,
    RunConfig,
    emit_reports,
    load_config,
    run_probe,
    run_sequence,
    shuffle_grid,
    stability_plasticity,
    sweep_lambda,
    write_shuffle,
    write_sweep,
    write_table,
)
from .strategies import STRATEGY_NAMES
from .utils.serialization import to_jsonable

# Setup logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected a comma-separated list of numbers, got '{text}'")


def _name_list(text: str) -> List[str]:
    names = [x.strip() for x in text.split(",") if x.strip()]
    unknown = [n for n in names if n not in STRATEGY_NAMES]
    if unknown:
        raise argparse.ArgumentTypeError(f"Unknown strategies {unknown}; choose from {', '.join(STRATEGY_NAMES)}")
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clreg", description="Regularisation-based continual learning testbed")
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p: argparse.ArgumentParser, out: bool = True):
        p.add_argument("--config", type=Path, help="JSON run configuration (defaults when omitted)")
        if out:
            p.add_argument("--out", type=Path, required=True, help="Output directory")

    run = sub.add_parser("run", help="Train one strategy over the stream")
    with_config(run)
    run.add_argument("--seed", type=int, help="Run seed (default: first configured seed)")

    sweep = sub.add_parser("sweep", help="Lambda sweep over all configured seeds")
    with_config(sweep)
    sweep.add_argument("--lambdas", type=_float_list, required=True, help="Comma-separated lambda grid")
    sweep.add_argument("--strategies", type=_name_list, help="Comma-separated strategies (default: config strategy)")

    shuffle = sub.add_parser("shuffle", help="Subject-order shuffle grid")
    with_config(shuffle)
    shuffle.add_argument("--n", type=int, help="Number of orders, the first being the generated one")
    shuffle.add_argument("--strategies", type=_name_list, default=list(STRATEGY_NAMES))

    stability = sub.add_parser("stability", help="Tuned vs very large lambda against naive")
    with_config(stability)
    stability.add_argument("--large-lambda", type=float, default=1e6)

    probe = sub.add_parser("probe", help="Run a diagnostic probe")
    probe.add_argument("kind", choices=PROBE_KINDS)
    with_config(probe)

    metrics = sub.add_parser("metrics", help="Metrics of a saved accuracy matrix")
    metrics.add_argument("--matrix", type=Path, required=True, help="R.csv written by 'clreg run'")
    metrics.add_argument("--baseline", type=_float_list, help="Comma-separated baseline row (overrides the init row)")

    sub.add_parser("serve", help="Run the MCP stdio server")
    return parser


def _config(args) -> RunConfig:
    if args.config is None:
        return RunConfig().require_valid()
    return load_config(args.config)


def _cmd_run(args) -> int:
    artifacts = run_sequence(_config(args), args.seed)
    emit_reports(artifacts, args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    result = sweep_lambda(_config(args), args.lambdas, args.strategies)
    write_sweep(result, args.out)
    return EXIT_OK


def _cmd_shuffle(args) -> int:
    config = _config(args)
    result = shuffle_grid(config, args.n or config.shuffles, args.strategies)
    write_shuffle(result, args.out)
    return EXIT_OK


def _cmd_stability(args) -> int:
    rows = stability_plasticity(_config(args), large_lam=args.large_lambda)
    write_table(rows, args.out / "stability.csv")
    return EXIT_OK


def _cmd_probe(args) -> int:
    for report in run_probe(args.kind, _config(args)):
        report.write(args.out)
    return EXIT_OK


def _cmd_metrics(args) -> int:
    M = read_accuracy_csv(args.matrix)
    if args.baseline is not None:
        M = AccuracyMatrix(M.R, np.asarray(args.baseline))
    result = {"T": M.T, "final_acc": final_acc(M), "mean_acc": mean_acc(M), "learning_curve": learning_curve(M)}
    for name, metric in (("bwt", bwt), ("fwt", fwt)):
        try:
            result[name] = metric(M)
        except ClregError as e:
            result[name] = None
            logger.warning(f"{name.upper()} undefined: {e}")
    print(json.dumps(to_jsonable(result), indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_serve(args) -> int:
    from .server import ClregMCPServer

    asyncio.run(ClregMCPServer().run())
    return EXIT_OK


COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "shuffle": _cmd_shuffle,
    "stability": _cmd_stability,
    "probe": _cmd_probe,
    "metrics": _cmd_metrics,
    "serve": _cmd_serve,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, dispatch and map errors to exit codes"""
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_CONFIG
    except NumericalError as e:
        logger.error(f"{e} {e.record}")
        return EXIT_NUMERICAL
    except ClregError as e:
        logger.error(str(e))
        return EXIT_ERROR


def cli():
    """Console script entry point for clreg."""
    sys.exit(main())


if __name__ == "__main__":
    cli()
