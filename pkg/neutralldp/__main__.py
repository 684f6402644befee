"""
neutralldp CLI - Main entry point

Usage:
    neutralldp <experiment> --config PATH [--seed N] [--output PATH] [--threads N]
    neutralldp presets
"""

import argparse
import enum
import logging
import sys

import attr
import termcolor

from . import __version__
from ._errors import ConfigError, Error, InputError
from .runner import EXPERIMENTS, exit_code, list_presets, load_config, run_experiment
from .runner.config import SEED_MAX
from .runner.output import manifest_path

LOGGER = logging.getLogger(__name__)


class LogLevel(enum.IntEnum):
    DEBUG = logging.DEBUG
    INFO = logging.INFO
    WARNING = logging.WARNING
    ERROR = logging.ERROR


class ColoredFormatter(logging.Formatter):
    """Log formatter that colours each record by level."""

    COLORS = {
        "ERROR": "red",
        "WARNING": "yellow",
        "DEBUG": "cyan",
        "INFO": "magenta",
    }

    def __init__(self, fmt, use_color=True):
        super().__init__(fmt=fmt)
        self.use_color = use_color

    def format(self, record):
        msg = super().format(record)
        return (
            msg
            if not self.use_color
            else termcolor.colored(msg, getattr(record, "color", self.COLORS.get(record.levelname)))
        )


def setup_logging(level):
    """
    Attach one stderr handler to the package logger.

    Args:
        level: Log level string (debug, info, warning, error)
    """
    logger = logging.getLogger("neutralldp")
    logger.setLevel(level.upper())
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(
        ColoredFormatter("(%(levelname)s) %(name)s: %(message)s", use_color=sys.stderr.isatty())
    )
    logger.addHandler(handler)


def _error(message):
    termcolor.cprint(f"Error: {message}", "red", file=sys.stderr)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="neutralldp",
        description="Simulate neutral SFDEs and check their large deviations numerically",
    )
    parser.add_argument("-V", "--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH", help="Experiment config file")
    common.add_argument("--seed", type=int, help="Override the config seed")
    common.add_argument("--output", metavar="PATH", help="Override the config output path")
    common.add_argument(
        "--threads",
        type=int,
        help="Worker threads (default: $NEUTRALLDP_WORKERS or the executor default)",
    )
    common.add_argument(
        "--log-level",
        action="store",
        default="warning",
        choices=[level.name.lower() for level in LogLevel],
        type=str.lower,
        help="warning: displays warnings only.\n"
        "info: adds experiment milestones.\n"
        "debug: adds per-step and per-restart detail.",
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")
    for experiment in EXPERIMENTS:
        subparsers.add_parser(experiment, parents=[common], help=f"Run a {experiment} experiment")
    subparsers.add_parser("presets", help="List the shipped coefficient presets")
    return parser


def run_presets(args):
    for name, description in list_presets():
        termcolor.cprint(f"{name:<16}", "cyan", end="")
        print(description)
    return 0


def run_command(args):
    """Load, override and run one experiment config; return the exit status."""
    setup_logging(args.log_level)

    try:
        config = load_config(args.config)
    except OSError as e:
        _error(f"cannot read config {args.config}: {e.strerror}")
        return exit_code(InputError(path=args.config))
    except Error as e:
        _error(e)
        return exit_code(e)

    try:
        if config.experiment != args.command:
            raise ConfigError(
                f"config {args.config} describes a {config.experiment!r} experiment, "
                f"not {args.command!r}"
            )
        if args.seed is not None:
            if not 0 <= args.seed <= SEED_MAX:
                raise InputError(f"--seed must lie in [0, 2^64), got {args.seed}")
            config = attr.evolve(config, seed=args.seed)
        if args.output is not None:
            config = attr.evolve(config, output_path=args.output)
        manifest = run_experiment(config, threads=args.threads)
    except Error as e:
        _error(e)
        return exit_code(e)
    except Exception as e:
        LOGGER.debug("unexpected failure", exc_info=True)
        _error(f"{type(e).__name__}: {e}")
        return exit_code(e)

    termcolor.cprint(
        f"Wrote {manifest.row_count} rows to {manifest.output_path} "
        f"(manifest {manifest_path(manifest.output_path)})",
        "green",
    )
    return 0


def main(argv=None):
    """Main entry point for the neutralldp CLI."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "presets":
        return run_presets(args)
    elif args.command in EXPERIMENTS:
        return run_command(args)
    else:
        parser.print_help()
        return 1


if __name__ == "__main__":
    sys.exit(main())
