"""
Experiment configs, coefficient presets, result files and the experiment dispatcher.
"""

from .config import (
    EXPERIMENTS,
    ExperimentConfig,
    config_digest,
    load_config,
    parse_config,
    serialize_config,
)
from .presets import CoefficientModel, create_model, list_presets
from .run import (
    EXIT_FAILURE,
    EXIT_INPUT,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_OUTPUT,
    RunManifest,
    exit_code,
    run_experiment,
)

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "parse_config",
    "serialize_config",
    "config_digest",
    "load_config",
    "CoefficientModel",
    "create_model",
    "list_presets",
    "RunManifest",
    "run_experiment",
    "exit_code",
    "EXIT_OK",
    "EXIT_FAILURE",
    "EXIT_INPUT",
    "EXIT_NUMERICAL",
    "EXIT_OUTPUT",
]
