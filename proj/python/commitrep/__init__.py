"""Commitment and reputation under indirect reciprocity.

Thin wrapper over the compiled ``_core`` module. Experiment configs are plain
dicts with the same flat keys as the command-line tool's JSON configs.
"""

import json

from . import _core
from ._core import (
    ConfigError,
    absorption_probability,
    average_payoffs,
    fixation_probability,
    imitation_probability,
    pairwise_payoff,
    parse_strategy,
    payoff_matrix,
    predict_reputation,
    redemption_possible,
    run_evolution,
    simulate_reputations,
    strategy_names,
)

__version__ = _core.__version__


def default_config():
    """Every config key with its default value."""
    return json.loads(_core._config_defaults())


def normalize_config(config):
    """Validate ``config`` and return it with all keys filled in."""
    return json.loads(_core._normalize_config(json.dumps(config)))


def run_config(config):
    """Run an experiment; returns the manifest written next to the CSVs."""
    return json.loads(_core._run_config(json.dumps(config)))


__all__ = [
    "ConfigError",
    "absorption_probability",
    "average_payoffs",
    "default_config",
    "fixation_probability",
    "imitation_probability",
    "normalize_config",
    "pairwise_payoff",
    "parse_strategy",
    "payoff_matrix",
    "predict_reputation",
    "redemption_possible",
    "run_config",
    "run_evolution",
    "simulate_reputations",
    "strategy_names",
]
