"""Python interface to the quditsim C++ core.

Experiment configs are plain dicts with the same layout as the JSON files
accepted by the command line tool.
"""

import json
import math

from ._core import (
    ConfigError,
    HardwareSpec,
    PhysicsError,
    RabiSpec,
    SchedulingError,
    SpinSystem,
    default_time_grid,
    exact_dynamics,
    exact_ground_state,
    hardware_hamiltonian,
    list_presets,
    rabi_hamiltonian,
    truncation_error,
)
from . import _core

__all__ = [
    "ConfigError",
    "HardwareSpec",
    "PhysicsError",
    "RabiSpec",
    "SchedulingError",
    "SpinSystem",
    "default_time_grid",
    "exact_dynamics",
    "exact_ground_state",
    "hardware_hamiltonian",
    "list_presets",
    "preset_config",
    "rabi_hamiltonian",
    "run_dqs",
    "run_experiment",
    "run_vqe",
    "truncation_error",
]


def _plain(value):
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _dump(config):
    return json.dumps(_plain(config))


def preset_config(name, **overrides):
    """Full config dict of a preset, with top-level keys replaced by overrides."""
    cfg = json.loads(_core._preset_config(name))
    cfg.update(overrides)
    return json.loads(_core._normalize_config(_dump(cfg)))


def run_vqe(config):
    """Runs the variational ground-state search; one dict per G value."""
    return json.loads(_core._run_vqe(_dump(config)))


def run_dqs(config):
    """Runs the digital simulation; one dict per T2 value with its time points."""
    return json.loads(_core._run_dqs(_dump(config)))


def run_experiment(config):
    """Runs an experiment and writes its tables to config["output_dir"]."""
    return json.loads(_core._run_experiment(_dump(config)))
