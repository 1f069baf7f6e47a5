"""
Scenario files: JSON descriptions of a single command run.

A scenario looks like

    {
      "command": "delay",
      "format": "csv",
      "output": "data/delay.csv",
      "inputs": {"xe": {"value": 1.0, "unit": "AU"}, "rs": {"value": 2.953, "unit": "km"}},
      "tolerances": {"path": 1e-9}
    }

Physical inputs carry mandatory unit strings and are converted to SI on load.
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import config
from optics.utils import DomainError

logger = logging.getLogger(__name__)

# Accepted unit strings and their factor to SI, per quantity kind
UNITS = {
    "length": {"m": 1.0, "km": 1e3, "AU": config.ASTRONOMICAL_UNIT},
    "wavenumber": {"1/m": 1.0, "1/km": 1e-3},
    "dimensionless": {"1": 1.0, "": 1.0},
    "count": {"1": 1.0, "": 1.0},
    "choice": {"": None},
}

# Inputs each command accepts and their kinds
FIELDS = {
    "delay": {"xe": "length", "xv": "length", "impact": "length", "rs": "length"},
    "deflect": {"ra": "length", "rs": "length"},
    "perihelion": {"a": "length", "ecc": "dimensionless", "rs": "length"},
    "mercury": {},
    "eikonal": {
        "case": "choice", "r_min": "length", "r_max": "length", "samples": "count",
        "ra": "length", "rs": "length", "energy": "dimensionless", "eta": "dimensionless"
    },
    "bessel-check": {
        "kappa": "wavenumber", "ra": "length", "samples": "count", "eta": "dimensionless",
        "r_min": "length", "r_max": "length"
    },
    "optimize-path": {
        "medium": "choice", "ra": "length", "rs": "length", "energy": "dimensionless",
        "r_far": "length", "segments": "count", "tolerance": "dimensionless",
        "max_iterations": "count"
    },
    "report-all": {},
}

# Tolerance overrides: optimizer stationarity and the bessel-check error bound
TOLERANCES = ("path", "bound")

_KEYS = {"command", "format", "output", "inputs", "tolerances"}


def convert_input(name: str, kind: str, entry: Any) -> Any:
    """
    Convert one {"value", "unit"} entry to SI.

    Args:
        name: Input name, for messages
        kind: Quantity kind from FIELDS
        entry: The raw entry

    Returns:
        The SI value (int for counts, str for choices)
    """
    if not isinstance(entry, dict) or set(entry) - {"value", "unit"} or "value" not in entry:
        raise DomainError(f"input {name!r} must be an object with 'value' and 'unit'")
    unit = entry.get("unit", "")
    if kind not in ("choice", "count", "dimensionless") and "unit" not in entry:
        raise DomainError(f"input {name!r} needs a unit, one of {sorted(UNITS[kind])}")
    if unit not in UNITS[kind]:
        raise DomainError(f"unit {unit!r} not accepted for {name!r}, expected one of {sorted(UNITS[kind])}")

    value = entry["value"]
    if kind == "choice":
        if not isinstance(value, str):
            raise DomainError(f"input {name!r} must be a string")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DomainError(f"input {name!r} must be a number, got {value!r}")
    if kind == "count":
        if int(value) != value:
            raise DomainError(f"input {name!r} must be a whole number, got {value}")
        return int(value)
    return float(value) * UNITS[kind][unit]


@dataclass
class ScenarioConfig:
    """A command with its SI inputs, output settings and tolerance overrides."""
    command: str
    format: str = "csv"
    output: Optional[str] = None
    inputs: Dict[str, Any] = field(default_factory=dict)
    tolerances: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Convert the scenario to a dictionary with SI inputs."""
        return {
            'command': self.command,
            'format': self.format,
            'output': self.output,
            'inputs': dict(self.inputs),
            'tolerances': dict(self.tolerances)
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'ScenarioConfig':
        """
        Validate a raw scenario and convert its inputs to SI.

        Raises:
            DomainError: On unknown keys, commands, inputs or units
        """
        if not isinstance(data, dict):
            raise DomainError("scenario must be a JSON object")
        unknown = set(data) - _KEYS
        if unknown:
            raise DomainError(f"unknown scenario keys: {sorted(unknown)}")

        command = data.get("command")
        if command not in FIELDS:
            raise DomainError(f"unknown command {command!r}, expected one of {config.COMMANDS}")
        fmt = data.get("format", "csv")
        if fmt not in config.OUTPUT_FORMATS:
            raise DomainError(f"unknown format {fmt!r}, expected one of {config.OUTPUT_FORMATS}")

        allowed = FIELDS[command]
        raw_inputs = data.get("inputs", {})
        if not isinstance(raw_inputs, dict):
            raise DomainError("'inputs' must be an object")
        bad = set(raw_inputs) - set(allowed)
        if bad:
            raise DomainError(f"unknown inputs for {command}: {sorted(bad)}")
        inputs = {name: convert_input(name, allowed[name], entry) for name, entry in raw_inputs.items()}

        tolerances = data.get("tolerances", {})
        if not isinstance(tolerances, dict) or set(tolerances) - set(TOLERANCES):
            raise DomainError(f"tolerances must be an object with keys from {list(TOLERANCES)}")
        for name, value in tolerances.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
                raise DomainError(f"tolerance {name!r} must be a positive number")

        return cls(command=command, format=fmt, output=data.get("output"),
                   inputs=inputs, tolerances={k: float(v) for k, v in tolerances.items()})


def load_scenario(path: str) -> ScenarioConfig:
    """
    Load a scenario file.

    Args:
        path: JSON file

    Returns:
        The validated scenario
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except OSError as e:
        logger.error(f"Error reading scenario {path}: {e}")
        raise DomainError(f"cannot read scenario {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise DomainError(f"scenario {path} is not valid JSON: {e}") from e

    scenario = ScenarioConfig.from_dict(data)
    logger.info(f"Loaded {scenario.command} scenario from {path}")
    return scenario
