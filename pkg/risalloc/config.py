"""
Experiment config files and run manifests.

A config file is plain ``key = value`` text. ``#`` starts a comment and blank
lines are ignored. Keys that are missing take the documented defaults;
unknown keys are rejected.
"""

from __future__ import annotations

# Standard Library
import hashlib
import json
import logging
from collections.abc import Callable, Mapping
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

# Django
from django.utils import timezone

# Local
from . import __version__, app_settings
from .exceptions import ConfigParseError
from .simulation import Scheme, SimConfig, SweepAxis

logger = logging.getLogger(__name__)

AUTO = "auto"


def _int(text: str) -> int:
    return int(text)


def _float(text: str) -> float:
    return float(text)


def _auto_int(text: str) -> int | None:
    return None if text.lower() == AUTO else int(text)


def _auto_float(text: str) -> float | None:
    return None if text.lower() == AUTO else float(text)


def _schemes(text: str) -> tuple[Scheme, ...]:
    return tuple(Scheme(item.strip().upper()) for item in text.split(",") if item.strip())


def _sweep_axis(text: str) -> SweepAxis:
    return SweepAxis(text.lower())


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(item) for item in text.split(",") if item.strip())


# key -> parser; every SimConfig field is a documented key
PARSERS: dict[str, Callable[[str], object]] = {
    "n_devices": _int,
    "n_ris": _auto_int,
    "n_antennas": _int,
    "ris_rows": _int,
    "ris_cols": _int,
    "carrier_frequency_hz": _float,
    "bandwidth_hz": _float,
    "noise_density_dbm_hz": _float,
    "noise_figure_db": _float,
    "element_side_m": _auto_float,
    "ap_power_dbm": _float,
    "trials": _int,
    "seed": _int,
    "schemes": _schemes,
    "max_iterations": _int,
    "rate_tolerance": _float,
    "max_redraws": _int,
    "sweep_axis": _sweep_axis,
    "sweep_values": _float_list,
    "area_side_m": _float,
    "ris_ring_radius_m": _float,
    "ris_height_m": _float,
    "ap_height_m": _float,
    "device_height_m": _float,
    "haps_altitude_m": _float,
    "haps_count": _int,
}


def settings_defaults() -> dict:
    """Defaults that deployments may change through Django settings."""
    return {
        "trials": app_settings.RIS_SIM_DEFAULT_TRIALS,
        "seed": app_settings.RIS_SIM_DEFAULT_SEED,
        "max_iterations": app_settings.RIS_SIM_MAX_ITERATIONS,
        "rate_tolerance": app_settings.RIS_SIM_RATE_TOLERANCE,
        "max_redraws": app_settings.RIS_SIM_MAX_REDRAWS,
    }


def parse_config_text(text: str) -> dict:
    """
    Parse config text into typed values, keyed by field name.

    Raises:
        ConfigParseError: On a line without ``=``, an unknown or repeated key,
            or a value of the wrong type; carries the 1-based line number
    """
    values: dict = {}
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"expected 'key = value', got {raw.strip()!r}", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in PARSERS:
            raise ConfigParseError(f"unknown key {key!r}", line=number)
        if key in values:
            raise ConfigParseError(f"duplicate key {key!r}", line=number)
        try:
            values[key] = PARSERS[key](value)
        except ValueError:
            raise ConfigParseError(f"invalid value {value!r} for {key}", line=number) from None
    return values


def read_config_file(path: str | Path) -> dict:
    """
    Read and parse a config file.

    Raises:
        OSError: If the file cannot be read
        ConfigParseError: See :func:`parse_config_text`
    """
    return parse_config_text(Path(path).read_text(encoding="utf-8"))


def build_config(
    file_values: Mapping | None = None, presets: Mapping | None = None, overrides: Mapping | None = None
) -> SimConfig:
    """
    Layer values and validate.

    Precedence, lowest first: built-in defaults, Django settings, subcommand
    presets, the config file, command-line overrides.

    Raises:
        ConfigValidationError: If the merged values break an invariant
    """
    values = settings_defaults()
    for layer in (presets, file_values, overrides):
        if layer:
            values.update(layer)
    return SimConfig(**values)


def parse_config(path: str | Path | None = None, presets: Mapping | None = None) -> SimConfig:
    """Parse a config file (or none at all) into a validated :class:`SimConfig`."""
    file_values = read_config_file(path) if path is not None else {}
    config = build_config(file_values, presets)
    logger.debug(f"Parsed config {path or '(defaults)'}: {config}")
    return config


def _format_value(value) -> str:
    if value is None:
        return AUTO
    if isinstance(value, (Scheme, SweepAxis)):
        return value.value
    if isinstance(value, tuple):
        return ", ".join(_format_value(item) for item in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(config: SimConfig) -> str:
    """Config file text with every key, in sorted order; parses back to an equal config."""
    names = sorted(f.name for f in fields(config))
    return "".join(f"{name} = {_format_value(getattr(config, name))}\n" for name in names)


def config_hash(config: SimConfig) -> str:
    """SHA-256 of the canonical JSON form; independent of field order."""
    canonical = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class RunManifest:
    """Provenance written next to every result file."""

    config_hash: str
    version: str
    seed: int
    timestamp: str
    subcommand: str
    config: dict
    output_paths: list[str] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @classmethod
    def for_config(cls, config: SimConfig, subcommand: str) -> RunManifest:
        return cls(
            config_hash=config_hash(config),
            version=__version__,
            seed=config.seed,
            timestamp=timezone.now().isoformat(),
            subcommand=subcommand,
            config=config.to_dict(),
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"
