"""Run configuration: built-in presets < config file < command-line flags."""

from __future__ import annotations

import configparser
import dataclasses
import logging
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

from diskhull.sampling import DEFAULT_SEED, BoundaryMode

log = logging.getLogger(__name__)

QUANTITIES = ("convex", "star", "topological")

# per-quantity parameters; everything else comes from RunConfig defaults
PRESETS: dict[str, dict[str, dict[str, Any]]] = {
    "desk": {
        "convex": {"dt": 1e-5, "n_paths": 20_000},
        "star": {"dt": 1e-5, "n_paths": 5_000, "m_directions": 720},
        "topological": {"kill_radius": 300, "n_paths": 20_000},
    },
    "paper": {
        "convex": {"dt": 1e-7, "n_paths": 100_000},
        "star": {"dt": 1e-6, "n_paths": 100_000, "m_directions": 2000},
        "topological": {"kill_radius": 1000, "n_paths": 100_000},
    },
}


@dataclass(frozen=True)
class RunConfig:
    """Effective parameters of one command. Defaults are the desk-scale
    acceptance parameters for the convex-hull runs."""

    preset: str = "desk"
    dt: float = 1e-5
    n_paths: int = 20_000
    m_directions: int = 720
    kill_radius: int = 300
    seed: int = DEFAULT_SEED
    boundary_mode: str = BoundaryMode.FIRST_EXTERIOR.value
    workers: int | None = None
    abs_tol: float = 1e-10
    rel_tol: float = 1e-12
    max_subdivisions: int = 500
    grid: int = 99
    out: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name: str, raw: Any) -> Any:
    if raw is None:
        return None
    kind = _FIELD_TYPES[name]
    if isinstance(raw, str):
        raw = raw.strip()
    if "float" in kind:
        return float(raw)
    if "int" in kind:
        return int(float(raw)) if isinstance(raw, str) and "e" in raw.lower() else int(raw)
    if name == "boundary_mode":
        return BoundaryMode(str(raw).lower().replace("-", "_")).value
    return str(raw)


def read_config_file(path: str | Path, command: str, quantity: str | None = None) -> dict[str, Any]:
    """Read ``key = value`` pairs from the ``[defaults]``, ``[<command>]`` and
    ``[<command>.<quantity>]`` sections, later sections winning."""
    parser = configparser.ConfigParser()
    if not parser.read(path, encoding="utf-8"):
        raise FileNotFoundError(f"cannot read config file {path}")
    out: dict[str, Any] = {}
    sections = ["defaults", command] + ([f"{command}.{quantity}"] if quantity else [])
    for section in sections:
        if not parser.has_section(section):
            continue
        for key, value in parser.items(section):
            name = key.replace("-", "_")
            if name not in _FIELD_TYPES:
                raise KeyError(f"unknown config key {key!r} in section [{section}]")
            out[name] = _coerce(name, value)
    return out


def resolve(
    quantity: str,
    *,
    preset: str = "desk",
    file_values: Mapping[str, Any] | None = None,
    cli_values: Mapping[str, Any] | None = None,
) -> RunConfig:
    """Effective configuration for one quantity ('convex', 'star',
    'topological' or None for analytic-only commands)."""
    file_values = dict(file_values or {})
    cli_values = {k: v for k, v in (cli_values or {}).items() if v is not None}
    preset = cli_values.get("preset", file_values.get("preset", preset))
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}")
    values: dict[str, Any] = {"preset": preset}
    if quantity is not None:
        values.update(PRESETS[preset][quantity])
    for source, layer in (("config file", file_values), ("command line", cli_values)):
        for key, value in layer.items():
            value = _coerce(key, value)
            if key in values and values[key] != value:
                log.info("%s overrides %s: %r -> %r", source, key, values[key], value)
            values[key] = value
    return RunConfig(**values)
