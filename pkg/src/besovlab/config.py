"""Run configuration: schema validation, presets and conversion to ``SimConfig``.

A configuration is one flat JSON object.  Keys absent from the document fall
back to the preset named by ``preset`` (if any) and then to ``DEFAULTS``.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import ConfigError
from .euler.dynamics import FULL, LINEAR
from .euler.model import PhysicalParams
from .euler.simulate import ICSpec, SimConfig
from .lp.grid import make_grid

CONFIG_VERSION = 1

DEFAULTS: dict = {
    "version": CONFIG_VERSION,
    "dim": 3,
    "points": 32,
    "period": 2 * math.pi,
    "A": 1.0,
    "gamma": 1.4,
    "a": 1.0,
    "nbar": 1.0,
    "kind": "random",
    "amplitude": 1e-4,
    "band": [1, 4],
    "seed": 0,
    "component": "m",
    "tend": 10.0,
    "cfl": 0.5,
    "dt": None,
    "record_every": 1,
    "dealias": True,
    "linear": False,
    "sigma": None,
    "eps": 0.1,
    "eps_prime": 0.05,
    "blowup_threshold": None,
}


def _load_data(name: str) -> dict:
    return json.loads(resources.files("besovlab").joinpath("data", name).read_text())


@lru_cache(maxsize=1)
def schema() -> dict:
    return _load_data("config_schema.json")


@lru_cache(maxsize=1)
def presets() -> dict[str, dict]:
    return _load_data("presets.json")


def validate(doc: dict) -> None:
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {exc.message}") from None


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    validate(doc)
    return doc


def resolve(doc: dict | None = None, overrides: dict | None = None,
            preset: str | None = None) -> dict:
    """Merge defaults, preset, document and overrides (later wins) and validate."""
    doc = dict(doc or {})
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    name = overrides.pop("preset", None) or preset or doc.get("preset")
    merged = dict(DEFAULTS)
    if name is not None:
        if name not in presets():
            raise ConfigError(f"unknown preset {name!r}; known: {sorted(presets())}")
        merged.update(presets()[name])
        merged["preset"] = name
    merged.update({k: v for k, v in doc.items() if k != "preset"})
    merged.update(overrides)
    validate(merged)
    return merged


def to_sim_config(cfg: dict, keep_states: bool = False) -> SimConfig:
    """Build the simulation objects, turning constructor errors into ``ConfigError``."""
    try:
        grid = make_grid(cfg["dim"], cfg["points"], cfg["period"])
        params = PhysicalParams(A=cfg["A"], gamma=cfg["gamma"], a=cfg["a"], n_bar=cfg["nbar"])
        mode = tuple(cfg["mode"]) if cfg.get("mode") is not None else None
        if mode is not None and len(mode) != grid.dim:
            raise ValueError(f"mode {mode} does not match dim {grid.dim}")
        ic = ICSpec(kind=cfg["kind"], amplitude=cfg["amplitude"], band=tuple(cfg["band"]),
                    seed=cfg["seed"], mode=mode, component=cfg["component"])
        return SimConfig(grid=grid, params=params, t_end=cfg["tend"], ic=ic, cfl=cfg["cfl"],
                         dt=cfg["dt"], dealias=cfg["dealias"], record_every=cfg["record_every"],
                         blowup_threshold=cfg["blowup_threshold"],
                         terms=LINEAR if cfg["linear"] else FULL, sigma=cfg["sigma"],
                         eps=cfg["eps"], eps_prime=cfg["eps_prime"], keep_states=keep_states)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
