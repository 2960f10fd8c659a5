"""Run configuration: one TOML file with ``[env]``, ``[reward]``, ``[train]``,
``[eval]`` and ``[io]`` tables.

Every key is optional; omitted keys take the library defaults. Dotted keys
(``reward.R_s = 10``) and table headers are interchangeable because both are
plain TOML. Unknown tables or keys are rejected by name.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised only on 3.10
    import tomli as tomllib

from .environment import EnvConfig, catalog_lookup
from .evaluation import EvalSpec
from .rewards import RewardConfig
from .trainer import TrainConfig


class ConfigError(ValueError):
    """Malformed or invalid configuration; the message names the file and key."""


@dataclass(frozen=True)
class IoConfig:
    run_dir: str = "runs/default"
    checkpoint_every: int = 20_000  # env steps between robot checkpoints; 0 = final only

    def __post_init__(self):
        if self.checkpoint_every < 0:
            raise ValueError("io.checkpoint_every must be non-negative")


@dataclass(frozen=True)
class RunConfig:
    env: EnvConfig = field(default_factory=EnvConfig)
    reward: RewardConfig = field(default_factory=RewardConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    eval: EvalSpec = field(default_factory=EvalSpec)
    io: IoConfig = field(default_factory=IoConfig)


_SECTIONS = {"env": EnvConfig, "reward": RewardConfig, "train": TrainConfig, "eval": EvalSpec, "io": IoConfig}


def _coerce(section: str, key: str, value: Any, default: Any) -> Any:
    if section == "env" and key == "object":
        return catalog_lookup(value)
    if isinstance(default, bool) and not isinstance(value, bool):
        raise ConfigError(f"{section}.{key} must be true or false, got {value!r}")
    if isinstance(default, float) and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, list):
        return tuple(value)
    return value


def from_dict(data: dict) -> RunConfig:
    """Build a validated RunConfig from nested mappings."""
    blocks = {}
    for section, value in data.items():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown key {section!r}; expected one of {sorted(_SECTIONS)}")
        if not isinstance(value, dict):
            raise ConfigError(f"{section} must be a table")
    for section, cls in _SECTIONS.items():
        given = data.get(section, {})
        defaults = cls()
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for key, value in given.items():
            if key not in known:
                raise ConfigError(f"unknown key '{section}.{key}'")
            kwargs[key] = _coerce(section, key, value, getattr(defaults, key))
        try:
            blocks[section] = cls(**kwargs)
        except (ValueError, KeyError, TypeError) as e:
            msg = str(e).strip("'\"")
            raise ConfigError(msg if msg.startswith(f"{section}.") else f"{section}: {msg}") from e
    return RunConfig(**blocks)


def load_config(path) -> RunConfig:
    """Parse and validate a TOML run configuration."""
    path = Path(path)
    try:
        text = path.read_bytes().decode("utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from e
    except UnicodeDecodeError as e:
        raise ConfigError(f"{path}: not valid UTF-8 ({e.reason} at byte {e.start})") from e
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}") from e  # message carries line and column
    try:
        return from_dict(data)
    except ConfigError as e:
        raise ConfigError(f"{path}: {e}") from e


def to_dict(run: RunConfig) -> dict:
    """Every field of every block, materialized; the inverse of :func:`from_dict`."""
    out = {}
    for section in _SECTIONS:
        block = getattr(run, section)
        table = {}
        for f in fields(block):
            value = getattr(block, f.name)
            if value is None:
                continue  # TOML has no null; omission restores the default
            if section == "env" and f.name == "object":
                value = value.name
            elif section == "eval" and f.name == "robot" and not isinstance(value, str):
                continue
            if isinstance(value, tuple):
                value = list(value)
            table[f.name] = value
        out[section] = table
    return out


def dumps(run: RunConfig) -> str:
    return tomli_w.dumps(to_dict(run))


def write_resolved(run: RunConfig, directory) -> Path:
    """Write the fully resolved config as ``config.toml`` inside ``directory``."""
    path = Path(directory) / "config.toml"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(run))
    return path
