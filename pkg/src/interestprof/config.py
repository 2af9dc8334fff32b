"""Run configuration: defaults overridden by config file, environment, flags.

The config file is flat ``key = value`` text (``#`` comments). Every key can
also be set through an ``INTERESTPROF_<KEY>`` environment variable; explicit
command-line flags win over both.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Mapping

from .errors import ConfigError

ENV_PREFIX = "INTERESTPROF_"


@dataclass
class RunConfig:
    taxonomy: str | None = None
    predictions: str | None = None
    labels: str | None = None
    classifier_cmd: str | None = None
    manifest: str | None = None
    out: str | None = None
    topk: int = 5
    mechanism: str = "occ"
    sweep: tuple[int, ...] = (5, 10, 50, 75, 100)
    tau: float = 0.1
    seed: int = 0
    jobs: int = 1
    skip_bad: bool = False
    force: bool = False
    attest_accuracy: bool = False
    # fixture generation
    users_per_topic: int = 10
    images: int = 100
    purity: float = 1.0

    def validate(self) -> "RunConfig":
        if self.topk < 1:
            raise ConfigError(f"topk must be >= 1, got {self.topk}")
        if self.mechanism not in ("prob", "occ"):
            raise ConfigError(f"mechanism must be 'prob' or 'occ', got '{self.mechanism}'")
        if not self.sweep or any(s <= 0 for s in self.sweep) or \
                list(self.sweep) != sorted(set(self.sweep)):
            raise ConfigError(
                f"sweep values must be positive and strictly increasing: {list(self.sweep)}"
            )
        if not 0.0 < self.tau <= 1.0:
            raise ConfigError(f"tau must be in (0, 1], got {self.tau}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if not 0.0 <= self.purity <= 1.0:
            raise ConfigError(f"purity must be in [0, 1], got {self.purity}")
        if self.users_per_topic < 0 or self.images < 1:
            raise ConfigError("fixture sizes must be positive")
        return self


_BOOL_WORDS = {"1": True, "true": True, "yes": True, "on": True,
               "0": False, "false": False, "no": False, "off": False}


def _parse_bool(key: str, raw: str) -> bool:
    try:
        return _BOOL_WORDS[raw.strip().casefold()]
    except KeyError:
        raise ConfigError(f"{key}: expected a boolean, got '{raw}'") from None


def parse_sweep(raw: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in raw.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"sweep: expected comma-separated integers, got '{raw}'") from None


def _coerce(key: str, raw: str):
    kind = {f.name: f.type for f in fields(RunConfig)}[key]
    raw = raw.strip()
    if key == "sweep":
        return parse_sweep(raw)
    if kind == "bool":
        return _parse_bool(key, raw)
    if kind == "int":
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got '{raw}'") from None
    if kind == "float":
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected a number, got '{raw}'") from None
    return raw


_KEYS = {f.name for f in fields(RunConfig)}


def parse_config_file(path: str | Path) -> dict:
    """Flat key=value file into a typed override mapping."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    values = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected key = value")
        key, _, raw_value = line.partition("=")
        key = key.strip()
        if key not in _KEYS:
            raise ConfigError(f"{path}:{no}: unknown config key '{key}'")
        values[key] = _coerce(key, raw_value)
    return values


def env_overrides(environ: Mapping[str, str] | None = None) -> dict:
    environ = os.environ if environ is None else environ
    values = {}
    for key in sorted(_KEYS):
        raw = environ.get(ENV_PREFIX + key.upper())
        if raw is not None:
            values[key] = _coerce(key, raw)
    return values


def build_config(file_values: Mapping, env_values: Mapping, cli_values: Mapping) -> RunConfig:
    """Merge defaults < config file < environment < CLI flags, then validate."""
    merged = {}
    for source in (file_values, env_values, cli_values):
        for key, value in source.items():
            if key in _KEYS and value is not None:
                merged[key] = value
    return RunConfig(**merged).validate()
