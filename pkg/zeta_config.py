#!/usr/bin/env python3
"""
Configuration for the Nielsen zeta calculator
Defaults come from zeta_config.json; NIELSEN_ZETA_* environment variables
(optionally from a local .env file) override them
"""

import json
import logging
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Dict, Mapping, Optional, Tuple

from dotenv import load_dotenv

from zeta_errors import ConfigError

logger = logging.getLogger(__name__)

CONFIG_FILE = Path(__file__).with_name('zeta_config.json')
ENV_PREFIX = 'NIELSEN_ZETA_'


@dataclass(frozen=True)
class ZetaSettings:
    order: int = 64
    max_den_degree: int = 8
    torus_check_order: int = 64
    radical_fallback_candidates: Tuple[int, ...] = tuple(range(1, 17))
    twisted_bound: int = 4
    twisted_length: int = 4
    stable_range: int = 1
    word_ball_limit: int = 1_000_000
    seed: int = 20240501
    asym_entropy: float = 2.0
    asym_overflow_limit: float = 10000.0
    asym_precision_digits: int = 40
    log_level: str = 'INFO'

    def with_overrides(self, **overrides) -> 'ZetaSettings':
        """Return a copy with the non-None overrides applied"""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def _coerce(name: str, raw, default):
    """Convert a JSON or environment value to the type of the default"""
    try:
        if isinstance(default, tuple):
            if isinstance(raw, str):
                raw = [item for item in raw.replace(',', ' ').split() if item]
            return tuple(int(item) for item in raw)
        if isinstance(default, bool):
            return str(raw).lower() in ('1', 'true', 'yes')
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        return str(raw)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid value for setting '{name}': {raw!r} ({e})")


def _validate(settings: ZetaSettings) -> ZetaSettings:
    if settings.order < 0:
        raise ConfigError("order must be nonnegative")
    if settings.max_den_degree < 1:
        raise ConfigError("max_den_degree must be positive")
    if settings.twisted_bound < 0 or settings.twisted_length < 0 or settings.stable_range < 0:
        raise ConfigError("twisted bounds must be nonnegative")
    if any(b < 1 for b in settings.radical_fallback_candidates):
        raise ConfigError("radical candidates must be positive integers")
    if settings.asym_entropy <= 0:
        raise ConfigError("asym_entropy must be positive")
    return settings


def load_settings(config_path: Optional[Path] = None,
                  environ: Optional[Mapping[str, str]] = None,
                  use_dotenv: bool = True) -> ZetaSettings:
    """Load settings from the JSON file, then apply environment overrides"""
    path = Path(config_path) if config_path else CONFIG_FILE
    defaults = ZetaSettings()
    known = {f.name: getattr(defaults, f.name) for f in fields(ZetaSettings)}
    values: Dict[str, object] = dict(known)

    if path.exists():
        try:
            with open(path, 'r') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Could not parse {path}: {e}")
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ConfigError(f"Unknown settings in {path}: {', '.join(unknown)}")
        for key, raw in data.items():
            values[key] = _coerce(key, raw, known[key])
    else:
        logger.debug(f"No config file at {path}, using built-in defaults")

    if use_dotenv:
        load_dotenv()
    env = os.environ if environ is None else environ
    for key in known:
        env_key = ENV_PREFIX + key.upper()
        if env_key in env:
            values[key] = _coerce(key, env[env_key], known[key])
            logger.debug(f"Setting {key} overridden from {env_key}")

    return _validate(ZetaSettings(**values))
