"""Experiment configuration."""

from __future__ import annotations

import json
import os
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Self

from pydantic import BaseModel, ConfigDict, Field, field_validator
from pydantic import ValidationError as PydanticValidationError

from activebn.active.loop import LoopConfig
from activebn.active.strategy import Strategy
from activebn.exceptions import ConfigError, ValidationError
from activebn.learning.config import ScoreConfig, SearchConfig
from activebn.query import QueryConfig

MANIFEST_CONFIG_KEY = "config"


def _load_config_file(config_file: str | os.PathLike[str]) -> dict[str, Any]:
    """Load a JSON config, or the config embedded in a run manifest."""
    path = Path(config_file).expanduser()

    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Failed to read experiment config: {path}") from exc

    try:
        payload = json.loads(content)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Experiment config is not valid JSON: {path}") from exc

    if not isinstance(payload, Mapping):
        raise ConfigError("Experiment config must contain a JSON object")
    if isinstance(payload.get(MANIFEST_CONFIG_KEY), Mapping):
        payload = payload[MANIFEST_CONFIG_KEY]

    loaded = dict(payload)
    network = loaded.get("network")
    if isinstance(network, str) and not Path(network).expanduser().is_absolute():
        loaded["network"] = str(path.parent / network)
    return loaded


def _merge(base: Mapping[str, Any], overrides: Mapping[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = _merge(merged[key], value)
        elif isinstance(value, Mapping):
            merged[key] = _merge({}, value)
        else:
            merged[key] = value
    return merged


class ExperimentConfig(BaseModel):
    """Everything needed to rerun an experiment bit for bit.

    Attributes:
        network: Path of the true network document.
        strategies: Strategy labels, e.g. ``passive``, ``random:2``, ``active:kl2``.
        trials: Independent repetitions with their own initial data.
        seed: Master seed every random stream derives from.
        output_dir: Directory receiving the CSVs and the manifest.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    network: Path
    strategies: tuple[str, ...] = ("passive", "active:kl2")
    trials: int = Field(default=5, ge=1)
    seed: int = Field(ge=0)
    output_dir: Path = Path("results")
    loop: LoopConfig = Field(default_factory=LoopConfig)
    score: ScoreConfig = Field(default_factory=ScoreConfig)
    search: SearchConfig = Field(default_factory=SearchConfig)
    query: QueryConfig = Field(default_factory=QueryConfig)

    @field_validator("strategies")
    @classmethod
    def _check_strategies(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        if not value:
            raise ValueError("at least one strategy is required")
        try:
            labels = tuple(Strategy.parse(text).label for text in value)
        except ValidationError as exc:
            raise ValueError(exc.message) from exc
        if len(set(labels)) != len(labels):
            raise ValueError("strategies must be distinct")
        return labels

    @property
    def parsed_strategies(self) -> tuple[Strategy, ...]:
        return tuple(Strategy.parse(text) for text in self.strategies)

    @classmethod
    def create(
        cls,
        *,
        config_file: str | os.PathLike[str] | None = None,
        overrides: Mapping[str, Any] | None = None,
    ) -> Self:
        """Build a config from explicit overrides, then the file, then defaults.

        ``None`` override values are ignored, so unset command-line flags
        leave file values in place.

        Raises:
            ConfigError: The file cannot be read or the merged values are invalid.
        """
        file_values = _load_config_file(config_file) if config_file is not None else {}
        merged = _merge(file_values, overrides or {})
        if "seed" not in merged:
            raise ConfigError("A master seed is required (--seed or \"seed\" in the config)")
        if "network" not in merged:
            raise ConfigError("A true network is required (--net or \"network\" in the config)")
        try:
            return cls.model_validate(merged)
        except PydanticValidationError as exc:
            raise ConfigError(f"Invalid experiment config: {exc}") from exc


__all__ = ["MANIFEST_CONFIG_KEY", "ExperimentConfig"]
