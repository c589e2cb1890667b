"""Configuration: key=value file, DL_-prefixed environment, flag overrides,
and loaders for the weight-table and section-rule files."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .aggregation import DamageEstimator
from .detector import (
    DEFAULT_COMPONENT_KIND,
    DEFAULT_MIN_CONFIDENCE,
    DEFAULT_SECTION_RULES,
    DetectorBackendConfig,
    HttpDetectorBackend,
    MockDetectorBackend,
    SectionRule,
)
from .model import DEFAULT_WEIGHTS, WeightTable
from .pipeline import ImageProcessor
from .scheduler import Scheduler
from .search import SearchService
from .store import Store

ENV_PREFIX = "DL_"


@dataclass
class AppConfig:
    store: str = "damagesearch.db"
    fixtures: str | None = None
    damage_endpoint: str | None = None
    object_endpoint: str | None = None
    min_confidence: float = DEFAULT_MIN_CONFIDENCE
    weights: str | None = None
    rules: str | None = None
    bind: str = "127.0.0.1:8000"
    mock_confidence: float = 0.92
    flip_probability: float = 0.0
    seed: int = 0
    default_component: str = DEFAULT_COMPONENT_KIND
    detect_timeout: float = 10.0

    def __post_init__(self):
        if not 0.0 <= self.min_confidence <= 1.0:
            raise ValueError(f"min_confidence must be in [0, 1], got {self.min_confidence!r}")
        for name in ("fixtures", "weights", "rules"):
            value = getattr(self, name)
            if value is not None and not Path(value).exists():
                raise FileNotFoundError(f"configured {name} path does not exist: {value}")


_FIELD_TYPES = {f.name: f.type for f in fields(AppConfig)}


def _coerce(name: str, raw: str):
    text = raw.strip()
    if name in ("min_confidence", "mock_confidence", "flip_probability", "detect_timeout"):
        return float(text)
    if name == "seed":
        return int(text)
    return text


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> AppConfig:
    """Merged config: defaults < file < DL_* environment < explicit overrides."""
    values: dict = {}
    if path is not None:
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, raw = line.partition("=")
            key = key.strip().lower()
            if key not in _FIELD_TYPES:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = _coerce(key, raw)
    for name in _FIELD_TYPES:
        env = os.environ.get(ENV_PREFIX + name.upper())
        if env is not None:
            values[name] = _coerce(name, env)
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    return AppConfig(**values)


def load_weight_table(path: str | Path) -> WeightTable:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return WeightTable(
        component_weights={k: float(v) for k, v in data["component_weights"].items()},
        section_weights={k: float(v) for k, v in data["section_weights"].items()},
    )


def dump_weight_table(table: WeightTable, path: str | Path):
    Path(path).write_text(
        json.dumps(
            {
                "component_weights": dict(table.component_weights),
                "section_weights": dict(table.section_weights),
            },
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )


def load_section_rules(path: str | Path) -> tuple[SectionRule, ...]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return tuple(
        SectionRule(section_kind=entry["section"], objects=frozenset(entry["objects"]))
        for entry in data
    )


def dump_section_rules(rules, path: str | Path):
    Path(path).write_text(
        json.dumps(
            [{"section": r.section_kind, "objects": sorted(r.objects)} for r in rules],
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )


class AppContext:
    """Wired application: store, backends, processor, estimator, scheduler,
    search service, built once from an AppConfig."""

    def __init__(self, config: AppConfig):
        self.config = config
        self.store = Store(config.store)
        self.weights = load_weight_table(config.weights) if config.weights else DEFAULT_WEIGHTS
        self.rules = load_section_rules(config.rules) if config.rules else DEFAULT_SECTION_RULES

        self.damage_backend = self._backend(config.damage_endpoint, config)
        self.object_backend = (
            self._backend(config.object_endpoint, config) if config.object_endpoint else self.damage_backend
        )

        self.processor = None
        if self.damage_backend is not None:
            self.processor = ImageProcessor(
                self.store,
                self.damage_backend,
                self.object_backend,
                min_confidence=config.min_confidence,
                rules=self.rules,
                weights=self.weights,
                default_component=config.default_component,
            )
        self.estimator = DamageEstimator(
            self.store,
            weights=self.weights,
            processor=self.processor,
            default_component=config.default_component,
        )
        self.scheduler = Scheduler(self.store, self.processor, self.estimator)
        self.search = SearchService(self.store, self.scheduler)

    @staticmethod
    def _backend(endpoint: str | None, config: AppConfig):
        if endpoint:
            return HttpDetectorBackend(
                DetectorBackendConfig(
                    endpoint=endpoint,
                    min_confidence=config.min_confidence,
                    timeout=config.detect_timeout,
                )
            )
        if config.fixtures:
            return MockDetectorBackend(
                config.fixtures,
                confidence=config.mock_confidence,
                flip_probability=config.flip_probability,
                seed=config.seed,
            )
        return None

    def close(self):
        self.store.close()
