"""Detector backend gateway: wire protocol client, mock backend, gating,
and section/component inference from detections.

The wire contract is one HTTP POST per image:

    request   {"image_id": str, "image_path": str, "min_confidence": float}
    response  {"detections": [{"class_id": int, "class_name": str,
                "confidence": float, "bbox": [x, y, w, h],
                "polygon": {"all_points_x": [...], "all_points_y": [...]}}]}

Class ids 1..4 are the damage ordinal; anything above 4 is an object class
(refrigerator, toilet, ...) used for section inference. Two logical
backends exist (damage and objects); the deterministic mock serves both
from sidecar annotation files.
"""

from __future__ import annotations

import json
import random
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import requests

from .annotations import parse_vgg
from .errors import BackendUnavailableError, NotFoundError, ProtocolError
from .model import DEFAULT_SIGNIFICANCE, DEFAULT_WEIGHTS, WeightTable, damage_from_label

DAMAGE_CLASS_MAX = 4
DEFAULT_MIN_CONFIDENCE = 0.85
MOCK_CONFIDENCE = 0.92

# Component kinds the object backend may report; damage inside their bbox
# is attributed to them.
COMPONENT_OBJECT_KINDS = ("ceiling", "floor", "wall", "door", "window", "closet")
DEFAULT_COMPONENT_KIND = "ceiling"

# Object-class vocabulary with stable ids above the damage range.
OBJECT_CLASS_IDS: dict[str, int] = {
    "refrigerator": 5,
    "oven": 6,
    "stove": 7,
    "microwave": 8,
    "dishwasher": 9,
    "sink": 10,
    "toilet": 11,
    "bathtub": 12,
    "shower": 13,
    "bed": 14,
    "wardrobe": 15,
    "nightstand": 16,
    "dresser": 17,
    "sofa": 18,
    "couch": 19,
    "tv": 20,
    "fireplace": 21,
    "car": 22,
    "garage door": 23,
    "ceiling": 24,
    "floor": 25,
    "wall": 26,
    "door": 27,
    "window": 28,
    "closet": 29,
}


def object_class_id(name: str) -> int:
    """Stable id for an object class; unseen names hash into [500, 999)."""
    known = OBJECT_CLASS_IDS.get(name)
    if known is not None:
        return known
    return 500 + zlib.crc32(name.encode("utf-8")) % 499


@dataclass(frozen=True)
class DetectorBackendConfig:
    endpoint: str
    min_confidence: float = DEFAULT_MIN_CONFIDENCE
    timeout: float = 10.0
    expected_class_processing_time: Mapping[str, float] | None = None

    def __post_init__(self):
        if not 0.0 <= self.min_confidence <= 1.0:
            raise ValueError(f"min_confidence must be in [0, 1], got {self.min_confidence!r}")


def _polygon_hull(polygon: Sequence[tuple[float, float]]) -> tuple[float, float, float, float]:
    xs = [p[0] for p in polygon]
    ys = [p[1] for p in polygon]
    return (min(xs), min(ys), max(xs) - min(xs), max(ys) - min(ys))


@dataclass(frozen=True)
class Detection:
    """One detector output, validated on construction."""

    detection_id: str
    image_id: str
    class_id: int
    class_name: str
    confidence: float
    bbox: tuple[float, float, float, float]
    polygon: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ProtocolError(f"confidence {self.confidence!r} outside [0, 1]")
        if self.class_id < 1:
            raise ProtocolError(f"class_id must be >= 1, got {self.class_id!r}")
        if len(self.polygon) < 3:
            raise ProtocolError(f"polygon needs at least 3 vertices, got {len(self.polygon)}")
        x, y, w, h = self.bbox
        if w < 0 or h < 0:
            raise ProtocolError(f"bbox has negative extent: {self.bbox!r}")
        hx, hy, hw, hh = _polygon_hull(self.polygon)
        eps = 1e-6
        if hx < x - eps or hy < y - eps or hx + hw > x + w + eps or hy + hh > y + h + eps:
            raise ProtocolError(f"bbox {self.bbox!r} does not contain the polygon hull")

    @property
    def is_damage(self) -> bool:
        return 1 <= self.class_id <= DAMAGE_CLASS_MAX


def parse_detections(image_id: str, payload, id_prefix: str | None = None) -> list[Detection]:
    """Turn a wire response payload into validated detections."""
    if not isinstance(payload, dict) or not isinstance(payload.get("detections"), list):
        raise ProtocolError(f"response missing detections array: {_excerpt(payload)}")
    out = []
    prefix = id_prefix or image_id
    for i, item in enumerate(payload["detections"]):
        try:
            poly = item.get("polygon", {})
            xs = poly["all_points_x"]
            ys = poly["all_points_y"]
            if len(xs) != len(ys):
                raise ProtocolError(
                    f"polygon arrays disagree: {len(xs)} x values vs {len(ys)} y values"
                )
            out.append(
                Detection(
                    detection_id=f"{prefix}:{i:03d}",
                    image_id=image_id,
                    class_id=int(item["class_id"]),
                    class_name=str(item["class_name"]),
                    confidence=float(item["confidence"]),
                    bbox=tuple(float(v) for v in item["bbox"]),
                    polygon=tuple((float(x), float(y)) for x, y in zip(xs, ys)),
                )
            )
        except ProtocolError as exc:
            raise ProtocolError(f"{exc} (detection {i}: {_excerpt(item)})") from None
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(f"malformed detection {i}: {exc} ({_excerpt(item)})") from None
    return out


def _excerpt(payload, limit: int = 200) -> str:
    try:
        text = json.dumps(payload)
    except TypeError:
        text = repr(payload)
    return text[:limit] + ("..." if len(text) > limit else "")


def serialize_detections(detections: Iterable[Detection]) -> dict:
    """Wire response payload for a set of detections (mock server, eval dumps)."""
    return {
        "detections": [
            {
                "class_id": d.class_id,
                "class_name": d.class_name,
                "confidence": d.confidence,
                "bbox": list(d.bbox),
                "polygon": {
                    "all_points_x": [p[0] for p in d.polygon],
                    "all_points_y": [p[1] for p in d.polygon],
                },
            }
            for d in detections
        ]
    }


class HttpDetectorBackend:
    """Protocol client for a real detector behind an HTTP endpoint."""

    def __init__(self, config: DetectorBackendConfig):
        self.config = config

    def detect(self, image_id: str, image_path: str = "") -> list[Detection]:
        request = {
            "image_id": image_id,
            "image_path": image_path,
            "min_confidence": self.config.min_confidence,
        }
        try:
            response = requests.post(self.config.endpoint, json=request, timeout=self.config.timeout)
        except requests.RequestException as exc:
            raise BackendUnavailableError(f"detector at {self.config.endpoint} unreachable: {exc}") from exc
        if response.status_code != 200:
            raise BackendUnavailableError(
                f"detector at {self.config.endpoint} answered {response.status_code}"
            )
        try:
            payload = response.json()
        except ValueError:
            raise ProtocolError(f"response is not JSON: {response.text[:200]!r}") from None
        return parse_detections(image_id, payload)


class MockDetectorBackend:
    """Deterministic fixture-backed backend.

    Echoes the ground-truth regions of <fixture_dir>/<image_id>.json as
    detections at a fixed confidence. With noise enabled, each damage
    detection's class is re-sampled uniformly from the other three damage
    classes with the given probability; the RNG is seeded per image so the
    output is reproducible regardless of call order.
    """

    def __init__(
        self,
        fixture_dir: str | Path,
        confidence: float = MOCK_CONFIDENCE,
        flip_probability: float = 0.0,
        seed: int = 0,
    ):
        self.fixture_dir = Path(fixture_dir)
        self.confidence = confidence
        self.flip_probability = flip_probability
        self.seed = seed

    def detect(self, image_id: str, image_path: str = "") -> list[Detection]:
        sidecar = self.fixture_dir / f"{image_id}.json"
        if not sidecar.is_file():
            raise NotFoundError(f"no fixture sidecar for image {image_id!r} at {sidecar}")
        regions = parse_vgg(sidecar.read_text(encoding="utf-8"))
        rng = random.Random(f"{self.seed}:{image_id}")
        detections = []
        for i, region in enumerate(regions):
            level = damage_from_label(region.class_name)
            if level is not None:
                class_id = level.class_id
                if self.flip_probability > 0 and rng.random() < self.flip_probability:
                    class_id = rng.choice([c for c in (1, 2, 3, 4) if c != class_id])
                class_name = {1: "severe", 2: "mild", 3: "minor", 4: "none"}[class_id]
            else:
                class_id = object_class_id(region.class_name)
                class_name = region.class_name
            polygon = tuple((float(x), float(y)) for x, y in region.polygon)
            detections.append(
                Detection(
                    detection_id=f"{image_id}:{i:03d}",
                    image_id=image_id,
                    class_id=class_id,
                    class_name=class_name,
                    confidence=self.confidence,
                    bbox=_polygon_hull(polygon),
                    polygon=polygon,
                )
            )
        return detections


def mock_detect(
    image_id: str,
    fixture_path: str | Path,
    noise: tuple[float, int] | None = None,
) -> list[Detection]:
    """One-shot mock detection; noise is an optional (flip_probability, seed)."""
    flip, seed = noise if noise is not None else (0.0, 0)
    return MockDetectorBackend(fixture_path, flip_probability=flip, seed=seed).detect(image_id)


def gate_confidence(detections: Sequence[Detection], min_confidence: float) -> list[Detection]:
    """Keep detections at or above the confidence floor, order preserved."""
    return [d for d in detections if d.confidence >= min_confidence]


@dataclass(frozen=True)
class SectionRule:
    """Maps evidence objects to a section kind; any listed object matches."""

    section_kind: str
    objects: frozenset[str]


DEFAULT_SECTION_RULES: tuple[SectionRule, ...] = (
    SectionRule("bathroom", frozenset({"toilet", "bathtub", "shower"})),
    SectionRule("kitchen", frozenset({"refrigerator", "oven", "stove", "microwave", "dishwasher", "sink"})),
    SectionRule("bedroom", frozenset({"bed", "wardrobe", "nightstand", "dresser"})),
    SectionRule("living room", frozenset({"sofa", "couch", "tv", "fireplace"})),
    SectionRule("garage", frozenset({"car", "garage door"})),
)


@dataclass(frozen=True)
class SectionInference:
    section_kind: str
    significance: float
    evidence_objects: tuple[str, ...] = ()


def infer_section(
    detections: Sequence[Detection],
    rules: Sequence[SectionRule] = DEFAULT_SECTION_RULES,
    weights: WeightTable = DEFAULT_WEIGHTS,
) -> SectionInference:
    """First rule whose evidence objects appear among the detections wins."""
    names = {d.class_name for d in detections if not d.is_damage}
    for rule in rules:
        hits = sorted(names & rule.objects)
        if hits:
            return SectionInference(
                section_kind=rule.section_kind,
                significance=_significance(weights, rule.section_kind),
                evidence_objects=tuple(hits),
            )
    return SectionInference("unknown", _significance(weights, "unknown"), ())


def _significance(weights: WeightTable, kind: str) -> float:
    if kind in weights.section_weights:
        return weights.section_weight(kind)
    return DEFAULT_SIGNIFICANCE


def _overlap_area(a: tuple[float, float, float, float], b: tuple[float, float, float, float]) -> float:
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    w = min(ax + aw, bx + bw) - max(ax, bx)
    h = min(ay + ah, by + bh) - max(ay, by)
    return w * h if w > 0 and h > 0 else 0.0


def attribute_components(
    damage_detections: Sequence[Detection],
    object_detections: Sequence[Detection],
    default_kind: str = DEFAULT_COMPONENT_KIND,
) -> dict[str, str]:
    """detection_id -> component kind for each damage detection.

    A damage detection belongs to the component-kind object its bbox
    overlaps most; with no overlapping component object it falls back to
    the default kind (the component the damage backend was trained on).
    """
    component_objects = [d for d in object_detections if d.class_name in COMPONENT_OBJECT_KINDS]
    assigned: dict[str, str] = {}
    for det in damage_detections:
        best_kind = default_kind
        best_area = 0.0
        for obj in component_objects:
            area = _overlap_area(det.bbox, obj.bbox)
            if area > best_area:
                best_area = area
                best_kind = obj.class_name
        assigned[det.detection_id] = best_kind
    return assigned
