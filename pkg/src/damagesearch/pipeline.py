"""Per-image detection pipeline: admission, backends, gating, inference,
persistence. Shared by scheduler workers and direct estimation."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from .detector import (
    DEFAULT_COMPONENT_KIND,
    DEFAULT_MIN_CONFIDENCE,
    DEFAULT_SECTION_RULES,
    SectionRule,
    attribute_components,
    gate_confidence,
    infer_section,
)
from .imaging import ImageMeta, admit
from .model import DEFAULT_WEIGHTS, WeightTable
from .store import DetectionRecord, Store


@dataclass
class ProcessResult:
    image_id: str
    admitted: bool
    section_kind: str | None = None
    damage_detections: int = 0
    object_detections: int = 0
    damage_classes: tuple[str, ...] = ()
    duration: float = 0.0
    note: str | None = None


class ImageProcessor:
    """Runs one image through gate -> detect -> gate_confidence -> infer ->
    persist, marking it detected afterwards.

    The damage and object backends may be the same instance (the mock echoes
    every sidecar region); results are split by class id so nothing is
    double-counted.
    """

    def __init__(
        self,
        store: Store,
        damage_backend,
        object_backend=None,
        min_confidence: float = DEFAULT_MIN_CONFIDENCE,
        rules: Sequence[SectionRule] = DEFAULT_SECTION_RULES,
        weights: WeightTable = DEFAULT_WEIGHTS,
        default_component: str = DEFAULT_COMPONENT_KIND,
    ):
        self.store = store
        self.damage_backend = damage_backend
        self.object_backend = object_backend if object_backend is not None else damage_backend
        self.min_confidence = min_confidence
        self.rules = rules
        self.weights = weights
        self.default_component = default_component

    def process(self, meta: ImageMeta) -> ProcessResult:
        started = time.monotonic()
        admission = admit(meta)
        if not admission.accepted:
            self.store.mark_image_detected(meta.image_id, None, note=admission.reason)
            return ProcessResult(meta.image_id, admitted=False, note=admission.reason)

        damage_raw = self.damage_backend.detect(meta.image_id, meta.file_path)
        if self.object_backend is self.damage_backend:
            object_raw = damage_raw
        else:
            object_raw = self.object_backend.detect(meta.image_id, meta.file_path)

        damage = [d for d in gate_confidence(damage_raw, self.min_confidence) if d.is_damage]
        objects = [d for d in gate_confidence(object_raw, self.min_confidence) if not d.is_damage]

        inference = infer_section(objects, self.rules, self.weights)
        kinds = attribute_components(damage, objects, self.default_component)

        pid = meta.property_id
        records = [
            DetectionRecord(
                detection_id=d.detection_id,
                image_id=d.image_id,
                component_id=f"{pid}:{inference.section_kind}:{kinds[d.detection_id]}",
                component_kind=kinds[d.detection_id],
                class_id=d.class_id,
                class_name=d.class_name,
                con_score=d.confidence,
                bbox=d.bbox,
                polygon=d.polygon,
            )
            for d in damage
        ]
        records += [
            DetectionRecord(
                detection_id=d.detection_id,
                image_id=d.image_id,
                class_id=d.class_id,
                class_name=d.class_name,
                con_score=d.confidence,
                bbox=d.bbox,
                polygon=d.polygon,
            )
            for d in objects
        ]
        self.store.insert_detections(records)
        self.store.mark_image_detected(meta.image_id, inference.section_kind, note=admission.warning)

        return ProcessResult(
            image_id=meta.image_id,
            admitted=True,
            section_kind=inference.section_kind,
            damage_detections=len(damage),
            object_detections=len(objects),
            damage_classes=tuple(sorted({d.class_name for d in damage})),
            duration=time.monotonic() - started,
        )
