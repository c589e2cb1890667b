"""Weighted damage aggregation: component -> section -> property.

Pure helpers compute the three rungs of the ladder; DamageEstimator wires
them to the store and the per-image detection pipeline, with a staleness
check so an up-to-date assessment is returned untouched and no detector
call is made.
"""

from __future__ import annotations

from datetime import datetime, timezone
from typing import Callable, Sequence

from .errors import BackendUnavailableError, EmptyInputError, NoImageryError
from .model import (
    ComponentAssessment,
    DamageLevel,
    PropertyAssessment,
    SectionAssessment,
    WeightTable,
    DEFAULT_WEIGHTS,
    bucket,
    damage_from_class_id,
    validate_score,
    worst_of,
)


def component_damage(gated_detections: Sequence) -> DamageLevel:
    """Most severe damage among a component's gated detections.

    An empty list means nothing was detected after gating, which reads as a
    satisfactory state of repair: level none.
    """
    levels = [damage_from_class_id(d.class_id) for d in gated_detections]
    if not levels:
        return DamageLevel.NONE
    return worst_of(levels)


def section_damage(components: Sequence[tuple[DamageLevel, float]]) -> float:
    """Weighted mean of component class ids, normalized by total weight.

    Dividing by the weight sum (not the component count) keeps the score on
    the [1, 4] scale for any positive weights; with mean weight 1 it reduces
    to the plain average.
    """
    if not components:
        raise EmptyInputError("section_damage needs at least one component")
    total_weight = 0.0
    total = 0.0
    for level, weight in components:
        if not weight > 0:
            raise ValueError(f"component weight must be positive, got {weight!r}")
        total_weight += weight
        total += weight * level.class_id
    return validate_score(total / total_weight)


def property_damage(sections: Sequence[tuple[float, float]]) -> float:
    """Weighted mean of section scores, normalized by total significance."""
    if not sections:
        raise EmptyInputError("property_damage needs at least one section")
    total_weight = 0.0
    total = 0.0
    for score, weight in sections:
        if not weight > 0:
            raise ValueError(f"section weight must be positive, got {weight!r}")
        total_weight += weight
        total += weight * validate_score(score)
    return validate_score(total / total_weight)


def _utcnow_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


class DamageEstimator:
    """Runs the estimation workflow for one property at a time.

    Stages: reuse a current assessment if no image changed; otherwise push
    undetected images through the detection pipeline, aggregate stored
    detections into sections and components, and persist the result.
    """

    def __init__(
        self,
        store,
        weights: WeightTable = DEFAULT_WEIGHTS,
        processor=None,
        default_component: str = "ceiling",
        clock: Callable[[], str] = _utcnow_iso,
    ):
        self.store = store
        self.weights = weights
        self.processor = processor
        self.default_component = default_component
        self.clock = clock

    def estimate_property(self, property_id: str) -> PropertyAssessment:
        self.store.get_property(property_id)  # raises NotFoundError
        images = self.store.images_for_property(property_id)
        if not images:
            raise NoImageryError(f"property {property_id} has no images to estimate from")

        cached = self.store.load_assessment(property_id)
        if cached is not None and not self._stale(cached, images):
            return cached

        undetected = [meta for meta in images if not meta.is_detected]
        if undetected:
            if self.processor is None:
                raise BackendUnavailableError("no detector backend configured")
            for meta in undetected:
                self.processor.process(meta)

        assessment = self.aggregate(property_id)
        self.store.record_assessment(assessment)
        return assessment

    def aggregate(self, property_id: str) -> PropertyAssessment:
        """Build the assessment from detections already in the store."""
        grouped = self._group_components(property_id)
        if not grouped:
            raise NoImageryError(f"property {property_id} has no usable imagery to estimate from")

        sections = []
        for section_kind in sorted(grouped):
            components = []
            for component_kind in sorted(grouped[section_kind]):
                detections = grouped[section_kind][component_kind]
                components.append(
                    ComponentAssessment(
                        component_kind=component_kind,
                        weight=self.weights.component_weight(component_kind),
                        level=component_damage(detections),
                        contributing_detection_ids=tuple(sorted(d.detection_id for d in detections)),
                    )
                )
            score = section_damage([(c.level, c.weight) for c in components])
            sections.append(
                SectionAssessment(
                    section_kind=section_kind,
                    significance=self.weights.section_weight(section_kind),
                    score=score,
                    components=tuple(components),
                )
            )

        score = property_damage([(s.score, s.significance) for s in sections])
        return PropertyAssessment(
            property_id=property_id,
            score=score,
            bucket=bucket(score),
            sections=tuple(sections),
            computed_at=self.clock(),
        )

    def _group_components(self, property_id: str) -> dict[str, dict[str, list]]:
        """Pool stored damage detections per (section kind, component kind).

        Pooling across images means the worst detection anywhere in a
        section governs its component, no matter which photo showed it.
        Every detected image contributes the default component so an image
        with no findings still registers its section as undamaged; detected
        component-kind objects register their component the same way.
        """
        grouped: dict[str, dict[str, list]] = {}
        for meta in self.store.images_for_property(property_id):
            if not meta.is_detected or meta.section_kind is None:
                continue
            section = grouped.setdefault(meta.section_kind, {})
            section.setdefault(self.default_component, [])
            for det in self.store.detections_for_image(meta.image_id):
                if 1 <= det.class_id <= 4:
                    kind = det.component_kind or self.default_component
                    section.setdefault(kind, []).append(det)
                elif det.class_name in self.weights.component_weights:
                    section.setdefault(det.class_name, [])
        return grouped

    @staticmethod
    def _stale(assessment: PropertyAssessment, images: Sequence) -> bool:
        computed = datetime.fromisoformat(assessment.computed_at)
        for meta in images:
            if not meta.is_detected:
                return True
            if datetime.fromisoformat(meta.uploaded_at) > computed:
                return True
        return False
