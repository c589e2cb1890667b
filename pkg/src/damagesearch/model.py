"""Damage ordinal, weight tables, and the assessment ladder types.

The four-point scale runs from class id 1 (severe) to 4 (none): a lower
class id always means more severe damage. Continuous scores produced by
weighted means live on the same [1.0, 4.0] axis and are bucketed back to
the ordinal with ties rounding toward severe.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import EmptyInputError, InvalidClassError, ScoreRangeError, UnknownKindError

SCORE_MIN = 1.0
SCORE_MAX = 4.0
_SCORE_SLACK = 1e-9


class DamageLevel(enum.IntEnum):
    """Ordinal damage severity; the integer value is the detector class id."""

    SEVERE = 1
    MILD = 2
    MINOR = 3
    NONE = 4

    @property
    def class_id(self) -> int:
        return int(self)

    @property
    def label(self) -> str:
        return self.name.lower()

    def more_severe_than(self, other: "DamageLevel") -> bool:
        return self.class_id < other.class_id


# Accepted spellings per level, lowercased. "extreme" is the UI alias for severe.
_LEVEL_ALIASES: dict[str, DamageLevel] = {
    "severe": DamageLevel.SEVERE,
    "extreme": DamageLevel.SEVERE,
    "severe damage": DamageLevel.SEVERE,
    "extreme damage": DamageLevel.SEVERE,
    "complete damage": DamageLevel.SEVERE,
    "mild": DamageLevel.MILD,
    "mild damage": DamageLevel.MILD,
    "moderate": DamageLevel.MILD,
    "minor": DamageLevel.MINOR,
    "minor damage": DamageLevel.MINOR,
    "marginal": DamageLevel.MINOR,
    "none": DamageLevel.NONE,
    "no damage": DamageLevel.NONE,
    "no-damage": DamageLevel.NONE,
    "nodamage": DamageLevel.NONE,
}


def damage_from_class_id(class_id: int) -> DamageLevel:
    """Map a detector class id in {1..4} to its damage level."""
    try:
        return DamageLevel(class_id)
    except ValueError:
        raise InvalidClassError(f"class id {class_id!r} is not a damage class (1..4)") from None


def damage_from_label(label: str) -> DamageLevel | None:
    """Resolve a damage label (including aliases) or None if it names no level."""
    return _LEVEL_ALIASES.get(label.strip().lower())


def worst_of(levels: Iterable[DamageLevel]) -> DamageLevel:
    """Most severe level in a nonempty collection (lowest class id)."""
    levels = list(levels)
    if not levels:
        raise EmptyInputError("worst_of needs at least one level")
    return min(levels)


def validate_score(value: float) -> float:
    """Check a continuous damage score is on the [1.0, 4.0] scale.

    Weighted means of class ids stay on the scale mathematically; a tiny
    slack absorbs float drift before clamping.
    """
    if not (SCORE_MIN - _SCORE_SLACK <= value <= SCORE_MAX + _SCORE_SLACK):
        raise ScoreRangeError(f"score {value!r} outside [{SCORE_MIN}, {SCORE_MAX}]")
    return min(max(float(value), SCORE_MIN), SCORE_MAX)


def bucket(score: float) -> DamageLevel:
    """Round a continuous score to the nearest level, ties toward severe.

    2.5 buckets to mild (class 2), not minor: when a score sits exactly
    between two levels the more severe one wins, so damage is never
    under-reported.
    """
    value = validate_score(score)
    return DamageLevel(max(1, math.ceil(value - 0.5)))


DEFAULT_SIGNIFICANCE = 1.0


@dataclass(frozen=True)
class WeightTable:
    """Component importance and section significance weights, by kind.

    Both maps are configuration: component weights track maintenance cost,
    section weights track damage susceptibility (larger = more significant).
    """

    component_weights: Mapping[str, float]
    section_weights: Mapping[str, float]

    def __post_init__(self):
        for name, weights in (("component", self.component_weights), ("section", self.section_weights)):
            for kind, value in weights.items():
                if not value > 0:
                    raise ValueError(f"{name} weight for {kind!r} must be positive, got {value!r}")

    def component_weight(self, kind: str) -> float:
        try:
            return float(self.component_weights[kind])
        except KeyError:
            raise UnknownKindError(f"no component weight configured for kind {kind!r}") from None

    def section_weight(self, kind: str) -> float:
        try:
            return float(self.section_weights[kind])
        except KeyError:
            raise UnknownKindError(f"no section weight configured for kind {kind!r}") from None


DEFAULT_WEIGHTS = WeightTable(
    component_weights={
        "ceiling": 10.0,
        "floor": 5.0,
        "wall": 2.0,
        "door": 3.0,
        "window": 3.0,
        "closet": 2.0,
    },
    section_weights={
        "kitchen": 3.0,
        "bathroom": 3.0,
        "bedroom": 1.0,
        "living room": 1.0,
        "garage": 1.0,
        "unknown": 1.0,
    },
)


@dataclass(frozen=True)
class ComponentAssessment:
    """One component's damage level with its importance weight."""

    component_kind: str
    weight: float
    level: DamageLevel
    contributing_detection_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class SectionAssessment:
    """One section's weighted damage score over its components."""

    section_kind: str
    significance: float
    score: float
    components: tuple[ComponentAssessment, ...]

    def __post_init__(self):
        if not self.components:
            raise EmptyInputError("a section assessment needs at least one component")
        validate_score(self.score)


@dataclass(frozen=True)
class PropertyAssessment:
    """The whole-property damage score, its bucket, and the section ladder."""

    property_id: str
    score: float
    bucket: DamageLevel
    sections: tuple[SectionAssessment, ...]
    computed_at: str
    partial: bool = False

    def __post_init__(self):
        validate_score(self.score)

    def component_levels(self) -> dict[tuple[str, str], DamageLevel]:
        """(section kind, component kind) -> level, for quick lookups."""
        return {
            (section.section_kind, component.component_kind): component.level
            for section in self.sections
            for component in section.components
        }
