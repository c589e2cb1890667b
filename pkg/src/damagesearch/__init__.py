"""Damage-level estimation and damage-filtered search for listing photos."""

from .aggregation import (
    DamageEstimator,
    component_damage,
    property_damage,
    section_damage,
)
from .annotations import GroundTruthRegion, parse_vgg, serialize_vgg
from .detector import (
    Detection,
    DetectorBackendConfig,
    HttpDetectorBackend,
    MockDetectorBackend,
    SectionInference,
    SectionRule,
    attribute_components,
    gate_confidence,
    infer_section,
    mock_detect,
)
from .imaging import Admission, FitPlan, ImageMeta, admit, fit_dims, normalize
from .metrics import ConfusionMatrix, match_instances, precision_recall, summary
from .model import (
    ComponentAssessment,
    DamageLevel,
    DEFAULT_WEIGHTS,
    PropertyAssessment,
    SectionAssessment,
    WeightTable,
    bucket,
    damage_from_class_id,
    worst_of,
)
from .pipeline import ImageProcessor
from .scheduler import DetectionTask, Scheduler
from .search import DamageFilter, SearchQuery, SearchService
from .store import (
    ComponentRecord,
    DetectionRecord,
    PropertyRecord,
    SectionRecord,
    Store,
)

__version__ = "0.1.0"

__all__ = [
    "Admission",
    "ComponentAssessment",
    "ComponentRecord",
    "ConfusionMatrix",
    "DamageEstimator",
    "DamageFilter",
    "DamageLevel",
    "DEFAULT_WEIGHTS",
    "Detection",
    "DetectionRecord",
    "DetectionTask",
    "DetectorBackendConfig",
    "FitPlan",
    "GroundTruthRegion",
    "HttpDetectorBackend",
    "ImageMeta",
    "ImageProcessor",
    "MockDetectorBackend",
    "PropertyAssessment",
    "PropertyRecord",
    "Scheduler",
    "SearchQuery",
    "SearchService",
    "SectionAssessment",
    "SectionInference",
    "SectionRecord",
    "SectionRule",
    "Store",
    "WeightTable",
    "admit",
    "attribute_components",
    "bucket",
    "component_damage",
    "damage_from_class_id",
    "fit_dims",
    "gate_confidence",
    "infer_section",
    "match_instances",
    "mock_detect",
    "normalize",
    "parse_vgg",
    "precision_recall",
    "property_damage",
    "section_damage",
    "serialize_vgg",
    "summary",
    "worst_of",
]
