"""Damage-aware property search: filtering, sorting, rank, damage detail."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    AssessmentPendingError,
    NotInResultsError,
    QueryValidationError,
)
from .model import DamageLevel
from .scheduler import PRIORITY_SEARCH
from .store import PropertyRecord, Store

SORT_KEYS = ("price_asc", "price_desc", "damage_asc", "damage_desc")
DAMAGE_MODES = ("exact", "at_most_severe", "at_least_good")


@dataclass(frozen=True)
class DamageFilter:
    """mode exact: bucket equals level; at_most_severe: bucket no better
    than level (class id <= level, severity-inclusive toward severe);
    at_least_good: bucket at level or better (class id >= level)."""

    mode: str
    level: DamageLevel

    def __post_init__(self):
        if self.mode not in DAMAGE_MODES:
            raise QueryValidationError(f"damage mode must be one of {DAMAGE_MODES}, got {self.mode!r}")

    def matches(self, bucket: DamageLevel) -> bool:
        if self.mode == "exact":
            return bucket == self.level
        if self.mode == "at_most_severe":
            return bucket.class_id <= self.level.class_id
        return bucket.class_id >= self.level.class_id


@dataclass(frozen=True)
class SearchQuery:
    price_min: float | None = None
    price_max: float | None = None
    rooms_min: int | None = None
    location: str | None = None
    damage_filter: DamageFilter | None = None
    sort: str = "price_asc"
    page: int = 1
    page_size: int = 20

    def __post_init__(self):
        if self.price_min is not None and self.price_max is not None and self.price_min > self.price_max:
            raise QueryValidationError(
                f"price_min {self.price_min} exceeds price_max {self.price_max}"
            )
        if not 1 <= self.page_size <= 100:
            raise QueryValidationError(f"page_size must be in [1, 100], got {self.page_size}")
        if self.page < 1:
            raise QueryValidationError(f"page must be >= 1, got {self.page}")
        if self.sort not in SORT_KEYS:
            raise QueryValidationError(f"sort must be one of {SORT_KEYS}, got {self.sort!r}")


@dataclass(frozen=True)
class ListingView:
    property_id: str
    address: str
    zip_code: str
    build_year: int | None
    price: float | None
    rooms: float | None
    baths: float | None
    sqft: float | None
    damage_score: float | None
    damage_bucket: DamageLevel | None
    thumbnail_image_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class SearchPage:
    items: tuple[ListingView, ...]
    total: int
    page: int
    page_size: int


@dataclass(frozen=True)
class ImageOverlay:
    image_id: str
    file_path: str
    width: int
    height: int
    section_kind: str | None
    detections: tuple[dict, ...]


@dataclass(frozen=True)
class DamageDetail:
    property_id: str
    score: float
    bucket: DamageLevel
    partial: bool
    images: tuple[ImageOverlay, ...]


class SearchService:
    """Query evaluation over the store's reader interface.

    Stateless per request; any unassessed property surfaced by a search is
    handed to the scheduler at search priority so its detection jumps the
    background queue.
    """

    def __init__(self, store: Store, scheduler=None):
        self.store = store
        self.scheduler = scheduler

    # -- search -------------------------------------------------------------

    def candidates(self, query: SearchQuery) -> list[ListingView]:
        """Filtered, sorted listings, unpaged."""
        views = []
        unassessed: list[str] = []
        for record in self.store.list_properties():
            if not self._matches_scalars(record, query):
                continue
            if record.assessment_at is None:
                unassessed.append(record.property_id)
                if query.damage_filter is not None:
                    continue
            elif query.damage_filter is not None and not query.damage_filter.matches(
                record.damage_bucket
            ):
                continue
            views.append(self._view(record))
        self._prioritize(unassessed)
        return self._sorted(views, query.sort)

    def search(self, query: SearchQuery) -> SearchPage:
        views = self.candidates(query)
        start = (query.page - 1) * query.page_size
        return SearchPage(
            items=tuple(views[start : start + query.page_size]),
            total=len(views),
            page=query.page,
            page_size=query.page_size,
        )

    def rank_of(self, property_id: str, query: SearchQuery) -> int:
        """1-based position of the property in the full result ordering."""
        for i, view in enumerate(self.candidates(query), start=1):
            if view.property_id == property_id:
                return i
        raise NotInResultsError(f"property {property_id!r} is not in the result set")

    # -- damage detail --------------------------------------------------------

    def damage_detail(self, property_id: str) -> DamageDetail:
        record = self.store.get_property(property_id)
        if record.assessment_at is None:
            task_ids = self._prioritize([property_id])
            raise AssessmentPendingError(property_id, task_ids)
        overlays = []
        for meta in self.store.images_for_property(property_id):
            detections = tuple(
                {
                    "detection_id": det.detection_id,
                    "class_id": det.class_id,
                    "label": DamageLevel(det.class_id).label,
                    "confidence": det.con_score,
                    "component_kind": det.component_kind,
                    "bbox": list(det.bbox),
                    "polygon": {
                        "all_points_x": [p[0] for p in det.polygon],
                        "all_points_y": [p[1] for p in det.polygon],
                    },
                }
                for det in self.store.detections_for_image(meta.image_id)
                if 1 <= det.class_id <= 4
            )
            overlays.append(
                ImageOverlay(
                    image_id=meta.image_id,
                    file_path=meta.file_path,
                    width=meta.width,
                    height=meta.height,
                    section_kind=meta.section_kind,
                    detections=detections,
                )
            )
        return DamageDetail(
            property_id=property_id,
            score=record.total_level_damage,
            bucket=record.damage_bucket,
            partial=record.partial,
            images=tuple(overlays),
        )

    # -- internals -------------------------------------------------------------

    def _prioritize(self, property_ids: Sequence[str]) -> list[str]:
        if self.scheduler is None:
            return []
        task_ids: list[str] = []
        for pid in property_ids:
            task_ids.extend(self.scheduler.enqueue_property(pid, PRIORITY_SEARCH))
        return task_ids

    @staticmethod
    def _matches_scalars(record: PropertyRecord, query: SearchQuery) -> bool:
        price = _number(record.criteria.get("price"))
        rooms = _number(record.criteria.get("rooms"))
        location = record.criteria.get("location")
        if query.price_min is not None and (price is None or price < query.price_min):
            return False
        if query.price_max is not None and (price is None or price > query.price_max):
            return False
        if query.rooms_min is not None and (rooms is None or rooms < query.rooms_min):
            return False
        if query.location is not None:
            if not isinstance(location, str) or location.strip().lower() != query.location.strip().lower():
                return False
        return True

    def _view(self, record: PropertyRecord) -> ListingView:
        images = self.store.images_for_property(record.property_id)
        return ListingView(
            property_id=record.property_id,
            address=record.address,
            zip_code=record.zip_code,
            build_year=record.build_year,
            price=_number(record.criteria.get("price")),
            rooms=_number(record.criteria.get("rooms")),
            baths=_number(record.criteria.get("baths")),
            sqft=_number(record.criteria.get("sqft")),
            damage_score=record.total_level_damage,
            damage_bucket=record.damage_bucket,
            thumbnail_image_ids=tuple(meta.image_id for meta in images[:3]),
        )

    @staticmethod
    def _sorted(views: list[ListingView], sort: str) -> list[ListingView]:
        # Two stable passes: property_id breaks ties, missing keys sink to
        # the end under either direction.
        views = sorted(views, key=lambda v: v.property_id)
        if sort == "price_asc":
            key = lambda v: (v.price is None, v.price if v.price is not None else 0.0)
        elif sort == "price_desc":
            key = lambda v: (v.price is None, -(v.price if v.price is not None else 0.0))
        elif sort == "damage_asc":
            key = lambda v: (v.damage_score is None, v.damage_score if v.damage_score is not None else 0.0)
        else:  # damage_desc
            key = lambda v: (v.damage_score is None, -(v.damage_score if v.damage_score is not None else 0.0))
        return sorted(views, key=key)


def _number(value) -> float | None:
    if isinstance(value, bool) or value is None:
        return None
    if isinstance(value, (int, float)):
        return float(value)
    try:
        return float(str(value).replace(",", ""))
    except ValueError:
        return None
