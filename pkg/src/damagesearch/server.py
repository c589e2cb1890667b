"""HTTP+JSON API over the search service and store."""

from __future__ import annotations

from fastapi import Body, FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .errors import (
    AssessmentPendingError,
    BackendUnavailableError,
    NotFoundError,
    NotInResultsError,
    QueryValidationError,
    UnknownCriterionError,
)
from .imaging import ImageMeta
from .model import DamageLevel, damage_from_label
from .scheduler import PRIORITY_OPERATOR
from .search import DamageFilter, ListingView, SearchQuery
from .store import _image_from_line, _property_from_line


def _level_json(level: DamageLevel | None) -> dict | None:
    if level is None:
        return None
    return {"class_id": level.class_id, "label": level.label}


def _parse_level(raw: str) -> DamageLevel:
    if raw.isdigit():
        try:
            return DamageLevel(int(raw))
        except ValueError:
            raise QueryValidationError(f"damage_level {raw!r} is not a class id 1..4") from None
    level = damage_from_label(raw)
    if level is None:
        raise QueryValidationError(f"damage_level {raw!r} names no damage level")
    return level


def _listing_json(view: ListingView) -> dict:
    damage = None
    if view.damage_score is not None:
        damage = {
            "score": view.damage_score,
            **_level_json(view.damage_bucket),
        }
    return {
        "property_id": view.property_id,
        "address": view.address,
        "zip_code": view.zip_code,
        "build_year": view.build_year,
        "price": view.price,
        "rooms": view.rooms,
        "baths": view.baths,
        "sqft": view.sqft,
        "damage": damage,
        "thumbnail_image_ids": list(view.thumbnail_image_ids),
    }


def _query_from_params(
    price_min=None,
    price_max=None,
    rooms_min=None,
    location=None,
    damage_mode=None,
    damage_level=None,
    sort="price_asc",
    page=1,
    page_size=20,
) -> SearchQuery:
    damage_filter = None
    if damage_level is not None:
        damage_filter = DamageFilter(mode=damage_mode or "exact", level=_parse_level(damage_level))
    elif damage_mode is not None:
        raise QueryValidationError("damage_mode given without damage_level")
    return SearchQuery(
        price_min=price_min,
        price_max=price_max,
        rooms_min=rooms_min,
        location=location,
        damage_filter=damage_filter,
        sort=sort,
        page=page,
        page_size=page_size,
    )


def create_app(context, ui_dir: str | None = None) -> FastAPI:
    """App over an AppContext (store, search service, scheduler).

    ui_dir, when given, serves the static browser client at /ui; the API
    allows cross-origin calls so the client can also be hosted elsewhere.
    """
    app = FastAPI(title="damagesearch", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = context.store
    search = context.search
    scheduler = context.scheduler
    if ui_dir:
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.exception_handler(QueryValidationError)
    @app.exception_handler(UnknownCriterionError)
    async def _validation(request: Request, exc):
        return JSONResponse(status_code=400, content={"error": "validation", "detail": str(exc)})

    @app.exception_handler(NotFoundError)
    @app.exception_handler(NotInResultsError)
    async def _not_found(request: Request, exc):
        return JSONResponse(status_code=404, content={"error": "not-found", "detail": str(exc)})

    @app.exception_handler(AssessmentPendingError)
    async def _pending(request: Request, exc: AssessmentPendingError):
        return JSONResponse(
            status_code=409,
            content={
                "error": "assessment-pending",
                "detail": str(exc),
                "property_id": exc.property_id,
                "task_ids": exc.task_ids,
            },
        )

    @app.exception_handler(BackendUnavailableError)
    async def _unavailable(request: Request, exc):
        return JSONResponse(
            status_code=503, content={"error": "backend-unavailable", "detail": str(exc)}
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "properties": len(store.list_properties())}

    @app.get("/properties")
    def list_properties(
        price_min: float | None = Query(default=None),
        price_max: float | None = Query(default=None),
        rooms_min: float | None = Query(default=None),
        location: str | None = Query(default=None),
        damage_mode: str | None = Query(default=None),
        damage_level: str | None = Query(default=None),
        sort: str = Query(default="price_asc"),
        page: int = Query(default=1),
        page_size: int = Query(default=20),
    ):
        query = _query_from_params(
            price_min, price_max, rooms_min, location, damage_mode, damage_level, sort, page, page_size
        )
        result = search.search(query)
        return {
            "items": [_listing_json(v) for v in result.items],
            "total": result.total,
            "page": result.page,
            "page_size": result.page_size,
        }

    @app.get("/properties/{property_id}")
    def property_detail(property_id: str):
        record = store.get_property(property_id)
        images = store.images_for_property(property_id)
        return {
            "property_id": record.property_id,
            "address": record.address,
            "zip_code": record.zip_code,
            "build_year": record.build_year,
            "criteria": record.criteria,
            "damage": (
                {
                    "score": record.total_level_damage,
                    **_level_json(record.damage_bucket),
                }
                if record.total_level_damage is not None
                else None
            ),
            "assessment_at": record.assessment_at,
            "partial": record.partial,
            "image_ids": [meta.image_id for meta in images],
        }

    @app.get("/properties/{property_id}/damage")
    def damage_detail(property_id: str):
        detail = search.damage_detail(property_id)
        return {
            "property_id": detail.property_id,
            "score": detail.score,
            "bucket": _level_json(detail.bucket),
            "partial": detail.partial,
            "images": [
                {
                    "image_id": overlay.image_id,
                    "file_path": overlay.file_path,
                    "width": overlay.width,
                    "height": overlay.height,
                    "section_kind": overlay.section_kind,
                    "detections": list(overlay.detections),
                }
                for overlay in detail.images
            ],
        }

    @app.get("/properties/{property_id}/rank")
    def rank(
        property_id: str,
        price_min: float | None = Query(default=None),
        price_max: float | None = Query(default=None),
        rooms_min: float | None = Query(default=None),
        location: str | None = Query(default=None),
        damage_mode: str | None = Query(default=None),
        damage_level: str | None = Query(default=None),
        sort: str = Query(default="price_asc"),
    ):
        query = _query_from_params(
            price_min, price_max, rooms_min, location, damage_mode, damage_level, sort
        )
        return {"property_id": property_id, "rank": search.rank_of(property_id, query)}

    @app.post("/properties", status_code=201)
    def import_property(payload: dict = Body(...)):
        if "property_id" not in payload:
            raise QueryValidationError("property_id is required")
        payload.pop("kind", None)
        pid = store.upsert_property(_property_from_line(payload))
        return {"property_id": pid}

    @app.post("/properties/{property_id}/images", status_code=201)
    def register_image(property_id: str, payload: dict = Body(...)):
        if "image_id" not in payload or "file_path" not in payload:
            raise QueryValidationError("image_id and file_path are required")
        payload.pop("kind", None)
        payload["property_id"] = property_id
        meta: ImageMeta = _image_from_line(payload)
        store.add_image(meta)
        return {"image_id": meta.image_id}

    @app.post("/admin/detect/{property_id}", status_code=202)
    def admin_detect(property_id: str):
        task_ids = scheduler.enqueue_property(property_id, PRIORITY_OPERATOR)
        return {"property_id": property_id, "task_ids": task_ids}

    return app
