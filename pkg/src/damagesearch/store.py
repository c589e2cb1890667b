"""Durable single-node store for the listing data model.

Backed by embedded sqlite so assessment writes are atomic; the exchange
format is newline-delimited JSON, one entity per line, tagged with a
"kind" field. Appendix-style field names (total_level_damage,
sec_sign_weight, comp_imp_weight, con_score, Is_detected, c_Last_Update,
AHP_Weight) are used verbatim on the wire.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable

from .errors import NotFoundError, UnknownCriterionError
from .imaging import ImageMeta
from .model import (
    ComponentAssessment,
    DamageLevel,
    PropertyAssessment,
    SectionAssessment,
)

DEFAULT_CRITERIA = ("price", "rooms", "baths", "sqft", "lot_sqft", "no_floors", "location")


def utcnow_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class PropertyRecord:
    property_id: str
    address: str = ""
    zip_code: str = ""
    build_year: int | None = None
    criteria: dict = field(default_factory=dict)
    total_level_damage: float | None = None
    damage_bucket: DamageLevel | None = None
    assessment_at: str | None = None
    partial: bool = False


@dataclass
class SectionRecord:
    section_id: str
    property_id: str
    section_kind: str
    sec_sign_weight: float
    sec_level_damage: float | None = None


@dataclass
class ComponentRecord:
    component_id: str
    section_id: str
    component_kind: str
    comp_imp_weight: float
    comp_level_damage: DamageLevel | None = None
    last_update: str | None = None


@dataclass(frozen=True)
class DetectionRecord:
    """Immutable once written; con_score is the detector confidence."""

    detection_id: str
    image_id: str
    class_id: int
    class_name: str
    con_score: float
    bbox: tuple[float, float, float, float]
    polygon: tuple[tuple[float, float], ...]
    component_id: str | None = None
    component_kind: str | None = None


_SCHEMA = """
CREATE TABLE IF NOT EXISTS criteria (name TEXT PRIMARY KEY);
CREATE TABLE IF NOT EXISTS properties (
    property_id TEXT PRIMARY KEY,
    address TEXT NOT NULL DEFAULT '',
    zip_code TEXT NOT NULL DEFAULT '',
    build_year INTEGER,
    criteria TEXT NOT NULL DEFAULT '{}',
    total_level_damage REAL,
    damage_bucket INTEGER,
    assessment_at TEXT,
    partial INTEGER NOT NULL DEFAULT 0
);
CREATE TABLE IF NOT EXISTS images (
    image_id TEXT PRIMARY KEY,
    property_id TEXT NOT NULL REFERENCES properties(property_id),
    file_path TEXT NOT NULL DEFAULT '',
    width INTEGER NOT NULL DEFAULT 0,
    height INTEGER NOT NULL DEFAULT 0,
    channels INTEGER NOT NULL DEFAULT 3,
    ppi REAL,
    uploaded_at TEXT NOT NULL,
    is_detected INTEGER NOT NULL DEFAULT 0,
    section_kind TEXT,
    note TEXT
);
CREATE TABLE IF NOT EXISTS sections (
    section_id TEXT PRIMARY KEY,
    property_id TEXT NOT NULL REFERENCES properties(property_id),
    section_kind TEXT NOT NULL,
    sec_sign_weight REAL NOT NULL,
    sec_level_damage REAL
);
CREATE TABLE IF NOT EXISTS components (
    component_id TEXT PRIMARY KEY,
    section_id TEXT NOT NULL REFERENCES sections(section_id),
    component_kind TEXT NOT NULL,
    comp_imp_weight REAL NOT NULL,
    comp_level_damage INTEGER,
    c_last_update TEXT
);
CREATE TABLE IF NOT EXISTS detections (
    detection_id TEXT PRIMARY KEY,
    image_id TEXT NOT NULL REFERENCES images(image_id),
    component_id TEXT,
    component_kind TEXT,
    class_id INTEGER NOT NULL,
    class_name TEXT NOT NULL,
    con_score REAL NOT NULL,
    bbox TEXT NOT NULL,
    polygon TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS users (user_id TEXT PRIMARY KEY, payload TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS user_preferences (
    user_id TEXT NOT NULL,
    criterion TEXT NOT NULL,
    payload TEXT NOT NULL,
    PRIMARY KEY (user_id, criterion)
);
CREATE INDEX IF NOT EXISTS idx_images_property ON images(property_id);
CREATE INDEX IF NOT EXISTS idx_sections_property ON sections(property_id);
CREATE INDEX IF NOT EXISTS idx_components_section ON components(section_id);
CREATE INDEX IF NOT EXISTS idx_detections_image ON detections(image_id);
"""


class Store:
    """sqlite-backed store; one connection, all access serialized by a lock.

    That is stronger than the contract needs (writes serialized per
    property, concurrent readers) but keeps the embedded engine safe across
    worker threads.
    """

    def __init__(self, path: str | Path = ":memory:"):
        self.path = str(path)
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        self._lock = threading.RLock()
        with self._lock, self._conn:
            self._conn.execute("PRAGMA foreign_keys = ON")
            self._conn.executescript(_SCHEMA)
            self._conn.executemany(
                "INSERT OR IGNORE INTO criteria (name) VALUES (?)",
                [(name,) for name in DEFAULT_CRITERIA],
            )

    def close(self):
        with self._lock:
            self._conn.close()

    # -- criteria -----------------------------------------------------------

    def criteria_names(self) -> set[str]:
        with self._lock:
            rows = self._conn.execute("SELECT name FROM criteria").fetchall()
        return {row["name"] for row in rows}

    def add_criterion(self, name: str):
        with self._lock, self._conn:
            self._conn.execute("INSERT OR IGNORE INTO criteria (name) VALUES (?)", (name,))

    # -- properties ---------------------------------------------------------

    def upsert_property(self, record: PropertyRecord) -> str:
        known = self.criteria_names()
        for name in record.criteria:
            if name not in known:
                raise UnknownCriterionError(f"unknown criterion {name!r} on {record.property_id}")
        with self._lock, self._conn:
            existing = self._conn.execute(
                "SELECT total_level_damage, damage_bucket, assessment_at, partial "
                "FROM properties WHERE property_id = ?",
                (record.property_id,),
            ).fetchone()
            total = record.total_level_damage
            bucket_id = record.damage_bucket.class_id if record.damage_bucket else None
            assessed = record.assessment_at
            partial = int(record.partial)
            if existing is not None and total is None and assessed is None:
                # A basics-only upsert keeps an existing assessment in place.
                total = existing["total_level_damage"]
                bucket_id = existing["damage_bucket"]
                assessed = existing["assessment_at"]
                partial = existing["partial"]
            self._conn.execute(
                "INSERT OR REPLACE INTO properties "
                "(property_id, address, zip_code, build_year, criteria, "
                " total_level_damage, damage_bucket, assessment_at, partial) "
                "VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)",
                (
                    record.property_id,
                    record.address,
                    record.zip_code,
                    record.build_year,
                    json.dumps(record.criteria, sort_keys=True),
                    total,
                    bucket_id,
                    assessed,
                    partial,
                ),
            )
        return record.property_id

    def get_property(self, property_id: str) -> PropertyRecord:
        with self._lock:
            row = self._conn.execute(
                "SELECT * FROM properties WHERE property_id = ?", (property_id,)
            ).fetchone()
        if row is None:
            raise NotFoundError(f"property {property_id!r} not found")
        return self._property_from_row(row)

    def list_properties(self) -> list[PropertyRecord]:
        with self._lock:
            rows = self._conn.execute("SELECT * FROM properties ORDER BY property_id").fetchall()
        return [self._property_from_row(row) for row in rows]

    def mark_partial(self, property_id: str, flag: bool = True):
        with self._lock, self._conn:
            updated = self._conn.execute(
                "UPDATE properties SET partial = ? WHERE property_id = ?",
                (int(flag), property_id),
            ).rowcount
        if not updated:
            raise NotFoundError(f"property {property_id!r} not found")

    @staticmethod
    def _property_from_row(row) -> PropertyRecord:
        return PropertyRecord(
            property_id=row["property_id"],
            address=row["address"],
            zip_code=row["zip_code"],
            build_year=row["build_year"],
            criteria=json.loads(row["criteria"]),
            total_level_damage=row["total_level_damage"],
            damage_bucket=DamageLevel(row["damage_bucket"]) if row["damage_bucket"] else None,
            assessment_at=row["assessment_at"],
            partial=bool(row["partial"]),
        )

    # -- images -------------------------------------------------------------

    def add_image(self, meta: ImageMeta) -> str:
        self.get_property(meta.property_id)
        uploaded = meta.uploaded_at or utcnow_iso()
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR REPLACE INTO images "
                "(image_id, property_id, file_path, width, height, channels, ppi, "
                " uploaded_at, is_detected, section_kind, note) "
                "VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
                (
                    meta.image_id,
                    meta.property_id,
                    meta.file_path,
                    meta.width,
                    meta.height,
                    meta.channels,
                    meta.ppi,
                    uploaded,
                    int(meta.is_detected),
                    meta.section_kind,
                    meta.note,
                ),
            )
        return meta.image_id

    def get_image(self, image_id: str) -> ImageMeta:
        with self._lock:
            row = self._conn.execute("SELECT * FROM images WHERE image_id = ?", (image_id,)).fetchone()
        if row is None:
            raise NotFoundError(f"image {image_id!r} not found")
        return self._image_from_row(row)

    def images_for_property(self, property_id: str) -> list[ImageMeta]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT * FROM images WHERE property_id = ? ORDER BY uploaded_at, image_id",
                (property_id,),
            ).fetchall()
        return [self._image_from_row(row) for row in rows]

    def list_undetected_images(self, property_id: str | None = None) -> list[ImageMeta]:
        """Images awaiting detection, oldest upload first."""
        if property_id is not None:
            self.get_property(property_id)
            query = (
                "SELECT * FROM images WHERE is_detected = 0 AND property_id = ? "
                "ORDER BY uploaded_at, image_id"
            )
            args: tuple = (property_id,)
        else:
            query = "SELECT * FROM images WHERE is_detected = 0 ORDER BY uploaded_at, image_id"
            args = ()
        with self._lock:
            rows = self._conn.execute(query, args).fetchall()
        return [self._image_from_row(row) for row in rows]

    def mark_image_detected(self, image_id: str, section_kind: str | None, note: str | None = None):
        with self._lock, self._conn:
            updated = self._conn.execute(
                "UPDATE images SET is_detected = 1, section_kind = ?, note = ? WHERE image_id = ?",
                (section_kind, note, image_id),
            ).rowcount
        if not updated:
            raise NotFoundError(f"image {image_id!r} not found")

    @staticmethod
    def _image_from_row(row) -> ImageMeta:
        return ImageMeta(
            image_id=row["image_id"],
            property_id=row["property_id"],
            file_path=row["file_path"],
            width=row["width"],
            height=row["height"],
            channels=row["channels"],
            ppi=row["ppi"],
            uploaded_at=row["uploaded_at"],
            is_detected=bool(row["is_detected"]),
            section_kind=row["section_kind"],
            note=row["note"],
        )

    # -- detections ----------------------------------------------------------

    def insert_detections(self, records: Iterable[DetectionRecord]):
        with self._lock, self._conn:
            self._conn.executemany(
                "INSERT OR IGNORE INTO detections "
                "(detection_id, image_id, component_id, component_kind, class_id, "
                " class_name, con_score, bbox, polygon) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)",
                [
                    (
                        r.detection_id,
                        r.image_id,
                        r.component_id,
                        r.component_kind,
                        r.class_id,
                        r.class_name,
                        r.con_score,
                        json.dumps(list(r.bbox)),
                        json.dumps(_polygon_to_wire(r.polygon)),
                    )
                    for r in records
                ],
            )

    def detections_for_image(self, image_id: str) -> list[DetectionRecord]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT * FROM detections WHERE image_id = ? ORDER BY detection_id", (image_id,)
            ).fetchall()
        return [self._detection_from_row(row) for row in rows]

    def detections_for_component(self, component_id: str) -> list[DetectionRecord]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT * FROM detections WHERE component_id = ? ORDER BY detection_id",
                (component_id,),
            ).fetchall()
        return [self._detection_from_row(row) for row in rows]

    @staticmethod
    def _detection_from_row(row) -> DetectionRecord:
        wire = json.loads(row["polygon"])
        return DetectionRecord(
            detection_id=row["detection_id"],
            image_id=row["image_id"],
            component_id=row["component_id"],
            component_kind=row["component_kind"],
            class_id=row["class_id"],
            class_name=row["class_name"],
            con_score=row["con_score"],
            bbox=tuple(json.loads(row["bbox"])),
            polygon=tuple(zip(wire["all_points_x"], wire["all_points_y"])),
        )

    # -- assessments ----------------------------------------------------------

    def record_assessment(self, assessment: PropertyAssessment):
        """Persist a full assessment ladder in one transaction."""
        pid = assessment.property_id
        self.get_property(pid)
        with self._lock, self._conn:
            self._conn.execute(
                "UPDATE properties SET total_level_damage = ?, damage_bucket = ?, "
                "assessment_at = ?, partial = ? WHERE property_id = ?",
                (
                    assessment.score,
                    assessment.bucket.class_id,
                    assessment.computed_at,
                    int(assessment.partial),
                    pid,
                ),
            )
            self._conn.execute(
                "DELETE FROM components WHERE section_id IN "
                "(SELECT section_id FROM sections WHERE property_id = ?)",
                (pid,),
            )
            self._conn.execute("DELETE FROM sections WHERE property_id = ?", (pid,))
            for section in assessment.sections:
                section_id = f"{pid}:{section.section_kind}"
                self._write_section(
                    SectionRecord(
                        section_id=section_id,
                        property_id=pid,
                        section_kind=section.section_kind,
                        sec_sign_weight=section.significance,
                        sec_level_damage=section.score,
                    )
                )
                for component in section.components:
                    self._write_component(
                        ComponentRecord(
                            component_id=f"{section_id}:{component.component_kind}",
                            section_id=section_id,
                            component_kind=component.component_kind,
                            comp_imp_weight=component.weight,
                            comp_level_damage=component.level,
                            last_update=assessment.computed_at,
                        )
                    )

    def _write_section(self, record: SectionRecord):
        self._conn.execute(
            "INSERT OR REPLACE INTO sections "
            "(section_id, property_id, section_kind, sec_sign_weight, sec_level_damage) "
            "VALUES (?, ?, ?, ?, ?)",
            (
                record.section_id,
                record.property_id,
                record.section_kind,
                record.sec_sign_weight,
                record.sec_level_damage,
            ),
        )

    def _write_component(self, record: ComponentRecord):
        self._conn.execute(
            "INSERT OR REPLACE INTO components "
            "(component_id, section_id, component_kind, comp_imp_weight, "
            " comp_level_damage, c_last_update) VALUES (?, ?, ?, ?, ?, ?)",
            (
                record.component_id,
                record.section_id,
                record.component_kind,
                record.comp_imp_weight,
                record.comp_level_damage.class_id if record.comp_level_damage else None,
                record.last_update,
            ),
        )

    def load_assessment(self, property_id: str) -> PropertyAssessment | None:
        record = self.get_property(property_id)
        if record.assessment_at is None or record.total_level_damage is None:
            return None
        with self._lock:
            section_rows = self._conn.execute(
                "SELECT * FROM sections WHERE property_id = ? ORDER BY section_kind",
                (property_id,),
            ).fetchall()
            sections = []
            for srow in section_rows:
                component_rows = self._conn.execute(
                    "SELECT * FROM components WHERE section_id = ? ORDER BY component_kind",
                    (srow["section_id"],),
                ).fetchall()
                components = []
                for crow in component_rows:
                    det_rows = self._conn.execute(
                        "SELECT detection_id FROM detections WHERE component_id = ? "
                        "ORDER BY detection_id",
                        (crow["component_id"],),
                    ).fetchall()
                    components.append(
                        ComponentAssessment(
                            component_kind=crow["component_kind"],
                            weight=crow["comp_imp_weight"],
                            level=DamageLevel(crow["comp_level_damage"]),
                            contributing_detection_ids=tuple(r["detection_id"] for r in det_rows),
                        )
                    )
                sections.append(
                    SectionAssessment(
                        section_kind=srow["section_kind"],
                        significance=srow["sec_sign_weight"],
                        score=srow["sec_level_damage"],
                        components=tuple(components),
                    )
                )
        return PropertyAssessment(
            property_id=property_id,
            score=record.total_level_damage,
            bucket=record.damage_bucket,
            sections=tuple(sections),
            computed_at=record.assessment_at,
            partial=record.partial,
        )

    # -- users (pass-through) --------------------------------------------------

    def upsert_user(self, payload: dict):
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR REPLACE INTO users (user_id, payload) VALUES (?, ?)",
                (payload["user_id"], json.dumps(payload, sort_keys=True)),
            )

    def upsert_user_preference(self, payload: dict):
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT OR REPLACE INTO user_preferences (user_id, criterion, payload) "
                "VALUES (?, ?, ?)",
                (payload["user_id"], payload["criterion"], json.dumps(payload, sort_keys=True)),
            )

    # -- NDJSON exchange --------------------------------------------------------

    def export_ndjson(self, fp: IO[str]):
        """One entity per line, dependency order, appendix field names."""
        with self._lock:
            for name in sorted(self.criteria_names() - set(DEFAULT_CRITERIA)):
                self._write_line(fp, {"kind": "criterion", "name": name})
            for record in self.list_properties():
                self._write_line(fp, _property_to_line(record))
            rows = self._conn.execute("SELECT * FROM images ORDER BY image_id").fetchall()
            for row in rows:
                self._write_line(fp, _image_to_line(self._image_from_row(row)))
            rows = self._conn.execute("SELECT * FROM sections ORDER BY section_id").fetchall()
            for row in rows:
                self._write_line(
                    fp,
                    {
                        "kind": "section",
                        "section_id": row["section_id"],
                        "property_id": row["property_id"],
                        "section_kind": row["section_kind"],
                        "sec_sign_weight": row["sec_sign_weight"],
                        "sec_level_damage": row["sec_level_damage"],
                    },
                )
            rows = self._conn.execute("SELECT * FROM components ORDER BY component_id").fetchall()
            for row in rows:
                self._write_line(
                    fp,
                    {
                        "kind": "component",
                        "component_id": row["component_id"],
                        "section_id": row["section_id"],
                        "component_kind": row["component_kind"],
                        "comp_imp_weight": row["comp_imp_weight"],
                        "comp_level_damage": row["comp_level_damage"],
                        "c_Last_Update": row["c_last_update"],
                    },
                )
            rows = self._conn.execute("SELECT * FROM detections ORDER BY detection_id").fetchall()
            for row in rows:
                self._write_line(
                    fp,
                    {
                        "kind": "detection",
                        "detection_id": row["detection_id"],
                        "image_id": row["image_id"],
                        "component_id": row["component_id"],
                        "component_kind": row["component_kind"],
                        "class_id": row["class_id"],
                        "class_name": row["class_name"],
                        "con_score": row["con_score"],
                        "bbox": json.loads(row["bbox"]),
                        "polygon": json.loads(row["polygon"]),
                    },
                )
            for row in self._conn.execute("SELECT payload FROM users ORDER BY user_id").fetchall():
                self._write_line(fp, {"kind": "user", **json.loads(row["payload"])})
            rows = self._conn.execute(
                "SELECT payload FROM user_preferences ORDER BY user_id, criterion"
            ).fetchall()
            for row in rows:
                self._write_line(fp, {"kind": "user_preference", **json.loads(row["payload"])})

    def import_ndjson(self, fp: IO[str]) -> dict[str, int]:
        """Load an exchange stream; lines may arrive in any order."""
        buckets: dict[str, list[dict]] = {}
        for lineno, line in enumerate(fp, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                entity = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
            kind = entity.pop("kind", None)
            if kind is None:
                raise ValueError(f"line {lineno}: missing \"kind\" field")
            buckets.setdefault(kind, []).append(entity)

        counts: dict[str, int] = {}
        for entity in buckets.get("criterion", []):
            self.add_criterion(entity["name"])
        counts["criterion"] = len(buckets.get("criterion", []))
        for entity in buckets.get("property", []):
            self.upsert_property(_property_from_line(entity))
        counts["property"] = len(buckets.get("property", []))
        for entity in buckets.get("user", []):
            self.upsert_user(entity)
        counts["user"] = len(buckets.get("user", []))
        for entity in buckets.get("image", []):
            self.add_image(_image_from_line(entity))
        counts["image"] = len(buckets.get("image", []))
        with self._lock, self._conn:
            for entity in buckets.get("section", []):
                self._write_section(
                    SectionRecord(
                        section_id=entity["section_id"],
                        property_id=entity["property_id"],
                        section_kind=entity["section_kind"],
                        sec_sign_weight=entity["sec_sign_weight"],
                        sec_level_damage=entity.get("sec_level_damage"),
                    )
                )
            for entity in buckets.get("component", []):
                level = entity.get("comp_level_damage")
                self._write_component(
                    ComponentRecord(
                        component_id=entity["component_id"],
                        section_id=entity["section_id"],
                        component_kind=entity["component_kind"],
                        comp_imp_weight=entity["comp_imp_weight"],
                        comp_level_damage=DamageLevel(level) if level else None,
                        last_update=entity.get("c_Last_Update"),
                    )
                )
        counts["section"] = len(buckets.get("section", []))
        counts["component"] = len(buckets.get("component", []))
        detections = [
            DetectionRecord(
                detection_id=entity["detection_id"],
                image_id=entity["image_id"],
                component_id=entity.get("component_id"),
                component_kind=entity.get("component_kind"),
                class_id=entity["class_id"],
                class_name=entity["class_name"],
                con_score=entity["con_score"],
                bbox=tuple(entity["bbox"]),
                polygon=tuple(
                    zip(entity["polygon"]["all_points_x"], entity["polygon"]["all_points_y"])
                ),
            )
            for entity in buckets.get("detection", [])
        ]
        self.insert_detections(detections)
        counts["detection"] = len(detections)
        for entity in buckets.get("user_preference", []):
            self.upsert_user_preference(entity)
        counts["user_preference"] = len(buckets.get("user_preference", []))
        return counts

    @staticmethod
    def _write_line(fp: IO[str], entity: dict):
        fp.write(json.dumps(entity, ensure_ascii=False) + "\n")


def _polygon_to_wire(polygon) -> dict:
    return {
        "all_points_x": [p[0] for p in polygon],
        "all_points_y": [p[1] for p in polygon],
    }


def _property_to_line(record: PropertyRecord) -> dict:
    return {
        "kind": "property",
        "property_id": record.property_id,
        "address": record.address,
        "zip_code": record.zip_code,
        "build_year": record.build_year,
        "criteria": record.criteria,
        "total_level_damage": record.total_level_damage,
        "damage_bucket": record.damage_bucket.class_id if record.damage_bucket else None,
        "assessment_at": record.assessment_at,
        "partial": record.partial,
    }


def _property_from_line(entity: dict) -> PropertyRecord:
    bucket_id = entity.get("damage_bucket")
    return PropertyRecord(
        property_id=entity["property_id"],
        address=entity.get("address", ""),
        zip_code=entity.get("zip_code", ""),
        build_year=entity.get("build_year"),
        criteria=entity.get("criteria", {}),
        total_level_damage=entity.get("total_level_damage"),
        damage_bucket=DamageLevel(bucket_id) if bucket_id else None,
        assessment_at=entity.get("assessment_at"),
        partial=bool(entity.get("partial", False)),
    )


def _image_to_line(meta: ImageMeta) -> dict:
    return {
        "kind": "image",
        "image_id": meta.image_id,
        "property_id": meta.property_id,
        "file_path": meta.file_path,
        "width": meta.width,
        "height": meta.height,
        "channels": meta.channels,
        "ppi": meta.ppi,
        "uploaded_at": meta.uploaded_at,
        "Is_detected": meta.is_detected,
        "section_kind": meta.section_kind,
    }


def _image_from_line(entity: dict) -> ImageMeta:
    return ImageMeta(
        image_id=entity["image_id"],
        property_id=entity["property_id"],
        file_path=entity.get("file_path", ""),
        width=entity.get("width", 0),
        height=entity.get("height", 0),
        channels=entity.get("channels", 3),
        ppi=entity.get("ppi"),
        uploaded_at=entity.get("uploaded_at", ""),
        is_detected=bool(entity.get("Is_detected", False)),
        section_kind=entity.get("section_kind"),
    )
