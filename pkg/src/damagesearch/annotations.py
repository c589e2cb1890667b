"""VGG-style polygon annotation parsing and serialization.

Documents are the JSON export shape: a list of file entries, each with a
"regions" array of {"shape_attributes": {"all_points_x": [...],
"all_points_y": [...]}, "region_attributes": {"name": ...}} objects. The
dict-keyed export variant (filename+size keys) is accepted on parse.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .errors import AnnotationParseError, AnnotationSchemaError
from .model import damage_from_label


@dataclass(frozen=True)
class GroundTruthRegion:
    """One annotated polygon with its class label.

    class_name is normalized: damage spellings collapse to the canonical
    labels (severe/mild/minor/none), other labels are lowercased object
    names. file_size carries the document's "size" field through untouched.
    """

    filename: str
    polygon: tuple[tuple[float, float], ...]
    class_name: str
    file_size: int | None = None


def normalize_class_name(name: str) -> str:
    level = damage_from_label(name)
    if level is not None:
        return level.label
    return name.strip().lower()


def _region_from_entry(filename: str, file_size, region, where: str) -> GroundTruthRegion:
    if not isinstance(region, dict):
        raise AnnotationSchemaError(f"{where}: region entry is not an object")
    shape = region.get("shape_attributes")
    attrs = region.get("region_attributes")
    if not isinstance(shape, dict) or not isinstance(attrs, dict):
        raise AnnotationSchemaError(f"{where}: missing shape_attributes or region_attributes")
    xs = shape.get("all_points_x")
    ys = shape.get("all_points_y")
    if not isinstance(xs, list) or not isinstance(ys, list):
        raise AnnotationSchemaError(f"{where}: all_points_x/all_points_y must be arrays")
    if len(xs) != len(ys):
        raise AnnotationSchemaError(
            f"{where}: all_points_x has {len(xs)} values but all_points_y has {len(ys)}"
        )
    if len(xs) < 3:
        raise AnnotationSchemaError(f"{where}: polygon needs at least 3 vertices, got {len(xs)}")
    name = attrs.get("name")
    if not isinstance(name, str) or not name:
        raise AnnotationSchemaError(f"{where}: region_attributes.name missing")
    return GroundTruthRegion(
        filename=filename,
        polygon=tuple(zip(xs, ys)),
        class_name=normalize_class_name(name),
        file_size=file_size,
    )


def parse_vgg(document: str) -> list[GroundTruthRegion]:
    """Parse an annotation document into regions, in document order."""
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise AnnotationParseError(
            f"not valid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc

    if isinstance(data, dict):
        entries = list(data.values())
    elif isinstance(data, list):
        entries = data
    else:
        raise AnnotationSchemaError("document must be a list or object of file entries")

    regions: list[GroundTruthRegion] = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise AnnotationSchemaError(f"file entry {i} is not an object")
        filename = entry.get("filename")
        if not isinstance(filename, str) or not filename:
            raise AnnotationSchemaError(f"file entry {i}: filename missing")
        file_size = entry.get("size")
        raw_regions = entry.get("regions", [])
        if isinstance(raw_regions, dict):
            raw_regions = list(raw_regions.values())
        if not isinstance(raw_regions, list):
            raise AnnotationSchemaError(f"file entry {i} ({filename}): regions must be an array")
        for j, region in enumerate(raw_regions):
            regions.append(_region_from_entry(filename, file_size, region, f"{filename} region {j}"))
    return regions


def serialize_vgg(regions: Sequence[GroundTruthRegion]) -> str:
    """Serialize regions back to the list-form document.

    Consecutive regions of the same file fold into one entry, so
    parse_vgg(serialize_vgg(r)) == r for any region list.
    """
    entries = []
    for region in regions:
        key = (region.filename, region.file_size)
        if not entries or entries[-1][0] != key:
            entry = {"filename": region.filename}
            if region.file_size is not None:
                entry["size"] = region.file_size
            entry["regions"] = []
            entries.append((key, entry))
        entries[-1][1]["regions"].append(
            {
                "shape_attributes": {
                    "name": "polygon",
                    "all_points_x": [p[0] for p in region.polygon],
                    "all_points_y": [p[1] for p in region.polygon],
                },
                "region_attributes": {"name": region.class_name},
            }
        )
    return json.dumps([entry for _, entry in entries], ensure_ascii=False)
