"""Deterministic 20-listing demo corpus.

Writes a properties.ndjson stream, one VGG sidecar per image for the mock
detector, and the default weight/rule tables. The corpus is arranged so
that under a price-ascending search (price <= 100000, rooms >= 3,
Columbus, OH) listing P4 ranks 17th unfiltered and 2nd among the three
severe-bucket listings (P1, P4, P18), and listing P7's assessment lands on
the kitchen 33/17 with bedroom 4.0 composite: property score 2.4559,
bucket mild.
"""

from __future__ import annotations

import json
from pathlib import Path

from .config import dump_section_rules, dump_weight_table
from .detector import DEFAULT_SECTION_RULES
from .model import DEFAULT_WEIGHTS

DEMO_LOCATION = "Columbus, OH"

# id -> (price, rooms, baths, sqft, build_year, street, zip, damage plan)
# plans: severe/mild/minor/none = one damage region of that class plus the
# listed evidence object; worked = the multi-component P7 layout.
_LISTINGS = [
    ("P1", 15439, 3, 1.5, 1040, 1948, "1706 Evergreen Rd", "43207", ("severe", "kitchen")),
    ("P2", 22000, 3, 1.0, 980, 1952, "418 Marion Ave", "43205", ("none", "bedroom")),
    ("P3", 25500, 3, 1.0, 1110, 1939, "77 Whittier St", "43206", ("minor", "living room")),
    ("P4", 54000, 3, 1.0, 1020, 1947, "2289 Grasmere Ave", "43211", ("severe", "kitchen")),
    ("P5", 28900, 4, 1.5, 1260, 1961, "1530 Cleveland Ave", "43211", ("mild", "bathroom")),
    ("P6", 31000, 3, 1.0, 990, 1955, "905 Seymour Ave", "43206", ("none", "kitchen")),
    ("P7", 33750, 4, 2.0, 1480, 1950, "64 Dana Ave", "43222", ("worked", None)),
    ("P8", 35600, 3, 1.0, 1050, 1945, "1221 Oakwood Ave", "43206", ("minor", "bedroom")),
    ("P9", 38200, 4, 1.5, 1330, 1958, "333 Hanford St", "43207", ("mild", "kitchen")),
    ("P10", 40100, 3, 1.0, 1010, 1949, "88 Clarendon Ave", "43223", ("none", "bathroom")),
    ("P11", 42500, 3, 1.5, 1190, 1954, "2105 Sullivant Ave", "43223", ("minor", "kitchen")),
    ("P12", 44900, 4, 2.0, 1400, 1962, "456 Stewart Ave", "43206", ("mild", "living room")),
    ("P13", 46300, 3, 1.0, 970, 1941, "1818 Aberdeen Ave", "43211", ("none", "bedroom")),
    ("P14", 48000, 3, 1.5, 1230, 1957, "240 Brehl Ave", "43222", ("minor", "bathroom")),
    ("P15", 49800, 4, 1.5, 1350, 1963, "971 Wilson Ave", "43206", ("mild", "bedroom")),
    ("P16", 51200, 3, 1.0, 1080, 1946, "1409 Fairwood Ave", "43206", ("none", "living room")),
    ("P17", 52900, 3, 1.5, 1140, 1953, "512 Gilbert St", "43205", ("minor", "kitchen")),
    ("P18", 76500, 4, 2.0, 1520, 1966, "2760 Azelda St", "43211", ("severe", "bathroom")),
    ("P19", 82000, 4, 2.0, 1610, 1971, "1035 Loretta Ave", "43211", ("mild", "kitchen")),
    ("P20", 99000, 5, 2.5, 1780, 1978, "689 Berkeley Rd", "43205", ("none", "bedroom")),
]

_EVIDENCE = {
    "kitchen": [("refrigerator", (600, 200, 90, 240)), ("oven", (450, 300, 110, 140))],
    "bathroom": [("toilet", (300, 400, 120, 160))],
    "bedroom": [("bed", (150, 350, 400, 250))],
    "living room": [("sofa", (150, 400, 400, 180)), ("tv", (100, 100, 150, 100))],
}

_DAMAGE_BOX = (60, 40, 200, 60)  # top of frame, attributed to the ceiling


def _rect(x, y, w, h) -> tuple[list[int], list[int]]:
    return [x, x + w, x + w, x], [y, y, y + h, y + h]


def _region(name: str, box) -> dict:
    xs, ys = _rect(*box)
    return {
        "shape_attributes": {"name": "polygon", "all_points_x": xs, "all_points_y": ys},
        "region_attributes": {"name": name},
    }


def _sidecar(filename: str, regions: list[dict]) -> str:
    return json.dumps([{"filename": filename, "size": 6122, "regions": regions}])


def _worked_example_sidecars(image_ids: tuple[str, str]) -> dict[str, str]:
    kitchen_id, bedroom_id = image_ids
    kitchen_regions = [
        _region("severe", (10, 10, 690, 90)),      # ceiling damage
        _region("floor", (10, 500, 690, 200)),     # floor component object
        _region("minor", (100, 550, 100, 100)),    # damage inside the floor box
        _region("wall", (10, 150, 690, 300)),      # wall component, no damage on it
        _region("refrigerator", (600, 200, 90, 240)),
        _region("oven", (450, 300, 110, 140)),
    ]
    bedroom_regions = [_region("bed", (150, 350, 400, 250))]
    return {
        kitchen_id: _sidecar(f"{kitchen_id}.jpg", kitchen_regions),
        bedroom_id: _sidecar(f"{bedroom_id}.jpg", bedroom_regions),
    }


def build_demo_corpus(root: str | Path) -> dict:
    """Write the corpus under root and return a content summary."""
    root = Path(root)
    sidecar_dir = root / "sidecars"
    sidecar_dir.mkdir(parents=True, exist_ok=True)

    lines: list[str] = []
    sidecars: dict[str, str] = {}
    minute = 0

    for pid, price, rooms, baths, sqft, year, street, zip_code, plan in _LISTINGS:
        lines.append(
            json.dumps(
                {
                    "kind": "property",
                    "property_id": pid,
                    "address": f"{street}, {DEMO_LOCATION} {zip_code}",
                    "zip_code": zip_code,
                    "build_year": year,
                    "criteria": {
                        "price": price,
                        "rooms": rooms,
                        "baths": baths,
                        "sqft": sqft,
                        "location": DEMO_LOCATION,
                    },
                }
            )
        )
        kind, section = plan
        if kind == "worked":
            image_ids = (f"{pid}-img1", f"{pid}-img2")
            sidecars.update(_worked_example_sidecars(image_ids))
        else:
            image_id = f"{pid}-img1"
            regions = [_region(name, box) for name, box in _EVIDENCE[section]]
            if kind != "none":
                regions.insert(0, _region(kind, _DAMAGE_BOX))
            sidecars[image_id] = _sidecar(f"{image_id}.jpg", regions)
            image_ids = (image_id,)
        for image_id in image_ids:
            lines.append(
                json.dumps(
                    {
                        "kind": "image",
                        "image_id": image_id,
                        "property_id": pid,
                        "file_path": f"images/{image_id}.jpg",
                        "width": 712,
                        "height": 712,
                        "channels": 3,
                        "ppi": 96.0,
                        "uploaded_at": f"2024-03-01T00:{minute:02d}:00+00:00",
                        "Is_detected": False,
                    }
                )
            )
            minute += 1

    (root / "properties.ndjson").write_text("\n".join(lines) + "\n", encoding="utf-8")
    for image_id, document in sidecars.items():
        (sidecar_dir / f"{image_id}.json").write_text(document, encoding="utf-8")
    dump_weight_table(DEFAULT_WEIGHTS, root / "weights.json")
    dump_section_rules(DEFAULT_SECTION_RULES, root / "rules.json")

    return {
        "root": str(root),
        "properties": len(_LISTINGS),
        "images": minute,
        "sidecars": len(sidecars),
        "ndjson": str(root / "properties.ndjson"),
        "fixtures": str(sidecar_dir),
    }
