import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from damagesearch.annotations import GroundTruthRegion, parse_vgg, serialize_vgg
from damagesearch.errors import AnnotationParseError, AnnotationSchemaError

# The published annotation sample: one polygon on Damage1.jpg labeled "no damage".
SAMPLE = json.dumps(
    [
        {
            "filename": "Damage1.jpg",
            "size": 6122,
            "regions": [
                {
                    "shape_attributes": {
                        "name": "polygon",
                        "all_points_x": [123, 128, 242, 184, 143],
                        "all_points_y": [104, 12, 70, 96, 102],
                    },
                    "region_attributes": {"name": "no damage"},
                }
            ],
        }
    ]
)


def test_parse_sample():
    regions = parse_vgg(SAMPLE)
    assert len(regions) == 1
    region = regions[0]
    assert region.filename == "Damage1.jpg"
    assert region.file_size == 6122
    assert region.polygon == ((123, 104), (128, 12), (242, 70), (184, 96), (143, 102))
    assert region.class_name == "none"


def test_parse_dict_keyed_export():
    document = json.dumps({"Damage1.jpg6122": json.loads(SAMPLE)[0]})
    assert parse_vgg(document) == parse_vgg(SAMPLE)


def test_parse_empty_regions():
    assert parse_vgg(json.dumps([{"filename": "a.jpg", "regions": []}])) == []


def test_parse_malformed_json_reports_position():
    with pytest.raises(AnnotationParseError, match=r"line \d+ column \d+"):
        parse_vgg("[{\"filename\": ")


def test_mismatched_point_arrays():
    bad = SAMPLE.replace("[104, 12, 70, 96, 102]", "[104, 12, 70, 96]")
    with pytest.raises(AnnotationSchemaError, match="5 values but"):
        parse_vgg(bad)


def test_too_few_vertices():
    bad = SAMPLE.replace("[123, 128, 242, 184, 143]", "[123, 128]").replace(
        "[104, 12, 70, 96, 102]", "[104, 12]"
    )
    with pytest.raises(AnnotationSchemaError, match="at least 3"):
        parse_vgg(bad)


def test_label_normalization_is_case_insensitive():
    for spelling in ("None", "no damage", "No Damage", "NO-DAMAGE"):
        doc = SAMPLE.replace("no damage", spelling)
        assert parse_vgg(doc)[0].class_name == "none"


def test_sample_round_trip():
    regions = parse_vgg(SAMPLE)
    assert parse_vgg(serialize_vgg(regions)) == regions


def test_serialize_empty():
    assert parse_vgg(serialize_vgg([])) == []


def _random_region(rng: random.Random, filename: str) -> GroundTruthRegion:
    n = rng.randint(3, 8)
    polygon = tuple((rng.randint(0, 711), rng.randint(0, 711)) for _ in range(n))
    name = rng.choice(["severe", "mild", "minor", "none", "refrigerator", "toilet", "bed"])
    return GroundTruthRegion(
        filename=filename,
        polygon=polygon,
        class_name=name,
        file_size=rng.choice([None, rng.randint(1, 10_000_000)]),
    )


def test_generated_round_trip_thousand_documents():
    rng = random.Random(1207)
    for _ in range(1000):
        regions = [
            _random_region(rng, f"img{rng.randint(0, 3)}.jpg") for _ in range(rng.randint(0, 6))
        ]
        assert parse_vgg(serialize_vgg(regions)) == regions


region_strategy = st.builds(
    GroundTruthRegion,
    filename=st.sampled_from(["a.jpg", "b.jpg", "c.png"]),
    polygon=st.lists(
        st.tuples(st.integers(0, 1000), st.integers(0, 1000)), min_size=3, max_size=10
    ).map(tuple),
    class_name=st.sampled_from(["severe", "mild", "minor", "none", "oven", "stove"]),
    file_size=st.one_of(st.none(), st.integers(0, 10_000_000)),
)


@given(st.lists(region_strategy, max_size=12))
def test_round_trip_property(regions):
    assert parse_vgg(serialize_vgg(regions)) == regions
