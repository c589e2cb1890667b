import io
import threading

import pytest

from damagesearch.errors import NotFoundError, UnknownCriterionError
from damagesearch.imaging import ImageMeta
from damagesearch.model import (
    ComponentAssessment,
    DamageLevel,
    PropertyAssessment,
    SectionAssessment,
)
from damagesearch.store import DetectionRecord, PropertyRecord, Store

L = DamageLevel


@pytest.fixture
def store(tmp_path):
    s = Store(tmp_path / "store.db")
    yield s
    s.close()


def prop(pid="P1", **criteria):
    return PropertyRecord(property_id=pid, address="1 Main St", zip_code="43207", criteria=criteria)


def image(image_id, pid="P1", uploaded_at="2024-01-01T00:00:00+00:00", detected=False):
    return ImageMeta(
        image_id=image_id,
        property_id=pid,
        file_path=f"images/{image_id}.jpg",
        width=712,
        height=712,
        ppi=96.0,
        uploaded_at=uploaded_at,
        is_detected=detected,
    )


def assessment(pid="P1", computed_at="2024-06-01T00:00:00+00:00", score=33 / 17):
    section = SectionAssessment(
        section_kind="kitchen",
        significance=3.0,
        score=score,
        components=(
            ComponentAssessment("ceiling", 10.0, L.SEVERE, ("P1-img1:000",)),
            ComponentAssessment("floor", 5.0, L.MINOR),
            ComponentAssessment("wall", 2.0, L.NONE),
        ),
    )
    bedroom = SectionAssessment(
        section_kind="bedroom",
        significance=1.0,
        score=4.0,
        components=(ComponentAssessment("ceiling", 10.0, L.NONE),),
    )
    total = (3.0 * score + 4.0) / 4.0
    return PropertyAssessment(
        property_id=pid,
        score=total,
        bucket=L.MILD,
        sections=(bedroom, section),
        computed_at=computed_at,
    )


def test_upsert_and_get(store):
    store.upsert_property(prop(price=54000, rooms=3))
    record = store.get_property("P1")
    assert record.criteria["price"] == 54000
    assert record.address == "1 Main St"


def test_upsert_idempotent(store):
    record = prop(price=100)
    store.upsert_property(record)
    store.upsert_property(record)
    assert [p.property_id for p in store.list_properties()] == ["P1"]


def test_unknown_criterion_rejected(store):
    with pytest.raises(UnknownCriterionError):
        store.upsert_property(prop(flavor="chocolate"))
    store.add_criterion("flavor")
    store.upsert_property(prop(flavor="chocolate"))


def test_basics_upsert_preserves_assessment(store):
    store.upsert_property(prop(price=100))
    store.record_assessment(assessment())
    store.upsert_property(prop(price=200))
    record = store.get_property("P1")
    assert record.criteria["price"] == 200
    assert record.assessment_at is not None
    assert record.total_level_damage == pytest.approx((3 * 33 / 17 + 4) / 4)


def test_get_missing(store):
    with pytest.raises(NotFoundError):
        store.get_property("ghost")


def test_image_requires_property(store):
    with pytest.raises(NotFoundError):
        store.add_image(image("img1", pid="ghost"))


def test_list_undetected_ordering(store):
    store.upsert_property(prop())
    store.add_image(image("c", uploaded_at="2024-01-03T00:00:00+00:00"))
    store.add_image(image("a", uploaded_at="2024-01-01T00:00:00+00:00"))
    store.add_image(image("b", uploaded_at="2024-01-02T00:00:00+00:00", detected=True))
    store.add_image(image("d", uploaded_at="2024-01-04T00:00:00+00:00"))
    undetected = store.list_undetected_images("P1")
    assert [m.image_id for m in undetected] == ["a", "c", "d"]


def test_list_undetected_all_detected(store):
    store.upsert_property(prop())
    store.add_image(image("a", detected=True))
    assert store.list_undetected_images("P1") == []


def test_list_undetected_unknown_property(store):
    with pytest.raises(NotFoundError):
        store.list_undetected_images("ghost")


def test_mark_image_detected(store):
    store.upsert_property(prop())
    store.add_image(image("a"))
    store.mark_image_detected("a", "kitchen")
    meta = store.get_image("a")
    assert meta.is_detected and meta.section_kind == "kitchen"


def test_detections_immutable_once_written(store):
    store.upsert_property(prop())
    store.add_image(image("a"))
    first = DetectionRecord(
        detection_id="a:000",
        image_id="a",
        class_id=1,
        class_name="severe",
        con_score=0.92,
        bbox=(0.0, 0.0, 10.0, 10.0),
        polygon=((0, 0), (10, 0), (10, 10), (0, 10)),
    )
    store.insert_detections([first])
    clashing = DetectionRecord(
        detection_id="a:000",
        image_id="a",
        class_id=4,
        class_name="none",
        con_score=0.5,
        bbox=(0.0, 0.0, 10.0, 10.0),
        polygon=((0, 0), (10, 0), (10, 10), (0, 10)),
    )
    store.insert_detections([clashing])
    assert store.detections_for_image("a") == [first]


def test_record_assessment_round_trip(store):
    store.upsert_property(prop(price=54000))
    store.add_image(image("P1-img1", detected=True))
    store.insert_detections(
        [
            DetectionRecord(
                detection_id="P1-img1:000",
                image_id="P1-img1",
                component_id="P1:kitchen:ceiling",
                component_kind="ceiling",
                class_id=1,
                class_name="severe",
                con_score=0.92,
                bbox=(0.0, 0.0, 10.0, 10.0),
                polygon=((0, 0), (10, 0), (10, 10), (0, 10)),
            )
        ]
    )
    written = assessment()
    store.record_assessment(written)
    loaded = store.load_assessment("P1")
    assert loaded == written
    record = store.get_property("P1")
    assert round(record.total_level_damage, 4) == 2.4559
    assert record.damage_bucket is L.MILD


def test_record_assessment_rerecord_identical(store):
    store.upsert_property(prop())
    store.add_image(image("P1-img1", detected=True))
    written = assessment()
    store.record_assessment(written)
    first = store.load_assessment("P1")
    store.record_assessment(written)
    assert store.load_assessment("P1") == first


def test_record_assessment_unknown_property(store):
    with pytest.raises(NotFoundError):
        store.record_assessment(assessment(pid="ghost"))


def test_record_assessment_atomic_on_failure(store, monkeypatch):
    store.upsert_property(prop())
    store.record_assessment(assessment(computed_at="2024-06-01T00:00:00+00:00"))
    before = store.load_assessment("P1")

    calls = {"n": 0}
    original = Store._write_component

    def flaky(self, record):
        calls["n"] += 1
        if calls["n"] > 2:
            raise RuntimeError("injected crash mid-write")
        return original(self, record)

    monkeypatch.setattr(Store, "_write_component", flaky)
    with pytest.raises(RuntimeError):
        store.record_assessment(assessment(computed_at="2025-01-01T00:00:00+00:00", score=1.0))
    monkeypatch.setattr(Store, "_write_component", original)

    # fully pre-state: the interrupted write rolled back
    assert store.load_assessment("P1") == before


def test_concurrent_assessments_for_distinct_properties(store):
    store.upsert_property(prop("A"))
    store.upsert_property(prop("B"))
    errors = []

    def record(pid):
        try:
            store.record_assessment(assessment(pid=pid))
        except Exception as exc:  # pragma: no cover - failure path
            errors.append(exc)

    threads = [threading.Thread(target=record, args=(pid,)) for pid in ("A", "B")]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert store.load_assessment("A") is not None
    assert store.load_assessment("B") is not None


def test_referential_integrity_detection_needs_image(store):
    store.upsert_property(prop())
    with pytest.raises(Exception):
        store.insert_detections(
            [
                DetectionRecord(
                    detection_id="x:000",
                    image_id="ghost-image",
                    class_id=1,
                    class_name="severe",
                    con_score=0.9,
                    bbox=(0.0, 0.0, 1.0, 1.0),
                    polygon=((0, 0), (1, 0), (1, 1)),
                )
            ]
        )


def test_ndjson_round_trip(store, tmp_path):
    store.add_criterion("school_district")
    store.upsert_property(prop(price=54000, rooms=3, school_district="east"))
    store.add_image(image("P1-img1", detected=True))
    store.insert_detections(
        [
            DetectionRecord(
                detection_id="P1-img1:000",
                image_id="P1-img1",
                component_id="P1:kitchen:ceiling",
                component_kind="ceiling",
                class_id=1,
                class_name="severe",
                con_score=0.92,
                bbox=(1.0, 2.0, 10.0, 10.0),
                polygon=((1, 2), (11, 2), (11, 12), (1, 12)),
            )
        ]
    )
    store.record_assessment(assessment())
    store.upsert_user({"user_id": "u1", "email": "u1@example.com", "phone": "555-0100"})
    store.upsert_user_preference({"user_id": "u1", "criterion": "price", "AHP_Weight": 0.61})

    first = io.StringIO()
    store.export_ndjson(first)

    other = Store(tmp_path / "other.db")
    other.import_ndjson(io.StringIO(first.getvalue()))
    second = io.StringIO()
    other.export_ndjson(second)
    assert second.getvalue() == first.getvalue()
    assert other.load_assessment("P1") == store.load_assessment("P1")
    other.close()


def test_ndjson_uses_appendix_field_names(store):
    store.upsert_property(prop(price=1))
    store.add_image(image("P1-img1", detected=True))
    store.insert_detections(
        [
            DetectionRecord(
                detection_id="P1-img1:000",
                image_id="P1-img1",
                class_id=2,
                class_name="mild",
                con_score=0.9,
                bbox=(0.0, 0.0, 5.0, 5.0),
                polygon=((0, 0), (5, 0), (5, 5)),
            )
        ]
    )
    store.record_assessment(assessment())
    store.upsert_user_preference({"user_id": "u1", "criterion": "price", "AHP_Weight": 0.5})
    out = io.StringIO()
    store.export_ndjson(out)
    text = out.getvalue()
    for name in (
        "total_level_damage",
        "sec_sign_weight",
        "comp_imp_weight",
        "con_score",
        "Is_detected",
        "c_Last_Update",
        "AHP_Weight",
        "all_points_x",
    ):
        assert name in text
