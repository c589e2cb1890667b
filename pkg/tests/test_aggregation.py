import dataclasses
import json
from types import SimpleNamespace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CountingBackend, FailingBackend, make_context
from damagesearch.aggregation import (
    DamageEstimator,
    component_damage,
    property_damage,
    section_damage,
)
from damagesearch.demo import build_demo_corpus
from damagesearch.detector import MockDetectorBackend
from damagesearch.errors import (
    BackendUnavailableError,
    EmptyInputError,
    NoImageryError,
    NotFoundError,
)
from damagesearch.imaging import ImageMeta
from damagesearch.model import DamageLevel
from damagesearch.pipeline import ImageProcessor
from damagesearch.store import PropertyRecord, Store

L = DamageLevel

weights = st.floats(min_value=0.01, max_value=100.0, allow_nan=False)
levels = st.sampled_from(list(DamageLevel))


def det(class_id):
    return SimpleNamespace(class_id=class_id)


def test_component_damage_takes_worst():
    assert component_damage([det(2), det(1), det(2)]) is L.SEVERE


def test_component_damage_empty_means_satisfactory():
    assert component_damage([]) is L.NONE


def test_component_damage_singleton():
    assert component_damage([det(3)]) is L.MINOR


def test_section_damage_worked_numbers():
    score = section_damage([(L.SEVERE, 10), (L.MINOR, 5), (L.NONE, 2)])
    assert score == pytest.approx(33 / 17, abs=1e-12)
    assert round(score, 4) == 1.9412


@given(weights)
def test_section_damage_singleton_weight_cancels(w):
    assert section_damage([(L.MILD, w)]) == pytest.approx(2.0, abs=1e-9)


@given(levels, st.lists(weights, min_size=1, max_size=6))
def test_section_damage_constant_level(level, ws):
    score = section_damage([(level, w) for w in ws])
    assert score == pytest.approx(level.class_id, abs=1e-9)


def test_section_damage_empty():
    with pytest.raises(EmptyInputError):
        section_damage([])


def test_property_damage_worked_numbers():
    score = property_damage([(1.9412, 3), (4.0, 1)])
    assert round(score, 4) == 2.4559


def test_property_damage_singleton():
    assert property_damage([(2.75, 7)]) == pytest.approx(2.75)


@given(st.floats(min_value=1.0, max_value=4.0), st.lists(weights, min_size=1, max_size=5))
def test_property_damage_constant(score, ws):
    assert property_damage([(score, w) for w in ws]) == pytest.approx(score, abs=1e-9)


def test_property_damage_empty():
    with pytest.raises(EmptyInputError):
        property_damage([])


@given(
    st.lists(st.tuples(levels, st.integers(min_value=1, max_value=10)), min_size=1, max_size=6),
    st.floats(min_value=0.1, max_value=50.0),
)
def test_section_scale_invariance(components, factor):
    base = section_damage(components)
    scaled = section_damage([(lvl, w * factor) for lvl, w in components])
    assert scaled == pytest.approx(base, abs=1e-9)


@given(
    st.lists(
        st.tuples(st.floats(min_value=1.0, max_value=4.0), st.integers(min_value=1, max_value=10)),
        min_size=1,
        max_size=5,
    ),
    st.floats(min_value=0.1, max_value=50.0),
)
def test_property_scale_invariance(sections, factor):
    base = property_damage(sections)
    scaled = property_damage([(s, w * factor) for s, w in sections])
    assert scaled == pytest.approx(base, abs=1e-9)


@given(
    st.lists(st.tuples(levels, st.integers(min_value=1, max_value=10)), min_size=1, max_size=5),
    st.data(),
)
def test_worsening_a_component_never_raises_the_score(components, data):
    index = data.draw(st.integers(min_value=0, max_value=len(components) - 1))
    level, weight = components[index]
    if level.class_id == 1:
        return
    worse = DamageLevel(data.draw(st.integers(min_value=1, max_value=level.class_id - 1)))
    worsened = list(components)
    worsened[index] = (worse, weight)
    assert section_damage(worsened) <= section_damage(components) + 1e-12


# -- estimator workflow -------------------------------------------------------


def _assessment_bytes(assessment):
    return json.dumps(dataclasses.asdict(assessment), sort_keys=True).encode()


def test_estimate_unknown_property(ctx):
    with pytest.raises(NotFoundError):
        ctx.estimator.estimate_property("nope")


def test_estimate_without_images(ctx):
    ctx.store.upsert_property(PropertyRecord(property_id="empty", criteria={"price": 1}))
    with pytest.raises(NoImageryError):
        ctx.estimator.estimate_property("empty")


def test_estimate_worked_example(ctx):
    assessment = ctx.estimator.estimate_property("P7")
    by_kind = {s.section_kind: s for s in assessment.sections}
    assert round(by_kind["kitchen"].score, 4) == 1.9412
    assert by_kind["bedroom"].score == pytest.approx(4.0)
    assert round(assessment.score, 4) == 2.4559
    assert assessment.bucket is L.MILD
    kitchen = {c.component_kind: c for c in by_kind["kitchen"].components}
    assert kitchen["ceiling"].level is L.SEVERE and kitchen["ceiling"].weight == 10
    assert kitchen["floor"].level is L.MINOR and kitchen["floor"].weight == 5
    assert kitchen["wall"].level is L.NONE and kitchen["wall"].weight == 2


def test_estimate_idempotent_and_skips_detector(ctx, corpus_dir):
    backend = CountingBackend(MockDetectorBackend(corpus_dir / "sidecars"))
    processor = ImageProcessor(ctx.store, backend)
    estimator = DamageEstimator(ctx.store, processor=processor)

    first = estimator.estimate_property("P7")
    calls_after_first = backend.calls
    assert calls_after_first > 0

    second = estimator.estimate_property("P7")
    assert backend.calls == calls_after_first
    assert second == first
    assert _assessment_bytes(second) == _assessment_bytes(first)


def test_new_image_invalidates_assessment(tmp_path):
    corpus = tmp_path / "corpus"
    build_demo_corpus(corpus)
    ctx = make_context(corpus, tmp_path / "store.db")
    first = ctx.estimator.estimate_property("P2")
    assert first.bucket is L.NONE

    # second bedroom photo showing severe ceiling damage
    (corpus / "sidecars" / "P2-img2.json").write_text(
        json.dumps(
            [
                {
                    "filename": "P2-img2.jpg",
                    "regions": [
                        {
                            "shape_attributes": {
                                "name": "polygon",
                                "all_points_x": [60, 260, 260, 60],
                                "all_points_y": [40, 40, 100, 100],
                            },
                            "region_attributes": {"name": "severe"},
                        },
                        {
                            "shape_attributes": {
                                "name": "polygon",
                                "all_points_x": [150, 550, 550, 150],
                                "all_points_y": [350, 350, 600, 600],
                            },
                            "region_attributes": {"name": "bed"},
                        },
                    ],
                }
            ]
        ),
        encoding="utf-8",
    )
    ctx.store.add_image(
        ImageMeta(
            image_id="P2-img2",
            property_id="P2",
            file_path="images/P2-img2.jpg",
            width=712,
            height=712,
            ppi=96.0,
            uploaded_at="2030-01-01T00:00:00+00:00",
        )
    )
    second = ctx.estimator.estimate_property("P2")
    assert second.computed_at != first.computed_at
    # both photos are bedroom shots: detections pool into one section and
    # the worst one governs the ceiling
    assert [s.section_kind for s in second.sections] == ["bedroom"]
    assert second.bucket is L.SEVERE


def test_backend_down_leaves_assessment_unchanged(ctx):
    before = ctx.estimator.estimate_property("P3")

    backend = FailingBackend()
    estimator = DamageEstimator(ctx.store, processor=ImageProcessor(ctx.store, backend))
    ctx.store.add_image(
        ImageMeta(
            image_id="P3-img2",
            property_id="P3",
            file_path="images/P3-img2.jpg",
            width=712,
            height=712,
            ppi=96.0,
            uploaded_at="2030-01-01T00:00:00+00:00",
        )
    )
    with pytest.raises(BackendUnavailableError):
        estimator.estimate_property("P3")
    assert ctx.store.load_assessment("P3") == before


def test_estimate_without_processor_on_undetected_images(ctx):
    estimator = DamageEstimator(ctx.store, processor=None)
    with pytest.raises(BackendUnavailableError):
        estimator.estimate_property("P1")
