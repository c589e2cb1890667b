import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from damagesearch.errors import EmptyInputError, InvalidClassError, ScoreRangeError
from damagesearch.model import (
    DamageLevel,
    bucket,
    damage_from_class_id,
    damage_from_label,
    worst_of,
)

levels = st.sampled_from(list(DamageLevel))
scores = st.floats(min_value=1.0, max_value=4.0, allow_nan=False)


def test_class_id_mapping_is_total_and_bijective():
    assert damage_from_class_id(1) is DamageLevel.SEVERE
    assert damage_from_class_id(2) is DamageLevel.MILD
    assert damage_from_class_id(3) is DamageLevel.MINOR
    assert damage_from_class_id(4) is DamageLevel.NONE
    assert len({damage_from_class_id(i) for i in (1, 2, 3, 4)}) == 4


@pytest.mark.parametrize("bad", [0, 5, -1, 100])
def test_invalid_class_ids_rejected(bad):
    with pytest.raises(InvalidClassError):
        damage_from_class_id(bad)


def test_round_trip_identity():
    for class_id in (1, 2, 3, 4):
        assert damage_from_class_id(class_id).class_id == class_id


def test_severity_ordering():
    assert DamageLevel.SEVERE.more_severe_than(DamageLevel.MILD)
    assert DamageLevel.MILD.more_severe_than(DamageLevel.MINOR)
    assert DamageLevel.MINOR.more_severe_than(DamageLevel.NONE)


def test_labels():
    assert DamageLevel.SEVERE.label == "severe"
    assert DamageLevel.NONE.label == "none"
    assert damage_from_label("No Damage") is DamageLevel.NONE
    assert damage_from_label("extreme") is DamageLevel.SEVERE
    assert damage_from_label("refrigerator") is None


def test_worst_of_examples():
    assert worst_of([DamageLevel.MILD, DamageLevel.MILD, DamageLevel.SEVERE]) is DamageLevel.SEVERE
    assert worst_of([DamageLevel.NONE]) is DamageLevel.NONE
    assert worst_of([DamageLevel.MINOR, DamageLevel.MILD]) is DamageLevel.MILD


def test_worst_of_all_pairs_against_enumeration():
    # brute force over every 2-element list: result must match min class id
    for a, b in itertools.product(DamageLevel, repeat=2):
        assert worst_of([a, b]).class_id == min(a.class_id, b.class_id)


def test_worst_of_empty():
    with pytest.raises(EmptyInputError):
        worst_of([])


@given(st.lists(levels, min_size=1))
def test_worst_of_join_properties(values):
    result = worst_of(values)
    assert result in values
    assert all(result.class_id <= v.class_id for v in values)
    assert worst_of(values + values) is result  # idempotent under duplication
    assert worst_of(list(reversed(values))) is result  # commutative
    assert worst_of(values + [DamageLevel.NONE]) is result  # none is neutral


@given(st.lists(levels, min_size=1), st.lists(levels, min_size=1))
def test_worst_of_associative(left, right):
    assert worst_of([worst_of(left), worst_of(right)]) is worst_of(left + right)


def test_bucket_examples():
    assert bucket(2.4559) is DamageLevel.MILD
    assert bucket(4.0) is DamageLevel.NONE
    assert bucket(1.0) is DamageLevel.SEVERE
    # exact .5 ties round toward the more severe (lower) class
    assert bucket(2.5) is DamageLevel.MILD
    assert bucket(1.5) is DamageLevel.SEVERE
    assert bucket(3.5) is DamageLevel.MINOR


@pytest.mark.parametrize("bad", [0.5, 4.5, -1.0, 100.0])
def test_bucket_out_of_range(bad):
    with pytest.raises(ScoreRangeError):
        bucket(bad)


@given(scores, scores)
def test_bucket_monotone(a, b):
    lo, hi = sorted((a, b))
    assert bucket(lo).class_id <= bucket(hi).class_id


@given(levels)
def test_bucket_fixes_integers(level):
    assert bucket(float(level.class_id)) is level
