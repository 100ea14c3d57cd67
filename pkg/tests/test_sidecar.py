import pytest
from hypothesis import given
from hypothesis import strategies as st

from agegait.sidecar import (
    AnnotationSidecar,
    ExcludedRange,
    SidecarError,
    read_annotations,
    sidecar_path_for,
    write_annotations,
)


def make_sidecar(**kwargs):
    base = dict(
        clip_id="walk01",
        heel_strikes={"left": (10, 55, 101), "right": (32, 78)},
        included_segments=((0, 60), (70, 150)),
        excluded_ranges=(ExcludedRange(61, 69, "sharp turn"),),
        annotator="human",
    )
    base.update(kwargs)
    return AnnotationSidecar(**base)


def test_round_trip_identity():
    sidecar = make_sidecar()
    assert read_annotations(write_annotations(sidecar)) == sidecar


def test_round_trip_text_stable():
    sidecar = make_sidecar()
    text = write_annotations(sidecar)
    assert write_annotations(read_annotations(text)) == text


@given(
    left=st.lists(st.integers(0, 10_000), max_size=30),
    right=st.lists(st.integers(0, 10_000), max_size=30),
)
def test_round_trip_any_strictly_increasing_lists(left, right):
    left = tuple(sorted(set(left)))
    right = tuple(sorted(set(right)))
    sidecar = AnnotationSidecar(
        clip_id="c", heel_strikes={"left": left, "right": right}
    )
    assert read_annotations(write_annotations(sidecar)) == sidecar


def test_overlapping_segments_rejected():
    with pytest.raises(SidecarError, match="non-overlapping"):
        make_sidecar(included_segments=((0, 100), (50, 200)))


def test_unsorted_strikes_rejected():
    with pytest.raises(SidecarError, match="strictly increasing"):
        make_sidecar(heel_strikes={"left": (10, 10), "right": ()})
    with pytest.raises(SidecarError, match="strictly increasing"):
        make_sidecar(heel_strikes={"left": (20, 10), "right": ()})


def test_empty_sidecar_is_valid():
    sidecar = AnnotationSidecar(
        clip_id="pending",
        heel_strikes={"left": (), "right": ()},
        included_segments=((0, 999),),
        annotator="auto",
    )
    assert not sidecar.has_heel_strikes
    assert sidecar.has_segments
    assert read_annotations(write_annotations(sidecar)) == sidecar


def test_bind_checks_bounds():
    sidecar = make_sidecar()
    sidecar.bind(200)
    with pytest.raises(SidecarError, match="out of bounds"):
        sidecar.bind(100)


def test_malformed_document_rejected():
    with pytest.raises(SidecarError, match="JSON"):
        read_annotations("{not json")
    with pytest.raises(SidecarError):
        read_annotations('{"clip_id": "x", "heel_strikes": {"left": ["a"], "right": []}}')


def test_unknown_annotator_rejected():
    with pytest.raises(SidecarError, match="annotator"):
        make_sidecar(annotator="robot")


def test_sidecar_path_convention(tmp_path):
    clip = tmp_path / "walk01.bvh"
    assert sidecar_path_for(clip).name == "walk01.bvh.annotations.json"
