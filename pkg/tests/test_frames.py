import json

import pytest

from catalog import F1, F2, F3, F4
from cplkit.errors import FrameFormatError
from cplkit.frames import (
    CLASS_ORDER, FrameClass, NeighborhoodFrame, WorldMap, are_isomorphic, class_names, classify,
    find_isomorphism, frame_from_json, frame_to_json, monotonic_closure, submasks,
)
from oracles import oracle_classes

ALL = {c.value for c in FrameClass}
WEAK = {"monotonic", "quasi-filter", "augmented-quasi-filter"}


@pytest.mark.parametrize("frame, expected", [
    (F1, WEAK),
    (F2, ALL),
    (F3, WEAK),
    (F4, {"monotonic"}),
])
def test_classify_examples(frame, expected):
    assert oracle_classes(frame) == expected
    assert set(class_names(classify(frame))) == expected


def test_class_names_follow_table_order():
    assert class_names(classify(F2)) == [c.value for c in CLASS_ORDER]


def test_non_monotonic_frame_is_in_no_class():
    frame = NeighborhoodFrame("ab", {"a": [["a"]]})
    assert classify(frame) == set()
    assert oracle_classes(frame) == set()


def test_monotonic_closure_examples():
    frame = NeighborhoodFrame("ab", {"a": [["a"]]})
    closed = monotonic_closure(frame)
    assert closed.neighborhood_sets("a") == [frozenset("a"), frozenset("ab")]
    assert FrameClass.MONOTONIC in classify(closed)
    assert monotonic_closure(F2) == F2
    assert monotonic_closure(F3) == F3
    assert monotonic_closure(closed) == closed


def test_worlds_are_sorted_and_masks_follow():
    frame = NeighborhoodFrame(["b", "a"], {"b": [["b"]]})
    assert frame.worlds == ("a", "b")
    assert frame.family("b") == frozenset({0b10})


@pytest.mark.parametrize("worlds, nbhds, fragment", [
    (["a", "a"], {}, "duplicate world"),
    (["a", ""], {}, "non-empty"),
    (["a"], {"b": []}, "unknown world"),
    (["a"], {"a": [["a"], ["a"]]}, "'a'"),
    (["a"], {"a": [["z"]]}, "unknown"),
])
def test_malformed_frames_rejected(worlds, nbhds, fragment):
    with pytest.raises(FrameFormatError, match=fragment):
        NeighborhoodFrame(worlds, nbhds)


def test_frame_is_immutable():
    with pytest.raises(AttributeError):
        F1.foo = 1


def test_json_round_trip_and_canonical_order():
    text = frame_to_json(F1)
    assert json.loads(text) == {"worlds": ["a", "b"], "neighborhoods": {"a": [["a"], ["a", "b"]], "b": []},
                                "predicates": {}}
    assert list(json.loads(text)) == ["worlds", "neighborhoods", "predicates"]
    assert frame_from_json(text) == F1


def test_json_duplicate_set_names_world():
    text = '{"worlds": ["a","b"], "neighborhoods": {"b": [["a"], ["a"]]}}'
    with pytest.raises(FrameFormatError, match="'b'"):
        frame_from_json(text)


def test_json_rejects_unknown_keys_and_bad_json():
    with pytest.raises(FrameFormatError):
        frame_from_json('{"worlds": [], "extra": 1}')
    with pytest.raises(FrameFormatError):
        frame_from_json("{")


def test_predicates_round_trip():
    frame = NeighborhoodFrame("ab", {}, {"P": ["a"]})
    assert frame_from_json(frame_to_json(frame)).predicates == {"P": 1}


def test_world_map_validation():
    with pytest.raises(ValueError):
        WorldMap(F2, F3, (0,))
    with pytest.raises(ValueError):
        WorldMap.from_labels(F2, F3, {"a": "a", "b": "z"})
    m = WorldMap.from_labels(F2, F3, {"a": "a", "b": "a"})
    assert m.preimage(1) == 0b11 and m.is_surjective()


def test_isomorphism_search():
    relabelled = NeighborhoodFrame("xy", {"y": [["y"], ["x", "y"]], "x": []})
    assert find_isomorphism(F1, relabelled) == {"a": "y", "b": "x"}
    assert not are_isomorphic(F1, F2)
    assert not are_isomorphic(F1, F3)


def test_submasks_cover_all_subsets():
    assert sorted(submasks(0b101)) == [0, 1, 4, 5]


def test_class_lattice_and_finite_filters_principal_n3():
    from cplkit.constructions import enumerate_monotonic_frames

    implied = {
        FrameClass.AUGMENTED_FILTER: {FrameClass.FILTER, FrameClass.AUGMENTED_QUASI_FILTER},
        FrameClass.FILTER: {FrameClass.QUASI_FILTER},
        FrameClass.AUGMENTED_QUASI_FILTER: {FrameClass.MONOTONIC},
        FrameClass.QUASI_FILTER: {FrameClass.AUGMENTED_QUASI_FILTER, FrameClass.MONOTONIC},
    }
    for n in (1, 2, 3):
        for frame in enumerate_monotonic_frames(n):
            classes = classify(frame)
            for cls, above in implied.items():
                if cls in classes:
                    assert above <= classes
