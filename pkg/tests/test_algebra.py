import itertools

import pytest
from hypothesis import given, settings, strategies as st

from catalog import F1, F2, F3, F4, SUB_A, SUB_B
from cplkit.algebra import (
    FiniteBam, bam_counterexample, bam_from_json, bam_to_json, bam_valid, canonical_extension, complex_algebra,
    dual_map, duality_sides, principal_ultrafilter_map, ultrafilter_extension, ultrafilter_frame, ultrafilters,
    ultraproduct_embedding, verify_duality,
)
from cplkit.constructions import monotonic_corpus, random_monotonic_frame
from cplkit.errors import EmptyFamily, FrameFormatError, NotMonotonic, SizeCapExceeded
from cplkit.frames import NeighborhoodFrame, WorldMap, all_world_maps, are_isomorphic
from cplkit.generate import random_modal
from cplkit.semantics import frame_valid
from cplkit.syntax import parse_modal
from oracles import oracle_box_table, oracle_ultrafilter_nbhds


def table_as_labels(bam):
    return {bam.show(x): bam.show(bam.box(x)) for x in bam.elements()}


def relabel(frame, mapping):
    return NeighborhoodFrame([mapping[w] for w in frame.worlds],
                             {mapping[w]: [[mapping[v] for v in s] for s in frame.neighborhood_sets(w)]
                              for w in frame.worlds})


def test_box_tables():
    assert table_as_labels(complex_algebra(F1)) == {"": "", "a": "a", "b": "", "ab": "a"}
    assert table_as_labels(complex_algebra(F2)) == {"": "", "a": "", "b": "ab", "ab": "ab"}
    assert set(table_as_labels(complex_algebra(F3)).values()) == {""}


def test_box_tables_match_oracle_on_corpus():
    for frame in monotonic_corpus(2) + [F4]:
        bam = complex_algebra(frame)
        oracle = oracle_box_table(frame)
        for u, v in oracle.items():
            assert bam.box(frame.mask(u)) == frame.mask(v)


def test_complex_algebra_rejects_non_monotonic():
    with pytest.raises(NotMonotonic):
        complex_algebra(NeighborhoodFrame("ab", {"a": [["a"]], "b": []}))
    with pytest.raises(NotMonotonic):
        FiniteBam(1, [1, 0])


def test_bam_caps_and_atoms():
    with pytest.raises(SizeCapExceeded):
        FiniteBam(11, [0] * (1 << 11))
    with pytest.raises(ValueError):
        FiniteBam(["b", "a"], [0, 0, 0, 0])


def test_duality_examples():
    const = WorldMap.from_labels(F2, F3, {"a": "a", "b": "a"})
    assert duality_sides(const) == (False, False)
    incl_b = WorldMap.from_labels(SUB_B, F2, {"b": "b"})
    assert duality_sides(incl_b) == (True, True)
    incl_a = WorldMap.from_labels(SUB_A, F2, {"a": "a"})
    assert duality_sides(incl_a) == (False, False)
    assert dual_map(incl_b) == (0, 0, 1, 1)


def test_duality_on_n2_pairs():
    for f, g in itertools.product(monotonic_corpus(2), repeat=2):
        for m in all_world_maps(f, g):
            assert verify_duality(m)


def test_ultrafilters_are_principal_and_check_out():
    bam = complex_algebra(F4)
    ufs = ultrafilters(bam)
    assert [u.label for u in ufs] == ["u_a", "u_b", "u_c"]
    assert all(u.is_ultrafilter() for u in ufs)
    assert ufs[1].members() == [x for x in bam.elements() if x & 2]


def test_ultrafilter_frame_matches_oracle():
    for frame in monotonic_corpus(2) + [F4]:
        bam = complex_algebra(frame)
        atoms = list(frame.worlds)
        box = {frozenset(u): frozenset(v) for u, v in oracle_box_table(frame).items()}
        expected = oracle_ultrafilter_nbhds(box, atoms)
        uf = ultrafilter_frame(bam)
        for w in atoms:
            got = {frozenset(x[2:] for x in s) for s in uf.neighborhood_sets("u_" + w)}
            assert got == expected[w]


def test_ue_is_isomorphic_via_principal_map():
    for frame in monotonic_corpus(2) + [F4]:
        ue = ultrafilter_extension(frame)
        assert ue == relabel(frame, principal_ultrafilter_map(frame))
        assert are_isomorphic(ue, frame)


def test_canonical_extension_on_corpus():
    for frame in monotonic_corpus(2) + [F4]:
        bam = complex_algebra(frame)
        result = canonical_extension(bam)
        assert result.is_isomorphism(bam)
        assert len(result.closed) == 1 << bam.n
        assert complex_algebra(ultrafilter_frame(bam)) == result.extension
    assert "vacuous" in canonical_extension(complex_algebra(F2)).note()


def test_canonical_extension_of_constant_bottom_box():
    bam = FiniteBam(2, [0, 0, 0, 0])
    ext = canonical_extension(bam).extension
    assert all(ext.box(x) == 0 for x in ext.elements())
    uf = ultrafilter_frame(bam)
    assert all(not fam for fam in uf.families)


def test_bam_validity_matches_frame_validity():
    formulas = [parse_modal(t) for t in ("[]p -> p", "p -> []~[]~p", "[]p -> [][]p", "p -> []p",
                                         "[]p & []q -> [](p & q)", "[]T", "<>p | <>~p")]
    for frame in monotonic_corpus(2) + [F4]:
        bam = complex_algebra(frame)
        for phi in formulas:
            assert bam_valid(bam, phi) == frame_valid(frame, phi)
    assert bam_counterexample(complex_algebra(F2), parse_modal("[]p -> p")) == {"p": "b"}


@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_bam_validity_random(frame_seed, formula_seed):
    import random

    frame = random_monotonic_frame(3, frame_seed)
    phi = random_modal(random.Random(formula_seed), 3, ("p", "q"))
    assert bam_valid(complex_algebra(frame), phi) == frame_valid(frame, phi)


def test_bam_json_round_trip():
    for frame in (F1, F2, F4):
        bam = complex_algebra(frame)
        assert bam_from_json(bam_to_json(bam)) == bam
    multi = FiniteBam(["a", "ab"], [0, 1, 0, 3])
    assert bam_from_json(bam_to_json(multi)) == multi


@pytest.mark.parametrize("text", [
    "[1, 2]",
    '{"atoms": ["a"], "box": {"": ""}}',
    '{"atoms": ["a"], "box": {"": "", "a": "b"}}',
    '{"atoms": ["a"], "box": {"": "", "a": "a"}, "extra": 1}',
    "{not json",
])
def test_bam_json_errors(text):
    with pytest.raises(FrameFormatError):
        bam_from_json(text)


def test_ultraproduct_embedding_examples():
    report = ultraproduct_embedding([F1, F2], 1)
    assert report.passed and all(report.checks.values())
    assert report.world_classes == 2 and report.element_classes == 4
    single = ultraproduct_embedding([F2], 0)
    assert single.passed
    with pytest.raises(EmptyFamily):
        ultraproduct_embedding([], 0)


def test_ultraproduct_embedding_sampled_pairs():
    frames = monotonic_corpus(2)
    for f, g in itertools.product(frames[::4], frames[::5]):
        for i in (0, 1):
            assert ultraproduct_embedding([f, g], i).passed
