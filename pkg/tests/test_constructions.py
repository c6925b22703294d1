import itertools

import pytest

from catalog import F1, F2, F3, SUB_A, SUB_B
from cplkit.constructions import (
    bounded_morphism_counterexample, disjoint_union, enumerate_monotonic_frames, generated_subframes,
    inclusion_map, is_bounded_morphism, is_bounded_morphism_via_dosen, is_generated_subframe, monotonic_corpus,
    is_quasi_ultraproduct, quasi_ultraproduct, random_monotonic_frame, restrict, summand_embedding, upward_closed_families,
)
from cplkit.errors import EmptyFamily, NotASubset, SizeCapExceeded
from cplkit.frames import FrameClass, NeighborhoodFrame, WorldMap, all_world_maps, are_isomorphic, classify
from cplkit.semantics import eval_cpl
from cplkit.syntax import parse_cpl
from oracles import oracle_bounded_morphism, oracle_upward_closed_count

AB_SETS = {"ab", "b"}


def names(frame, w):
    return {"".join(sorted(s)) for s in frame.neighborhood_sets(w)}


def test_disjoint_union_examples():
    assert are_isomorphic(disjoint_union([F3]), F3)
    two = disjoint_union([F3, F3])
    assert two.size == 2 and all(not fam for fam in two.families)
    u = disjoint_union([F2, F3])
    assert u.worlds == ("s0_a", "s0_b", "s1_a")
    # frozen from the label-set oracle: U with U restricted to F2 in {{b},{a,b}}
    expected = {frozenset(s) for s in [
        ["s0_a", "s0_b"], ["s0_a", "s0_b", "s1_a"], ["s0_b"], ["s0_b", "s1_a"]]}
    assert set(u.neighborhood_sets("s0_a")) == expected
    assert u.neighborhood_sets("s1_a") == []


def test_disjoint_union_errors():
    with pytest.raises(EmptyFamily):
        disjoint_union([])
    with pytest.raises(SizeCapExceeded):
        disjoint_union([F2] * 3, max_worlds=5)


def test_summands_embed_as_generated_subframes():
    for fs in ([F1, F2], [F2, F3, F1]):
        u = disjoint_union(fs)
        for i in range(len(fs)):
            assert is_bounded_morphism(summand_embedding(u, fs, i))


def test_bounded_morphism_examples():
    ident = WorldMap.from_labels(F2, F2, {"a": "a", "b": "b"})
    const = WorldMap.from_labels(F2, F3, {"a": "a", "b": "a"})
    incl = inclusion_map(SUB_B, F2)
    assert is_bounded_morphism(ident)
    assert not is_bounded_morphism(const)
    assert is_bounded_morphism(incl)
    assert [oracle_bounded_morphism(F2, F2, {"a": "a", "b": "b"}), oracle_bounded_morphism(F2, F3, const.as_labels()),
            oracle_bounded_morphism(SUB_B, F2, {"b": "b"})] == [True, False, True]


def test_bounded_morphism_counterexample():
    const = WorldMap.from_labels(F2, F3, {"a": "a", "b": "a"})
    assert bounded_morphism_counterexample(const) == {
        "world": "a", "image": "a", "set": ["a"], "preimage": ["a", "b"], "failed": "forth"}
    assert bounded_morphism_counterexample(inclusion_map(SUB_B, F2)) is None


def test_generated_subframe_examples():
    assert is_generated_subframe(F2, F2)
    assert is_generated_subframe(SUB_B, F2)
    assert not is_generated_subframe(SUB_A, F2)
    with pytest.raises(NotASubset):
        is_generated_subframe(F3.with_families([frozenset()]), SUB_B)


def test_restrict_and_generated_subframes_of_f2():
    assert restrict(F2, ["b"]) == SUB_B
    assert [s.worlds for s in generated_subframes(F2)] == [("b",), ("a", "b")]


def pairs_upto(n):
    frames = monotonic_corpus(n)
    return [(f, g) for f in frames for g in frames]


def test_dosen_variant_agrees_exhaustively_n2():
    for f, g in pairs_upto(2):
        for m in all_world_maps(f, g):
            assert is_bounded_morphism(m) == is_bounded_morphism_via_dosen(m)


def test_bounded_morphism_matches_oracle_n2():
    for f, g in pairs_upto(2):
        for m in all_world_maps(f, g):
            assert is_bounded_morphism(m) == oracle_bounded_morphism(f, g, m.as_labels())


@pytest.mark.slow
def test_dosen_variant_agrees_sampled_n3():
    import random

    rng = random.Random(3)
    frames3 = list(enumerate_monotonic_frames(3))
    small = monotonic_corpus(2)
    pool = small + rng.sample(frames3, 60)
    for f in pool:
        for g in rng.sample(pool, 10):
            for m in all_world_maps(f, g):
                assert is_bounded_morphism(m) == is_bounded_morphism_via_dosen(m)


def test_dedekind_counts():
    counts = [oracle_upward_closed_count(n) for n in (1, 2, 3)]
    assert counts == [3, 6, 20]
    assert [len(upward_closed_families(n)) for n in (1, 2, 3)] == counts
    assert [sum(1 for _ in enumerate_monotonic_frames(n)) for n in (1, 2, 3)] == [3, 36, 8000]
    assert len(monotonic_corpus(2)) == 39


def test_enumeration_has_no_duplicates():
    frames = list(enumerate_monotonic_frames(2))
    assert len(set(frames)) == len(frames)


def test_enumeration_cap():
    with pytest.raises(SizeCapExceeded):
        next(enumerate_monotonic_frames(4))


@pytest.mark.parametrize("target", list(FrameClass))
def test_random_frames_hit_target_and_are_deterministic(target):
    for seed in range(30):
        for n in (1, 2, 3, 4):
            f = random_monotonic_frame(n, seed, target)
            assert target in classify(f)
            assert f == random_monotonic_frame(n, seed, target)


def test_random_augmented_filter_is_principal_everywhere():
    from cplkit.frames import principal_generator

    f = random_monotonic_frame(3, 11, FrameClass.AUGMENTED_FILTER)
    assert all(principal_generator(fam, f.full) is not None for fam in f.families)


def test_quasi_ultraproduct_examples():
    assert are_isomorphic(quasi_ultraproduct([F2], 0), F2)
    q = quasi_ultraproduct([F1, F2], 1)
    assert are_isomorphic(q, F2)
    assert q.worlds == ("q_a_a", "q_a_b")


def test_quasi_ultraproduct_preserves_sampled_sentences():
    sentences = [
        "forall x. x[y: y = y]",
        "exists x. ~(x[y: y = y])",
        "forall x. (x[y: y = y] -> x[y: ~(x[z: ~(z = y)])])",
        "forall x. exists y. ~(x[z: ~(z = y)])",
        "exists x. x[y: ~(y[z: ~(z = x)])]",
    ]
    q = quasi_ultraproduct([F1, F2], 1)
    for text in sentences:
        phi = parse_cpl(text)
        if eval_cpl(F1, phi) and eval_cpl(F2, phi):
            assert eval_cpl(q, phi)
        assert eval_cpl(q, phi) == eval_cpl(F2, phi)


def test_quasi_ultraproduct_selects_factor_n2_pairs():
    frames = monotonic_corpus(2)
    for f, g in itertools.product(frames[:12], frames):
        for i, factor in enumerate((f, g)):
            assert are_isomorphic(quasi_ultraproduct([f, g], i), factor)


def test_quasi_ultraproduct_satisfies_defining_biconditional():
    frames = monotonic_corpus(2)
    for f, g in itertools.product(frames[::5], frames[::3]):
        for i in (0, 1):
            assert is_quasi_ultraproduct([f, g], i, quasi_ultraproduct([f, g], i))


def test_componentwise_reading_is_contradictory():
    # J={0}, A_0={} induces {} and forbids it; J={0,1}, ({a}, {}) would demand it
    # if "a(i) in A_i for all i in J" were read literally.
    f = NeighborhoodFrame({"a"}, {"a": [{"a"}]})
    g = NeighborhoodFrame({"a"}, {"a": [set(), {"a"}]})
    q = quasi_ultraproduct([f, g], 0)
    assert names(q, "q_a_a") == {"q_a_a"}
    assert is_quasi_ultraproduct([f, g], 0, q)
    wrong = NeighborhoodFrame({"q_a_a"}, {"q_a_a": [set(), {"q_a_a"}]})
    assert not is_quasi_ultraproduct([f, g], 0, wrong)


def test_quasi_ultraproduct_errors():
    with pytest.raises(EmptyFamily):
        quasi_ultraproduct([], 0)
    with pytest.raises(IndexError):
        quasi_ultraproduct([F2], 1)
