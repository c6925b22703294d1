import random

import pytest
from hypothesis import given, settings, strategies as st

from catalog import DISCRETE_AB, F1, F2, F3, F4, INDISCRETE_AB, SIERPINSKI
from cplkit.constructions import enumerate_monotonic_frames, monotonic_corpus, random_monotonic_frame
from cplkit.errors import SizeCapExceeded, UnboundVariable, UnknownConstant, UnknownPredicate, UnknownProposition
from cplkit.frames import NeighborhoodFrame
from cplkit.generate import enumerate_modal, random_modal
from cplkit.semantics import (
    countervaluation, eval_cpl, eval_modal_nbhd, eval_modal_top, extension, frame_valid, frame_valid_at,
    modal_extension, modal_extension_top, valid_worlds, valuations,
)
from cplkit.syntax import MBox, parse_cpl, parse_modal
from cplkit.topology import enumerate_topologies, from_topology
from oracles import nbhds, oracle_modal, oracle_valid_worlds, powerset


def labels(frame, mask):
    return set(frame.labels(mask))


def test_cpl_spec_examples():
    assert eval_cpl(F3, parse_cpl("~('a[y: y = y])"))
    assert eval_cpl(F2, parse_cpl("forall x. x[y: y = y]"))
    assert not eval_cpl(F2, parse_cpl("'a[y: ~(y[z: ~(z = 'a)])]"))


def test_cpl_assignment():
    phi = parse_cpl("x[y: ~(y[z: ~(z = x)])]")
    assert not eval_cpl(F2, phi, {"x": "a"})
    assert eval_cpl(F2, phi, {"x": "b"})
    assert labels(F2, extension(F2, phi, "x")) == {"b"}


def test_cpl_errors():
    with pytest.raises(UnboundVariable):
        eval_cpl(F2, parse_cpl("x = y"), {"x": "a"})
    with pytest.raises(UnknownConstant):
        eval_cpl(F2, parse_cpl("'c = 'c"))
    with pytest.raises(UnknownConstant):
        eval_cpl(F2, parse_cpl("x = x"), {"x": "c"})
    with pytest.raises(UnknownPredicate):
        eval_cpl(F2, parse_cpl("forall x. P(x)"))


def test_cpl_predicates():
    f = NeighborhoodFrame("ab", {"a": [["a", "b"]], "b": []}, {"P": ["a"]})
    assert eval_cpl(f, parse_cpl("exists x. P(x) & x[y: y = y]"))
    assert not eval_cpl(f, parse_cpl("forall x. P(x)"))
    # the set P is not a neighborhood of a, only F is
    assert not eval_cpl(f, parse_cpl("'a[y: P(y)]"))


def test_modal_nbhd_examples():
    b_part = parse_modal("[]~[]~p")
    assert not eval_modal_nbhd(F2, {"p": ["a"]}, "a", b_part)
    # frozen from oracle_modal: extensions of ~p, []~p, ~[]~p, []~[]~p
    for text, expected in [("~p", {"b"}), ("[]~p", {"a", "b"}), ("~[]~p", set()), ("[]~[]~p", set())]:
        assert labels(F2, modal_extension(F2, {"p": ["a"]}, parse_modal(text))) == expected
    for w in F1.worlds:
        assert eval_modal_nbhd(F1, {"p": []}, w, parse_modal("p | ~p"))
    for v in powerset("a"):
        assert not eval_modal_nbhd(F3, {"p": v}, "a", parse_modal("[]p"))


def test_diamond_is_dual_box():
    for frame in (F1, F2, F4):
        for v in powerset(frame.worlds):
            a = modal_extension(frame, {"p": v}, parse_modal("<>p"))
            b = modal_extension(frame, {"p": v}, parse_modal("~[]~p"))
            assert a == b


def test_unknown_proposition():
    with pytest.raises(UnknownProposition):
        eval_modal_nbhd(F2, {"p": ["a"]}, "a", parse_modal("p & q"))
    with pytest.raises(UnknownProposition):
        eval_modal_top(SIERPINSKI, {}, "a", parse_modal("[]p"))


def test_modal_top_examples():
    box_p = parse_modal("[]p")
    assert eval_modal_top(SIERPINSKI, {"p": ["a"]}, "a", box_p)
    assert not eval_modal_top(INDISCRETE_AB, {"p": ["a"]}, "a", box_p)
    iff = parse_modal("(p -> []p) & ([]p -> p)")
    for v in powerset("ab"):
        for w in "ab":
            assert eval_modal_top(DISCRETE_AB, {"p": v}, w, iff)


def test_frame_validity_examples():
    t = parse_modal("[]p -> p")
    assert not frame_valid(F2, t)
    assert countervaluation(F2, t) == {"p": ["b"]}
    assert frame_valid(F2, parse_modal("p -> p"))
    assert frame_valid(from_topology(DISCRETE_AB), parse_modal("p -> []p"))
    assert frame_valid_at(F2, "b", t) and not frame_valid_at(F2, "a", t)


def test_valuation_order_and_cap():
    vals = list(valuations(2, ["q", "p"]))
    assert vals[:3] == [{"p": 0, "q": 0}, {"p": 0, "q": 1}, {"p": 0, "q": 2}]
    assert len(vals) == 16
    with pytest.raises(SizeCapExceeded):
        list(valuations(11, ["p", "q"]))
    big = NeighborhoodFrame([f"w{i}" for i in range(7)])
    with pytest.raises(SizeCapExceeded):
        frame_valid(big, parse_modal("p & q & r -> p"))


def test_valid_worlds_matches_oracle_on_corpus():
    formulas = [parse_modal(t) for t in ("[]p -> p", "p -> []~[]~p", "[]p -> [][]p", "p -> []p",
                                         "[](p & q) -> []p", "[]p & []q -> [](p & q)", "<>p -> []p")]
    for frame in monotonic_corpus(2):
        for phi in formulas:
            assert labels(frame, valid_worlds(frame, phi)) == oracle_valid_worlds(frame, phi)


def test_monotonic_frames_validate_monotonicity_axiom():
    phi = parse_modal("[](p & q) -> []p")
    assert all(frame_valid(f, phi) for f in monotonic_corpus(2))
    assert not frame_valid(NeighborhoodFrame("ab", {"a": [["a"]], "b": []}), phi)


@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
@settings(max_examples=200, deadline=None)
def test_monotone_rule(frame_seed, formula_seed):
    rng = random.Random(formula_seed)
    frame = random_monotonic_frame(3, frame_seed)
    phi, psi = random_modal(rng, 2, ("p", "q")), random_modal(rng, 2, ("p", "q"))
    for _ in range(8):
        val = {"p": rng.randrange(8), "q": rng.randrange(8)}
        ext_phi, ext_psi = modal_extension(frame, val, phi), modal_extension(frame, val, psi)
        if ext_phi & ~ext_psi == 0:
            box_phi = modal_extension(frame, val, MBox(phi))
            assert box_phi & ~modal_extension(frame, val, MBox(psi)) == 0


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=200, deadline=None)
def test_nbhd_matches_label_oracle(seed):
    rng = random.Random(seed)
    frame = random_monotonic_frame(3, seed)
    phi = random_modal(rng, 3, ("p", "q"))
    val = {"p": rng.randrange(8), "q": rng.randrange(8)}
    label_val = {k: frame.labels(m) for k, m in val.items()}
    expected = oracle_modal(nbhds(frame), frame.worlds, label_val, phi)
    assert labels(frame, modal_extension(frame, val, phi)) == expected


def test_top_and_nbhd_agree_depth_two():
    # the depth-3 sweep runs in the acceptance suite
    formulas = enumerate_modal(2)
    for n in (1, 2, 3):
        for top in enumerate_topologies(n):
            frame = from_topology(top)
            for v in range(1 << n):
                for phi in formulas:
                    assert modal_extension_top(top, {"p": v}, phi) == modal_extension(frame, {"p": v}, phi)


def test_frame_valid_is_all_worlds_valid():
    phi = parse_modal("p -> []~[]~p")
    for frame in enumerate_monotonic_frames(2):
        assert frame_valid(frame, phi) == (valid_worlds(frame, phi) == frame.full)
        assert frame_valid(frame, phi) == all(frame_valid_at(frame, w, phi) for w in frame.worlds)
