"""Built-in modal/CPL correspondents, checks against the brute-force validity
oracle, and the Goldblatt-Thomason closure report."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .algebra import ultrafilter_extension
from .constructions import (
    ENUMERATION_CAP, disjoint_union, generated_subframes, is_bounded_morphism, surjections,
)
from .errors import ClassMismatch
from .frames import FrameClass, NeighborhoodFrame, classify, frame_to_dict, is_monotonic
from .semantics import countervaluation, eval_cpl, frame_valid, valid_worlds
from .syntax.cpl import parse_cpl, print_cpl
from .syntax.modal import ModalFormula, parse_modal, print_modal
from .topology import from_topology, is_discrete, specialization_preorder, topology_of_frame

TOPOLOGICAL = "topological"

# x is in the closure of {y}: the complement of {y} is not a neighborhood of x
_BELOW = "~({x}[v: ~(v = {y})])"

TOPOLOGICAL_AXIOMS = ("[]p & []q -> [](p & q)", "[]p -> p", "[]p -> [][]p")


@dataclass(frozen=True)
class CorrespondencePair:
    """A modal formula with its CPL counterpart.

    ``local`` pairs have a CPL formula in the free variable ``x``; the others
    carry a CPL sentence (and possibly no modal side) and name, in
    ``defines``, the class the sentence is meant to carve out of
    ``applies_to``."""

    name: str
    modal_text: str | None
    cpl_text: str
    local: bool
    applies_to: FrameClass | str
    defines: str = ""

    @property
    def modal(self) -> ModalFormula | None:
        return None if self.modal_text is None else parse_modal(self.modal_text)

    @property
    def cpl(self):
        return parse_cpl(self.cpl_text)

    def describe(self) -> dict:
        applies = self.applies_to.value if isinstance(self.applies_to, FrameClass) else self.applies_to
        return {
            "name": self.name,
            "modal": None if self.modal_text is None else print_modal(self.modal),
            "cpl": print_cpl(self.cpl),
            "local": self.local,
            "applies_to": applies,
            "defines": self.defines,
        }


def _below(x: str, y: str) -> str:
    return _BELOW.format(x=x, y=y)


def builtin_pairs() -> list[CorrespondencePair]:
    topo_axioms = " & ".join(f"({a})" for a in TOPOLOGICAL_AXIOMS)
    return [
        CorrespondencePair("B", "p -> []~[]~p", "x[y: ~(y[z: ~(z = x)])]", True, FrameClass.MONOTONIC),
        CorrespondencePair(
            "4", "[]p -> [][]p",
            "~(x[y: y = y]) | (x[y: y = y] & x[y1: y1[y2: ~(x[z: ~(z = y2)])]])",
            True, FrameClass.AUGMENTED_QUASI_FILTER),
        CorrespondencePair("T", "[]p -> p", "~(x[z: ~(z = x)])", True, FrameClass.MONOTONIC),
        CorrespondencePair(
            "aqf-def", None, "forall x. (x[y: y = y] -> x[y: ~(x[z: ~(z = y)])])",
            False, FrameClass.MONOTONIC, FrameClass.AUGMENTED_QUASI_FILTER.value),
        CorrespondencePair(
            "T0", None, f"forall z. forall w. ({_below('z', 'w')} & {_below('w', 'z')} -> w = z)",
            False, TOPOLOGICAL, "T0"),
        CorrespondencePair(
            "T1", None, f"forall z. forall w. ({_below('z', 'w')} -> w = z)", False, TOPOLOGICAL, "T1"),
        CorrespondencePair(
            "discrete", None, "(forall x. ~(x[z: ~(z = x)])) & (forall x. x[y: y = x])",
            False, FrameClass.QUASI_FILTER, "discrete"),
        CorrespondencePair(
            "discrete-modal", f"{topo_axioms} & (p -> []p)",
            "(forall x. ~(x[z: ~(z = x)])) & (forall x. x[y: y = x])",
            False, FrameClass.QUASI_FILTER, "discrete"),
    ]


def lookup(name: str) -> CorrespondencePair:
    for pair in builtin_pairs():
        if pair.name == name:
            return pair
    raise KeyError(f"no built-in pair named {name!r}; known: {', '.join(p.name for p in builtin_pairs())}")


def in_applicability_class(frame: NeighborhoodFrame, pair: CorrespondencePair) -> bool:
    if pair.applies_to == TOPOLOGICAL:
        return topology_of_frame(frame) is not None
    return pair.applies_to in classify(frame)


# --- local correspondence ---------------------------------------------------------


@dataclass
class LocalReport:
    pair: str
    worlds: list
    disagreements: list = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return not self.disagreements


def check_local_correspondence(frame: NeighborhoodFrame, pair: CorrespondencePair) -> LocalReport:
    """Compare modal validity at each world with the CPL correspondent there."""
    if not pair.local:
        raise ClassMismatch(f"pair {pair.name} is not a local correspondent")
    if not in_applicability_class(frame, pair):
        raise ClassMismatch(f"frame is outside the class {pair.applies_to.value} of pair {pair.name}")
    modal, phi = pair.modal, pair.cpl
    valid = valid_worlds(frame, modal)
    report = LocalReport(pair.name, list(frame.worlds))
    for i, w in enumerate(frame.worlds):
        left = bool(valid >> i & 1)
        right = eval_cpl(frame, phi, {"x": w})
        if left != right:
            report.disagreements.append({
                "world": w,
                "modal": left,
                "cpl": right,
                "countervaluation": countervaluation(frame, modal, w),
            })
    return report


# --- class sentences ---------------------------------------------------------------


@dataclass(frozen=True)
class ClassSentenceResult:
    pair: str
    sentence: bool
    reference: bool

    @property
    def agree(self) -> bool:
        return self.sentence == self.reference


def _is_discrete_image(frame: NeighborhoodFrame) -> bool:
    top = topology_of_frame(frame)
    return top is not None and is_discrete(top)


def class_reference(frame: NeighborhoodFrame, pair: CorrespondencePair) -> bool:
    """Membership in the class the pair defines, decided without CPL."""
    if pair.name == "aqf-def":
        return FrameClass.AUGMENTED_QUASI_FILTER in classify(frame)
    if pair.name in ("T0", "T1"):
        order = specialization_preorder(topology_of_frame(frame))
        if pair.name == "T0":
            return all(x == y for x, y in order if (y, x) in order)
        return all(x == y for x, y in order)
    if pair.defines == "discrete":
        return _is_discrete_image(frame)
    raise KeyError(f"pair {pair.name} defines no class")


def check_class_sentence(frame: NeighborhoodFrame, pair: CorrespondencePair) -> ClassSentenceResult:
    """Evaluate the pair's defining side on ``frame`` against the reference
    decision procedure.  When the pair has a modal side, that side is used."""
    if pair.local:
        raise ClassMismatch(f"pair {pair.name} is local, not a class sentence")
    if not is_monotonic(frame) or not in_applicability_class(frame, pair):
        applies = pair.applies_to.value if isinstance(pair.applies_to, FrameClass) else pair.applies_to
        raise ClassMismatch(f"frame is outside the class {applies} of pair {pair.name}")
    if pair.modal_text is not None:
        value = frame_valid(frame, pair.modal)
    else:
        value = eval_cpl(frame, pair.cpl)
    return ClassSentenceResult(pair.name, value, class_reference(frame, pair))


def accessibility_relation(frame: NeighborhoodFrame) -> set[tuple[str, str]]:
    """x R y iff the complement of {y} is not a neighborhood of x."""
    full = frame.full
    return {(frame.worlds[x], frame.worlds[y])
            for x in range(frame.size) for y in range(frame.size)
            if full & ~(1 << y) not in frame.families[x]}


def preorder_by_formula(top) -> set[tuple[str, str]]:
    """The specialization preorder read off the topological frame with CPL."""
    frame = from_topology(top)
    phi = parse_cpl(_below("x", "y"))
    return {(x, y) for x in frame.worlds for y in frame.worlds if eval_cpl(frame, phi, {"x": x, "y": y})}


# --- Goldblatt-Thomason closure ------------------------------------------------------

CONDITIONS = ("disjoint_unions", "bounded_morphic_images", "generated_subframes", "reflects_ultrafilter_extensions")


@dataclass
class ConditionResult:
    passed: bool = True
    checked: int = 0
    witness: dict | None = None
    note: str = ""

    def as_dict(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "witness": self.witness, "note": self.note}


@dataclass
class ClosureReport:
    members: int
    corpus: int
    conditions: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions.values())

    def as_dict(self) -> dict:
        return {
            "corpus": self.corpus,
            "members": self.members,
            "passed": self.passed,
            "conditions": {k: v.as_dict() for k, v in self.conditions.items()},
        }


def _valid_all(frame: NeighborhoodFrame, delta: tuple) -> bool:
    return all(frame_valid(frame, phi) for phi in delta)


def delta_membership(delta: Iterable[ModalFormula]) -> Callable[[NeighborhoodFrame], bool]:
    delta = tuple(delta)
    return lambda frame: _valid_all(frame, delta)


def gt_closure_check(corpus: Sequence[NeighborhoodFrame], delta: Iterable[ModalFormula] | None = None,
                     membership: Callable[[NeighborhoodFrame], bool] | None = None,
                     jobs: int = 1) -> ClosureReport:
    """Check the four closure conditions on a finite corpus.  Exactly one of
    ``delta`` (membership = validity of every formula) or ``membership``."""
    corpus = list(corpus)
    if (delta is None) == (membership is None):
        raise ValueError("give exactly one of delta or membership")
    if delta is not None:
        delta = tuple(delta)
        membership = delta_membership(delta)
        if jobs > 1:
            with ProcessPoolExecutor(jobs) as pool:
                flags = list(pool.map(_valid_all, corpus, [delta] * len(corpus)))
        else:
            flags = [membership(f) for f in corpus]
    else:
        flags = [membership(f) for f in corpus]
    cache = {f: m for f, m in zip(corpus, flags)}

    def member(frame):
        if frame not in cache:
            cache[frame] = membership(frame)
        return cache[frame]

    members = [f for f, m in zip(corpus, flags) if m]
    conds = {name: ConditionResult() for name in CONDITIONS}

    def fail(name, witness):
        c = conds[name]
        if c.passed:
            c.passed = False
            c.witness = witness

    c = conds["disjoint_unions"]
    for i, f in enumerate(members):
        for g in members[i:]:
            c.checked += 1
            u = disjoint_union([f, g])
            if not member(u):
                fail("disjoint_unions", {"frames": [frame_to_dict(f), frame_to_dict(g)]})

    c = conds["bounded_morphic_images"]
    exhaustive = max((f.size for f in corpus), default=0) <= ENUMERATION_CAP
    c.note = "exhaustive over corpus targets" if exhaustive else "sampled, not exhaustive"
    for f in members:
        for g in corpus:
            if g.size > f.size:
                continue
            for m in surjections(f, g):
                if is_bounded_morphism(m):
                    c.checked += 1
                    if not member(g):
                        fail("bounded_morphic_images", {
                            "source": frame_to_dict(f), "target": frame_to_dict(g), "map": m.as_labels()})
                    break

    c = conds["generated_subframes"]
    for f in members:
        for sub in generated_subframes(f):
            c.checked += 1
            if not member(sub):
                fail("generated_subframes", {"frame": frame_to_dict(f), "subframe": list(sub.worlds)})

    c = conds["reflects_ultrafilter_extensions"]
    c.note = "near-vacuous: ue F is isomorphic to F for finite frames"
    for f, is_member in zip(corpus, flags):
        if not is_monotonic(f):
            continue
        c.checked += 1
        if member(ultrafilter_extension(f)) and not is_member:
            fail("reflects_ultrafilter_extensions", {"frame": frame_to_dict(f)})
    return ClosureReport(len(members), len(corpus), conds)


def replay_witness(condition: str, witness: dict, membership: Callable[[NeighborhoodFrame], bool]) -> bool:
    """True iff ``witness`` still refutes ``condition`` under ``membership``."""
    from .constructions import restrict
    from .frames import WorldMap, frame_from_dict

    if condition == "disjoint_unions":
        f, g = (frame_from_dict(d) for d in witness["frames"])
        return membership(f) and membership(g) and not membership(disjoint_union([f, g]))
    if condition == "bounded_morphic_images":
        f, g = frame_from_dict(witness["source"]), frame_from_dict(witness["target"])
        m = WorldMap.from_labels(f, g, witness["map"])
        return m.is_surjective() and is_bounded_morphism(m) and membership(f) and not membership(g)
    if condition == "generated_subframes":
        from .constructions import is_generated_subframe

        f = frame_from_dict(witness["frame"])
        sub = restrict(f, witness["subframe"])
        return is_generated_subframe(sub, f) and membership(f) and not membership(sub)
    if condition == "reflects_ultrafilter_extensions":
        f = frame_from_dict(witness["frame"])
        return membership(ultrafilter_extension(f)) and not membership(f)
    raise KeyError(condition)
