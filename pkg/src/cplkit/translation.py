"""Translation of CPL into the two-sorted language, and a separate evaluator for
two-sorted structures (F, S) with S an explicit family of subsets.

The evaluator here deliberately works on frozensets of labels and shares no
code with the CPL evaluator, so the two can check each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .errors import SizeCapExceeded, UnboundVariable, UnknownConstant, UnknownPredicate
from .frames import NeighborhoodFrame
from .syntax import cpl
from .syntax.fol2 import (
    And2, Eq2, Exists2, Fol2Formula, Forall2, Iff2, Implies2, Member, NbhdVar, Not2, NRel, Or2, Pred2,
    StateConst, StateVar, check_sorts, free_vars2,
)

POWERSET_CAP = 16


def translate2(phi) -> Fol2Formula:
    """The two-sorted translation; boxes get U1, U2, ... innermost first, left to right."""
    counter = itertools.count(1)
    return _tr(phi, counter)


def _term2(t):
    return StateVar(t.name) if isinstance(t, cpl.Var) else StateConst(t.name)


def _tr(phi, counter):
    if isinstance(phi, cpl.Eq):
        return Eq2(_term2(phi.left), _term2(phi.right))
    if isinstance(phi, cpl.Pred):
        return Pred2(phi.name, tuple(_term2(t) for t in phi.args))
    if isinstance(phi, cpl.Not):
        return Not2(_tr(phi.body, counter))
    if isinstance(phi, cpl.And):
        return And2(_tr(phi.left, counter), _tr(phi.right, counter))
    if isinstance(phi, cpl.Or):
        return Or2(_tr(phi.left, counter), _tr(phi.right, counter))
    if isinstance(phi, cpl.Implies):
        return Implies2(_tr(phi.left, counter), _tr(phi.right, counter))
    if isinstance(phi, cpl.Exists):
        return Exists2(StateVar(phi.var), _tr(phi.body, counter))
    if isinstance(phi, cpl.Forall):
        return Forall2(StateVar(phi.var), _tr(phi.body, counter))
    if isinstance(phi, cpl.Box):
        body = _tr(phi.body, counter)
        u = NbhdVar(f"U{next(counter)}")
        y = StateVar(phi.var)
        return Exists2(u, And2(Forall2(y, Iff2(Member(y, u), body)), NRel(_term2(phi.subject), u)))
    raise TypeError(f"not a CPL formula: {phi!r}")


@dataclass(frozen=True)
class TwoSortedStructure:
    """A frame as the state sort and an explicit family of subsets as the
    neighborhood sort.  Sets are stored as frozensets of labels, without repeats."""

    frame: NeighborhoodFrame
    sets: tuple

    def __post_init__(self):
        worlds = set(self.frame.worlds)
        canon = []
        for s in self.sets:
            s = frozenset(s)
            if not s <= worlds:
                raise ValueError(f"set {sorted(s)} is not a subset of the worlds")
            if s not in canon:
                canon.append(s)
        object.__setattr__(self, "sets", tuple(sorted(canon, key=lambda s: (len(s), sorted(s)))))
        nrel = set()
        for w in self.frame.worlds:
            for s in self.frame.neighborhood_sets(w):
                nrel.add((w, s))
        object.__setattr__(self, "_nrel", frozenset(nrel))

    def n_holds(self, world: str, s: frozenset) -> bool:
        return (world, s) in self._nrel


def full_powerset_structure(frame: NeighborhoodFrame) -> TwoSortedStructure:
    if frame.size > POWERSET_CAP:
        raise SizeCapExceeded(f"powerset of {frame.size} worlds exceeds the cap of {POWERSET_CAP}")
    worlds = frame.worlds
    subsets = [frozenset(c) for r in range(len(worlds) + 1) for c in itertools.combinations(worlds, r)]
    return TwoSortedStructure(frame, tuple(subsets))


def def_closed_structure(frame: NeighborhoodFrame) -> TwoSortedStructure:
    """(F, Def(F/F)): the neighborhood sort is the algebra of F-definable sets."""
    from .definable import build_def_algebra

    alg = build_def_algebra(frame, frame.worlds)
    return TwoSortedStructure(frame, tuple(frozenset(frame.labels(m)) for m in alg.elements))


def is_large(structure: TwoSortedStructure) -> bool:
    """Every neighborhood of every world belongs to the neighborhood sort."""
    sets = set(structure.sets)
    return all(s in sets for w in structure.frame.worlds for s in structure.frame.neighborhood_sets(w))


def eval_fol2(structure: TwoSortedStructure, phi: Fol2Formula, assignment: Mapping | None = None) -> bool:
    """Tarski truth.  The assignment maps state variables to world labels and
    neighborhood variables to collections of labels."""
    check_sorts(phi)
    env = {}
    for name, value in (assignment or {}).items():
        if name[:1].isupper():
            env[name] = frozenset(value)
        else:
            env[name] = value
    missing = {v.name for v in free_vars2(phi)} - set(env)
    if missing:
        raise UnboundVariable(f"no value for free variable(s) {', '.join(sorted(missing))}")
    return _Fol2Evaluator(structure).holds(phi, env)


class _Fol2Evaluator:
    def __init__(self, structure: TwoSortedStructure):
        self.m = structure
        self.worlds = structure.frame.worlds
        self.preds = {name: set(structure.frame.labels(mask)) for name, mask in structure.frame.predicates.items()}

    def value(self, t, env):
        if isinstance(t, StateConst):
            if t.name not in self.worlds:
                raise UnknownConstant(f"constant '{t.name} names no world")
            return t.name
        if t.name not in env:
            raise UnboundVariable(f"variable {t.name} is unbound")
        return env[t.name]

    def holds(self, phi, env) -> bool:
        if isinstance(phi, Eq2):
            return self.value(phi.left, env) == self.value(phi.right, env)
        if isinstance(phi, Pred2):
            if phi.name not in self.preds:
                raise UnknownPredicate(f"predicate {phi.name} is not interpreted")
            return self.value(phi.args[0], env) in self.preds[phi.name]
        if isinstance(phi, Member):
            return self.value(phi.state, env) in self.value(phi.nbhd, env)
        if isinstance(phi, NRel):
            return self.m.n_holds(self.value(phi.state, env), self.value(phi.nbhd, env))
        if isinstance(phi, Not2):
            return not self.holds(phi.body, env)
        if isinstance(phi, And2):
            return self.holds(phi.left, env) and self.holds(phi.right, env)
        if isinstance(phi, Or2):
            return self.holds(phi.left, env) or self.holds(phi.right, env)
        if isinstance(phi, Implies2):
            return (not self.holds(phi.left, env)) or self.holds(phi.right, env)
        if isinstance(phi, Iff2):
            return self.holds(phi.left, env) == self.holds(phi.right, env)
        if isinstance(phi, (Exists2, Forall2)):
            domain = self.m.sets if isinstance(phi.var, NbhdVar) else self.worlds
            results = (self.holds(phi.body, {**env, phi.var.name: d}) for d in domain)
            return any(results) if isinstance(phi, Exists2) else all(results)
        raise TypeError(f"not a two-sorted formula: {phi!r}")


def extensionality_sentence() -> Fol2Formula:
    u, v, x = NbhdVar("U"), NbhdVar("V"), StateVar("x")
    same = Forall2(x, Iff2(Member(x, u), Member(x, v)))
    return Forall2(u, Forall2(v, Implies2(same, Eq2(u, v))))


def comprehension_instance(phi, var: str = "x") -> Fol2Formula:
    """All parameters of ``phi`` other than ``var`` universally closed, then a
    set collecting exactly the ``var`` satisfying the translation."""
    body = translate2(phi)
    s = NbhdVar("S")
    out = Exists2(s, Forall2(StateVar(var), Iff2(body, Member(StateVar(var), s))))
    for p in sorted(cpl.free_vars(phi) - {var}, reverse=True):
        out = Forall2(StateVar(p), out)
    return out


def check_translation_equivalence(frame: NeighborhoodFrame, phi, assignment: Mapping[str, str] | None = None,
                                  structure: TwoSortedStructure | None = None) -> bool:
    from .semantics import eval_cpl

    structure = structure or full_powerset_structure(frame)
    return eval_cpl(frame, phi, assignment) == eval_fol2(structure, translate2(phi), assignment)
