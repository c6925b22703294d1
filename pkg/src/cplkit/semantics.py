"""Satisfaction for CPL over neighborhood frames, and modal satisfaction under
neighborhood and topological semantics, with brute-force frame validity."""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping

from .errors import SizeCapExceeded, UnboundVariable, UnknownConstant, UnknownPredicate, UnknownProposition
from .frames import MAX_WORLDS, NeighborhoodFrame, check_size
from .syntax import cpl
from .syntax.cpl import Box, Const, Eq, Exists, Forall, Implies, Not, Pred, Var
from .syntax.modal import (
    Bottom, MAnd, MBox, MImplies, MNot, MOr, ModalFormula, Prop, Top, expand_diamond, propositions,
)

VALUATION_BITS_CAP = 20


# --- CPL ----------------------------------------------------------------------


def eval_cpl(frame: NeighborhoodFrame, phi, assignment: Mapping[str, str] | None = None) -> bool:
    """Truth of ``phi`` in ``frame`` under a variable -> world-label assignment."""
    check_size(frame.size, MAX_WORLDS)
    env = _index_env(frame, phi, assignment or {})
    return _CplEvaluator(frame).holds(phi, env)


def extension(frame: NeighborhoodFrame, phi, var: str, assignment: Mapping[str, str] | None = None) -> int:
    """``{v : phi(v)}`` as a bitmask, ``var`` ranging over the worlds."""
    base = {k: v for k, v in (assignment or {}).items() if k != var}
    env = _index_env(frame, cpl.Exists(var, phi), base)
    ev = _CplEvaluator(frame)
    out = 0
    for v in range(frame.size):
        env[var] = v
        if ev.holds(phi, env):
            out |= 1 << v
    return out


def _index_env(frame, phi, assignment):
    env = {}
    for var, label in assignment.items():
        if label not in frame:
            raise UnknownConstant(f"assignment sends {var} to {label!r}, which is not a world")
        env[var] = frame.index(label)
    missing = cpl.free_vars(phi) - set(env)
    if missing:
        raise UnboundVariable(f"no value for free variable(s) {', '.join(sorted(missing))}")
    return env


class _CplEvaluator:
    def __init__(self, frame: NeighborhoodFrame):
        self.frame = frame
        self.n = frame.size
        self.preds = frame.predicates

    def term(self, t, env) -> int:
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise UnboundVariable(f"variable {t.name} is unbound") from None
        if t.name not in self.frame:
            raise UnknownConstant(f"constant '{t.name} names no world of the frame")
        return self.frame.index(t.name)

    def holds(self, phi, env) -> bool:
        if isinstance(phi, Eq):
            return self.term(phi.left, env) == self.term(phi.right, env)
        if isinstance(phi, Pred):
            if phi.name not in self.preds:
                raise UnknownPredicate(f"predicate {phi.name} is not interpreted by the frame")
            return bool(self.preds[phi.name] >> self.term(phi.args[0], env) & 1)
        if isinstance(phi, Not):
            return not self.holds(phi.body, env)
        if isinstance(phi, cpl.And):
            return self.holds(phi.left, env) and self.holds(phi.right, env)
        if isinstance(phi, cpl.Or):
            return self.holds(phi.left, env) or self.holds(phi.right, env)
        if isinstance(phi, Implies):
            return not self.holds(phi.left, env) or self.holds(phi.right, env)
        if isinstance(phi, (Exists, Forall)):
            want = isinstance(phi, Exists)
            inner = dict(env)
            for v in range(self.n):
                inner[phi.var] = v
                if self.holds(phi.body, inner) == want:
                    return want
            return not want
        if isinstance(phi, Box):
            subject = self.term(phi.subject, env)
            inner = dict(env)
            mask = 0
            for v in range(self.n):
                inner[phi.var] = v
                if self.holds(phi.body, inner):
                    mask |= 1 << v
            return mask in self.frame.families[subject]
        raise TypeError(f"not a CPL formula: {phi!r}")


# --- modal: neighborhood semantics ------------------------------------------------


def _valuation_masks(worlds_mask_of, valuation, props):
    out = {}
    for name, value in valuation.items():
        out[name] = value if isinstance(value, int) else worlds_mask_of(value)
    missing = props - set(out)
    if missing:
        raise UnknownProposition(f"valuation undefined on {', '.join(sorted(missing))}")
    return out


def modal_extension(frame: NeighborhoodFrame, valuation: Mapping, phi: ModalFormula) -> int:
    """Worlds where ``phi`` holds, as a bitmask.  Valuation values may be
    bitmasks or iterables of labels."""
    phi = expand_diamond(phi)
    val = _valuation_masks(frame.mask, valuation, propositions(phi))
    return _nbhd_ext(frame, val, phi, frame.full)


def _nbhd_ext(frame, val, phi, full):
    if isinstance(phi, Prop):
        return val[phi.name]
    if isinstance(phi, Top):
        return full
    if isinstance(phi, Bottom):
        return 0
    if isinstance(phi, MNot):
        return full & ~_nbhd_ext(frame, val, phi.body, full)
    if isinstance(phi, MBox):
        inner = _nbhd_ext(frame, val, phi.body, full)
        return sum(1 << i for i, fam in enumerate(frame.families) if inner in fam)
    left = _nbhd_ext(frame, val, phi.left, full)
    right = _nbhd_ext(frame, val, phi.right, full)
    if isinstance(phi, MAnd):
        return left & right
    if isinstance(phi, MOr):
        return left | right
    if isinstance(phi, MImplies):
        return (full & ~left) | right
    raise TypeError(f"not a modal formula: {phi!r}")


def eval_modal_nbhd(frame: NeighborhoodFrame, valuation: Mapping, world: str, phi: ModalFormula) -> bool:
    return bool(modal_extension(frame, valuation, phi) >> frame.index(world) & 1)


# --- modal: topological semantics ---------------------------------------------------


def modal_extension_top(top, valuation: Mapping, phi: ModalFormula) -> int:
    phi = expand_diamond(phi)
    val = _valuation_masks(top.mask, valuation, propositions(phi))
    return _top_ext(top, val, phi)


def _top_ext(top, val, phi):
    full = top.full
    if isinstance(phi, Prop):
        return val[phi.name]
    if isinstance(phi, Top):
        return full
    if isinstance(phi, Bottom):
        return 0
    if isinstance(phi, MNot):
        return full & ~_top_ext(top, val, phi.body)
    if isinstance(phi, MBox):
        return top.interior(_top_ext(top, val, phi.body))
    left, right = _top_ext(top, val, phi.left), _top_ext(top, val, phi.right)
    if isinstance(phi, MAnd):
        return left & right
    if isinstance(phi, MOr):
        return left | right
    if isinstance(phi, MImplies):
        return (full & ~left) | right
    raise TypeError(f"not a modal formula: {phi!r}")


def eval_modal_top(top, valuation: Mapping, world: str, phi: ModalFormula) -> bool:
    return bool(modal_extension_top(top, valuation, phi) >> top.points.index(world) & 1)


# --- validity ---------------------------------------------------------------------


def valuations(n_worlds: int, props: Iterable[str], cap_bits: int = VALUATION_BITS_CAP) -> Iterator[dict[str, int]]:
    """Every valuation: propositions sorted by name, subsets in binary counting order."""
    props = sorted(props)
    if len(props) * n_worlds > cap_bits:
        raise SizeCapExceeded(
            f"{len(props)} proposition(s) over {n_worlds} worlds means 2^{len(props) * n_worlds} valuations, "
            f"above 2^{cap_bits}")
    for combo in itertools.product(range(1 << n_worlds), repeat=len(props)):
        yield dict(zip(props, combo))


def countervaluation(frame: NeighborhoodFrame, phi: ModalFormula, world: str | None = None) -> dict | None:
    """The first valuation (in enumeration order) falsifying ``phi`` at ``world``
    (anywhere if ``world`` is None), as label lists; None if valid."""
    phi = expand_diamond(phi)
    target = frame.full if world is None else 1 << frame.index(world)
    for val in valuations(frame.size, propositions(phi)):
        if _nbhd_ext(frame, val, phi, frame.full) & target != target:
            return {k: frame.labels(m) for k, m in val.items()}
    return None


def frame_valid(frame: NeighborhoodFrame, phi: ModalFormula) -> bool:
    return countervaluation(frame, phi) is None


def frame_valid_at(frame: NeighborhoodFrame, world: str, phi: ModalFormula) -> bool:
    return countervaluation(frame, phi, world) is None


def valid_worlds(frame: NeighborhoodFrame, phi: ModalFormula) -> int:
    """Bitmask of worlds at which ``phi`` is valid (one pass over valuations)."""
    phi = expand_diamond(phi)
    out = frame.full
    for val in valuations(frame.size, propositions(phi)):
        out &= _nbhd_ext(frame, val, phi, frame.full)
        if not out:
            break
    return out
