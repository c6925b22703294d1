"""Seeded random formulas and exhaustive small-depth modal formula enumeration."""

from __future__ import annotations

import random
from typing import Sequence

from .syntax.cpl import And, Box, Const, Eq, Exists, Forall, Implies, Not, Or, Pred, Var
from .syntax.modal import Bottom, Diamond, MAnd, MBox, MImplies, MNot, MOr, Prop, Top


def random_term(rng: random.Random, variables: Sequence[str], constants: Sequence[str]):
    if constants and rng.random() < 0.25:
        return Const(rng.choice(constants))
    return Var(rng.choice(variables))


def random_cpl(rng: random.Random, depth: int, variables: Sequence[str] = ("x", "y", "z"),
               constants: Sequence[str] = (), predicates: Sequence[str] = ()):
    """A CPL formula of depth at most ``depth``; free variables are drawn from ``variables``."""
    term = lambda: random_term(rng, variables, constants)
    if depth <= 0 or rng.random() < 0.2:
        if predicates and rng.random() < 0.3:
            return Pred(rng.choice(predicates), (term(),))
        return Eq(term(), term())
    sub = lambda: random_cpl(rng, depth - 1, variables, constants, predicates)
    kind = rng.choice(("not", "and", "or", "implies", "exists", "forall", "box", "box"))
    if kind == "not":
        return Not(sub())
    if kind in ("and", "or", "implies"):
        return {"and": And, "or": Or, "implies": Implies}[kind](sub(), sub())
    var = rng.choice(variables)
    if kind == "exists":
        return Exists(var, sub())
    if kind == "forall":
        return Forall(var, sub())
    return Box(term(), var, sub())


def random_modal(rng: random.Random, depth: int, props: Sequence[str] = ("p", "q")):
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.1:
            return Top()
        if r < 0.2:
            return Bottom()
        return Prop(rng.choice(props))
    sub = lambda: random_modal(rng, depth - 1, props)
    kind = rng.choice(("not", "box", "diamond", "and", "or", "implies"))
    if kind in ("not", "box", "diamond"):
        return {"not": MNot, "box": MBox, "diamond": Diamond}[kind](sub())
    return {"and": MAnd, "or": MOr, "implies": MImplies}[kind](sub(), sub())


def enumerate_modal(depth: int, props: Sequence[str] = ("p",), full: bool = False) -> list:
    """Every modal formula of operator depth at most ``depth``.

    With ``full=False`` the connectives are the complete basis ``~ & []``;
    with ``full=True`` also ``| -> <>`` and the constants.
    """
    atoms = [Prop(p) for p in props] + ([Top(), Bottom()] if full else [])
    unary = (MNot, MBox, Diamond) if full else (MNot, MBox)
    binary = (MAnd, MOr, MImplies) if full else (MAnd,)
    levels = [atoms]
    for _ in range(depth):
        prev = levels[-1]
        layer = list(atoms)
        layer += [u(a) for u in unary for a in prev]
        layer += [b(a, c) for b in binary for a in prev for c in prev]
        levels.append(layer)
    return levels[-1]
