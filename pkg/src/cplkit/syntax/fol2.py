"""The two-sorted first-order language: AST, s-expression printer and parser.

State-sort variables are lowercase, neighborhood-sort variables uppercase,
constants carry a leading apostrophe.  Heads: ``and or not implies iff exists
forall = pred in N``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..errors import ParseError, SortError
from .lexer import Cursor, tokenize


@dataclass(frozen=True)
class StateVar:
    name: str


@dataclass(frozen=True)
class StateConst:
    name: str


@dataclass(frozen=True)
class NbhdVar:
    name: str


StateTerm = Union[StateVar, StateConst]


@dataclass(frozen=True)
class Eq2:
    """Identity; both sides of one sort."""

    left: Union[StateVar, StateConst, NbhdVar]
    right: Union[StateVar, StateConst, NbhdVar]


@dataclass(frozen=True)
class Pred2:
    name: str
    args: tuple


@dataclass(frozen=True)
class NRel:
    """``x N U``: ``U`` is a neighborhood of ``x``."""

    state: StateTerm
    nbhd: NbhdVar


@dataclass(frozen=True)
class Member:
    state: StateTerm
    nbhd: NbhdVar


@dataclass(frozen=True)
class Not2:
    body: "Fol2Formula"


@dataclass(frozen=True)
class And2:
    left: "Fol2Formula"
    right: "Fol2Formula"


@dataclass(frozen=True)
class Or2:
    left: "Fol2Formula"
    right: "Fol2Formula"


@dataclass(frozen=True)
class Implies2:
    left: "Fol2Formula"
    right: "Fol2Formula"


@dataclass(frozen=True)
class Iff2:
    left: "Fol2Formula"
    right: "Fol2Formula"


@dataclass(frozen=True)
class Exists2:
    var: Union[StateVar, NbhdVar]
    body: "Fol2Formula"


@dataclass(frozen=True)
class Forall2:
    var: Union[StateVar, NbhdVar]
    body: "Fol2Formula"


Fol2Formula = Union[Eq2, Pred2, NRel, Member, Not2, And2, Or2, Implies2, Iff2, Exists2, Forall2]
BINARY2 = {And2: "and", Or2: "or", Implies2: "implies", Iff2: "iff"}
QUANT2 = {Exists2: "exists", Forall2: "forall"}


def _term(t) -> str:
    if isinstance(t, StateConst):
        return "'" + t.name
    return t.name


def print_fol2(phi: Fol2Formula) -> str:
    if isinstance(phi, Eq2):
        return f"(= {_term(phi.left)} {_term(phi.right)})"
    if isinstance(phi, Pred2):
        return f"(pred {phi.name} {' '.join(_term(t) for t in phi.args)})"
    if isinstance(phi, NRel):
        return f"(N {_term(phi.state)} {phi.nbhd.name})"
    if isinstance(phi, Member):
        return f"(in {_term(phi.state)} {phi.nbhd.name})"
    if isinstance(phi, Not2):
        return f"(not {print_fol2(phi.body)})"
    if type(phi) in BINARY2:
        return f"({BINARY2[type(phi)]} {print_fol2(phi.left)} {print_fol2(phi.right)})"
    if type(phi) in QUANT2:
        return f"({QUANT2[type(phi)]} {phi.var.name} {print_fol2(phi.body)})"
    raise TypeError(f"not a two-sorted formula: {phi!r}")


def sort_of(t) -> str:
    return "nbhd" if isinstance(t, NbhdVar) else "state"


def check_sorts(phi: Fol2Formula) -> None:
    """Raise SortError if ``phi`` violates the two-sort discipline."""
    if isinstance(phi, Eq2):
        if sort_of(phi.left) != sort_of(phi.right):
            raise SortError("equality between terms of different sorts")
    elif isinstance(phi, Pred2):
        if not phi.args or any(isinstance(t, NbhdVar) for t in phi.args):
            raise SortError(f"predicate {phi.name} takes state-sort arguments")
    elif isinstance(phi, (NRel, Member)):
        if isinstance(phi.state, NbhdVar) or not isinstance(phi.nbhd, NbhdVar):
            raise SortError("N and in take one state term then one neighborhood variable")
    elif isinstance(phi, Not2):
        check_sorts(phi.body)
    elif type(phi) in BINARY2:
        check_sorts(phi.left)
        check_sorts(phi.right)
    elif type(phi) in QUANT2:
        if not isinstance(phi.var, (StateVar, NbhdVar)):
            raise SortError("quantifiers bind variables")
        check_sorts(phi.body)
    else:
        raise TypeError(f"not a two-sorted formula: {phi!r}")


def free_vars2(phi: Fol2Formula) -> set:
    if isinstance(phi, Eq2):
        terms = (phi.left, phi.right)
    elif isinstance(phi, Pred2):
        terms = phi.args
    elif isinstance(phi, (NRel, Member)):
        terms = (phi.state, phi.nbhd)
    elif isinstance(phi, Not2):
        return free_vars2(phi.body)
    elif type(phi) in BINARY2:
        return free_vars2(phi.left) | free_vars2(phi.right)
    elif type(phi) in QUANT2:
        return free_vars2(phi.body) - {phi.var}
    else:
        raise TypeError(f"not a two-sorted formula: {phi!r}")
    return {t for t in terms if not isinstance(t, StateConst)}


def nbhd_binders(phi: Fol2Formula) -> list[str]:
    """Names of neighborhood variables bound by quantifiers, in print order."""
    if isinstance(phi, (Eq2, Pred2, NRel, Member)):
        return []
    if isinstance(phi, Not2):
        return nbhd_binders(phi.body)
    if type(phi) in BINARY2:
        return nbhd_binders(phi.left) + nbhd_binders(phi.right)
    here = [phi.var.name] if isinstance(phi.var, NbhdVar) else []
    return here + nbhd_binders(phi.body)


# --- s-expression parser ------------------------------------------------------

_TOKENS = [("ws", r"\s+"), ("(", r"\("), (")", r"\)"), ("atom", r"[^\s()]+")]
_HEADS = {"and", "or", "not", "implies", "iff", "exists", "forall", "=", "pred", "in", "N"}


def parse_fol2(text: str) -> Fol2Formula:
    """Parse the s-expression format; rejects ill-sorted input with SortError."""
    cur = Cursor(tokenize(text, _TOKENS))
    phi = _sexpr(cur)
    if not cur.at("eof"):
        cur.fail(("eof",), "trailing input")
    check_sorts(phi)
    return phi


def _leaf(tok):
    text = tok.text
    if text.startswith("'") and len(text) > 1:
        return StateConst(text[1:])
    if not (text[0].isalpha() and text.replace("_", "a").isalnum()):
        raise ParseError(f"bad term {text!r}", tok.line, tok.column, ("term",))
    return NbhdVar(text) if text[0].isupper() else StateVar(text)


def _sexpr(cur):
    cur.expect("(")
    head = cur.expect("atom")
    if head.text not in _HEADS:
        raise ParseError(f"unknown head {head.text!r}", head.line, head.column, _HEADS)
    h = head.text

    def term():
        return _leaf(cur.expect("atom"))

    if h == "not":
        out = Not2(_sexpr(cur))
    elif h in ("and", "or", "implies", "iff"):
        left = _sexpr(cur)
        right = _sexpr(cur)
        out = {"and": And2, "or": Or2, "implies": Implies2, "iff": Iff2}[h](left, right)
    elif h in ("exists", "forall"):
        var = term()
        if isinstance(var, StateConst):
            raise SortError("a quantifier cannot bind a constant")
        body = _sexpr(cur)
        out = Exists2(var, body) if h == "exists" else Forall2(var, body)
    elif h == "=":
        out = Eq2(term(), term())
    elif h == "pred":
        name = cur.expect("atom").text
        args = []
        while cur.at("atom"):
            args.append(term())
        out = Pred2(name, tuple(args))
    else:
        state, nbhd = term(), term()
        out = (NRel if h == "N" else Member)(state, nbhd)
    cur.expect(")")
    return out
