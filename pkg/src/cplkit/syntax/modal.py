"""The monotonic modal language: AST, parser, printer.

Grammar: ``~``, ``[]`` and ``<>`` are prefix operators binding tighter than
``&``, then ``|``, then right-associative ``->``.  ``true``/``false`` are the
constants; any other identifier is a proposition letter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .lexer import Cursor, tokenize


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class MNot:
    body: "ModalFormula"


@dataclass(frozen=True)
class MAnd:
    left: "ModalFormula"
    right: "ModalFormula"


@dataclass(frozen=True)
class MOr:
    left: "ModalFormula"
    right: "ModalFormula"


@dataclass(frozen=True)
class MImplies:
    left: "ModalFormula"
    right: "ModalFormula"


@dataclass(frozen=True)
class MBox:
    body: "ModalFormula"


@dataclass(frozen=True)
class Diamond:
    body: "ModalFormula"


ModalFormula = Union[Prop, Top, Bottom, MNot, MAnd, MOr, MImplies, MBox, Diamond]
MBINARY = (MAnd, MOr, MImplies)
MUNARY = (MNot, MBox, Diamond)

_TOKENS = [
    ("ws", r"\s+"),
    ("->", r"->"),
    ("[]", r"\[\]"),
    ("<>", r"<>"),
    ("~", r"~"),
    ("&", r"&"),
    ("|", r"\|"),
    ("(", r"\("),
    (")", r"\)"),
    ("ident", r"[A-Za-z][A-Za-z0-9_]*"),
]


def parse_modal(text: str) -> ModalFormula:
    cur = Cursor(tokenize(text, _TOKENS))
    phi = _implication(cur)
    if not cur.at("eof"):
        cur.fail(("->", "|", "&", "eof"), "trailing input")
    return phi


def _implication(cur):
    left = _disjunction(cur)
    if cur.at("->"):
        cur.advance()
        return MImplies(left, _implication(cur))
    return left


def _disjunction(cur):
    left = _conjunction(cur)
    while cur.at("|"):
        cur.advance()
        left = MOr(left, _conjunction(cur))
    return left


def _conjunction(cur):
    left = _unary(cur)
    while cur.at("&"):
        cur.advance()
        left = MAnd(left, _unary(cur))
    return left


def _unary(cur):
    tok = cur.peek()
    if tok.kind == "~":
        cur.advance()
        return MNot(_unary(cur))
    if tok.kind == "[]":
        cur.advance()
        return MBox(_unary(cur))
    if tok.kind == "<>":
        cur.advance()
        return Diamond(_unary(cur))
    if tok.kind == "(":
        cur.advance()
        phi = _implication(cur)
        cur.expect(")")
        return phi
    if tok.kind == "ident":
        cur.advance()
        if tok.text == "true":
            return Top()
        if tok.text == "false":
            return Bottom()
        return Prop(tok.text)
    cur.fail(("~", "[]", "<>", "(", "proposition", "true", "false"))


_PREC = {MImplies: 1, MOr: 2, MAnd: 3}
_OPS = {MImplies: "->", MOr: "|", MAnd: "&"}
_PREFIX = {MNot: "~", MBox: "[]", Diamond: "<>"}


def print_modal(phi: ModalFormula, full_parens: bool = False) -> str:
    return _show(phi, 0, full_parens)


def _show(phi, ctx, full):
    if isinstance(phi, Prop):
        return phi.name
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, MUNARY):
        return _PREFIX[type(phi)] + _show(phi.body, 4, full)
    if isinstance(phi, MBINARY):
        prec = _PREC[type(phi)]
        lc, rc = (prec + 1, prec) if isinstance(phi, MImplies) else (prec, prec + 1)
        text = f"{_show(phi.left, lc, full)} {_OPS[type(phi)]} {_show(phi.right, rc, full)}"
        return f"({text})" if prec < ctx or full else text
    raise TypeError(f"not a modal formula: {phi!r}")


def expand_diamond(phi: ModalFormula) -> ModalFormula:
    """Rewrite every ``<>A`` as ``~[]~A``."""
    if isinstance(phi, (Prop, Top, Bottom)):
        return phi
    if isinstance(phi, Diamond):
        return MNot(MBox(MNot(expand_diamond(phi.body))))
    if isinstance(phi, (MNot, MBox)):
        return type(phi)(expand_diamond(phi.body))
    return type(phi)(expand_diamond(phi.left), expand_diamond(phi.right))


def propositions(phi: ModalFormula) -> set[str]:
    if isinstance(phi, Prop):
        return {phi.name}
    if isinstance(phi, (Top, Bottom)):
        return set()
    if isinstance(phi, MUNARY):
        return propositions(phi.body)
    return propositions(phi.left) | propositions(phi.right)


def modal_depth(phi: ModalFormula) -> int:
    """Operator nesting depth (every connective counts)."""
    if isinstance(phi, (Prop, Top, Bottom)):
        return 0
    if isinstance(phi, MUNARY):
        return 1 + modal_depth(phi.body)
    return 1 + max(modal_depth(phi.left), modal_depth(phi.right))


def big_and(parts) -> ModalFormula:
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = MAnd(out, p)
    return out
