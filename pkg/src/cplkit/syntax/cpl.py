"""Coalgebraic predicate logic: AST, parser, printer, substitution.

Concrete grammar (loosest binding first)::

    formula := ('exists' | 'forall') VAR '.' formula | imp
    imp     := disj ('->' imp)?
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := '~' unary | quantifier | atom
    atom    := '(' formula ')' | term ('=' | '!=') term
             | PRED '(' term (',' term)* ')' | term '[' VAR ':' formula ']'
    term    := VAR | "'" LABEL

Quantifiers reach as far right as possible, also in operand position.
``s != t`` is read as ``~(s = t)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from ..errors import ParseError, SortError
from .lexer import Cursor, tokenize

IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")
KEYWORDS = frozenset({"exists", "forall"})


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return "'" + self.name


Term = Union[Var, Const]


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple


@dataclass(frozen=True)
class Not:
    body: "CplFormula"


@dataclass(frozen=True)
class And:
    left: "CplFormula"
    right: "CplFormula"


@dataclass(frozen=True)
class Or:
    left: "CplFormula"
    right: "CplFormula"


@dataclass(frozen=True)
class Implies:
    left: "CplFormula"
    right: "CplFormula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "CplFormula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "CplFormula"


@dataclass(frozen=True)
class Box:
    """``subject[var: body]``: the set defined by ``body`` in ``var`` is a
    neighborhood of ``subject``."""

    subject: Term
    var: str
    body: "CplFormula"


CplFormula = Union[Eq, Pred, Not, And, Or, Implies, Exists, Forall, Box]
BINARY = (And, Or, Implies)
QUANTIFIERS = (Exists, Forall)


@dataclass(frozen=True)
class Signature:
    """Unary predicate names with arities, and optionally the allowed constants."""

    predicates: dict = field(default_factory=dict)
    constants: frozenset | None = None

    def __post_init__(self):
        for name, arity in self.predicates.items():
            if not IDENT.match(name):
                raise SortError(f"bad predicate name {name!r}")
            if arity < 1:
                raise SortError(f"predicate {name} must have arity >= 1")

    @classmethod
    def of_frame(cls, frame) -> "Signature":
        return cls({name: 1 for name in frame.predicates}, frozenset(frame.worlds))

    def __hash__(self):
        return hash((tuple(sorted(self.predicates.items())), self.constants))


# --- parsing ------------------------------------------------------------------

_TOKENS = [
    ("ws", r"\s+"),
    ("->", r"->"),
    ("!=", r"!="),
    ("=", r"="),
    ("~", r"~"),
    ("&", r"&"),
    ("|", r"\|"),
    ("(", r"\("),
    (")", r"\)"),
    ("[", r"\["),
    ("]", r"\]"),
    (":", r":"),
    (".", r"\."),
    (",", r","),
    ("const", r"'[A-Za-z0-9_]+"),
    ("ident", r"[A-Za-z][A-Za-z0-9_]*"),
]


def parse_cpl(text: str, sig: Signature | None = None) -> CplFormula:
    cur = Cursor(tokenize(text, _TOKENS))
    phi = _Parser(cur, sig).formula()
    if not cur.at("eof"):
        cur.fail(("->", "|", "&", "eof"), "trailing input")
    return phi


class _Parser:
    def __init__(self, cur: Cursor, sig: Signature | None):
        self.cur = cur
        self.sig = sig

    def formula(self):
        if self._at_quantifier():
            return self.quantifier()
        return self.implication()

    def _at_quantifier(self):
        tok = self.cur.peek()
        return tok.kind == "ident" and tok.text in KEYWORDS

    def quantifier(self):
        kw = self.cur.advance().text
        var = self.variable()
        self.cur.expect(".")
        body = self.formula()
        return Exists(var, body) if kw == "exists" else Forall(var, body)

    def variable(self) -> str:
        tok = self.cur.peek()
        if tok.kind != "ident" or tok.text in KEYWORDS:
            self.cur.fail(("variable",))
        if not tok.text[0].islower():
            self.cur.fail(("variable",), f"variables must start with a lowercase letter, got {tok.text!r}")
        return self.cur.advance().text

    def implication(self):
        left = self.disjunction()
        if self.cur.at("->"):
            self.cur.advance()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.cur.at("|"):
            self.cur.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.cur.at("&"):
            self.cur.advance()
            left = And(left, self.unary())
        return left

    def unary(self):
        if self.cur.at("~"):
            self.cur.advance()
            return Not(self.unary())
        if self._at_quantifier():
            return self.quantifier()
        return self.atom()

    def atom(self):
        cur = self.cur
        if cur.at("("):
            cur.advance()
            phi = self.formula()
            cur.expect(")")
            return phi
        tok = cur.peek()
        if tok.kind == "ident" and cur.peek(1).kind == "(" and tok.text not in KEYWORDS:
            return self.predicate()
        if tok.kind not in ("ident", "const"):
            cur.fail(("(", "~", "exists", "forall", "term", "predicate"))
        subject = self.term()
        if cur.at("="):
            cur.advance()
            return Eq(subject, self.term())
        if cur.at("!="):
            cur.advance()
            return Not(Eq(subject, self.term()))
        if cur.at("["):
            cur.advance()
            var = self.variable()
            cur.expect(":")
            body = self.formula()
            cur.expect("]")
            return Box(subject, var, body)
        cur.fail(("=", "!=", "["))

    def predicate(self):
        tok = self.cur.advance()
        self.cur.expect("(")
        args = [self.term()]
        while self.cur.at(","):
            self.cur.advance()
            args.append(self.term())
        self.cur.expect(")")
        if len(args) != 1:
            raise SortError(f"predicate {tok.text} applied to {len(args)} arguments; only unary predicates are supported")
        if self.sig is not None:
            if tok.text not in self.sig.predicates:
                raise SortError(f"predicate {tok.text} is not in the signature")
            if self.sig.predicates[tok.text] != len(args):
                raise SortError(f"predicate {tok.text} has arity {self.sig.predicates[tok.text]}, got {len(args)}")
        return Pred(tok.text, tuple(args))

    def term(self):
        tok = self.cur.peek()
        if tok.kind == "const":
            self.cur.advance()
            name = tok.text[1:]
            if self.sig is not None and self.sig.constants is not None and name not in self.sig.constants:
                raise SortError(f"constant '{name} is not in the signature")
            return Const(name)
        return Var(self.variable())


# --- printing -------------------------------------------------------------------

_PREC = {Implies: 1, Or: 2, And: 3}
_OPS = {Implies: "->", Or: "|", And: "&"}


def print_cpl(phi: CplFormula, full_parens: bool = False) -> str:
    return _show(phi, 0, full_parens)


def _show(phi, ctx, full) -> str:
    if isinstance(phi, Eq):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, Pred):
        return f"{phi.name}({', '.join(map(str, phi.args))})"
    if isinstance(phi, Box):
        return f"{phi.subject}[{phi.var}: {_show(phi.body, 0, full)}]"
    if isinstance(phi, Not):
        if isinstance(phi.body, Pred):
            return "~" + _show(phi.body, 0, full)
        return "~(" + _show(phi.body, 0, full) + ")"
    if isinstance(phi, QUANTIFIERS):
        kw = "exists" if isinstance(phi, Exists) else "forall"
        body = _show(phi.body, 0, full)
        if isinstance(phi.body, BINARY):
            body = "(" + body + ")"
        text = f"{kw} {phi.var}. {body}"
        return f"({text})" if ctx > 0 else text
    if isinstance(phi, BINARY):
        prec = _PREC[type(phi)]
        if isinstance(phi, Implies):
            lc, rc = prec + 1, prec
        else:
            lc, rc = prec, prec + 1
        text = f"{_show(phi.left, lc, full)} {_OPS[type(phi)]} {_show(phi.right, rc, full)}"
        return f"({text})" if prec < ctx or full else text
    raise TypeError(f"not a CPL formula: {phi!r}")


# --- variables ------------------------------------------------------------------


def term_vars(t: Term) -> set[str]:
    return {t.name} if isinstance(t, Var) else set()


def free_vars(phi: CplFormula) -> set[str]:
    if isinstance(phi, Eq):
        return term_vars(phi.left) | term_vars(phi.right)
    if isinstance(phi, Pred):
        return set().union(*(term_vars(t) for t in phi.args))
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, BINARY):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, QUANTIFIERS):
        return free_vars(phi.body) - {phi.var}
    if isinstance(phi, Box):
        return term_vars(phi.subject) | (free_vars(phi.body) - {phi.var})
    raise TypeError(f"not a CPL formula: {phi!r}")


def all_vars(phi: CplFormula) -> set[str]:
    """Free and bound variable names."""
    if isinstance(phi, (Eq, Pred)):
        return free_vars(phi)
    if isinstance(phi, Not):
        return all_vars(phi.body)
    if isinstance(phi, BINARY):
        return all_vars(phi.left) | all_vars(phi.right)
    if isinstance(phi, QUANTIFIERS):
        return all_vars(phi.body) | {phi.var}
    if isinstance(phi, Box):
        return term_vars(phi.subject) | all_vars(phi.body) | {phi.var}
    raise TypeError(f"not a CPL formula: {phi!r}")


def constants(phi: CplFormula) -> set[str]:
    if isinstance(phi, Eq):
        terms = (phi.left, phi.right)
    elif isinstance(phi, Pred):
        terms = phi.args
    elif isinstance(phi, Not):
        return constants(phi.body)
    elif isinstance(phi, BINARY):
        return constants(phi.left) | constants(phi.right)
    elif isinstance(phi, QUANTIFIERS):
        return constants(phi.body)
    elif isinstance(phi, Box):
        return constants(Eq(phi.subject, phi.subject)) | constants(phi.body)
    else:
        raise TypeError(f"not a CPL formula: {phi!r}")
    return {t.name for t in terms if isinstance(t, Const)}


def fresh_var(base: str, avoid: set[str]) -> str:
    stem = base.rstrip("0123456789") or "v"
    k = 1
    while f"{stem}{k}" in avoid:
        k += 1
    return f"{stem}{k}"


def _sub_term(t: Term, var: str, term: Term) -> Term:
    return term if isinstance(t, Var) and t.name == var else t


def substitute(phi: CplFormula, var: str, term: Term | str) -> CplFormula:
    """Capture-avoiding substitution of ``term`` for free ``var``."""
    if isinstance(term, str):
        term = Const(term[1:]) if term.startswith("'") else Var(term)
    if isinstance(phi, Eq):
        return Eq(_sub_term(phi.left, var, term), _sub_term(phi.right, var, term))
    if isinstance(phi, Pred):
        return Pred(phi.name, tuple(_sub_term(t, var, term) for t in phi.args))
    if isinstance(phi, Not):
        return Not(substitute(phi.body, var, term))
    if isinstance(phi, BINARY):
        return type(phi)(substitute(phi.left, var, term), substitute(phi.right, var, term))
    if isinstance(phi, QUANTIFIERS + (Box,)):
        bound, body = phi.var, phi.body
        if bound != var and var in free_vars(body):
            if bound in term_vars(term):
                new = fresh_var(bound, all_vars(body) | term_vars(term) | {var})
                body = substitute(body, bound, Var(new))
                bound = new
            body = substitute(body, var, term)
        if isinstance(phi, Box):
            return Box(_sub_term(phi.subject, var, term), bound, body)
        return type(phi)(bound, body)
    raise TypeError(f"not a CPL formula: {phi!r}")


def depth(phi: CplFormula) -> int:
    if isinstance(phi, (Eq, Pred)):
        return 0
    if isinstance(phi, Not):
        return 1 + depth(phi.body)
    if isinstance(phi, BINARY):
        return 1 + max(depth(phi.left), depth(phi.right))
    return 1 + depth(phi.body)


def conjunction(*parts: CplFormula) -> CplFormula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disjunction(*parts: CplFormula) -> CplFormula:
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out
