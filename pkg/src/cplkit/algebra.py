"""Finite Boolean algebras with a monotone operator (BAMs): complex algebras,
dual maps, canonical extensions, ultrafilter frames and extensions, validity,
and the embedding of an ultraproduct of complex algebras into the complex
algebra of the quasi-ultraproduct.

Elements are bitmasks over the atoms, which are kept in lexicographic order.
"""

from __future__ import annotations

import itertools
import json
import string
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .constructions import is_bounded_morphism, principal_ultrafilter, quasi_ultraproduct, quasi_ultraproduct_worlds
from .errors import EmptyFamily, FrameFormatError, NotMonotonic, SizeCapExceeded
from .frames import NeighborhoodFrame, WorldMap, is_monotonic, submasks
from .semantics import VALUATION_BITS_CAP
from .syntax.modal import (
    Bottom, MAnd, MBox, MImplies, MNot, MOr, ModalFormula, Prop, Top, expand_diamond, propositions,
)

BAM_ATOM_CAP = 10


class FiniteBam:
    """Powerset algebra on ``atoms`` with ``box`` given as a full table."""

    __slots__ = ("atoms", "box_table")

    def __init__(self, atoms: Sequence[str] | int, box: Sequence[int] | Mapping[int, int]):
        if isinstance(atoms, int):
            atoms = tuple(string.ascii_lowercase[:atoms])
        atoms = tuple(atoms)
        if list(atoms) != sorted(set(atoms)):
            raise ValueError("atom labels must be distinct and sorted")
        if len(atoms) > BAM_ATOM_CAP:
            raise SizeCapExceeded(f"{len(atoms)} atoms exceeds the cap of {BAM_ATOM_CAP}")
        size = 1 << len(atoms)
        table = tuple(box[x] for x in range(size))
        if any(not 0 <= y < size for y in table):
            raise ValueError("box value outside the carrier")
        self.atoms = atoms
        self.box_table = table
        for x in range(size):
            for i in range(len(atoms)):
                y = x | 1 << i
                if table[x] & ~table[y]:
                    raise NotMonotonic(f"box({self.show(x)}) is not below box({self.show(y)})")

    @property
    def n(self) -> int:
        return len(self.atoms)

    @property
    def top(self) -> int:
        return (1 << self.n) - 1

    def elements(self) -> range:
        return range(1 << self.n)

    def box(self, x: int) -> int:
        return self.box_table[x]

    def neg(self, x: int) -> int:
        return self.top & ~x

    def show(self, x: int) -> str:
        return "".join(a for i, a in enumerate(self.atoms) if x >> i & 1)

    def __eq__(self, other):
        if not isinstance(other, FiniteBam):
            return NotImplemented
        return (self.atoms, self.box_table) == (other.atoms, other.box_table)

    def __hash__(self):
        return hash((self.atoms, self.box_table))

    def __repr__(self):
        return f"FiniteBam(atoms={list(self.atoms)}, box={{{', '.join(f'{self.show(x)!r}: {self.show(y)!r}' for x, y in enumerate(self.box_table))}}})"


# --- serialization --------------------------------------------------------------


def bam_to_dict(bam: FiniteBam) -> dict:
    return {"atoms": list(bam.atoms), "box": {bam.show(x): bam.show(bam.box(x)) for x in bam.elements()}}


def bam_to_json(bam: FiniteBam) -> str:
    return json.dumps(bam_to_dict(bam))


def _decode_element(text: str, atoms: tuple) -> int:
    def go(pos, start):
        if pos == len(text):
            return 0
        for i in range(start, len(atoms)):
            if text.startswith(atoms[i], pos):
                rest = go(pos + len(atoms[i]), i + 1)
                if rest is not None:
                    return rest | 1 << i
        return None

    out = go(0, 0)
    if out is None:
        raise FrameFormatError(f"{text!r} is not a sorted concatenation of atoms")
    return out


def bam_from_dict(data) -> FiniteBam:
    if not isinstance(data, dict) or set(data) != {"atoms", "box"}:
        raise FrameFormatError("a BAM file needs exactly the keys 'atoms' and 'box'")
    atoms = tuple(data["atoms"])
    table = {}
    for k, v in data["box"].items():
        x = _decode_element(k, atoms)
        if x in table:
            raise FrameFormatError(f"element {k!r} listed twice")
        table[x] = _decode_element(v, atoms)
    if len(table) != 1 << len(atoms):
        raise FrameFormatError("box table must list every element")
    return FiniteBam(atoms, table)


def bam_from_json(text: str) -> FiniteBam:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FrameFormatError(f"invalid JSON: {exc}") from None
    return bam_from_dict(data)


# --- complex algebras and dual maps ---------------------------------------------


def complex_algebra(frame: NeighborhoodFrame) -> FiniteBam:
    """F+: all subsets, box(X) = worlds having X as a neighborhood."""
    if not is_monotonic(frame):
        raise NotMonotonic("the complex algebra needs a monotonic frame")
    table = []
    for x in range(1 << frame.size):
        table.append(sum(1 << i for i in range(frame.size) if x in frame.families[i]))
    return FiniteBam(frame.worlds, table)


def dual_map(f: WorldMap) -> tuple[int, ...]:
    """f+ as a table: element X of the codomain algebra to its preimage."""
    return tuple(f.preimage(x) for x in range(1 << f.codomain.size))


def is_bam_homomorphism(table: Sequence[int], source: FiniteBam, target: FiniteBam) -> bool:
    """Preservation of meets, complements and box, checked on every element."""
    for x in source.elements():
        if table[source.neg(x)] != target.neg(table[x]):
            return False
        if table[source.box(x)] != target.box(table[x]):
            return False
        for y in source.elements():
            if table[x & y] != table[x] & table[y]:
                return False
    return True


def duality_sides(f: WorldMap) -> tuple[bool, bool]:
    """(f is a bounded morphism, f+ is a BAM homomorphism)."""
    source, target = complex_algebra(f.codomain), complex_algebra(f.domain)
    return is_bounded_morphism(f), is_bam_homomorphism(dual_map(f), source, target)


def verify_duality(f: WorldMap) -> bool:
    left, right = duality_sides(f)
    return left == right


# --- ultrafilters and canonical extensions ---------------------------------------


@dataclass(frozen=True)
class Ultrafilter:
    """The principal ultrafilter generated by atom number ``atom``."""

    bam: FiniteBam
    atom: int

    @property
    def label(self) -> str:
        return "u_" + self.bam.atoms[self.atom]

    def __contains__(self, x: int) -> bool:
        return bool(x >> self.atom & 1)

    def members(self) -> list[int]:
        return [x for x in self.bam.elements() if x in self]

    def is_ultrafilter(self) -> bool:
        """Proper, upward closed, meet closed and prime, by enumeration."""
        bam = self.bam
        members = set(self.members())
        if 0 in members or bam.top not in members:
            return False
        for x in members:
            if any(y & x == x and y not in members for y in bam.elements()):
                return False
            if any(x & y not in members for y in members):
                return False
        return all((x in members) != (bam.neg(x) in members) for x in bam.elements())


def ultrafilters(bam: FiniteBam) -> list[Ultrafilter]:
    return [Ultrafilter(bam, i) for i in range(bam.n)]


@dataclass(frozen=True)
class CanonicalExtensionResult:
    extension: FiniteBam
    embedding: tuple
    closed: frozenset = field(default_factory=frozenset)

    def is_isomorphism(self, source: FiniteBam) -> bool:
        """The embedding is a bijective BAM homomorphism."""
        emb = self.embedding
        if len(set(emb)) != len(emb) or len(emb) != 1 << self.extension.n:
            return False
        return is_bam_homomorphism(emb, source, self.extension)

    def note(self) -> str:
        return "finite algebra: A^sigma is isomorphic to A, canonicity is vacuous at this scale"


def _closed_elements(emb: Sequence[int], top: int) -> frozenset:
    """Meets of families of embedded elements (the empty meet is the top)."""
    closed = {top} | set(emb)
    frontier = list(closed)
    while frontier:
        x = frontier.pop()
        for y in list(closed):
            z = x & y
            if z not in closed:
                closed.add(z)
                frontier.append(z)
    return frozenset(closed)


def canonical_extension(bam: FiniteBam) -> CanonicalExtensionResult:
    """A^sigma on the ultrafilters, with the extended box computed from the
    join-of-meets formula over closed elements below ``u``.  Every element of
    a finite powerset is a meet of clopens, so the closed elements are all of
    them; they are still computed as meet-closure rather than assumed."""
    ufs = ultrafilters(bam)
    top = (1 << len(ufs)) - 1
    emb = tuple(sum(1 << k for k, u in enumerate(ufs) if a in u) for a in bam.elements())
    closed = _closed_elements(emb, top)
    table = []
    for u in range(1 << len(ufs)):
        value = 0
        for x in closed:
            if x & ~u:
                continue
            meet = top
            for a in bam.elements():
                if emb[a] & x == x:
                    meet &= emb[bam.box(a)]
            value |= meet
        table.append(value)
    ext = FiniteBam(tuple(u.label for u in ufs), table)
    return CanonicalExtensionResult(ext, emb, closed)


def ultrafilter_frame(bam: FiniteBam) -> NeighborhoodFrame:
    """Uf(A): U is a neighborhood of u iff some K inside U has box(a) in u for
    every a whose image contains K.  K ranges over all subsets, each being
    closed in the finite case."""
    ufs = ultrafilters(bam)
    emb = [sum(1 << k for k, u in enumerate(ufs) if a in u) for a in bam.elements()]
    full = (1 << len(ufs)) - 1
    families = []
    for u in ufs:
        fam = set()
        for U in range(full + 1):
            for K in submasks(U):
                if all(bam.box(a) in u for a in bam.elements() if emb[a] & K == K):
                    fam.add(U)
                    break
        families.append(frozenset(fam))
    frame = NeighborhoodFrame.from_masks(tuple(u.label for u in ufs), families)
    if not is_monotonic(frame):
        raise AssertionError("ultrafilter frame is not monotonic")
    return frame


def ultrafilter_extension(frame: NeighborhoodFrame) -> NeighborhoodFrame:
    return ultrafilter_frame(complex_algebra(frame))


def principal_ultrafilter_map(frame: NeighborhoodFrame) -> dict[str, str]:
    """w to the ultrafilter generated by {w}."""
    return {w: "u_" + w for w in frame.worlds}


# --- validity -------------------------------------------------------------------


def _bam_value(bam: FiniteBam, val, phi):
    if isinstance(phi, Prop):
        return val[phi.name]
    if isinstance(phi, Top):
        return bam.top
    if isinstance(phi, Bottom):
        return 0
    if isinstance(phi, MNot):
        return bam.neg(_bam_value(bam, val, phi.body))
    if isinstance(phi, MBox):
        return bam.box(_bam_value(bam, val, phi.body))
    left, right = _bam_value(bam, val, phi.left), _bam_value(bam, val, phi.right)
    if isinstance(phi, MAnd):
        return left & right
    if isinstance(phi, MOr):
        return left | right
    if isinstance(phi, MImplies):
        return bam.neg(left) | right
    raise TypeError(f"not a modal formula: {phi!r}")


def bam_counterexample(bam: FiniteBam, phi: ModalFormula) -> dict | None:
    """First assignment of elements to propositions sending ``phi`` below top."""
    phi = expand_diamond(phi)
    props = sorted(propositions(phi))
    if bam.n * len(props) > VALUATION_BITS_CAP:
        raise SizeCapExceeded(f"2^{bam.n * len(props)} assignments exceeds 2^{VALUATION_BITS_CAP}")
    for combo in itertools.product(bam.elements(), repeat=len(props)):
        val = dict(zip(props, combo))
        if _bam_value(bam, val, phi) != bam.top:
            return {p: bam.show(x) for p, x in val.items()}
    return None


def bam_valid(bam: FiniteBam, phi: ModalFormula) -> bool:
    return bam_counterexample(bam, phi) is None


# --- ultraproduct embedding ---------------------------------------------------------


@dataclass
class EmbeddingReport:
    passed: bool
    checks: dict
    counterexample: str | None
    element_classes: int
    world_classes: int

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": self.checks,
            "counterexample": self.counterexample,
            "element_classes": self.element_classes,
            "world_classes": self.world_classes,
        }


def _group(items, in_d, k):
    classes = []
    for t in items:
        for cls in classes:
            if in_d(frozenset(i for i in range(k) if t[i] == cls[0][i])):
                cls.append(t)
                break
        else:
            classes.append([t])
    return classes


def ultraproduct_embedding(frames: Sequence[NeighborhoodFrame], principal_index: int) -> EmbeddingReport:
    """Build iota from the ultraproduct of the F_i+ into the complex algebra of
    the quasi-ultraproduct, s in iota(a) iff {i : s(i) in a(i)} in D, and check
    it is an injective BAM homomorphism."""
    if not frames:
        raise EmptyFamily("ultraproduct of an empty family")
    k = len(frames)
    for f in frames:
        if not is_monotonic(f):
            raise NotMonotonic("ultraproduct embedding needs monotonic factors")
    in_d = principal_ultrafilter(k, principal_index)
    algebras = [complex_algebra(f) for f in frames]
    target_frame = quasi_ultraproduct(frames, principal_index)
    target = complex_algebra(target_frame)
    labels, world_classes = quasi_ultraproduct_worlds(frames, principal_index)
    assert tuple(labels) == target_frame.worlds

    tuples = list(itertools.product(*(a.elements() for a in algebras)))
    elem_classes = _group(tuples, in_d, k)
    class_of = {t: c for c, cls in enumerate(elem_classes) for t in cls}

    def describe(c):
        return "(" + ", ".join("{" + algebras[i].show(elem_classes[c][0][i]) + "}" for i in range(k)) + ")"

    iota = []
    for cls in elem_classes:
        value = 0
        for w, wcls in enumerate(world_classes):
            verdicts = {in_d(frozenset(i for i in range(k) if a[i] >> s[i] & 1)) for a in cls for s in wcls}
            if len(verdicts) != 1:
                return EmbeddingReport(False, {"well_defined": False}, describe(class_of[cls[0]]),
                                       len(elem_classes), len(world_classes))
            if verdicts.pop():
                value |= 1 << w
        iota.append(value)

    def op(fn, c):
        rep = elem_classes[c][0]
        return class_of[tuple(fn(i, rep[i]) for i in range(k))]

    checks = {"well_defined": True, "injective": True, "top": True, "complement": True, "meet": True, "box": True}
    counterexample = None

    def fail(name, text):
        nonlocal counterexample
        checks[name] = False
        if counterexample is None:
            counterexample = text

    if len(set(iota)) != len(iota):
        fail("injective", "two element classes share an image")
    top_class = class_of[tuple(a.top for a in algebras)]
    if iota[top_class] != target.top:
        fail("top", describe(top_class))
    for c in range(len(elem_classes)):
        if iota[op(lambda i, x: algebras[i].neg(x), c)] != target.neg(iota[c]):
            fail("complement", describe(c))
        if iota[op(lambda i, x: algebras[i].box(x), c)] != target.box(iota[c]):
            fail("box", describe(c))
        rep = elem_classes[c][0]
        for d in range(len(elem_classes)):
            other = elem_classes[d][0]
            meet = class_of[tuple(rep[i] & other[i] for i in range(k))]
            if iota[meet] != iota[c] & iota[d]:
                fail("meet", f"{describe(c)} and {describe(d)}")
                break
    return EmbeddingReport(all(checks.values()), checks, counterexample, len(elem_classes), len(world_classes))
