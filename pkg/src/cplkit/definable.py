"""Algebras of A-definable subsets, their 1-types, and the essential part."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .frames import MAX_WORLDS, NeighborhoodFrame, bits, check_size
from .syntax.cpl import And, Box, Const, Eq, Not, Pred, Var, all_vars, fresh_var, substitute

FREE = "x"


@dataclass(frozen=True)
class DefAlgebra:
    """Def(F/A): elements map a subset mask to one witness formula in the free
    variable ``x``.  Equality of elements is set equality."""

    frame: NeighborhoodFrame
    params: int
    elements: dict

    def __contains__(self, mask: int) -> bool:
        return mask in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def witness(self, mask: int):
        return self.elements[mask]

    def box(self, mask: int) -> int:
        return self.frame.box_set(mask)

    def carrier(self) -> list[int]:
        return sorted(self.elements)

    def atoms(self) -> list[int]:
        """Minimal nonempty elements, ordered by their least world."""
        nonzero = [m for m in self.elements if m]
        out = [m for m in nonzero if not any(o != m and o & m == o for o in nonzero)]
        return sorted(out, key=lambda m: (m & -m).bit_length())

    def is_subalgebra(self) -> bool:
        """Closure under complement, intersection and box, checked directly."""
        full = self.frame.full
        if 0 not in self or full not in self:
            return False
        els = list(self.elements)
        for x in els:
            if full & ~x not in self or self.box(x) not in self:
                return False
            if any(x & y not in self for y in els):
                return False
        return True


def build_def_algebra(frame: NeighborhoodFrame, params: Iterable[str] = ()) -> DefAlgebra:
    """Least family containing the parameter singletons, predicate extensions,
    the empty and full sets, closed under complement, meet and box."""
    check_size(frame.size, MAX_WORLDS)
    params = frame.mask(params)
    full = frame.full
    x = Var(FREE)
    elements: dict[int, object] = {}
    frontier: list[int] = []

    def add(mask, witness):
        if mask not in elements:
            elements[mask] = witness
            frontier.append(mask)

    add(0, Not(Eq(x, x)))
    add(full, Eq(x, x))
    for i in bits(params):
        add(1 << i, Eq(x, Const(frame.worlds[i])))
    for name in sorted(frame.predicates):
        add(frame.predicates[name], Pred(name, (x,)))

    while frontier:
        generation, frontier = frontier, []
        for mask in generation:
            phi = elements[mask]
            add(full & ~mask, Not(phi))
            y = fresh_var("y", all_vars(phi) | {FREE})
            add(frame.box_set(mask), Box(x, y, substitute(phi, FREE, Var(y))))
            for other in list(elements):
                add(mask & other, And(phi, elements[other]))
    return DefAlgebra(frame, params, elements)


@dataclass(frozen=True)
class TypePoint:
    """An ultrafilter of a finite DefAlgebra, held as its atom."""

    algebra: DefAlgebra
    atom: int

    def members(self) -> list[int]:
        return [m for m in self.algebra.carrier() if m & self.atom == self.atom]

    def __contains__(self, mask: int) -> bool:
        return mask in self.algebra and mask & self.atom == self.atom

    def is_ultrafilter(self) -> bool:
        """Upward closed, meet closed, proper and prime inside the algebra."""
        alg = self.algebra
        full = alg.frame.full
        members = set(self.members())
        if 0 in members or full not in members:
            return False
        for m in members:
            if any(o & m == m and o not in members for o in alg.elements):
                return False
            if any(m & o not in members for o in members):
                return False
        return all((m in members) != (full & ~m in members) for m in alg.elements)

    def realizers(self) -> list[str]:
        return self.algebra.frame.labels(self.atom)


def tp(frame: NeighborhoodFrame, world: str, params: Iterable[str] = (),
       algebra: DefAlgebra | None = None) -> TypePoint:
    """The type of ``world`` over the parameters: the definable sets containing it."""
    alg = algebra or build_def_algebra(frame, params)
    i = frame.index(world)
    atom = frame.full
    for m in alg.elements:
        if m >> i & 1:
            atom &= m
    return TypePoint(alg, atom)


def type_space(algebra: DefAlgebra) -> list[TypePoint]:
    return [TypePoint(algebra, a) for a in algebra.atoms()]


def essential_part(frame: NeighborhoodFrame) -> NeighborhoodFrame:
    """Keep only neighborhoods that are definable with every world as a parameter."""
    alg = build_def_algebra(frame, frame.worlds)
    return frame.with_families([frozenset(m for m in fam if m in alg) for fam in frame.families])
