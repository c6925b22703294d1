"""Finite topological spaces and their neighborhood frames ``X*``."""

from __future__ import annotations

import itertools
import json
from typing import Iterable

from .errors import FrameFormatError
from .frames import NeighborhoodFrame, bits, check_size, submasks


class FiniteTopology:
    """A finite space given by its open sets (bitmasks over sorted points)."""

    __slots__ = ("points", "opens", "_index")

    def __init__(self, points: Iterable[str], opens: Iterable[Iterable[str]]):
        points = list(points)
        if len(set(points)) != len(points) or not all(isinstance(p, str) and p for p in points):
            raise FrameFormatError("topology points must be distinct non-empty labels")
        self.points = tuple(sorted(points))
        self._index = {p: i for i, p in enumerate(self.points)}
        masks = set()
        for o in opens:
            if isinstance(o, str):
                raise FrameFormatError("each open set must be a list of points")
            m = 0
            for p in o:
                if p not in self._index:
                    raise FrameFormatError(f"open set mentions unknown point {p!r}")
                m |= 1 << self._index[p]
            masks.add(m)
        self.opens = frozenset(masks)
        full = self.full
        if 0 not in self.opens or full not in self.opens:
            raise FrameFormatError("a topology must contain the empty set and the whole space")
        for a, b in itertools.combinations(self.opens, 2):
            if a | b not in self.opens or a & b not in self.opens:
                raise FrameFormatError("open sets must be closed under union and intersection")

    @classmethod
    def from_masks(cls, points, masks) -> "FiniteTopology":
        points = tuple(points)
        return cls(points, [[points[i] for i in bits(m)] for m in masks])

    @property
    def full(self) -> int:
        return (1 << len(self.points)) - 1

    def mask(self, labels) -> int:
        return sum(1 << self._index[p] for p in set(labels))

    def labels(self, mask: int) -> list[str]:
        return [self.points[i] for i in bits(mask)]

    def interior(self, mask: int) -> int:
        out = 0
        for o in self.opens:
            if o & ~mask == 0:
                out |= o
        return out

    def closure(self, mask: int) -> int:
        return self.full & ~self.interior(self.full & ~mask)

    def __eq__(self, other):
        return isinstance(other, FiniteTopology) and (self.points, self.opens) == (other.points, other.opens)

    def __hash__(self):
        return hash((self.points, self.opens))

    def __repr__(self):
        opens = sorted(("{" + ",".join(self.labels(o)) + "}" for o in self.opens), key=lambda s: (len(s), s))
        return f"FiniteTopology({list(self.points)}, opens={opens})"


def discrete(points: Iterable[str]) -> FiniteTopology:
    points = sorted(points)
    return FiniteTopology.from_masks(points, range(1 << len(points)))


def indiscrete(points: Iterable[str]) -> FiniteTopology:
    points = sorted(points)
    return FiniteTopology.from_masks(points, [0, (1 << len(points)) - 1])


def sierpinski() -> FiniteTopology:
    return FiniteTopology(["a", "b"], [[], ["a"], ["a", "b"]])


def from_topology(top: FiniteTopology) -> NeighborhoodFrame:
    """``X*``: a set is a neighborhood of ``w`` iff ``w`` lies in its interior."""
    n = len(top.points)
    check_size(n)
    families = [set() for _ in range(n)]
    for u in submasks(top.full):
        for i in bits(top.interior(u)):
            families[i].add(u)
    return NeighborhoodFrame.from_masks(top.points, families)


def topology_of_frame(frame: NeighborhoodFrame) -> FiniteTopology | None:
    """Recover ``X`` from a frame of the form ``X*``; None when the frame is not one."""
    opens = [u for u in submasks(frame.full) if all(u in frame.families[i] for i in bits(u))]
    try:
        top = FiniteTopology.from_masks(frame.worlds, opens)
    except FrameFormatError:
        return None
    if from_topology(top).families != frame.families:
        return None
    return top


def is_topological(frame: NeighborhoodFrame) -> bool:
    return topology_of_frame(frame) is not None


def specialization_preorder(top: FiniteTopology) -> set[tuple[str, str]]:
    """Pairs ``(x, y)`` with ``x`` in the closure of ``{y}``."""
    rel = set()
    for j, y in enumerate(top.points):
        cl = top.closure(1 << j)
        for i in bits(cl):
            rel.add((top.points[i], y))
    return rel


def is_discrete(top: FiniteTopology) -> bool:
    return all(1 << i in top.opens for i in range(len(top.points)))


def enumerate_topologies(n: int, labels: str = "abcdefgh"):
    """All topologies on the first ``n`` labels (brute force, intended for n <= 4)."""
    check_size(n, 4, "topology enumeration")
    points = list(labels[:n])
    full = (1 << n) - 1
    middle = [m for m in range(1 << n) if m not in (0, full)]
    for choice in itertools.product((False, True), repeat=len(middle)):
        opens = {0, full} | {m for m, keep in zip(middle, choice) if keep}
        if all(a | b in opens and a & b in opens for a, b in itertools.combinations(opens, 2)):
            yield FiniteTopology.from_masks(points, opens)


def topology_to_json(top: FiniteTopology) -> str:
    opens = sorted((top.labels(o) for o in top.opens))
    return json.dumps({"points": list(top.points), "opens": opens}, ensure_ascii=False)


def topology_from_json(text: str) -> FiniteTopology:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FrameFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or set(data) != {"points", "opens"}:
        raise FrameFormatError("a topology file has exactly the keys 'points' and 'opens'")
    seen = set()
    for o in data["opens"]:
        key = frozenset(o)
        if key in seen:
            raise FrameFormatError(f"duplicate open set {sorted(key)}")
        seen.add(key)
    return FiniteTopology(data["points"], data["opens"])


def load_topology(path) -> FiniteTopology:
    with open(path, encoding="utf-8") as fh:
        return topology_from_json(fh.read())
