"""Finite neighborhood frames, the five Table-1 frame classes, and frame I/O.

Subsets of worlds are int bitmasks over the frame's world order, which is
always lexicographic by label: bit ``i`` is ``frame.worlds[i]``.  A
neighborhood family is a frozenset of such masks.  Nothing here closes a
family upward implicitly; monotonicity is a checked property.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import FrameFormatError, SizeCapExceeded

MAX_WORLDS = 16


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int) -> Iterator[int]:
    """Every subset of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def supersets(mask: int, full: int) -> Iterator[int]:
    free = full & ~mask
    for extra in submasks(free):
        yield mask | extra


class FrameClass(enum.Enum):
    MONOTONIC = "monotonic"
    QUASI_FILTER = "quasi-filter"
    AUGMENTED_QUASI_FILTER = "augmented-quasi-filter"
    FILTER = "filter"
    AUGMENTED_FILTER = "augmented-filter"

    @classmethod
    def parse(cls, text: str) -> "FrameClass":
        key = text.strip().lower().replace("_", "-")
        aliases = {"aqf": "augmented-quasi-filter", "af": "augmented-filter", "qf": "quasi-filter"}
        key = aliases.get(key, key)
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown frame class {text!r}")


# Table-1 order, used whenever classes are listed.
CLASS_ORDER = tuple(FrameClass)


class NeighborhoodFrame:
    """An immutable finite neighborhood frame with optional unary predicates.

    ``neighborhoods`` maps each world label to an iterable of subsets (each an
    iterable of labels); ``predicates`` maps a predicate name to a subset.
    """

    __slots__ = ("_worlds", "_index", "_families", "_predicates")

    def __init__(self, worlds: Iterable[str], neighborhoods: Mapping[str, Iterable[Iterable[str]]] | None = None,
                 predicates: Mapping[str, Iterable[str]] | None = None):
        worlds = list(worlds)
        for w in worlds:
            if not isinstance(w, str) or not w:
                raise FrameFormatError(f"world labels must be non-empty strings, got {w!r}")
        if len(set(worlds)) != len(worlds):
            dup = sorted(w for w in set(worlds) if worlds.count(w) > 1)
            raise FrameFormatError(f"duplicate world label(s): {', '.join(dup)}")
        ordered = tuple(sorted(worlds))
        index = {w: i for i, w in enumerate(ordered)}
        neighborhoods = dict(neighborhoods or {})
        for w in neighborhoods:
            if w not in index:
                raise FrameFormatError(f"neighborhoods given for unknown world {w!r}")
        families = []
        for w in ordered:
            family = set()
            for subset in neighborhoods.get(w, ()):
                mask = _mask_from_labels(subset, index, f"a neighborhood of world {w!r}")
                if mask in family:
                    raise FrameFormatError(f"duplicate neighborhood set for world {w!r}")
                family.add(mask)
            families.append(frozenset(family))
        preds = {}
        for name, subset in (predicates or {}).items():
            preds[name] = _mask_from_labels(subset, index, f"predicate {name!r}")
        self._init(ordered, index, tuple(families), preds)

    def _init(self, worlds, index, families, predicates):
        object.__setattr__(self, "_worlds", worlds)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_families", families)
        object.__setattr__(self, "_predicates", tuple(sorted(predicates.items())))

    @classmethod
    def from_masks(cls, worlds: Iterable[str], families: Iterable[Iterable[int]],
                   predicates: Mapping[str, int] | None = None) -> "NeighborhoodFrame":
        """Build from bitmask families over ``worlds`` taken in the given order.

        The result is re-indexed to lexicographic order when needed.
        """
        worlds = tuple(worlds)
        families = [frozenset(f) for f in families]
        if len(families) != len(worlds):
            raise FrameFormatError("one neighborhood family per world is required")
        ordered = tuple(sorted(worlds))
        if ordered != worlds:
            labels = lambda m: [worlds[i] for i in bits(m)]
            return cls(worlds, {w: [labels(m) for m in fam] for w, fam in zip(worlds, families)},
                       {k: labels(m) for k, m in (predicates or {}).items()})
        if len(set(worlds)) != len(worlds) or not all(isinstance(w, str) and w for w in worlds):
            raise FrameFormatError("world labels must be distinct non-empty strings")
        full = (1 << len(worlds)) - 1
        for fam in families:
            if any(m & ~full or m < 0 for m in fam):
                raise FrameFormatError("neighborhood mask refers to an unlisted world")
        self = cls.__new__(cls)
        self._init(worlds, {w: i for i, w in enumerate(worlds)}, tuple(families), dict(predicates or {}))
        return self

    def __setattr__(self, name, value):
        raise AttributeError("NeighborhoodFrame is immutable")

    def __reduce__(self):
        return (NeighborhoodFrame.from_masks, (self._worlds, self._families, dict(self._predicates)))

    # --- basic accessors -------------------------------------------------

    @property
    def worlds(self) -> tuple[str, ...]:
        return self._worlds

    @property
    def families(self) -> tuple[frozenset[int], ...]:
        return self._families

    @property
    def predicates(self) -> dict[str, int]:
        return dict(self._predicates)

    @property
    def size(self) -> int:
        return len(self._worlds)

    @property
    def full(self) -> int:
        return (1 << len(self._worlds)) - 1

    def index(self, label: str) -> int:
        return self._index[label]

    def __contains__(self, label) -> bool:
        return label in self._index

    def mask(self, labels: Iterable[str]) -> int:
        return _mask_from_labels(labels, self._index, "subset")

    def labels(self, mask: int) -> list[str]:
        return [self._worlds[i] for i in bits(mask)]

    def family(self, label: str) -> frozenset[int]:
        return self._families[self._index[label]]

    def is_neighborhood(self, world: int, mask: int) -> bool:
        return mask in self._families[world]

    def neighborhood_sets(self, label: str) -> list[frozenset[str]]:
        return [frozenset(self.labels(m)) for m in sorted(self.family(label))]

    def box_set(self, mask: int) -> int:
        """Worlds having ``mask`` as a neighborhood."""
        out = 0
        for i, fam in enumerate(self._families):
            if mask in fam:
                out |= 1 << i
        return out

    def with_families(self, families) -> "NeighborhoodFrame":
        return NeighborhoodFrame.from_masks(self._worlds, families, dict(self._predicates))

    def _key(self):
        return (self._worlds, self._families, self._predicates)

    def __eq__(self, other):
        if not isinstance(other, NeighborhoodFrame):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        parts = []
        for w in self._worlds:
            sets = ["{" + ",".join(s) + "}" for s in (self.labels(m) for m in sorted_masks(self.family(w), self._worlds))]
            parts.append(f"{w}: [{', '.join(sets)}]")
        return f"NeighborhoodFrame({'; '.join(parts)})"


def _mask_from_labels(labels, index, what) -> int:
    if isinstance(labels, str):
        raise FrameFormatError(f"{what} must be a list of world labels, got a string")
    mask = 0
    for label in labels:
        if label not in index:
            raise FrameFormatError(f"{what} mentions unknown world {label!r}")
        mask |= 1 << index[label]
    return mask


def sorted_masks(masks: Iterable[int], worlds: tuple[str, ...]) -> list[int]:
    """Canonical output order: by the sorted label list of each set."""
    return sorted(masks, key=lambda m: [worlds[i] for i in bits(m)])


def check_size(n: int, cap: int = MAX_WORLDS, what: str = "frame") -> None:
    if n > cap:
        raise SizeCapExceeded(f"{what} has {n} worlds, above the cap of {cap}")


# --- Table-1 classification ---------------------------------------------


def is_upward_closed(family: frozenset[int], full: int) -> bool:
    for m in family:
        for i in bits(full & ~m):
            if m | (1 << i) not in family:
                return False
    return True


def is_meet_closed(family: frozenset[int]) -> bool:
    # pairwise closure gives closure under all nonempty finite meets
    return all(a & b in family for a, b in itertools.combinations(family, 2))


def principal_generator(family: frozenset[int], full: int) -> int | None:
    """The generator ``U0`` when ``family`` is the principal upset of ``U0``."""
    if not family:
        return None
    gen = full
    for m in family:
        gen &= m
    if gen in family and len(family) == 1 << (popcount(full) - popcount(gen)):
        return gen
    return None


def classify(frame: NeighborhoodFrame) -> set[FrameClass]:
    """The Table-1 classes ``frame`` belongs to.

    Every class in the table is a class of monotonic frames, so a frame that
    is not superset-closed belongs to none of them.
    """
    full = frame.full
    fams = frame.families
    monotonic = all(is_upward_closed(f, full) for f in fams)
    out = set()
    if not monotonic:
        return out
    out.add(FrameClass.MONOTONIC)
    if all(is_meet_closed(f) for f in fams):
        out.add(FrameClass.QUASI_FILTER)
        if all(fams):
            out.add(FrameClass.FILTER)
    principal = [principal_generator(f, full) is not None for f in fams]
    if all(p or not f for p, f in zip(principal, fams)):
        out.add(FrameClass.AUGMENTED_QUASI_FILTER)
    if all(principal):
        out.add(FrameClass.AUGMENTED_FILTER)
    return out


def class_names(classes: Iterable[FrameClass]) -> list[str]:
    classes = set(classes)
    return [c.value for c in CLASS_ORDER if c in classes]


def is_monotonic(frame: NeighborhoodFrame) -> bool:
    return all(is_upward_closed(f, frame.full) for f in frame.families)


def upward_closure(family: Iterable[int], full: int) -> frozenset[int]:
    out = set()
    for m in family:
        if m not in out:
            out.update(supersets(m, full))
    return frozenset(out)


def monotonic_closure(frame: NeighborhoodFrame) -> NeighborhoodFrame:
    return frame.with_families([upward_closure(f, frame.full) for f in frame.families])


# --- world maps and isomorphism -----------------------------------------


@dataclass(frozen=True)
class WorldMap:
    domain: NeighborhoodFrame
    codomain: NeighborhoodFrame
    image: tuple[int, ...]  # image[i] = index in codomain of domain.worlds[i]

    def __post_init__(self):
        if len(self.image) != self.domain.size:
            raise ValueError("a world map must be total on the domain")
        if any(not 0 <= j < self.codomain.size for j in self.image):
            raise ValueError("world map sends a world outside the codomain")

    @classmethod
    def from_labels(cls, domain, codomain, mapping: Mapping[str, str]) -> "WorldMap":
        missing = [w for w in domain.worlds if w not in mapping]
        if missing:
            raise ValueError(f"world map undefined on {', '.join(missing)}")
        for w, v in mapping.items():
            if w not in domain:
                raise ValueError(f"{w!r} is not a world of the domain")
            if v not in codomain:
                raise ValueError(f"{v!r} is not a world of the codomain")
        return cls(domain, codomain, tuple(codomain.index(mapping[w]) for w in domain.worlds))

    def as_labels(self) -> dict[str, str]:
        return {w: self.codomain.worlds[j] for w, j in zip(self.domain.worlds, self.image)}

    def preimage(self, mask: int) -> int:
        out = 0
        for i, j in enumerate(self.image):
            if mask >> j & 1:
                out |= 1 << i
        return out

    def forward(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self.image[i]
        return out

    def is_surjective(self) -> bool:
        return len(set(self.image)) == self.codomain.size


def all_world_maps(domain: NeighborhoodFrame, codomain: NeighborhoodFrame) -> Iterator[WorldMap]:
    for image in itertools.product(range(codomain.size), repeat=domain.size):
        yield WorldMap(domain, codomain, image)


def _permute(mask: int, perm) -> int:
    out = 0
    for i in bits(mask):
        out |= 1 << perm[i]
    return out


def find_isomorphism(f: NeighborhoodFrame, g: NeighborhoodFrame, max_worlds: int = 8) -> dict[str, str] | None:
    """A label bijection ``f -> g`` preserving neighborhoods and predicates, or None."""
    if f.size != g.size or sorted(f.predicates) != sorted(g.predicates):
        return None
    check_size(f.size, max_worlds, "isomorphism search")
    n = f.size

    def signature(frame, i):
        fam = frame.families[i]
        preds = tuple(bool(m >> i & 1) for _, m in sorted(frame.predicates.items()))
        return (len(fam), tuple(sorted(popcount(m) for m in fam)), 0 in fam, preds)

    fsig = [signature(f, i) for i in range(n)]
    gsig = [signature(g, i) for i in range(n)]
    if sorted(fsig) != sorted(gsig):
        return None
    fpreds, gpreds = f.predicates, g.predicates
    perm = [None] * n
    used = [False] * n

    def consistent():
        p = tuple(perm)
        for i in range(n):
            if {_permute(m, p) for m in f.families[i]} != g.families[p[i]]:
                return False
        return all(_permute(fpreds[k], p) == gpreds[k] for k in fpreds)

    def search(i):
        if i == n:
            return consistent()
        for j in range(n):
            if not used[j] and fsig[i] == gsig[j]:
                perm[i], used[j] = j, True
                if search(i + 1):
                    return True
                used[j] = False
        perm[i] = None
        return False

    if search(0):
        return {f.worlds[i]: g.worlds[perm[i]] for i in range(n)}
    return None


def are_isomorphic(f: NeighborhoodFrame, g: NeighborhoodFrame) -> bool:
    return find_isomorphism(f, g) is not None


# --- JSON ------------------------------------------------------------------


def frame_to_dict(frame: NeighborhoodFrame) -> dict:
    worlds = frame.worlds
    return {
        "worlds": list(worlds),
        "neighborhoods": {w: [frame.labels(m) for m in sorted_masks(frame.family(w), worlds)] for w in worlds},
        "predicates": {k: frame.labels(m) for k, m in sorted(frame.predicates.items())},
    }


def frame_to_json(frame: NeighborhoodFrame) -> str:
    return json.dumps(frame_to_dict(frame), ensure_ascii=False)


def frame_from_dict(data) -> NeighborhoodFrame:
    if not isinstance(data, dict) or "worlds" not in data:
        raise FrameFormatError("a frame file is an object with a 'worlds' array")
    unknown = set(data) - {"worlds", "neighborhoods", "predicates"}
    if unknown:
        raise FrameFormatError(f"unexpected key(s) in frame file: {', '.join(sorted(unknown))}")
    worlds = data["worlds"]
    nbhds = data.get("neighborhoods", {})
    preds = data.get("predicates", {})
    if not isinstance(worlds, list) or not isinstance(nbhds, dict) or not isinstance(preds, dict):
        raise FrameFormatError("malformed frame file")
    for w, fam in nbhds.items():
        if not isinstance(fam, list) or not all(isinstance(s, list) for s in fam):
            raise FrameFormatError(f"neighborhoods of world {w!r} must be a list of lists")
        seen = set()
        for s in fam:
            key = frozenset(s)
            if len(key) != len(s):
                raise FrameFormatError(f"repeated label inside a neighborhood of world {w!r}")
            if key in seen:
                raise FrameFormatError(f"duplicate set in the neighborhoods of world {w!r}")
            seen.add(key)
    return NeighborhoodFrame(worlds, nbhds, preds)


def frame_from_json(text: str) -> NeighborhoodFrame:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FrameFormatError(f"invalid JSON: {exc}") from exc
    return frame_from_dict(data)


def load_frame(path) -> NeighborhoodFrame:
    with open(path, encoding="utf-8") as fh:
        return frame_from_json(fh.read())
