"""Frame-level constructions: disjoint unions, bounded morphisms, generated
subframes, principal quasi-ultraproducts, and frame corpora."""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Iterator, Sequence

from .errors import EmptyFamily, NotASubset, SizeCapExceeded
from .frames import (
    MAX_WORLDS,
    FrameClass,
    NeighborhoodFrame,
    WorldMap,
    bits,
    check_size,
    classify,
    submasks,
    upward_closure,
)

ENUMERATION_CAP = 3
PRODUCT_CAP = 4096


def disjoint_union(frames: Sequence[NeighborhoodFrame], max_worlds: int = MAX_WORLDS) -> NeighborhoodFrame:
    """Tagged disjoint union; ``U`` is a neighborhood of a world from summand
    ``i`` iff ``U`` restricted to summand ``i`` is one there."""
    if not frames:
        raise EmptyFamily("disjoint union of an empty family")
    total = sum(f.size for f in frames)
    check_size(total, max_worlds, "disjoint union")
    width = len(str(len(frames) - 1))
    worlds, offsets, predicates = [], [], {}
    for i, f in enumerate(frames):
        offsets.append(len(worlds))
        worlds.extend(f"s{i:0{width}d}_{w}" for w in f.worlds)
    for i, f in enumerate(frames):
        for name, m in f.predicates.items():
            predicates[name] = predicates.get(name, 0) | m << offsets[i]
    # every predicate is interpreted in every summand (absent = empty)
    families = []
    for i, f in enumerate(frames):
        part = f.full << offsets[i]
        for j in range(f.size):
            fam = f.families[j]
            families.append({u for u in range(1 << total) if (u & part) >> offsets[i] in fam})
    return NeighborhoodFrame.from_masks(worlds, families, predicates)


def summand_embedding(union: NeighborhoodFrame, frames: Sequence[NeighborhoodFrame], i: int) -> WorldMap:
    """The inclusion of summand ``i`` into ``disjoint_union(frames)``."""
    width = len(str(len(frames) - 1))
    f = frames[i]
    return WorldMap.from_labels(f, union, {w: f"s{i:0{width}d}_{w}" for w in f.worlds})


# --- bounded morphisms ----------------------------------------------------


def is_bounded_morphism(f: WorldMap) -> bool:
    """Forth and back, checked for every world and every subset of the codomain."""
    dom, cod = f.domain, f.codomain
    targets = list(submasks(cod.full))
    for i in range(dom.size):
        here = dom.families[i]
        there = cod.families[f.image[i]]
        for u in targets:
            if (f.preimage(u) in here) != (u in there):
                return False
    return True


def is_bounded_morphism_via_dosen(f: WorldMap) -> bool:
    """Forth condition plus: every neighborhood of ``f(w)`` contains the image
    of some neighborhood of ``w``.  Sound for monotonic domains."""
    dom, cod = f.domain, f.codomain
    for i in range(dom.size):
        here = dom.families[i]
        there = cod.families[f.image[i]]
        for u in submasks(cod.full):
            if f.preimage(u) in here and u not in there:
                return False
        images = [f.forward(m) for m in here]
        for u in there:
            if not any(img & ~u == 0 for img in images):
                return False
    return True


def restrict(frame: NeighborhoodFrame, subset: Iterable[str] | int) -> NeighborhoodFrame:
    """The subframe on ``subset`` keeping the neighborhoods that lie inside it."""
    mask = subset if isinstance(subset, int) else frame.mask(subset)
    keep = list(bits(mask))
    pos = {old: new for new, old in enumerate(keep)}

    def squeeze(m):
        return sum(1 << pos[i] for i in bits(m))

    families = [{squeeze(m) for m in frame.families[i] if m & ~mask == 0} for i in keep]
    preds = {k: squeeze(m & mask) for k, m in frame.predicates.items()}
    return NeighborhoodFrame.from_masks([frame.worlds[i] for i in keep], families, preds)


def inclusion_map(sub: NeighborhoodFrame, sup: NeighborhoodFrame) -> WorldMap:
    missing = [w for w in sub.worlds if w not in sup]
    if missing:
        raise NotASubset(f"worlds {', '.join(missing)} are not in the larger frame")
    return WorldMap.from_labels(sub, sup, {w: w for w in sub.worlds})


def is_generated_subframe(sub: NeighborhoodFrame, sup: NeighborhoodFrame) -> bool:
    return is_bounded_morphism(inclusion_map(sub, sup))


def generated_subframes(frame: NeighborhoodFrame) -> Iterator[NeighborhoodFrame]:
    """Every nonempty generated subframe, by brute force over world subsets."""
    for mask in range(1, frame.full + 1):
        sub = restrict(frame, mask)
        if is_generated_subframe(sub, frame):
            yield sub


def surjections(domain: NeighborhoodFrame, codomain: NeighborhoodFrame) -> Iterator[WorldMap]:
    if codomain.size > domain.size:
        return
    for image in itertools.product(range(codomain.size), repeat=domain.size):
        if len(set(image)) == codomain.size:
            yield WorldMap(domain, codomain, image)


# --- quasi-ultraproducts --------------------------------------------------


def principal_ultrafilter(index_count: int, principal_index: int):
    """Membership test for the principal ultrafilter on ``range(index_count)``."""
    if not 0 <= principal_index < index_count:
        raise IndexError(f"principal index {principal_index} out of range")
    return lambda J: principal_index in J


def _product_classes(frames, in_d):
    """Tuples of the product grouped into D-equivalence classes."""
    sizes = [f.size for f in frames]
    count = 1
    for s in sizes:
        count *= s
    if count > PRODUCT_CAP:
        raise SizeCapExceeded(f"product has {count} tuples, above the cap of {PRODUCT_CAP}")
    classes = []
    for t in itertools.product(*(range(s) for s in sizes)):
        for cls in classes:
            r = cls[0]
            if in_d(frozenset(i for i in range(len(t)) if t[i] == r[i])):
                cls.append(t)
                break
        else:
            classes.append([t])
    return classes


def quasi_ultraproduct(frames: Sequence[NeighborhoodFrame], principal_index: int) -> NeighborhoodFrame:
    """Quasi-ultraproduct modulo the principal ultrafilter D at ``principal_index``.

    A world is a D-class of tuples, labelled by its least representative.  A
    set ``(A_i)_{i in J}`` with ``J`` in D induces the classes ``a`` with
    ``{i in J : a(i) in A_i}`` in D.  ``U`` is a neighborhood of ``w`` iff it
    contains a set induced by some family with ``{i in J : A_i in N^i(w(i))}``
    in D.  Both conditions are read modulo D; the componentwise "for all i in
    J" reading contradicts itself once J has more than one index.
    """
    if not frames:
        raise EmptyFamily("quasi-ultraproduct of an empty family")
    if any(f.size == 0 for f in frames):
        raise ValueError("quasi-ultraproduct factors must have at least one world")
    k = len(frames)
    in_d = principal_ultrafilter(k, principal_index)
    labels, classes = quasi_ultraproduct_worlds(frames, principal_index)
    full = (1 << len(classes)) - 1
    generators = [set() for _ in classes]
    for J, choice in _inducing_families(frames, in_d):
        induced = _induced_set(classes, J, choice, in_d)
        for w, cls in enumerate(classes):
            if _holds_mod_d(frames, cls, J, choice, in_d):
                generators[w].add(induced)
    families = [upward_closure(g, full) for g in generators]
    return NeighborhoodFrame.from_masks(labels, families)


def _inducing_families(frames, in_d):
    """Every (J, (A_i)_{i in J}) with J in D."""
    k = len(frames)
    for r in range(1, k + 1):
        for J in itertools.combinations(range(k), r):
            if in_d(frozenset(J)):
                for choice in itertools.product(*(list(submasks(frames[i].full)) for i in J)):
                    yield J, choice


def _unique(verdicts):
    if len(verdicts) != 1:
        raise AssertionError("verdict depends on the representative")
    return verdicts.pop()


def _induced_set(classes, J, choice, in_d):
    out = 0
    for c, cls in enumerate(classes):
        if _unique({in_d(frozenset(i for pos, i in enumerate(J) if choice[pos] >> r[i] & 1)) for r in cls}):
            out |= 1 << c
    return out


def _holds_mod_d(frames, cls, J, choice, in_d):
    return _unique({in_d(frozenset(i for pos, i in enumerate(J) if choice[pos] in frames[i].families[r[i]]))
                    for r in cls})


def is_quasi_ultraproduct(frames: Sequence[NeighborhoodFrame], principal_index: int,
                          candidate: NeighborhoodFrame) -> bool:
    """Check the defining biconditional on every induced set, plus monotonicity."""
    from .frames import is_monotonic

    labels, classes = quasi_ultraproduct_worlds(frames, principal_index)
    if tuple(labels) != candidate.worlds or not is_monotonic(candidate):
        return False
    in_d = principal_ultrafilter(len(frames), principal_index)
    for J, choice in _inducing_families(frames, in_d):
        induced = _induced_set(classes, J, choice, in_d)
        for w, cls in enumerate(classes):
            if (induced in candidate.families[w]) != _holds_mod_d(frames, cls, J, choice, in_d):
                return False
    return True


def quasi_ultraproduct_worlds(frames: Sequence[NeighborhoodFrame], principal_index: int):
    """World labels of the quasi-ultraproduct (sorted) and, for each, its D-class of tuples."""
    k = len(frames)
    classes = _product_classes(frames, principal_ultrafilter(k, principal_index))
    labels = ["q_" + "_".join(frames[i].worlds[c[0][i]] for i in range(k)) for c in classes]
    order = sorted(range(len(classes)), key=lambda j: labels[j])
    return [labels[j] for j in order], [classes[j] for j in order]


# --- corpora ----------------------------------------------------------------

WORLD_LABELS = "abcdefghijklmnop"


def upward_closed_families(n: int) -> list[frozenset[int]]:
    """All superset-closed families of subsets of an ``n``-set (Dedekind count)."""
    full = (1 << n) - 1
    subsets = list(range(1 << n))
    out = []
    for choice in itertools.product((False, True), repeat=len(subsets)):
        fam = frozenset(m for m, keep in zip(subsets, choice) if keep)
        if all(m | (1 << i) in fam for m in fam for i in range(n)):
            out.append(fam)
    return out


def enumerate_monotonic_frames(n: int) -> Iterator[NeighborhoodFrame]:
    """Every monotonic frame on worlds ``a, b, ...`` exactly once."""
    if n > ENUMERATION_CAP:
        raise SizeCapExceeded(f"exhaustive enumeration is capped at {ENUMERATION_CAP} worlds")
    if n < 0:
        raise ValueError("world count must be non-negative")
    worlds = WORLD_LABELS[:n]
    fams = upward_closed_families(n)
    for combo in itertools.product(fams, repeat=n):
        yield NeighborhoodFrame.from_masks(tuple(worlds), combo)


def monotonic_corpus(max_n: int = 2) -> list[NeighborhoodFrame]:
    """All monotonic frames with 1..max_n worlds."""
    return [f for n in range(1, max_n + 1) for f in enumerate_monotonic_frames(n)]


def random_monotonic_frame(n: int, seed: int, target: FrameClass = FrameClass.MONOTONIC) -> NeighborhoodFrame:
    """Seeded random frame in ``target``: sample generator sets per world,
    repair toward the class, then close upward."""
    check_size(n)
    rng = random.Random(seed)
    full = (1 << n) - 1
    families = []
    for _ in range(n):
        gens = [rng.randint(0, full) for _ in range(rng.randint(0, 3))]
        if target in (FrameClass.FILTER, FrameClass.AUGMENTED_FILTER):
            gens.append(full)
        if target is FrameClass.AUGMENTED_QUASI_FILTER:
            gens = gens[:1]
        elif target is not FrameClass.MONOTONIC and gens:
            meet = full
            for g in gens:
                meet &= g
            gens = [meet]
        families.append(upward_closure(gens, full))
    frame = NeighborhoodFrame.from_masks(tuple(WORLD_LABELS[:n]), families)
    assert target in classify(frame), (target, frame)
    return frame


def bounded_morphism_counterexample(f: WorldMap) -> dict | None:
    """First world and codomain subset violating forth or back, if any."""
    dom, cod = f.domain, f.codomain
    for i in range(dom.size):
        for u in submasks(cod.full):
            pre_in = f.preimage(u) in dom.families[i]
            img_in = u in cod.families[f.image[i]]
            if pre_in != img_in:
                return {
                    "world": dom.worlds[i],
                    "image": cod.worlds[f.image[i]],
                    "set": cod.labels(u),
                    "preimage": dom.labels(f.preimage(u)),
                    "failed": "forth" if pre_in else "back",
                }
    return None
