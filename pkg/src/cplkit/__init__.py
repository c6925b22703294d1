"""Coalgebraic predicate logic, monotonic modal logic and their algebraic duals
over finite neighborhood frames."""

from .errors import (
    ClassMismatch, CplkitError, EmptyFamily, FrameFormatError, NotASubset, NotMonotonic, ParseError,
    SizeCapExceeded, SortError, UnboundVariable, UnknownConstant, UnknownPredicate, UnknownProposition,
)
from .frames import (
    FrameClass, NeighborhoodFrame, WorldMap, are_isomorphic, classify, find_isomorphism, frame_from_json,
    frame_to_json, load_frame, monotonic_closure,
)
from .topology import FiniteTopology, from_topology, specialization_preorder
from .constructions import (
    disjoint_union, enumerate_monotonic_frames, is_bounded_morphism, is_bounded_morphism_via_dosen,
    is_generated_subframe, quasi_ultraproduct, random_monotonic_frame,
)
from .semantics import eval_cpl, eval_modal_nbhd, eval_modal_top, frame_valid, frame_valid_at
from .definable import DefAlgebra, TypePoint, build_def_algebra, essential_part, tp
from .translation import (
    TwoSortedStructure, check_translation_equivalence, eval_fol2, full_powerset_structure, translate2,
)
from .algebra import (
    FiniteBam, bam_valid, canonical_extension, complex_algebra, dual_map, ultrafilter_extension,
    ultrafilter_frame, ultrafilters, ultraproduct_embedding, verify_duality,
)
from .correspondence import (
    accessibility_relation, builtin_pairs, check_class_sentence, check_local_correspondence, gt_closure_check,
    lookup,
)

__version__ = "0.1.0"
