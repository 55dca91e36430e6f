"""Gentle quivers: the derived invariant, reflections, and the class A and
A-tilde normal forms."""

from .classification import (
    ClassDecompositionA,
    ClassDecompositionAtilde,
    Classification,
    ClusterType,
    Equivalence,
    GorensteinDimension,
    classify,
    decompose_class_A,
    decompose_class_A_tilde,
    derived_equivalent,
    gorenstein_dimension,
)
from .dsl import DslError, QuiverDocument, emit_dsl, parse_dsl
from .errors import InvariantBreach, QuiverError
from .normalization import normalize, normalize_A, normalize_A_tilde, verify_trace
from .quiver import (
    Arrow,
    GentleQuiver,
    NotGentleError,
    QuiverWithRelations,
    Relation,
    opposite,
    validate_gentle,
)
from .threads import AagInvariant, aag_invariant, build_thread_system, check_sum_identities
from .transforms import (
    RewriteStep,
    RewriteTrace,
    complete_relations,
    coreflect,
    isolated_relations,
    model_of,
    reflect,
    standard_model,
    triangles,
)

__version__ = "0.1.0"
