"""Game-form assignability: WTT analysis, certificates, SAT reductions."""

from .core import (
    FILLER_NAME,
    UNDEFINED,
    Assignment,
    BoundsError,
    CapacityError,
    GameForm,
    GameFormError,
    Hyperplane,
    Line,
    NormalizationLog,
    Removal,
    assignment_from_names,
    assignment_names,
    delete_hyperplane,
    expand_assignment,
    fill_undefined,
    hyperplane_cells,
    hyperplane_values,
    line_cells,
    line_profile,
    line_values,
    normalize,
    project,
    take_subform,
)
from .analysis import (
    DominanceGraph,
    DominanceKind,
    DominanceRelation,
    InvariantViolation,
    KBox,
    NotWttError,
    WttViolation,
    backend_name,
    build_dominance_graph,
    build_dominance_graphs,
    classify_pair,
    find_k_box,
    find_sink,
    find_wtt_violation,
    is_tight_two_person,
    is_tt,
    is_wtt,
    require_wtt,
)
from .assign import AssignmentCertificate, assign_wtt, verify
from .satenc import (
    BRUTE_BUDGET_BITS,
    CnfFormula,
    emit_dimacs,
    encode,
    enumerate_models,
    flat_clauses,
    parse_dimacs,
    solve,
    solve_two_person,
)
from .hardness import (
    GadgetRecord,
    ReductionArtifact,
    ReductionLayout,
    ThreeCnf,
    check_deletion_property,
    decode,
    gadget_block,
    gen_min_outcome_nonassignable,
    reduce_full4,
    reduce_partial3,
    sequence_fixture,
)

__version__ = "0.1.0"

__all__ = [
    "FILLER_NAME",
    "UNDEFINED",
    "Assignment",
    "AssignmentCertificate",
    "BoundsError",
    "BRUTE_BUDGET_BITS",
    "CapacityError",
    "CnfFormula",
    "DominanceGraph",
    "DominanceKind",
    "DominanceRelation",
    "GadgetRecord",
    "GameForm",
    "GameFormError",
    "Hyperplane",
    "InvariantViolation",
    "KBox",
    "Line",
    "NormalizationLog",
    "NotWttError",
    "ReductionArtifact",
    "ReductionLayout",
    "Removal",
    "ThreeCnf",
    "WttViolation",
    "assign_wtt",
    "assignment_from_names",
    "assignment_names",
    "backend_name",
    "build_dominance_graph",
    "build_dominance_graphs",
    "check_deletion_property",
    "classify_pair",
    "decode",
    "gadget_block",
    "delete_hyperplane",
    "emit_dimacs",
    "encode",
    "enumerate_models",
    "expand_assignment",
    "fill_undefined",
    "find_k_box",
    "find_sink",
    "find_wtt_violation",
    "flat_clauses",
    "gen_min_outcome_nonassignable",
    "hyperplane_cells",
    "hyperplane_values",
    "is_tight_two_person",
    "is_tt",
    "is_wtt",
    "line_cells",
    "line_profile",
    "line_values",
    "normalize",
    "parse_dimacs",
    "project",
    "reduce_full4",
    "reduce_partial3",
    "require_wtt",
    "sequence_fixture",
    "solve",
    "solve_two_person",
    "take_subform",
    "verify",
]
