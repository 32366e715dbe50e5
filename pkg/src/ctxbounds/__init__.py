"""Bounds of non-contextual inequalities on context hypergraphs.

Exact classical and generalized-probabilistic bounds, a certified spectral
(Lovász theta) bound, projector-model verification, and the robustness
calculus for finite-precision tests of contextuality.
"""

from .classical import (
    ClassicalBoundResult,
    DeterministicAssignment,
    InstanceTooLargeError,
    beta_classical,
    bks_equality_deficit,
    enumerate_nc_assignments,
    is_nc_assignment,
)
from .hypergraph import (
    ContextHypergraph,
    ExclusivityGraph,
    Finding,
    HypergraphFormatError,
    ValidationReport,
    context_multiplicities,
    emit_hypergraph,
    exclusivity_graph,
    load_hypergraph,
    parse_hypergraph,
    validate,
)
from .instances import build_instance, cycle_instance, kcbs_pentagon, peres_mermin_24
from .lp import (
    FractionalAssignment,
    GeneralBoundResult,
    beta_general,
    beta_general_dual,
    check_fractional,
)
from .onc import (
    CollapsedModel,
    FiniteHVModel,
    HVModelFormatError,
    ONCReport,
    collapse,
    critical_epsilon,
    default_context_choice,
    emit_hv_model,
    epsilon_slope,
    expectations,
    load_hv_model,
    parse_hv_model,
    collapse_margins,
    repeatability_bound,
    robust_bound,
    sample_onc,
    validate_onc,
)
from .quantum import (
    DimensionMismatchError,
    EffectAssignment,
    QuantumModel,
    QuantumModelFormatError,
    QuantumState,
    emit_quantum_model,
    load_quantum_model,
    max_quantum_value,
    operator_norm_distance,
    parse_quantum_model,
    quantum_value,
    random_pure_state,
    state_from_vector,
    verify_epsilon_precise,
    verify_quantum_model,
)
from .report import (
    BoundsReport,
    compute_bounds_report,
    render_report_json,
    render_report_text,
    report_from_json_dict,
    report_to_json_dict,
)
from .theta import QuantumBoundResult, lovasz_theta

__version__ = "0.1.0"

__all__ = [
    "BoundsReport",
    "ClassicalBoundResult",
    "CollapsedModel",
    "ContextHypergraph",
    "DeterministicAssignment",
    "DimensionMismatchError",
    "EffectAssignment",
    "ExclusivityGraph",
    "Finding",
    "FiniteHVModel",
    "FractionalAssignment",
    "GeneralBoundResult",
    "HVModelFormatError",
    "HypergraphFormatError",
    "InstanceTooLargeError",
    "ONCReport",
    "QuantumBoundResult",
    "QuantumModel",
    "QuantumModelFormatError",
    "QuantumState",
    "ValidationReport",
    "beta_classical",
    "beta_general",
    "beta_general_dual",
    "bks_equality_deficit",
    "build_instance",
    "check_fractional",
    "collapse",
    "compute_bounds_report",
    "context_multiplicities",
    "critical_epsilon",
    "cycle_instance",
    "default_context_choice",
    "emit_hv_model",
    "emit_hypergraph",
    "emit_quantum_model",
    "enumerate_nc_assignments",
    "epsilon_slope",
    "exclusivity_graph",
    "expectations",
    "is_nc_assignment",
    "kcbs_pentagon",
    "load_hv_model",
    "load_hypergraph",
    "load_quantum_model",
    "lovasz_theta",
    "max_quantum_value",
    "operator_norm_distance",
    "parse_hv_model",
    "parse_hypergraph",
    "parse_quantum_model",
    "peres_mermin_24",
    "collapse_margins",
    "quantum_value",
    "random_pure_state",
    "render_report_json",
    "render_report_text",
    "repeatability_bound",
    "report_from_json_dict",
    "report_to_json_dict",
    "robust_bound",
    "sample_onc",
    "state_from_vector",
    "validate",
    "validate_onc",
    "verify_epsilon_precise",
    "verify_quantum_model",
]
