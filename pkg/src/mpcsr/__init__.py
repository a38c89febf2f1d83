"""Max-plus linear algebra: CSR structure of inhomogeneous matrix products."""

from .bounds import (
    AssumptionError,
    BoundReport,
    ValueCheckReport,
    WeakBoundResult,
    ambient_csr_bound,
    schwarz,
    turnpike_value_check,
    weak_csr_bound,
    wielandt,
)
from .counterexamples import (
    FAMILY_IDS,
    Family,
    build_family,
    transient_nonexistence_scan,
    verify_family,
)
from .csr import (
    CsrCheck,
    CsrTerms,
    RankFactors,
    csr_critical_projections,
    csr_product,
    csr_terms,
    is_csr,
    periodicity_threshold,
    rank_compress,
    structure_matrix,
)
from .digraph import (
    CriticalStructure,
    WeightedDigraph,
    critical_graph,
    cyclic_classes,
    cyclicity,
    is_irreducible,
    max_cycle_mean,
    strongly_connected_components,
)
from .ensemble import (
    AssumptionReport,
    Ensemble,
    EnsembleError,
    PathWeights,
    build_ensemble,
    check_assumptions,
    path_weights,
    u_k,
)
from .semiring import (
    EPS,
    DivergenceError,
    MaxPlusMatrix,
    ShapeError,
    entrywise_inf,
    entrywise_sup,
    kleene_star,
    metric_matrix,
    mp_multiply,
    mp_power,
    scalar_add,
    scalar_mul,
)
from .trellis import (
    TrellisWeights,
    WalkLengthReport,
    Word,
    first_passage_weights,
    gamma_product,
    optimal_walk_lengths,
)

__version__ = "0.1.0"

__all__ = [
    "AssumptionError",
    "AssumptionReport",
    "BoundReport",
    "CriticalStructure",
    "CsrCheck",
    "CsrTerms",
    "DivergenceError",
    "EPS",
    "Ensemble",
    "EnsembleError",
    "FAMILY_IDS",
    "Family",
    "MaxPlusMatrix",
    "PathWeights",
    "RankFactors",
    "ShapeError",
    "TrellisWeights",
    "ValueCheckReport",
    "WalkLengthReport",
    "WeakBoundResult",
    "WeightedDigraph",
    "Word",
    "ambient_csr_bound",
    "build_ensemble",
    "build_family",
    "check_assumptions",
    "critical_graph",
    "csr_critical_projections",
    "csr_product",
    "csr_terms",
    "cyclic_classes",
    "cyclicity",
    "entrywise_inf",
    "entrywise_sup",
    "first_passage_weights",
    "gamma_product",
    "is_csr",
    "is_irreducible",
    "kleene_star",
    "max_cycle_mean",
    "metric_matrix",
    "mp_multiply",
    "mp_power",
    "optimal_walk_lengths",
    "path_weights",
    "periodicity_threshold",
    "rank_compress",
    "scalar_add",
    "scalar_mul",
    "schwarz",
    "strongly_connected_components",
    "structure_matrix",
    "transient_nonexistence_scan",
    "turnpike_value_check",
    "u_k",
    "verify_family",
    "weak_csr_bound",
    "wielandt",
]
