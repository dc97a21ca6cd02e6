"""Entanglement tests from overlaps with maximally entangled (GHZ-type) states."""

from .criteria import (
    CriterionReport,
    MesState,
    Verdict,
    assess,
    bipartite_pure_max_overlap,
    canonical_mes,
    flip_operator,
    is_ppt,
    mes_criterion,
    npt_survey,
    overlap,
    product_split_mes,
    pure_diagonal_sum_check,
    purity_entanglement_check,
    schmidt_decompose,
)
from .maximizer import MaximizationResult, OptimizerConfig, exhaustive_search_oracle, maximize, objective
from .tensor import (
    Bipartition,
    DensityMatrix,
    PureState,
    StateError,
    SystemShape,
    hermitian_eigenvalues,
    kron,
    matricize,
    partial_trace,
    partial_transpose,
)

__version__ = "0.1.0"
