"""Lossless spectral signal processing on directed graphs.

A shift operator of a directed graph rarely has an orthogonal eigenbasis,
so the classical graph Fourier transform does not apply. This package
factors the operator into an orthogonal part and a symmetric positive
semidefinite part, expands signals against both eigenbases at once, and
gets back an exactly invertible, norm-preserving transform together with
entrywise spectral filters, perturbation diagnostics, and a multi-factor
generalization.
"""

__version__ = "0.1.0"

from .errors import (
    AssumptionError,
    DgspError,
    DimensionError,
    FilterEvaluationError,
    NumericalError,
    ParseError,
    PreconditionError,
    TractabilityError,
    UndefinedMetricError,
    ValidationError,
)
from .filters import (
    bandpass_mask,
    convolve,
    denoise,
    hadamard,
    kernel_power,
    rmse,
    scalar_filter,
    shift_kernel,
)
from .graph import (
    Digraph,
    Edge,
    ShiftKind,
    adjacency_matrix,
    directed_cycle,
    load_edge_list,
    orient_random_edges,
    save_edge_list,
    shift_operator,
    undirected_cycle,
)
from .linalg import (
    EigenPairs,
    PolarFactors,
    SvdFactors,
    eig_hermitian,
    eig_normal,
    eig_unitary,
    frobenius_norm,
    is_non_derogatory,
    operator_norm,
    polar_decompose,
    svd,
)
from .multifactor import (
    FactorChain,
    from_factors,
    from_polar,
    from_reverse_polar,
    multi_align,
    multi_forward,
    multi_inverse,
)
from .perturb import (
    PerturbationReport,
    continuity_experiment,
    filter_distance,
    filter_operator_matrix,
    pm_poly,
    transform_distance,
    transform_operator_matrix,
)
from .spectrum import (
    SpectralBasis,
    align_bases,
    alignment_distance,
    build_basis,
    coupling,
    diagonal_energy_fraction,
    forward,
    forward_matrix_form,
    gft_classical,
    inverse,
)

__all__ = [name for name in dir() if not name.startswith("_")]
