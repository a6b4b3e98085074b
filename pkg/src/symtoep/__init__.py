"""Multilevel Toeplitz matrices, their flip symmetrization Y_n T_n[f], and
checks of the eigenvalue/singular value distribution of the symmetrized
sequence against its symbols."""

from .multiindex import InvalidDimensionError, lex_enumerate, linear_index, multi_index, product
from .symbol import (
    DifferenceSymbol,
    FourierStencil,
    NonRealCoefficientsError,
    NotSeparableError,
    QuadratureSymbol,
    SeparableSymbol,
    StencilSymbol,
    evaluate,
    l1_norm,
    monomial_decompose,
    read_stencil,
    stencil_of,
    stencil_rank1_factor,
    write_stencil,
)
from .toeplitz import (
    DenseSizeError,
    ToeplitzOperator,
    UnsupportedDecompositionError,
    build_toeplitz,
    decompose_blocks,
    flip,
    matvec,
    symmetrize,
)
from .spectra import Spectrum, eig_sym, numerical_rank, singular_values, trace_norm
from .distribution import (
    AcsReport,
    DomainError,
    GridSpec,
    SpectrumReport,
    acs_check_polynomial,
    acs_check_truncation,
    functional_discrepancy,
    h_sample,
    match_sorted,
    orthant_grid,
    phi_sample,
    psi_sample,
    theta_grid,
    xi_grid,
)

__version__ = "0.1.0"
