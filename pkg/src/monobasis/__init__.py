"""Monomial bases of spaces of homogeneous polynomials on block and Lorentz sequence spaces."""

__version__ = "0.1.0"

from .errors import ConfigError, DomainError, PreconditionError
from .multiindex import (
    MultiIndex,
    OrderedMonomialBasis,
    compatible_rank,
    compatible_unrank,
    count_monomials,
    enumerate_monomials,
    global_key,
    iter_monomials,
    rank,
    recursive_extend,
    square_cmp,
    unrank,
)
from .polynomials import (
    BasisConstantReport,
    HomogeneousPolynomial,
    SupEstimate,
    SupMode,
    TaylorTruncation,
    basis_constant_estimate,
    estimate_p0,
    evaluate,
    exp_functional_taylor,
    length_graded_monotonicity_check,
    monomial_sup,
    monomial_sup_block,
    monomial_sup_lorentz,
    partial_sum,
    poly_sup_estimate,
    seminorm_p_lambda,
    tail_seminorms,
)
from .sequence_spaces import (
    BlockSpec,
    EpsilonNet,
    LorentzSpec,
    LorentzWeights,
    Point,
    block_interval,
    block_space_norm,
    decreasing_rearrangement,
    epsilon_net,
    in_compact_set,
    lorentz_norm,
    lorentz_predual_norm,
    sample_cloud,
    sample_point,
)
