"""Sliding-block frequency constraints, their subshifts, and constrained spectral radii."""

from .blocks import (
    FrequencyConstraint,
    IntegerBounds,
    NonEmptyReport,
    Rigidity,
    admissible_count_vectors,
    check_nonempty,
    classify_rigidity,
    count_bounds,
    enumerate_blocks,
    is_admissible_block,
)
from .spectral import (
    MatrixSet,
    NormKind,
    bracket,
    build_markov_lift,
    exact_radius_if_forced_periodic,
    operator_norm,
    rho_hat_n,
    rho_hat_per_n,
    rho_n,
    spectral_radius,
    verify_berger_wang,
)
from .subshift import (
    AllWords,
    ConstrainedWords,
    MarkovWords,
    build_graph,
    count_words,
    enumerate_periodic_words,
    enumerate_words,
    export_dot,
    is_admissible_word,
    is_periodically_extendable,
    sample_sequence,
)

__version__ = "0.1.0"
