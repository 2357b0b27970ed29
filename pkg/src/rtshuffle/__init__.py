"""Exact mixing analysis and simulation of the random-transposition shuffle.

The package computes the total variation distance of the lazy
random-transposition walk to uniform through the representation theory of
the symmetric group (exact rational arithmetic end to end), certifies
truncated computations with a rigorous spectral remainder, reproduces the
Poisson limit profile of the cutoff window, and cross-checks everything
against brute-force convolution and Monte Carlo simulation.
"""

from .errors import SizeLimitError
from .partitions import (
    MAX_ENUMERATION_SIZE,
    Partition,
    conjugate,
    covers,
    dimension,
    enumerate_partitions,
    extend_weights,
    hook_lengths,
    hook_product,
    validate_partition,
)
from .characters import (
    CharacterCache,
    Eigenvalue,
    character_ratio,
    class_sign,
    class_size,
    default_cache,
    eigenvalue,
    mn_character,
    transposition_class,
)
from .permstats import (
    CycleCensus,
    FixedPointHistogram,
    PermState,
    SimConfig,
    count_small_cycle_perms,
    cycle_census,
    empirical_fixed_point_hist,
    fixed_point_law,
    qcycle_probability,
    simulate_walk,
    small_cycle_log_margin,
)
from .profiles import (
    BlockIdentityResult,
    character_block_identity,
    deficit_polynomial,
    deficit_series_residual,
    generalized_binomial,
    limit_profile,
    poisson_pmf,
    poisson_tv,
    profile_expectation,
    profile_integrand,
)
from .walk import (
    EXACT_N_MAX,
    FLOAT_N_MAX,
    MODE_EXACT,
    MODE_FLOAT,
    ClassDistribution,
    ProfilePoint,
    WalkParams,
    convolution_oracle,
    exact_tv_fourier,
    fourier_class_distribution,
    mixing_time_steps,
    principal_shapes,
    profile_curve,
    remainder_bound,
    truncated_tv,
    walk_distribution_series,
)
from .verify import run_verification

__version__ = "0.1.0"
