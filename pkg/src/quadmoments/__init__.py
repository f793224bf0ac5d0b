"""Exact moments of quadratic Dirichlet character sums and their main term."""

from .charsum import (
    FlatSumReport,
    Method,
    MomentParams,
    MomentRecord,
    char_sum,
    flat_char_sum,
    moment_8d,
    moment_decomposed,
    moment_direct,
)
from .euler import (
    LocalFactorReport,
    ShiftPoint,
    eulerian_number,
    local_factor_E,
    local_factor_F,
    power_sum_identity_check,
    tail_weight_bound_check,
    verify_convolution,
    zeta_real,
)
from .fit import ExponentConstants, FitReport, degree_report, exponent_constants, polyfit_log
from .numthy import (
    Discriminant,
    SpfSieve,
    build_spf_sieve,
    decompose,
    distinct_prime_factors,
    fundamental_discriminants,
    is_fundamental,
    kronecker,
    squarefree_kernel,
)
from .squaremult import (
    MainTermSum,
    SquareTuple,
    enumerate_square_tuples,
    f_eval,
    main_term_sum,
    main_term_sum_exact,
)

__version__ = "0.1.0"
