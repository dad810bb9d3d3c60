"""tracelab: matrix functional calculus, trace inequalities, operator means,
and randomized verification suites for their convexity/order properties."""

from .errors import (
    DimensionMismatchError,
    DomainError,
    MeanConvergenceError,
    NotCommutingError,
    NumericalFailureError,
    SingularMatrixError,
    TraceLabError,
)
from .hermitian import (
    CommutingTuple,
    HermitianMatrix,
    MultivariateFunction,
    SpectralDecomposition,
    apply_multivariable,
    apply_scalar,
    commuting_tuple_from_rows,
    eigendecompose,
    joint_diagonalize,
    matrix_abs_power,
    matrix_exp,
    matrix_inverse,
    matrix_log,
    matrix_sqrt,
    mix_commuting,
    psd_check,
)
from .traces import (
    BasisFrame,
    TraceFunctional,
    diagonal_surrogate,
    kf_determinant,
    schatten_norm,
    schatten_quasi_power,
    surrogate_supremum_probe,
    trace,
    trace_of_function,
)
from .ellpairs import (
    ConvexityVerdict,
    EllPair,
    HomogeneityVerdict,
    catalog,
    check_homogeneity,
    check_ratio_convexity,
    is_ell_convex_scalar,
    pair_bounded_ratio,
    ratio_phi,
)
from .means import (
    BlockMatrix,
    DiscreteMeanMeasure,
    build_prop18_blocks,
    geometric_mean,
    harmonic_mean,
    harmonic_mean_scalar,
    kubo_ando_mean,
    kubo_ando_mean_scalar,
    loewner_leq,
    parallel_sum,
    prop18_equivalence_check,
    subadditivity_gap,
)
from .randomgen import (
    GENERATOR_NAME,
    random_commuting_tuple,
    random_hermitian,
    random_unitary,
    tensor_pair_tuple,
    trial_seed,
)
from .convexfuncs import convex_catalog, max_of_affines
from .harness import (
    SuiteConfig,
    SuiteReport,
    SUITES,
    SUITE_ORDER,
    list_suites,
    run_convexity_probe,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
