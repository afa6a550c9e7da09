"""Exact analysis of derivation-type endomorphism spaces of polynomial
vector field Lie algebras on R^n."""

from .polyvec import (
    BadDirection,
    DimensionMismatch,
    HomogeneousPart,
    MonomialField,
    PolyVectorField,
    bracket,
    constant_field,
    diagonal_field,
    euler,
    homogeneous_parts,
    is_diagonal_linear,
    make_field,
    zero_field,
)
from .linsolve import (
    NotASubspace,
    RatMatrix,
    Subspace,
    contains,
    kernel,
    quotient_dim,
    sum_and_intersection,
)
from .algebra import (
    AlgebraSpec,
    CapExceeded,
    DerivedData,
    GradedAlgebra,
    MissingConstants,
    MissingEuler,
    NotInAlgebra,
    algebra_span_in_ambient,
    centralizer_in_truncated_ambient,
    close_and_grade,
    derived_data,
    normalizer_in_truncated_ambient,
    truncated_ambient_basis,
)
from .derspaces import (
    BudgetTooSmall,
    Endo,
    NotDegreeZero,
    SolutionSpace,
    ad_endo,
    centroid_from_E0,
    degree_filter,
    f_projection,
    inner_derivations,
    mderivation_check,
    solve_centroid,
    solve_derivations,
    solve_generalized,
    solve_mder_minus2,
    solve_quasicentroid,
    solve_quasiderivations,
    vanishing_on_E_subspace,
)
from .structure import (
    HypothesisFailed,
    TheoremReport,
    check_c_eq_qc,
    check_centroid_form,
    check_centralizer,
    check_gender_sum,
    check_grading,
    check_h1,
    check_main_decomposition,
    check_qder_split,
    run_all_checks,
)

__version__ = "0.1.0"
