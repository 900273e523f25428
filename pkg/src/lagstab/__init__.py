"""Exact lattice stability on the affine Grassmannian at finite level.

Lattice canonical forms over F_p[[eps]], convex-envelope stability tests, the
torus-GIT cross-check on graded subspaces, the reduction of the non-stable
locus into parabolic strata, and Poincare-series verification by finite-field
point counting.
"""

from .errors import (
    BudgetExceeded,
    FormDimensionMismatch,
    InsufficientPrimes,
    LagstabError,
    NonGenericXi,
    NonIntegralQuotient,
    NonZeroIndex,
    NotAdjacent,
    NotInShell,
    NotNested,
    NotUnipotentForP,
    OrderExceeded,
    PartitionViolation,
    ShapeMismatch,
    SingularMatrix,
    XiOutOfWindow,
)
from .laurent import (
    FieldSpec,
    LaurentMatrix,
    LaurentPoly,
    column_reduce_over_O,
    det_val,
    kernel_saturation,
    val,
)
from .lattices import (
    FORM_KINDS,
    Lattice,
    ShellSpec,
    dual_lattice,
    enumerate_shell,
    in_shell,
    intersect_coordinate,
    is_self_dual,
    lattice_from_generators,
    lattice_from_matrix,
    translate,
)
from .rootdata import (
    ParabolicType,
    block_sums,
    dominance_leq,
    enumerate_parabolics,
    fixed_points_shell,
    in_sector,
    is_generic,
    project_levi,
)
from .stability import (
    HVector,
    arthur_difference,
    ec_vertices,
    failing_subsets,
    h_borel,
    in_envelope,
    is_xi_stable,
)
from .gitstab import (
    GradedSubspace,
    TorusData,
    closed_form_subset_test,
    eg1_check,
    is_torus_semistable,
    is_torus_stable,
    isogeny_determinant,
    mu_one_param,
    pluecker_support,
    rho,
    rho_perp,
    torus_from_xi,
)
from .reduction import (
    StratumTag,
    h_parabolic,
    in_cylinder,
    partition_audit,
    retract,
    sample_unipotent,
    stratum,
    transition_audit,
    unipotent_audit,
)
from .series import (
    PowerSeriesZ,
    bott_series,
    cell_dimension,
    cells_count,
    cells_polynomial,
    codim_bound,
    dim_shell,
    quotient_series,
    truncate,
)
from .counting import (
    CountReport,
    compare_report,
    count_points,
    lagrange_interpolate,
    nonstable_growth_check,
)

__version__ = "0.1.0"
