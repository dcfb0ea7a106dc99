"""Exact reduced-form analysis of linear differential systems over Q(x)."""

from .errors import (
    DefectiveEigenstructure,
    DimensionMismatch,
    DivisionByZero,
    InvalidArity,
    NotReduced,
    NotSemiInvariant,
    NotSplit,
    NotStable,
    ParseError,
    PoleAtPoint,
    RedformError,
    SingularGauge,
)
from .ratfun import (
    Poly,
    Rat,
    RatFn,
    parse_rat,
    parse_ratfn,
    poly_str,
    ratfn_str,
    rf_arith,
    rf_diff,
    rf_eval,
    rf_substitute_power,
)
from .linalg import Mat, QQ, RF
from .systems import (
    DiffSystem,
    SingularityReport,
    gauge,
    is_ordinary_point,
    matrix,
    pullback,
    singularities,
    system,
)
from .constructions import (
    Base,
    Construction,
    DirectSum,
    Dual,
    END_CONSTRUCTION,
    Ext,
    Sym,
    Tensor,
    basis_labels,
    constr_dim,
    constr_group,
    constr_lie,
    end_action,
    mat_from_vec,
    parse_construction,
    vec_row_major,
)
from .series import (
    SeriesMat,
    TruncSeries,
    fundamental_series,
    ratfn_matrix_series,
    series_eval_transport,
)
from .solutions import (
    HarvestEntry,
    SemiInvariant,
    SolutionSpace,
    check_semi_invariant,
    denominator_bound,
    harvest_invariants,
    rational_solutions,
    same_constant_span,
)
from .reduction import (
    LieBasis,
    ReducedReport,
    ReductionCertificate,
    constant_basis_line,
    constant_basis_subspace,
    is_reduced,
    reduce_by_diagonalization,
    transport_gauge,
    verify_reduction_matrix,
    wei_norman,
)
from .katz import (
    EndBasis,
    annihilates_invariants,
    check_nabla_stable_span,
    commutant,
    eigenring,
    eigenring_matrices,
    stabilizer_of_invariant,
    stable_subspace_criterion,
)

__version__ = "0.1.0"
