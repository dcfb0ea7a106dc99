"""Eigenrings, stability of candidate algebras inside End, and commutants.

The eigenring of a system is the algebra of matrices F with F' = A*F - F*A,
computed as the rational solutions of the endomorphism system under row-major
flattening; it always contains the identity.  Candidate generator families
are checked for stability under the End connection, for annihilation of
invariants, and against commutants of constant generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .constructions import (
    END_CONSTRUCTION,
    Construction,
    constr_dim,
    constr_lie,
    end_action,
    mat_from_vec,
    vec_row_major,
)
from .errors import DimensionMismatch, NotReduced
from .linalg import Mat, QQ, RF, RatFnField, mat_vec, nullspace, rank, solve
from .ratfun import RatFn
from .reduction import LieBasis, wei_norman
from .solutions import SolutionSpace, in_constant_span, in_ratfn_span, rational_solutions
from .systems import DiffSystem


@dataclass(frozen=True)
class EndBasis:
    """Matrices spanning a candidate subspace of End, independent over the
    constants."""

    elements: tuple

    def __post_init__(self):
        sizes = {e.rows for e in self.elements} | {e.cols for e in self.elements}
        if len(sizes) > 1:
            raise DimensionMismatch("mixed element sizes")


def end_basis_flags(sys: DiffSystem, basis: EndBasis):
    """(independent, bracket_closed, nabla_stable) for the element span.

    Independence and bracket closure are taken over the rational functions;
    stability refers to the End connection F -> F' - [A, F].
    """
    vectors = [vec_row_major(e) for e in basis.elements]
    independent = True
    if vectors:
        flat = Mat(RF, [[vectors[k][i] for k in range(len(vectors))] for i in range(len(vectors[0]))])
        independent = rank(flat) == len(vectors)
    bracket_closed = all(
        in_ratfn_span(vectors, vec_row_major(a * b - b * a))
        for a in basis.elements
        for b in basis.elements
    )
    nabla_stable = all(
        in_ratfn_span(vectors, vec_row_major(end_action(sys, e)))
        for e in basis.elements
    )
    return independent, bracket_closed, nabla_stable


def eigenring(
    sys: DiffSystem,
    num_deg_cap: int = 30,
    pole_cap: int = 10,
    den_override=None,
) -> SolutionSpace:
    """Rational solutions of the endomorphism system, as flattened vectors."""
    lie = constr_lie(END_CONSTRUCTION, sys.mat)
    return rational_solutions(
        DiffSystem(sys.var, lie),
        num_deg_cap=num_deg_cap,
        den_override=den_override,
        pole_cap=pole_cap,
    )


def eigenring_matrices(space: SolutionSpace, n: int):
    return [mat_from_vec(v, n, RF) for v in space.basis]


@dataclass(frozen=True)
class StabilityEntry:
    index: int
    stable: bool
    coordinates: tuple | None
    residual: Mat | None


@dataclass(frozen=True)
class StabilityReport:
    entries: tuple

    @property
    def stable(self) -> bool:
        return all(e.stable for e in self.entries)


def check_nabla_stable_span(sys: DiffSystem, basis: EndBasis) -> StabilityReport:
    """Whether the span of the elements is carried into itself by the End
    connection F -> F' - [A, F]; per-element coordinates as witnesses."""
    vectors = [vec_row_major(e) for e in basis.elements]
    if vectors:
        flat = Mat(RF, [[vectors[k][i] for k in range(len(vectors))] for i in range(len(vectors[0]))])
        if rank(flat) != len(vectors):
            raise DimensionMismatch("basis elements are dependent over the rational functions")
    entries = []
    for idx, element in enumerate(basis.elements):
        image = end_action(sys, element)
        target = vec_row_major(image)
        if vectors:
            m = Mat(RF, [[vectors[k][i] for k in range(len(vectors))] for i in range(len(target))])
            coords = solve(m, list(target))
        else:
            coords = None
        if coords is None and not all(e.is_zero for e in target):
            entries.append(StabilityEntry(idx, False, None, image))
        else:
            entries.append(
                StabilityEntry(idx, True, tuple(coords) if coords else (), None)
            )
    return StabilityReport(tuple(entries))


@dataclass(frozen=True)
class AnnihilationEntry:
    generator_index: int
    invariant_index: int
    annihilated: bool
    residual: tuple | None


@dataclass(frozen=True)
class AnnihilationReport:
    entries: tuple

    @property
    def all_annihilated(self) -> bool:
        return all(e.annihilated for e in self.entries)


def annihilates_invariants(generators, invariants) -> AnnihilationReport:
    """Check constr_lie(c, N)*v = 0 for every generator N and invariant (c, v)."""
    entries = []
    for gi, gen in enumerate(generators):
        gen_rf = gen if isinstance(gen.ring, RatFnField) else gen.map_entries(RatFn.const, RF)
        for ii, (c, v) in enumerate(invariants):
            v = tuple(v)
            dim = constr_dim(c, gen.rows)
            if len(v) != dim:
                raise DimensionMismatch("invariant length mismatch")
            image = mat_vec(constr_lie(c, gen_rf), v)
            ok = all(e.is_zero for e in image)
            entries.append(AnnihilationEntry(gi, ii, ok, None if ok else image))
    return AnnihilationReport(tuple(entries))


def commutant(basis: LieBasis):
    """Echelon basis of the constant matrices commuting with every generator."""
    n = basis.n
    if not basis.generators:
        return [
            Mat(QQ, [[Fraction(1) if (i, j) == (r, c) else Fraction(0) for j in range(n)] for i in range(n)])
            for r in range(n)
            for c in range(n)
        ]
    rows = []
    eye = Mat.identity(QQ, n)
    for g in basis.generators:
        ad = g.kron(eye) - eye.kron(g.transpose())
        rows.extend(ad.data)
    kernel = nullspace(Mat(QQ, rows))
    return [mat_from_vec(v, n, QQ) for v in kernel]


@dataclass(frozen=True)
class SubspaceStabilityReport:
    generator_stable: bool
    generator_failures: tuple
    nabla_stable: bool
    consistent: bool


def stable_subspace_criterion(
    sys: DiffSystem, basis: LieBasis, c: Construction, w_vectors
) -> SubspaceStabilityReport:
    """For a reduced system and constant vectors W: compare stability of W
    under the constant generators with direct stability under the connection.

    The two agree when the system is reduced with respect to the basis; both
    sides are computed independently and reported together.
    """
    coeffs = wei_norman(sys, basis)
    if coeffs is None:
        raise NotReduced("system matrix is not in the span of the generators")
    w_vectors = [tuple(Fraction(e) if not isinstance(e, Fraction) else e for e in v) for v in w_vectors]
    dim = constr_dim(c, sys.n)
    for v in w_vectors:
        if len(v) != dim:
            raise DimensionMismatch("subspace vector length mismatch")

    w_rf = [tuple(RatFn.const(e) for e in v) for v in w_vectors]
    failures = []
    for gi, gen in enumerate(basis.generators):
        lie = constr_lie(c, gen)
        for vi, v in enumerate(w_vectors):
            image = mat_vec(lie, v)
            if not in_constant_span(
                w_rf, tuple(RatFn.const(e) for e in image)
            ):
                failures.append((gi, vi))
    generator_stable = not failures

    lie_a = constr_lie(c, sys.mat)
    nabla_stable = True
    for v in w_rf:
        image = mat_vec(lie_a, v)
        if not in_ratfn_span(w_rf, image):
            nabla_stable = False
            break

    return SubspaceStabilityReport(
        generator_stable=generator_stable,
        generator_failures=tuple(failures),
        nabla_stable=nabla_stable,
        consistent=generator_stable == nabla_stable,
    )


def stabilizer_of_invariant(c: Construction, v, n: int):
    """Echelon basis of {h in gl_n : constr_lie(c, h) * v = 0}.

    Columns of the defining linear map are produced from the elementary
    matrices; the null space is computed over the rational functions.
    """
    v = tuple(v)
    dim = constr_dim(c, n)
    if len(v) != dim:
        raise DimensionMismatch("vector length mismatch")
    columns = []
    for i in range(n):
        for j in range(n):
            unit = Mat(
                RF,
                [
                    [RatFn.ONE if (r, s) == (i, j) else RatFn.ZERO for s in range(n)]
                    for r in range(n)
                ],
            )
            columns.append(mat_vec(constr_lie(c, unit), v))
    m = Mat(RF, [[columns[k][r] for k in range(n * n)] for r in range(dim)])
    kernel = nullspace(m)
    return [mat_from_vec(vec, n, RF) for vec in kernel]
