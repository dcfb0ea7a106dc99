"""Linear differential systems dy/dx = A(x)*y over the rational functions.

A system is a square matrix of rational functions together with the name of
the independent variable.  Gauge transformations act by
``P[A] = P^-1*A*P - P^-1*P``' and base changes x = t^m pull a system back to
``m*t^(m-1)*A(t^m)`` by the chain rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch, SingularGauge
from .linalg import Mat, RF
from .ratfun import Poly, RatFn, parse_ratfn, squarefree_factors


@dataclass(frozen=True)
class DiffSystem:
    var: str
    mat: Mat

    def __post_init__(self):
        if not self.mat.is_square:
            raise DimensionMismatch("system matrix must be square")

    @property
    def n(self) -> int:
        return self.mat.rows


def system(var: str, rows) -> DiffSystem:
    """Build a system from rational-function strings or values."""
    parsed = [
        [e if isinstance(e, RatFn) else parse_ratfn(e, var) if isinstance(e, str) else e for e in row]
        for row in rows
    ]
    return DiffSystem(var, Mat(RF, parsed))


def matrix(var: str, rows) -> Mat:
    return system(var, rows).mat


def mat_derivative(m: Mat) -> Mat:
    return m.map_entries(lambda e: e.derivative())


def gauge(sys: DiffSystem, p: Mat) -> DiffSystem:
    """Apply the gauge transformation P to the system."""
    if not p.is_square or p.rows != sys.n:
        raise DimensionMismatch("gauge matrix size must match the system")
    if p.det().is_zero:
        raise SingularGauge("gauge matrix has zero determinant")
    pinv = p.inv()
    return DiffSystem(sys.var, pinv * (sys.mat * p - mat_derivative(p)))


def pullback(sys: DiffSystem, m: int, new_var: str | None = None) -> DiffSystem:
    """Pull the system back along x = t^m; solutions compose as y(t^m)."""
    if m < 1:
        raise ValueError("pullback order must be >= 1")
    if new_var is None:
        new_var = "t" if sys.var != "t" else "u"
    factor = RatFn(Poly.monomial(m, m - 1))
    pulled = sys.mat.map_entries(lambda e: factor * e.substitute_power(m))
    return DiffSystem(new_var, pulled)


@dataclass(frozen=True)
class SingularityReport:
    """Finite places (pairwise coprime squarefree factors with max pole order)
    plus the degree growth at infinity (max over entries of deg num - deg den,
    with the zero entry contributing -1)."""

    finite_places: tuple
    order_at_infinity: int


def _coprime_basis(polys):
    """Pairwise coprime monic squarefree factors covering all inputs."""
    basis = []
    work = [p.monic() for p in polys if p.degree >= 1]
    while work:
        q = work.pop()
        if q.degree < 1:
            continue
        refined = []
        for b in basis:
            g = b.gcd(q)
            if g.degree < 1:
                refined.append(b)
                continue
            rest = b // g
            if rest.degree >= 1:
                refined.append(rest.monic())
            refined.append(g)
            q = q // g
        if q.degree >= 1:
            refined.append(q.monic())
        basis = refined
    # merge duplicates that may appear when a factor equals an existing one
    unique = []
    for b in basis:
        if all(b != u for u in unique):
            unique.append(b)
    return unique


def _multiplicity(place: Poly, den: Poly) -> int:
    k = 0
    while place.divides(den):
        den = den // place
        k += 1
    return k


def singularities(sys: DiffSystem) -> SingularityReport:
    dens = [e.den for row in sys.mat.data for e in row if e.den.degree >= 1]
    # feed every squarefree multiplicity level into the refinement so places
    # with different pole orders at different entries split apart
    claims = [s for d in dens for s, _ in squarefree_factors(d)]
    places = _coprime_basis(claims)
    report = []
    for p in places:
        order = max(_multiplicity(p, e.den) for row in sys.mat.data for e in row)
        report.append((p, order))
    report.sort(key=lambda item: (item[0].degree, item[0].coeffs))
    growth = max(
        (e.num.degree - e.den.degree) for row in sys.mat.data for e in row
    ) if sys.n else -1
    return SingularityReport(tuple(report), growth)


def is_ordinary_point(sys: DiffSystem, x0) -> bool:
    x0 = Fraction(x0)
    return all(not e.has_pole_at(x0) for row in sys.mat.data for e in row)
