"""Shared fixtures and random generators for the test suite."""

from fractions import Fraction

from redform import (
    DiffSystem,
    LieBasis,
    Mat,
    Poly,
    QQ,
    RF,
    RatFn,
    matrix,
    parse_construction,
    parse_ratfn,
    system,
)

END = parse_construction("tensor(base,dual(base))")


def rf(text, var="x"):
    return parse_ratfn(text, var)


def demo_system() -> DiffSystem:
    """The worked 2x2 system with an irrational exponential behavior."""
    return system("x", [["0", "1"], ["x", "1/(2*x)"]])


def weighted_swap() -> Mat:
    """The x-weighted swap endomorphism spanning a stable line in End."""
    return matrix("x", [["0", "1/x"], ["1", "0"]])


def diag_basis() -> LieBasis:
    return LieBasis(2, (Mat(QQ, [[1, 0], [0, -1]]),))


def reduced_demo() -> DiffSystem:
    return system("t", [["2*t^2", "0"], ["0", "-2*t^2"]])


# ---------------------------------------------------------------------------
# Random generators (seeded rng passed in by each test)

_COEFF_POOL = [-2, -1, -1, 1, 1, 2, 0, 3, Fraction(1, 2)]
_DEN_POOL = ["1", "1", "x", "x+1", "x-1"]


def rand_fraction(rng):
    return Fraction(rng.choice(_COEFF_POOL))


def rand_poly(rng, max_deg=2):
    deg = rng.randint(0, max_deg)
    return Poly([rand_fraction(rng) for _ in range(deg + 1)])


def rand_ratfn(rng, max_deg=2, var="x"):
    num = rand_poly(rng, max_deg)
    den = rf(rng.choice(_DEN_POOL), var).num
    return RatFn(num, den)


def rand_matrix(rng, n, max_deg=2, density=0.8):
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            if rng.random() < density:
                row.append(rand_ratfn(rng, max_deg))
            else:
                row.append(RatFn.ZERO)
        rows.append(row)
    return Mat(RF, rows)


def rand_invertible(rng, n, ops=None):
    """Random invertible matrix over the rational functions, built from
    elementary operations so the inverse stays cheap to compute."""
    p = [[RatFn.ONE if i == j else RatFn.ZERO for j in range(n)] for i in range(n)]
    if ops is None:
        ops = n + 2
    for _ in range(ops):
        kind = rng.randint(0, 2)
        i, j = rng.randrange(n), rng.randrange(n)
        if kind == 0 and i != j:
            factor = rand_ratfn(rng, 1)
            p[i] = [a + factor * b for a, b in zip(p[i], p[j])]
        elif kind == 1:
            scale = Fraction(rng.choice([1, 2, -1, 3, Fraction(1, 2)]))
            p[i] = [a * scale for a in p[i]]
        else:
            p[i], p[j] = p[j], p[i]
    return Mat(RF, p)


def rand_constant_matrix(rng, n):
    return Mat(QQ, [[rand_fraction(rng) for _ in range(n)] for _ in range(n)])


def rand_ordinary_system(rng, n, x0, max_deg=2):
    from redform import is_ordinary_point

    while True:
        sys_ = system("x", rand_matrix(rng, n, max_deg).data)
        if is_ordinary_point(sys_, x0):
            return sys_


def const_vec(values):
    return tuple(RatFn.const(v) for v in values)


# ---------------------------------------------------------------------------
# A tiny independent Gaussian elimination over Fraction rows, used as an
# oracle where the production solver must not check itself.


def oracle_nullspace(rows):
    """Null space basis of a Fraction matrix given as a list of row lists."""
    if not rows:
        return []
    work = [list(map(Fraction, r)) for r in rows]
    cols = len(work[0])
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((k for k in range(r, len(work)) if work[k][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        pv = work[r][c]
        work[r] = [a / pv for a in work[r]]
        for k in range(len(work)):
            if k != r and work[k][c] != 0:
                f = work[k][c]
                work[k] = [a - f * b for a, b in zip(work[k], work[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for rr, p in enumerate(pivots):
            vec[p] = -work[rr][f]
        basis.append(vec)
    return basis
