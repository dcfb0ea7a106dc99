"""Dense exact matrices over pluggable scalar rings.

A ring object supplies ``zero``, ``one``, ``promote`` and ``is_unit``; the
scalars themselves implement Python arithmetic operators.  The same matrix
code then serves exact rationals, rational functions and truncated power
series.  Reduced row echelon form and null spaces are only meaningful over
the field-like rings (rationals, rational functions) and use the documented
canonical pivot order: lowest column index first, pivots normalized to one.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SingularGauge
from .ratfun import Poly, RatFn, as_ratfn


class FractionField:
    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def promote(value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        raise TypeError(f"cannot promote {value!r} to a rational constant")

    @staticmethod
    def is_unit(value) -> bool:
        return value != 0


class RatFnField:
    zero = RatFn.ZERO
    one = RatFn.ONE

    @staticmethod
    def promote(value):
        return as_ratfn(value)

    @staticmethod
    def is_unit(value) -> bool:
        return not value.is_zero


QQ = FractionField()
RF = RatFnField()


class Mat:
    """Immutable dense matrix; entries promoted through the ring on build."""

    __slots__ = ("ring", "data")

    def __init__(self, ring, rows):
        data = tuple(tuple(ring.promote(e) for e in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise ValueError("ragged rows")
        self.ring = ring
        self.data = data

    @classmethod
    def identity(cls, ring, n: int) -> "Mat":
        return cls(
            ring,
            [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)],
        )

    @classmethod
    def zeros(cls, ring, rows: int, cols: int) -> "Mat":
        return cls(ring, [[ring.zero] * cols for _ in range(rows)])

    @classmethod
    def from_cols(cls, ring, cols) -> "Mat":
        cols = [list(c) for c in cols]
        return cls(ring, [[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))])

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0]) if self.data else 0

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, key):
        i, j = key
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def col(self, j):
        return tuple(self.data[i][j] for i in range(self.rows))

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        body = "; ".join(" ".join(repr(e) for e in row) for row in self.data)
        return f"Mat({self.rows}x{self.cols}: {body})"

    def __add__(self, other):
        self._same_shape(other)
        return Mat(
            self.ring,
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
        )

    def __sub__(self, other):
        self._same_shape(other)
        return Mat(
            self.ring,
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
        )

    def __neg__(self):
        return Mat(self.ring, [[-a for a in row] for row in self.data])

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise ValueError("inner dimension mismatch")
            ot = other.transpose()
            return Mat(
                self.ring,
                [
                    [_dot(row, col) for col in ot.data]
                    for row in self.data
                ],
            )
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, scalar):
        scalar = self.ring.promote(scalar)
        return Mat(self.ring, [[scalar * a for a in row] for row in self.data])

    def transpose(self) -> "Mat":
        return Mat(
            self.ring,
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def map_entries(self, fn, ring=None) -> "Mat":
        return Mat(ring or self.ring, [[fn(a) for a in row] for row in self.data])

    def hstack(self, other) -> "Mat":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        return Mat(self.ring, [ra + rb for ra, rb in zip(self.data, other.data)])

    def submatrix(self, row_idx, col_idx) -> "Mat":
        return Mat(
            self.ring,
            [[self.data[i][j] for j in col_idx] for i in row_idx],
        )

    def kron(self, other) -> "Mat":
        """Kronecker product; pairs (i, j) are flattened row-major."""
        out = []
        for i in range(self.rows):
            for k in range(other.rows):
                row = []
                for j in range(self.cols):
                    a = self.data[i][j]
                    row.extend(a * b for b in other.data[k])
                out.append(row)
        return Mat(self.ring, out)

    def block_diag(self, other) -> "Mat":
        ring = self.ring
        top = [list(row) + [ring.zero] * other.cols for row in self.data]
        bottom = [[ring.zero] * self.cols + list(row) for row in other.data]
        return Mat(ring, top + bottom)

    @property
    def is_zero(self) -> bool:
        zero = self.ring.zero
        return all(a == zero for row in self.data for a in row)

    def det(self):
        """Exact determinant; cofactor expansion for small sizes, Gauss above."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return self.ring.one
        if n <= 5:
            return self._det_cofactor(tuple(range(n)), 0, {})
        return self._det_gauss()

    def _det_cofactor(self, cols, row, memo):
        if len(cols) == 1:
            return self.data[row][cols[0]]
        key = cols
        if row == self.rows - len(cols):
            cached = memo.get(key)
            if cached is not None:
                return cached
        total = self.ring.zero
        sign = True
        for pos, j in enumerate(cols):
            a = self.data[row][j]
            if a != self.ring.zero:
                rest = cols[:pos] + cols[pos + 1 :]
                sub = self._det_cofactor(rest, row + 1, memo)
                term = a * sub
                total = total + term if sign else total - term
            sign = not sign
        memo[key] = total
        return total

    def _det_gauss(self):
        ring = self.ring
        n = self.rows
        work = [list(row) for row in self.data]
        det = ring.one
        for col in range(n):
            pivot = None
            for r in range(col, n):
                if ring.is_unit(work[r][col]):
                    pivot = r
                    break
            if pivot is None:
                return ring.zero
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                det = -det
            pv = work[col][col]
            det = det * pv
            for r in range(col + 1, n):
                factor = work[r][col] / pv
                if factor == ring.zero:
                    continue
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
        return det

    def inv(self) -> "Mat":
        """Gauss-Jordan inverse with unit pivots; raises SingularGauge."""
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        ring = self.ring
        n = self.rows
        work = [list(row) + list(idrow) for row, idrow in zip(self.data, Mat.identity(ring, n).data)]
        for col in range(n):
            pivot = None
            for r in range(col, n):
                if ring.is_unit(work[r][col]):
                    pivot = r
                    break
            if pivot is None:
                raise SingularGauge("matrix is not invertible")
            work[col], work[pivot] = work[pivot], work[col]
            pv = work[col][col]
            work[col] = [a / pv for a in work[col]]
            for r in range(n):
                if r == col:
                    continue
                factor = work[r][col]
                if factor == ring.zero:
                    continue
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
        return Mat(ring, [row[n:] for row in work])

    def rref(self):
        """Reduced row echelon form over a field; returns (matrix, pivot cols)."""
        ring = self.ring
        work = [list(row) for row in self.data]
        pivots = []
        r = 0
        for col in range(self.cols):
            if r >= len(work):
                break
            pivot = None
            for k in range(r, len(work)):
                if work[k][col] != ring.zero:
                    pivot = k
                    break
            if pivot is None:
                continue
            work[r], work[pivot] = work[pivot], work[r]
            pv = work[r][col]
            work[r] = [a / pv for a in work[r]]
            for k in range(len(work)):
                if k == r:
                    continue
                factor = work[k][col]
                if factor != ring.zero:
                    work[k] = [a - factor * b for a, b in zip(work[k], work[r])]
            pivots.append(col)
            r += 1
        return Mat(ring, work), tuple(pivots)


def _dot(row, col):
    it = iter(zip(row, col))
    a, b = next(it)
    acc = a * b
    for a, b in it:
        acc = acc + a * b
    return acc


def mat_vec(m: Mat, vec):
    vec = tuple(vec)
    if m.cols != len(vec):
        raise ValueError("matrix/vector size mismatch")
    return tuple(_dot(row, vec) for row in m.data)


def nullspace(m: Mat):
    """Canonical basis of the right kernel, one vector per free column."""
    ring = m.ring
    reduced, pivots = m.rref()
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for f in free:
        vec = [ring.zero] * m.cols
        vec[f] = ring.one
        for r, p in enumerate(pivots):
            vec[p] = -reduced.data[r][f]
        basis.append(tuple(vec))
    return basis


def rank(m: Mat) -> int:
    return len(m.rref()[1])


def solve(m: Mat, rhs):
    """One exact solution of m*x = rhs (free variables zero), or None."""
    ring = m.ring
    rhs = [ring.promote(b) for b in rhs]
    if len(rhs) != m.rows:
        raise ValueError("rhs length mismatch")
    aug = Mat(ring, [list(row) + [b] for row, b in zip(m.data, rhs)])
    reduced, pivots = aug.rref()
    if pivots and pivots[-1] == m.cols:
        return None
    x = [ring.zero] * m.cols
    for r, p in enumerate(pivots):
        x[p] = reduced.data[r][m.cols]
    return tuple(x)


def row_space_canonical(vectors, ring):
    """Canonical (RREF) representation of the span of the given row vectors."""
    vecs = [tuple(ring.promote(a) for a in v) for v in vectors]
    if not vecs:
        return ()
    reduced, pivots = Mat(ring, vecs).rref()
    return tuple(reduced.data[r] for r in range(len(pivots)))


def in_span(vectors, target, ring):
    """Whether target lies in the span of vectors (over the ring's field)."""
    vecs = [list(v) for v in vectors]
    if not vecs:
        return all(ring.promote(a) == ring.zero for a in target)
    m = Mat(ring, [[vecs[k][i] for k in range(len(vecs))] for i in range(len(vecs[0]))])
    return solve(m, list(target)) is not None


def charpoly(m: Mat) -> Poly:
    """Characteristic polynomial det(T*I - m) of a rational matrix.

    Computed by evaluation at n+1 integer points and Lagrange interpolation,
    reusing the exact determinant.
    """
    if not isinstance(m.ring, FractionField):
        raise TypeError("charpoly expects a matrix over the rationals")
    n = m.rows
    if n == 0:
        return Poly.ONE
    points = list(range(n + 1))
    values = []
    for t in points:
        shifted = Mat(
            QQ,
            [
                [
                    (Fraction(t) if i == j else Fraction(0)) - m.data[i][j]
                    for j in range(n)
                ]
                for i in range(n)
            ],
        )
        values.append(shifted.det())
    result = Poly()
    for i, (xi, yi) in enumerate(zip(points, values)):
        if yi == 0:
            continue
        term = Poly.const(yi)
        for j, xj in enumerate(points):
            if j == i:
                continue
            term = term * Poly((Fraction(-xj, xi - xj), Fraction(1, xi - xj)))
        result = result + term
    return result
