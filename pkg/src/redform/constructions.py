"""Linear-algebra construction functors at group and Lie-algebra level.

A construction is an expression tree over base, dual, tensor, sym(r), ext(r)
and dsum.  For an invertible matrix P, ``constr_group`` returns the matrix of
the induced map on the construction in its canonical basis; for an arbitrary
square matrix N, ``constr_lie`` returns the matrix of the induced derivation.
``constr_group`` is a group morphism, ``constr_lie`` a Lie-algebra morphism,
and the two are compatible: d/de constr_group(I + e*N) = constr_lie(N).

Canonical basis orders (fixed so every matrix is reproducible bit-exactly):

* tensor(c1, c2): pairs (i, j) in row-major lexicographic order, index
  i*dim(c2) + j;
* sym(r, c): non-decreasing index tuples in lexicographic order (monomial
  basis, no multinomial normalization);
* ext(r, c): strictly increasing index tuples in lexicographic order;
* dsum(c1, c2): the basis of c1 followed by the basis of c2;
* dual(c): the dual basis, indexed like the basis of c.

The endomorphism space is identified with tensor(base, dual(base)) through
row-major matrix flattening; this is the only built-in identification between
isomorphic constructions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product

from .errors import DimensionMismatch, InvalidArity, ParseError
from .linalg import Mat
from .systems import DiffSystem, mat_derivative


@dataclass(frozen=True)
class Base:
    def __str__(self):
        return "base"


@dataclass(frozen=True)
class Dual:
    child: "Construction"

    def __str__(self):
        return f"dual({self.child})"


@dataclass(frozen=True)
class Tensor:
    left: "Construction"
    right: "Construction"

    def __str__(self):
        return f"tensor({self.left},{self.right})"


@dataclass(frozen=True)
class Sym:
    r: int
    child: "Construction"

    def __post_init__(self):
        if self.r < 1:
            raise InvalidArity("sym power must be >= 1")

    def __str__(self):
        return f"sym({self.r},{self.child})"


@dataclass(frozen=True)
class Ext:
    r: int
    child: "Construction"

    def __post_init__(self):
        if self.r < 1:
            raise InvalidArity("ext power must be >= 1")

    def __str__(self):
        return f"ext({self.r},{self.child})"


@dataclass(frozen=True)
class DirectSum:
    left: "Construction"
    right: "Construction"

    def __str__(self):
        return f"dsum({self.left},{self.right})"


Construction = Base | Dual | Tensor | Sym | Ext | DirectSum

END_CONSTRUCTION = Tensor(Base(), Dual(Base()))


# ---------------------------------------------------------------------------
# Parsing

_CONSTR_TOKEN = re.compile(r"\s*(?:(\d+)|([a-z]+)|([(),]))")


def parse_construction(text: str) -> Construction:
    """Parse strings like ``tensor(base,dual(base))`` or ``ext(2,base)``."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _CONSTR_TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            tail = text[pos:].strip()
            if not tail:
                break
            raise ParseError(f"unexpected character {tail[0]!r} in construction")
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2)))
        else:
            tokens.append(("op", m.group(3)))
        pos = m.end()

    def take(expected=None):
        nonlocal idx
        if idx >= len(tokens):
            raise ParseError("unexpected end of construction expression")
        tok = tokens[idx]
        idx += 1
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected[1]!r} in construction expression")
        return tok

    def node() -> Construction:
        kind, value = take()
        if kind != "name":
            raise ParseError(f"expected a constructor name, got {value!r}")
        if value == "base":
            return Base()
        if value == "dual":
            take(("op", "("))
            child = node()
            take(("op", ")"))
            return Dual(child)
        if value in ("tensor", "dsum"):
            take(("op", "("))
            left = node()
            take(("op", ","))
            right = node()
            take(("op", ")"))
            return Tensor(left, right) if value == "tensor" else DirectSum(left, right)
        if value in ("sym", "ext"):
            take(("op", "("))
            kind2, r = take()
            if kind2 != "int" or r < 1:
                raise ParseError(f"{value} needs a positive integer power")
            take(("op", ","))
            child = node()
            take(("op", ")"))
            return Sym(r, child) if value == "sym" else Ext(r, child)
        raise ParseError(f"unknown constructor {value!r}")

    idx = 0
    result = node()
    if idx != len(tokens):
        raise ParseError("trailing input after construction expression")
    return result


# ---------------------------------------------------------------------------
# Dimensions and basis labels


def _binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def constr_dim(c: Construction, n: int) -> int:
    """Dimension of the construction applied to an n-dimensional space."""
    if n < 1:
        raise InvalidArity("base dimension must be >= 1")
    if isinstance(c, Base):
        return n
    if isinstance(c, Dual):
        return constr_dim(c.child, n)
    if isinstance(c, Tensor):
        return constr_dim(c.left, n) * constr_dim(c.right, n)
    if isinstance(c, DirectSum):
        return constr_dim(c.left, n) + constr_dim(c.right, n)
    if isinstance(c, Sym):
        d = constr_dim(c.child, n)
        return _binomial(d + c.r - 1, c.r)
    if isinstance(c, Ext):
        d = constr_dim(c.child, n)
        if c.r > d:
            raise InvalidArity(f"ext({c.r}) exceeds child dimension {d}")
        return _binomial(d, c.r)
    raise TypeError(f"not a construction: {c!r}")


def basis_labels(c: Construction, n: int):
    """Ordered canonical basis labels, mirroring the index conventions."""
    if isinstance(c, Base):
        return tuple(range(n))
    if isinstance(c, Dual):
        return tuple(("*", lbl) for lbl in basis_labels(c.child, n))
    if isinstance(c, Tensor):
        left = basis_labels(c.left, n)
        right = basis_labels(c.right, n)
        return tuple((a, b) for a in left for b in right)
    if isinstance(c, DirectSum):
        left = basis_labels(c.left, n)
        right = basis_labels(c.right, n)
        return tuple(("L", a) for a in left) + tuple(("R", b) for b in right)
    if isinstance(c, Sym):
        d = constr_dim(c.child, n)
        child = basis_labels(c.child, n)
        return tuple(
            tuple(child[i] for i in idx)
            for idx in combinations_with_replacement(range(d), c.r)
        )
    if isinstance(c, Ext):
        d = constr_dim(c.child, n)
        child = basis_labels(c.child, n)
        return tuple(
            tuple(child[i] for i in idx) for idx in combinations(range(d), c.r)
        )
    raise TypeError(f"not a construction: {c!r}")


# ---------------------------------------------------------------------------
# Induced matrices


def _sym_group(s: Mat, r: int) -> Mat:
    ring = s.ring
    d = s.rows
    labels = list(combinations_with_replacement(range(d), r))
    index = {lbl: i for i, lbl in enumerate(labels)}
    out = [[ring.zero for _ in labels] for _ in labels]
    for col, beta in enumerate(labels):
        supports = []
        for b in beta:
            supports.append([k for k in range(d) if s.data[k][b] != ring.zero])
        for ks in product(*supports):
            coeff = ring.one
            for k, b in zip(ks, beta):
                coeff = coeff * s.data[k][b]
            row = index[tuple(sorted(ks))]
            out[row][col] = out[row][col] + coeff
    return Mat(ring, out)


def _sym_lie(l: Mat, r: int) -> Mat:
    ring = l.ring
    d = l.rows
    labels = list(combinations_with_replacement(range(d), r))
    index = {lbl: i for i, lbl in enumerate(labels)}
    out = [[ring.zero for _ in labels] for _ in labels]
    for col, beta in enumerate(labels):
        for j in range(r):
            for k in range(d):
                coeff = l.data[k][beta[j]]
                if coeff == ring.zero:
                    continue
                target = list(beta)
                target[j] = k
                row = index[tuple(sorted(target))]
                out[row][col] = out[row][col] + coeff
    return Mat(ring, out)


def _ext_group(s: Mat, r: int) -> Mat:
    ring = s.ring
    d = s.rows
    labels = list(combinations(range(d), r))
    out = [
        [s.submatrix(rows_idx, cols_idx).det() for cols_idx in labels]
        for rows_idx in labels
    ]
    return Mat(ring, out)


def _ext_lie(l: Mat, r: int) -> Mat:
    ring = l.ring
    d = l.rows
    labels = list(combinations(range(d), r))
    index = {lbl: i for i, lbl in enumerate(labels)}
    out = [[ring.zero for _ in labels] for _ in labels]
    for col, jtuple in enumerate(labels):
        for j in range(r):
            rest = jtuple[:j] + jtuple[j + 1 :]
            for k in range(d):
                coeff = l.data[k][jtuple[j]]
                if coeff == ring.zero or k in rest:
                    continue
                pos = sum(1 for e in rest if e < k)
                target = tuple(sorted(rest + (k,)))
                sign = (j - pos) % 2
                row = index[target]
                entry = out[row][col]
                out[row][col] = entry - coeff if sign else entry + coeff
    return Mat(ring, out)


def constr_group(c: Construction, p: Mat) -> Mat:
    """Matrix of the induced map on the construction, canonical basis.

    Dual nodes require invertibility and raise SingularGauge otherwise.
    """
    if not p.is_square:
        raise DimensionMismatch("construction input must be square")
    constr_dim(c, p.rows)  # validate arities up front
    return _group(c, p)


def _group(c: Construction, p: Mat) -> Mat:
    if isinstance(c, Base):
        return p
    if isinstance(c, Dual):
        return _group(c.child, p).inv().transpose()
    if isinstance(c, Tensor):
        return _group(c.left, p).kron(_group(c.right, p))
    if isinstance(c, DirectSum):
        return _group(c.left, p).block_diag(_group(c.right, p))
    if isinstance(c, Sym):
        return _sym_group(_group(c.child, p), c.r)
    if isinstance(c, Ext):
        return _ext_group(_group(c.child, p), c.r)
    raise TypeError(f"not a construction: {c!r}")


def constr_lie(c: Construction, n_mat: Mat) -> Mat:
    """Matrix of the induced derivation on the construction, canonical basis."""
    if not n_mat.is_square:
        raise DimensionMismatch("construction input must be square")
    constr_dim(c, n_mat.rows)
    return _lie(c, n_mat)


def _lie(c: Construction, m: Mat) -> Mat:
    if isinstance(c, Base):
        return m
    if isinstance(c, Dual):
        return -_lie(c.child, m).transpose()
    if isinstance(c, Tensor):
        left = _lie(c.left, m)
        right = _lie(c.right, m)
        eye_l = Mat.identity(m.ring, left.rows)
        eye_r = Mat.identity(m.ring, right.rows)
        return left.kron(eye_r) + eye_l.kron(right)
    if isinstance(c, DirectSum):
        return _lie(c.left, m).block_diag(_lie(c.right, m))
    if isinstance(c, Sym):
        return _sym_lie(_lie(c.child, m), c.r)
    if isinstance(c, Ext):
        return _ext_lie(_lie(c.child, m), c.r)
    raise TypeError(f"not a construction: {c!r}")


# ---------------------------------------------------------------------------
# The endomorphism module and its flattening


def vec_row_major(m: Mat):
    return tuple(e for row in m.data for e in row)


def mat_from_vec(vec, n: int, ring) -> Mat:
    vec = tuple(vec)
    if len(vec) != n * n:
        raise DimensionMismatch(f"cannot reshape length {len(vec)} into {n}x{n}")
    return Mat(ring, [vec[i * n : (i + 1) * n] for i in range(n)])


def end_action(sys: DiffSystem, f: Mat) -> Mat:
    """Coordinate expression F' - (A*F - F*A) of the connection on End.

    F is horizontal exactly when the result is zero; under row-major
    flattening this equals dv/dx - constr_lie(tensor(base,dual(base)), A)*v
    for v = vec(F).
    """
    if not f.is_square or f.rows != sys.n:
        raise DimensionMismatch("endomorphism size must match the system")
    a = sys.mat
    return mat_derivative(f) - (a * f - f * a)
