"""Stable JSON schemas for systems, matrices, vectors, bases and results.

All matrices and vectors are exchanged as row-major nested lists of
rational-function strings; emitted JSON is deterministic (sorted keys, fixed
separators) and every value re-parses to an equal object.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ParseError
from .linalg import Mat, QQ, RF
from .ratfun import RatFn, parse_rat, parse_ratfn, ratfn_str
from .reduction import LieBasis, ReductionCertificate
from .solutions import SemiInvariant
from .constructions import parse_construction
from .systems import DiffSystem


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ": "), indent=2) + "\n"


def _require(mapping, key, kind=None):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ParseError(f"missing field {key!r}")
    value = mapping[key]
    if kind is not None and not isinstance(value, kind):
        raise ParseError(f"field {key!r} has the wrong type")
    return value


def matrix_to_lists(m: Mat, var: str):
    return [[ratfn_str(e, var) for e in row] for row in m.data]


def lists_to_matrix(rows, var: str) -> Mat:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError("matrix must be a non-empty list of rows")
    parsed = [[parse_ratfn(e, var) if isinstance(e, str) else _const_entry(e) for e in row] for row in rows]
    return Mat(RF, parsed)


def _const_entry(value) -> RatFn:
    if isinstance(value, int):
        return RatFn.const(value)
    raise ParseError(f"matrix entries must be strings, got {value!r}")


def system_to_json(sys: DiffSystem) -> dict:
    return {"var": sys.var, "n": sys.n, "A": matrix_to_lists(sys.mat, sys.var)}


def system_from_json(payload) -> DiffSystem:
    var = _require(payload, "var", str)
    rows = _require(payload, "A", list)
    mat = lists_to_matrix(rows, var)
    if "n" in payload and payload["n"] != mat.rows:
        raise ParseError("declared size does not match the matrix")
    if not mat.is_square:
        raise ParseError("system matrix must be square")
    return DiffSystem(var, mat)


def matrix_to_json(m: Mat, var: str) -> dict:
    return {"var": var, "M": matrix_to_lists(m, var)}


def matrix_from_json(payload, fallback_var=None) -> tuple:
    var = payload.get("var", fallback_var) if isinstance(payload, dict) else None
    if var is None:
        raise ParseError("matrix payload needs a 'var' field")
    key = "M" if "M" in payload else "P" if "P" in payload else None
    if key is None:
        raise ParseError("matrix payload needs an 'M' (or 'P') field")
    return var, lists_to_matrix(payload[key], var)


def vector_to_json(v, var: str) -> dict:
    return {"var": var, "v": [ratfn_str(e, var) for e in v]}


def vector_from_json(payload, fallback_var=None):
    var = payload.get("var", fallback_var) if isinstance(payload, dict) else None
    if var is None:
        raise ParseError("vector payload needs a 'var' field")
    entries = _require(payload, "v", list)
    return var, tuple(parse_ratfn(e, var) for e in entries)


def constant_matrix_from_lists(rows) -> Mat:
    if not isinstance(rows, list) or not rows:
        raise ParseError("matrix must be a non-empty list of rows")
    return Mat(QQ, [[parse_rat(e) for e in row] for row in rows])


def lie_basis_from_json(payload) -> LieBasis:
    gens = _require(payload, "generators", list)
    mats = [constant_matrix_from_lists(g) for g in gens]
    if "n" in payload:
        n = payload["n"]
    elif mats:
        n = mats[0].rows
    else:
        raise ParseError("empty basis needs an explicit 'n'")
    return LieBasis(n, tuple(mats))


def lie_basis_to_json(basis: LieBasis) -> dict:
    return {
        "n": basis.n,
        "generators": [[[str(e) for e in row] for row in g.data] for g in basis.generators],
    }


def end_basis_from_json(payload):
    var = _require(payload, "var", str)
    elements = _require(payload, "elements", list)
    return var, [lists_to_matrix(e, var) for e in elements]


def invariants_from_json(payload):
    var = _require(payload, "var", str)
    items = _require(payload, "invariants", list)
    out = []
    for item in items:
        c = parse_construction(_require(item, "constr", str))
        entries = _require(item, "v", list)
        out.append((c, tuple(parse_ratfn(e, var) for e in entries)))
    return var, out


def lines_from_json(payload):
    var = _require(payload, "var", str)
    items = _require(payload, "lines", list)
    out = []
    for item in items:
        c = parse_construction(_require(item, "constr", str))
        entries = _require(item, "v", list)
        out.append((c, tuple(parse_ratfn(e, var) for e in entries)))
    return var, out


def solution_space_to_json(space, var: str) -> dict:
    return {
        "size": space.size,
        "dim": space.dim,
        "basis": [[ratfn_str(e, var) for e in v] for v in space.basis],
        "denominator": ratfn_str(RatFn(space.denominator), var),
        "num_degree_cap": space.num_degree_cap,
        "complete": space.complete,
    }


def certificate_to_json(cert: ReductionCertificate) -> dict:
    return {
        "var": cert.var,
        "extension_order": cert.extension_order,
        "P": matrix_to_lists(cert.gauge_matrix, cert.var),
        "B": matrix_to_lists(cert.reduced, cert.var),
        "basis": [[[str(e) for e in row] for row in g.data] for g in cert.basis],
        "coeffs": [ratfn_str(f, cert.var) for f in cert.coeffs],
    }


def certificate_from_json(payload) -> ReductionCertificate:
    var = _require(payload, "var", str)
    return ReductionCertificate(
        var=var,
        extension_order=_require(payload, "extension_order", int),
        gauge_matrix=lists_to_matrix(_require(payload, "P", list), var),
        reduced=lists_to_matrix(_require(payload, "B", list), var),
        basis=tuple(constant_matrix_from_lists(g) for g in _require(payload, "basis", list)),
        coeffs=tuple(parse_ratfn(f, var) for f in _require(payload, "coeffs", list)),
    )


def semi_invariant_to_json(si: SemiInvariant, var: str) -> dict:
    return {
        "constr": str(si.constr),
        "v": [ratfn_str(e, var) for e in si.vector],
        "rate": ratfn_str(si.rate, var),
    }


def series_to_json(series) -> dict:
    return {
        "var": series.var,
        "x0": str(series.x0),
        "order": series.order,
        "n": series.n,
        "coeffs": [
            [[str(e) for e in row] for row in series.coeff_matrix(k).data]
            for k in range(series.order)
        ],
    }


def load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ParseError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc


def fraction_str(q: Fraction) -> str:
    return str(q)
