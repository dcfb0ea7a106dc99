"""Batch command-line front end with stable JSON I/O and exit-code triage.

Exit codes: 0 definitive success, 1 definitive negative verdict (carrying a
witness), 2 inconclusive within the configured bounds, 3 input or usage
error.  The separation keeps scripts from mistaking bound-limited
incompleteness for refutation.
"""

from __future__ import annotations

import argparse
import sys

from . import jsonio
from .constructions import parse_construction
from .errors import (
    DefectiveEigenstructure,
    NotReduced,
    NotSemiInvariant,
    NotSplit,
    NotStable,
    ParseError,
    RedformError,
)
from .katz import (
    EndBasis,
    annihilates_invariants,
    check_nabla_stable_span,
    commutant,
    eigenring,
    eigenring_matrices,
    stabilizer_of_invariant,
)
from .ratfun import parse_rat, parse_ratfn, ratfn_str
from .reduction import (
    is_reduced,
    reduce_by_diagonalization,
    verify_reduction_matrix,
    wei_norman,
)
from .series import fundamental_series
from .solutions import check_semi_invariant, harvest_invariants, rational_solutions
from .systems import gauge, pullback

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3

_VERDICT_ERRORS = (NotSemiInvariant, NotSplit, DefectiveEigenstructure, NotStable, NotReduced)


def _emit(payload, out_path):
    text = jsonio.dumps(payload)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_system(path):
    return jsonio.system_from_json(jsonio.load_json(path))


def _parse_den(text, var):
    r = parse_ratfn(text, var)
    if r.den.degree != 0 or r.num.is_zero:
        raise ParseError("denominator override must be a nonzero polynomial")
    return r.num.monic()


def _constr_list(text):
    items = [part.strip() for part in text.split(";") if part.strip()]
    if not items:
        raise ParseError("empty construction list")
    return [parse_construction(part) for part in items]


def cmd_gauge(args):
    sys_ = _load_system(args.system)
    _, p = jsonio.matrix_from_json(jsonio.load_json(args.P), fallback_var=sys_.var)
    result = gauge(sys_, p)
    return jsonio.system_to_json(result), EXIT_OK


def cmd_pullback(args):
    sys_ = _load_system(args.system)
    result = pullback(sys_, args.pullback, new_var=args.new_var)
    return jsonio.system_to_json(result), EXIT_OK


def cmd_constr(args):
    c = parse_construction(args.constr)
    var, m = jsonio.matrix_from_json(jsonio.load_json(args.matrix))
    from .constructions import constr_group, constr_lie

    out = constr_group(c, m) if args.mode == "group" else constr_lie(c, m)
    return jsonio.matrix_to_json(out, var), EXIT_OK


def cmd_series(args):
    sys_ = _load_system(args.system)
    result = fundamental_series(sys_, parse_rat(args.x0), args.order)
    return jsonio.series_to_json(result), EXIT_OK


def cmd_ratsols(args):
    sys_ = _load_system(args.system)
    c = parse_construction(args.constr)
    from .constructions import constr_lie
    from .systems import DiffSystem

    target = DiffSystem(sys_.var, constr_lie(c, sys_.mat))
    den = _parse_den(args.den, sys_.var) if args.den else None
    space = rational_solutions(
        target, num_deg_cap=args.num_deg, den_override=den, pole_cap=args.pole_cap
    )
    payload = jsonio.solution_space_to_json(space, sys_.var)
    payload["constr"] = str(c)
    return payload, EXIT_OK if space.complete else EXIT_INCONCLUSIVE


def cmd_semiinv_check(args):
    sys_ = _load_system(args.system)
    c = parse_construction(args.constr)
    _, v = jsonio.vector_from_json(jsonio.load_json(args.vector), fallback_var=sys_.var)
    rate = check_semi_invariant(sys_, c, v)
    if rate is None:
        return {
            "semi_invariant": False,
            "reason": "image is not a rational multiple of the vector",
        }, EXIT_NEGATIVE
    return {"semi_invariant": True, "rate": ratfn_str(rate, sys_.var)}, EXIT_OK


def cmd_harvest(args):
    sys_ = _load_system(args.system)
    constructions = _constr_list(args.constrs)
    entries = harvest_invariants(
        sys_, constructions, num_deg_cap=args.num_deg, pole_cap=args.pole_cap
    )
    payload = {"results": []}
    all_complete = True
    for entry in entries:
        item = {"constr": str(entry.constr)}
        if entry.space is None:
            item["error"] = entry.error
            all_complete = False
        else:
            item.update(jsonio.solution_space_to_json(entry.space, sys_.var))
            all_complete = all_complete and entry.space.complete
        payload["results"].append(item)
    return payload, EXIT_OK if all_complete else EXIT_INCONCLUSIVE


def cmd_eigenring(args):
    sys_ = _load_system(args.system)
    den = _parse_den(args.den, sys_.var) if args.den else None
    space = eigenring(
        sys_, num_deg_cap=args.num_deg, pole_cap=args.pole_cap, den_override=den
    )
    payload = jsonio.solution_space_to_json(space, sys_.var)
    payload["matrices"] = [
        jsonio.matrix_to_lists(m, sys_.var)
        for m in eigenring_matrices(space, sys_.n)
    ]
    return payload, EXIT_OK if space.complete else EXIT_INCONCLUSIVE


def cmd_wei_norman(args):
    sys_ = _load_system(args.system)
    basis = jsonio.lie_basis_from_json(jsonio.load_json(args.basis))
    coeffs = wei_norman(sys_, basis)
    if coeffs is None:
        return {
            "decomposable": False,
            "reason": "matrix is outside the span of the generators",
        }, EXIT_NEGATIVE
    return {
        "decomposable": True,
        "coeffs": [ratfn_str(f, sys_.var) for f in coeffs],
    }, EXIT_OK


def cmd_check_reduced(args):
    sys_ = _load_system(args.system)
    basis = jsonio.lie_basis_from_json(jsonio.load_json(args.basis)) if args.basis else None
    constructions = _constr_list(args.constrs) if args.constrs else []
    lines = []
    if args.lines:
        _, lines = jsonio.lines_from_json(jsonio.load_json(args.lines))
    report = is_reduced(
        sys_,
        basis=basis,
        constructions=constructions,
        lines=lines,
        num_deg_cap=args.num_deg,
        pole_cap=args.pole_cap,
    )
    payload = {
        "wei_norman_ok": report.wei_norman_ok,
        "wei_norman_coeffs": [ratfn_str(f, sys_.var) for f in report.wei_norman_coeffs]
        if report.wei_norman_coeffs is not None
        else None,
        "lines_constant": report.lines_constant,
        "lines": [
            {
                "constr": str(lv.constr),
                "is_stable_line": lv.is_stable_line,
                "rate": ratfn_str(lv.rate, sys_.var) if lv.rate is not None else None,
                "constant_basis": [str(c) for c in lv.constant_basis]
                if lv.constant_basis is not None
                else None,
                "witness": None
                if lv.ok
                else (
                    "line has non-constant ratio"
                    if lv.is_stable_line
                    else "not a stable line"
                ),
            }
            for lv in report.lines
        ],
        "invariants_constant": report.invariants_constant,
        "invariants": [
            {
                "constr": str(iv.constr),
                "v": [ratfn_str(e, sys_.var) for e in iv.vector],
                "constant": iv.constant,
            }
            for iv in report.invariants
        ],
        "harvest_complete": report.harvest_complete,
        "caveats": list(report.caveats),
    }
    if any(lv.is_stable_line is False for lv in report.lines):
        return payload, EXIT_USAGE
    if not report.all_passed:
        return payload, EXIT_NEGATIVE
    if report.invariants_constant is not None and not report.harvest_complete:
        return payload, EXIT_INCONCLUSIVE
    return payload, EXIT_OK


def cmd_verify_reduction(args):
    sys_ = _load_system(args.system)
    _, p = jsonio.matrix_from_json(jsonio.load_json(args.P), fallback_var=sys_.var)
    _, invariants = jsonio.invariants_from_json(jsonio.load_json(args.invariants))
    ok = verify_reduction_matrix(sys_, p, parse_rat(args.x0), invariants)
    return {"transported": ok}, EXIT_OK if ok else EXIT_NEGATIVE


def cmd_reduce(args):
    sys_ = _load_system(args.system)
    _, endo = jsonio.matrix_from_json(jsonio.load_json(args.semiinv), fallback_var=sys_.var)
    cert = reduce_by_diagonalization(sys_, endo, args.pullback)
    return jsonio.certificate_to_json(cert), EXIT_OK


def cmd_katz_check(args):
    sys_ = _load_system(args.system)
    _, elements = jsonio.end_basis_from_json(jsonio.load_json(args.basis))
    report = check_nabla_stable_span(sys_, EndBasis(tuple(elements)))
    payload = {
        "stable": report.stable,
        "elements": [
            {
                "index": e.index,
                "stable": e.stable,
                "coordinates": [ratfn_str(c, sys_.var) for c in e.coordinates]
                if e.coordinates is not None
                else None,
            }
            for e in report.entries
        ],
    }
    exit_code = EXIT_OK if report.stable else EXIT_NEGATIVE
    if args.invariants:
        _, invariants = jsonio.invariants_from_json(jsonio.load_json(args.invariants))
        ann = annihilates_invariants(elements, invariants)
        payload["annihilates_invariants"] = ann.all_annihilated
        payload["annihilation"] = [
            {
                "generator": e.generator_index,
                "invariant": e.invariant_index,
                "annihilated": e.annihilated,
            }
            for e in ann.entries
        ]
        if not ann.all_annihilated:
            exit_code = EXIT_NEGATIVE
    return payload, exit_code


def cmd_commutant(args):
    basis = jsonio.lie_basis_from_json(jsonio.load_json(args.basis))
    mats = commutant(basis)
    return {
        "n": basis.n,
        "dim": len(mats),
        "basis": [[[str(e) for e in row] for row in m.data] for m in mats],
    }, EXIT_OK


def cmd_stabilizer(args):
    c = parse_construction(args.constr)
    payload_in = jsonio.load_json(args.vector)
    var, v = jsonio.vector_from_json(payload_in)
    if args.n is not None:
        n = args.n
    else:
        from .constructions import constr_dim

        n = next(
            (k for k in range(1, len(v) + 1) if constr_dim_safe(c, k) == len(v)),
            None,
        )
        if n is None:
            raise ParseError("could not infer the base dimension; pass --n")
    mats = stabilizer_of_invariant(c, v, n)
    return {
        "n": n,
        "dim": len(mats),
        "basis": [jsonio.matrix_to_lists(m, var) for m in mats],
    }, EXIT_OK


def constr_dim_safe(c, k):
    from .constructions import constr_dim
    from .errors import InvalidArity

    try:
        return constr_dim(c, k)
    except InvalidArity:
        return -1


def _add_common(parser):
    parser.add_argument("--num-deg", type=int, default=30, dest="num_deg")
    parser.add_argument("--den", default=None)
    parser.add_argument("--order", type=int, default=12)
    parser.add_argument("--x0", default="1")
    parser.add_argument("--pullback", type=int, default=1)
    parser.add_argument("--pole-cap", type=int, default=10, dest="pole_cap")
    parser.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="redform",
        description="Exact reduced-form analysis of linear differential systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **arguments):
        p = sub.add_parser(name)
        for flag, options in arguments.items():
            p.add_argument(flag, **options)
        _add_common(p)
        p.set_defaults(fn=fn)
        return p

    add("gauge", cmd_gauge, **{"--system": {"required": True}, "--P": {"required": True}})
    p = add("pullback", cmd_pullback, **{"--system": {"required": True}})
    p.add_argument("--new-var", default=None, dest="new_var")
    add(
        "constr",
        cmd_constr,
        **{
            "--constr": {"required": True},
            "--matrix": {"required": True},
            "--mode": {"choices": ["group", "lie"], "default": "group"},
        },
    )
    add("series", cmd_series, **{"--system": {"required": True}})
    add(
        "ratsols",
        cmd_ratsols,
        **{"--system": {"required": True}, "--constr": {"default": "base"}},
    )
    add(
        "semiinv-check",
        cmd_semiinv_check,
        **{
            "--system": {"required": True},
            "--constr": {"required": True},
            "--vector": {"required": True},
        },
    )
    add(
        "harvest",
        cmd_harvest,
        **{"--system": {"required": True}, "--constrs": {"required": True}},
    )
    add("eigenring", cmd_eigenring, **{"--system": {"required": True}})
    add(
        "wei-norman",
        cmd_wei_norman,
        **{"--system": {"required": True}, "--basis": {"required": True}},
    )
    add(
        "check-reduced",
        cmd_check_reduced,
        **{
            "--system": {"required": True},
            "--basis": {"default": None},
            "--constrs": {"default": None},
            "--lines": {"default": None},
        },
    )
    add(
        "verify-reduction",
        cmd_verify_reduction,
        **{
            "--system": {"required": True},
            "--P": {"required": True},
            "--invariants": {"required": True},
        },
    )
    add(
        "reduce",
        cmd_reduce,
        **{"--system": {"required": True}, "--semiinv": {"required": True}},
    )
    add(
        "katz-check",
        cmd_katz_check,
        **{
            "--system": {"required": True},
            "--basis": {"required": True},
            "--invariants": {"default": None},
        },
    )
    add("commutant", cmd_commutant, **{"--basis": {"required": True}})
    p = add(
        "stabilizer-of-invariant",
        cmd_stabilizer,
        **{"--constr": {"required": True}, "--vector": {"required": True}},
    )
    p.add_argument("--n", type=int, default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; remap to the documented code
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        payload, code = args.fn(args)
    except _VERDICT_ERRORS as exc:
        payload, code = (
            {"ok": False, "error": {"reason": exc.reason, "message": str(exc)}},
            EXIT_NEGATIVE,
        )
    except RedformError as exc:
        payload, code = (
            {"ok": False, "error": {"reason": exc.reason, "message": str(exc)}},
            EXIT_USAGE,
        )
    except (OSError, ValueError) as exc:
        payload, code = (
            {"ok": False, "error": {"reason": "usage_error", "message": str(exc)}},
            EXIT_USAGE,
        )
    _emit(payload, args.out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
