"""Rational solutions: bounds, oracles, semi-invariants, harvesting."""

import random

import pytest

from redform import (
    Base,
    DiffSystem,
    DimensionMismatch,
    END_CONSTRUCTION,
    Mat,
    Poly,
    RF,
    RatFn,
    check_semi_invariant,
    constr_lie,
    denominator_bound,
    gauge,
    harvest_invariants,
    parse_construction,
    rational_solutions,
    same_constant_span,
    system,
    vec_row_major,
)
from redform.linalg import mat_vec

from helpers import demo_system, rand_invertible, rf, weighted_swap


def _check_solution(sys_, v):
    lie = sys_.mat
    for i in range(sys_.n):
        acc = v[i].derivative()
        for j in range(sys_.n):
            acc = acc - lie.data[i][j] * v[j]
        assert acc.is_zero


class TestDenominatorBound:
    def test_polynomial_system(self):
        assert denominator_bound(system("x", [["0", "1"], ["0", "0"]])) == Poly.ONE

    def test_positive_residue(self):
        assert denominator_bound(system("x", [["1/x"]])) == Poly.x()

    def test_negative_residue_covers_pole(self):
        # solutions c/x have a pole of order one; the bound must include it
        assert denominator_bound(system("x", [["-1/x"]])) == Poly.x()

    def test_higher_order_pole_uses_cap(self):
        den = denominator_bound(system("x", [["1/x^2"]]), pole_cap=4)
        assert den == Poly.monomial(1, 4)

    def test_demo_has_trivial_bound(self):
        assert denominator_bound(demo_system()) == Poly.ONE

    def test_quadratic_place(self):
        # residue at the squarefree place x^2 - 2 has eigenvalue 1 on each branch
        den = denominator_bound(system("x", [["(2*x)/(x^2-2)"]]))
        assert den == Poly([-2, 0, 1])


class TestRationalSolutions:
    def test_nilpotent_block(self):
        space = rational_solutions(system("x", [["0", "1"], ["0", "0"]]), num_deg_cap=2)
        assert space.basis == ((rf("1"), rf("0")), (rf("x"), rf("1")))
        for v in space.basis:
            _check_solution(system("x", [["0", "1"], ["0", "0"]]), v)

    def test_simple_pole_solution(self):
        sys_ = system("x", [["-1/x"]])
        space = rational_solutions(sys_, num_deg_cap=3)
        assert space.dim == 1 and space.complete
        assert space.basis[0][0] == rf("1/x")

    def test_end_system_of_demo(self):
        sys_ = DiffSystem("x", constr_lie(END_CONSTRUCTION, demo_system().mat))
        space = rational_solutions(sys_, num_deg_cap=6)
        assert space.dim == 1
        assert space.basis[0] == tuple(rf(s) for s in ("1", "0", "0", "1"))

    def test_zero_system_constants(self):
        space = rational_solutions(system("x", [["0", "0"], ["0", "0"]]), num_deg_cap=0)
        assert space.dim == 2 and space.complete
        assert all(all(e.is_constant for e in v) for v in space.basis)

    def test_gauge_of_zero_oracle(self):
        rng = random.Random(77)
        for _ in range(8):
            n = rng.choice([2, 3])
            p = rand_invertible(rng, n)
            zero = system("x", [["0"] * n for _ in range(n)])
            sys_ = gauge(zero, p)
            pinv = p.inv()
            den = Poly.ONE
            cap = 0
            for row in pinv.data:
                for e in row:
                    den = den.lcm(e.den)
            for row in pinv.data:
                for e in row:
                    cap = max(cap, (e * RatFn(den)).num.degree)
            space = rational_solutions(sys_, num_deg_cap=cap, den_override=den)
            assert space.dim == n
            columns = [pinv.col(j) for j in range(n)]
            assert same_constant_span(space.basis, columns)
            for v in space.basis:
                _check_solution(sys_, v)

    def test_power_family_with_certified_completeness(self):
        # y' = (k/x) y has solution space span{x^k}; the automatic bounds
        # certify completeness once the cap covers the degree bound at
        # infinity (k) plus the denominator degree (|k| for k < 0)
        for k in range(-3, 4):
            sys_ = system("x", [[f"({k})/x"]])
            space = rational_solutions(sys_, num_deg_cap=8)
            assert space.dim == 1
            expected = (rf(f"x^{k}") if k >= 0 else rf(f"1/x^{-k}"),)
            assert same_constant_span(space.basis, [expected])
            assert space.complete
            _check_solution(sys_, space.basis[0])

    def test_echelon_determinism(self):
        sys_ = system("x", [["0", "1"], ["0", "0"]])
        a = rational_solutions(sys_, num_deg_cap=4)
        b = rational_solutions(sys_, num_deg_cap=4)
        assert a.basis == b.basis

    def test_gauge_equivariance_of_solution_spaces(self):
        base_sys = system("x", [["0", "0"], ["0", "0"]])
        p = Mat(RF, [[rf("1"), rf("x")], [rf("0"), rf("1")]])
        gauged = gauge(base_sys, p)
        space = rational_solutions(gauged, num_deg_cap=3)
        pinv = p.inv()
        original = rational_solutions(base_sys, num_deg_cap=3)
        moved = [mat_vec(pinv, v) for v in original.basis]
        assert same_constant_span(space.basis, moved)


class TestCheckSemiInvariant:
    def test_weighted_swap_rate(self):
        rate = check_semi_invariant(
            demo_system(), END_CONSTRUCTION, vec_row_major(weighted_swap())
        )
        assert rate == rf("-1/(2*x)")

    def test_top_exterior_rate(self):
        # the derivation on ext(2) is the trace 1/(2x); the constant vector
        # has rate -1/(2x)
        rate = check_semi_invariant(
            demo_system(), parse_construction("ext(2,base)"), (RatFn.ONE,)
        )
        assert rate == rf("-1/(2*x)")

    def test_rational_solution_has_zero_rate(self):
        sys_ = system("x", [["0", "1"], ["0", "0"]])
        space = rational_solutions(sys_, num_deg_cap=2)
        for v in space.basis:
            assert check_semi_invariant(sys_, Base(), v) == RatFn.ZERO

    def test_non_semi_invariant(self):
        v = (rf("1"), rf("0"), rf("0"), rf("0"))
        assert check_semi_invariant(demo_system(), END_CONSTRUCTION, v) is None

    def test_projective_rate_shift(self):
        v = vec_row_major(weighted_swap())
        base_rate = check_semi_invariant(demo_system(), END_CONSTRUCTION, v)
        for h in [rf("x"), rf("1/x"), rf("(x^2+1)/x")]:
            scaled = tuple(h * e for e in v)
            rate = check_semi_invariant(demo_system(), END_CONSTRUCTION, scaled)
            assert rate == base_rate + h.derivative() / h

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            check_semi_invariant(demo_system(), Base(), (rf("1"), rf("0"), rf("0")))


class TestHarvest:
    def test_zero_system_base(self):
        zero = system("x", [["0", "0"], ["0", "0"]])
        entries = harvest_invariants(zero, [Base()], num_deg_cap=0)
        assert entries[0].space.dim == 2

    def test_demo_base_is_empty(self):
        entries = harvest_invariants(demo_system(), [Base()], num_deg_cap=8)
        assert entries[0].space.dim == 0

    def test_demo_end_is_scalars(self):
        entries = harvest_invariants(demo_system(), [END_CONSTRUCTION], num_deg_cap=8)
        space = entries[0].space
        assert space.dim == 1
        assert space.basis[0] == tuple(rf(s) for s in ("1", "0", "0", "1"))

    def test_failures_are_aggregated(self):
        entries = harvest_invariants(
            demo_system(), [parse_construction("ext(3,base)"), Base()], num_deg_cap=4
        )
        assert entries[0].space is None and entries[0].error is not None
        assert entries[1].space is not None
