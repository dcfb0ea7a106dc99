"""Construction functors: dimensions, canonical bases, morphism laws."""

import random

import pytest

from redform import (
    Base,
    DiffSystem,
    Dual,
    END_CONSTRUCTION,
    Ext,
    InvalidArity,
    Mat,
    ParseError,
    RF,
    Sym,
    Tensor,
    basis_labels,
    constr_dim,
    constr_group,
    constr_lie,
    end_action,
    gauge,
    parse_construction,
    system,
    vec_row_major,
)
from redform.linalg import mat_vec

from helpers import demo_system, rand_invertible, rand_matrix, rf, weighted_swap


class TestDimensions:
    def test_spec_values(self):
        assert constr_dim(parse_construction("tensor(base,dual(base))"), 2) == 4
        assert constr_dim(parse_construction("ext(2,base)"), 2) == 1
        assert constr_dim(parse_construction("sym(2,base)"), 3) == 6
        assert constr_dim(parse_construction("dsum(base,dual(base))"), 3) == 6

    def test_invalid_ext_arity(self):
        with pytest.raises(InvalidArity):
            constr_dim(parse_construction("ext(3,base)"), 2)


class TestParsing:
    def test_roundtrip(self):
        for text in [
            "base",
            "dual(base)",
            "tensor(base,dual(base))",
            "sym(2,base)",
            "ext(2,tensor(base,base))",
            "dsum(base,ext(2,base))",
        ]:
            assert str(parse_construction(text)) == text

    def test_reject_junk(self):
        for text in ["", "tensor(base)", "sym(0,base)", "frob(base)", "base)"]:
            with pytest.raises((ParseError, InvalidArity)):
                parse_construction(text)


class TestBasisOrder:
    def test_tensor_row_major(self):
        labels = basis_labels(Tensor(Base(), Base()), 2)
        assert labels == ((0, 0), (0, 1), (1, 0), (1, 1))

    def test_sym_nondecreasing_lex(self):
        labels = basis_labels(Sym(2, Base()), 2)
        assert labels == ((0, 0), (0, 1), (1, 1))

    def test_ext_increasing_lex(self):
        labels = basis_labels(Ext(2, Base()), 3)
        assert labels == ((0, 1), (0, 2), (1, 2))


class TestGroupLevel:
    def test_identity_maps_to_identity(self):
        for text in ["dual(base)", "tensor(base,dual(base))", "sym(2,base)", "ext(2,base)"]:
            c = parse_construction(text)
            d = constr_dim(c, 3)
            assert constr_group(c, Mat.identity(RF, 3)) == Mat.identity(RF, d)

    def test_dual_is_inverse_transpose(self):
        rng = random.Random(5)
        p = rand_invertible(rng, 3)
        assert constr_group(Dual(Base()), p) == p.inv().transpose()

    def test_ext_top_power_is_determinant(self):
        rng = random.Random(6)
        p = rand_invertible(rng, 2)
        out = constr_group(Ext(2, Base()), p)
        assert out.rows == 1 and out[(0, 0)] == p.det()


class TestLieLevel:
    def test_dual_is_negative_transpose(self):
        a = demo_system().mat
        assert constr_lie(Dual(Base()), a) == -a.transpose()

    def test_end_module_matrix(self):
        a = demo_system().mat
        eye = Mat.identity(RF, 2)
        expected = a.kron(eye) - eye.kron(a.transpose())
        assert constr_lie(END_CONSTRUCTION, a) == expected

    def test_ext_two_is_trace(self):
        a = demo_system().mat
        out = constr_lie(Ext(2, Base()), a)
        assert out.rows == 1 and out[(0, 0)] == rf("1/(2*x)")


class TestEndAction:
    def test_weighted_swap_demo(self):
        a = demo_system()
        n1 = weighted_swap()
        expected = n1.map_entries(lambda e: rf("-1/(2*x)") * e)
        assert end_action(a, n1) == expected

    def test_identity_is_horizontal(self):
        a = demo_system()
        assert end_action(a, Mat.identity(RF, 2)).is_zero

    def test_zero_system_gives_derivative(self):
        zero = system("x", [["0", "0"], ["0", "0"]])
        f = rand_matrix(random.Random(9), 2)
        from redform.systems import mat_derivative

        assert end_action(zero, f) == mat_derivative(f)

    def test_flattening_identification(self):
        # vec(F' - [A,F]) = d/dx vec(F) - constr_lie(END, A) vec(F)
        rng = random.Random(10)
        a = demo_system()
        f = rand_matrix(rng, 2)
        lhs = vec_row_major(end_action(a, f))
        lie = constr_lie(END_CONSTRUCTION, a.mat)
        v = vec_row_major(f)
        image = mat_vec(lie, v)
        rhs = tuple(e.derivative() - image[i] for i, e in enumerate(v))
        assert lhs == rhs


CONSTRUCTIONS = [
    "dual(base)",
    "tensor(base,dual(base))",
    "sym(2,base)",
    "ext(2,base)",
]


class TestMorphismLaws:
    def test_group_law(self):
        rng = random.Random(40)
        for text in CONSTRUCTIONS:
            c = parse_construction(text)
            for _ in range(4):
                n = rng.choice([2, 3])
                p = rand_invertible(rng, n)
                q = rand_invertible(rng, n)
                assert constr_group(c, p * q) == constr_group(c, p) * constr_group(c, q)

    def test_lie_bracket_law(self):
        rng = random.Random(41)
        for text in CONSTRUCTIONS:
            c = parse_construction(text)
            for _ in range(4):
                n = rng.choice([2, 3])
                a = rand_matrix(rng, n)
                b = rand_matrix(rng, n)
                lhs = constr_lie(c, a * b - b * a)
                la, lb = constr_lie(c, a), constr_lie(c, b)
                assert lhs == la * lb - lb * la

    def test_lie_linearity(self):
        rng = random.Random(42)
        c = parse_construction("sym(2,base)")
        a = rand_matrix(rng, 2)
        b = rand_matrix(rng, 2)
        h = rf("x/(x+1)")
        scaled = a.map_entries(lambda e: h * e) + b
        assert constr_lie(c, scaled) == constr_lie(c, a).map_entries(lambda e: h * e) + constr_lie(c, b)

    def test_gauge_compatibility(self):
        rng = random.Random(43)
        for text in CONSTRUCTIONS:
            c = parse_construction(text)
            n = 2
            a = system("x", rand_matrix(rng, n).data)
            p = rand_invertible(rng, n)
            lhs = constr_lie(c, gauge(a, p).mat)
            big = DiffSystem("x", constr_lie(c, a.mat))
            rhs = gauge(big, constr_group(c, p)).mat
            assert lhs == rhs

    def test_nested_construction(self):
        rng = random.Random(44)
        c = parse_construction("ext(2,tensor(base,dual(base)))")
        p = rand_invertible(rng, 2)
        q = rand_invertible(rng, 2)
        assert constr_group(c, p * q) == constr_group(c, p) * constr_group(c, q)

    def test_double_dual_is_identity_functor(self):
        rng = random.Random(45)
        c = parse_construction("dual(dual(base))")
        p = rand_invertible(rng, 3)
        assert constr_group(c, p) == p
        n = rand_matrix(rng, 3)
        assert constr_lie(c, n) == n

    def test_higher_symmetric_power_laws(self):
        rng = random.Random(46)
        c = parse_construction("sym(3,base)")
        assert constr_dim(c, 2) == 4
        for _ in range(3):
            p = rand_invertible(rng, 2)
            q = rand_invertible(rng, 2)
            assert constr_group(c, p * q) == constr_group(c, p) * constr_group(c, q)
            a = rand_matrix(rng, 2)
            b = rand_matrix(rng, 2)
            la, lb = constr_lie(c, a), constr_lie(c, b)
            assert constr_lie(c, a * b - b * a) == la * lb - lb * la
        assert constr_group(c, Mat.identity(RF, 2)) == Mat.identity(RF, 4)

    def test_direct_sum_laws(self):
        rng = random.Random(47)
        c = parse_construction("dsum(base,dual(base))")
        for _ in range(3):
            p = rand_invertible(rng, 2)
            q = rand_invertible(rng, 2)
            assert constr_group(c, p * q) == constr_group(c, p) * constr_group(c, q)
            a = rand_matrix(rng, 2)
            b = rand_matrix(rng, 2)
            la, lb = constr_lie(c, a), constr_lie(c, b)
            assert constr_lie(c, a * b - b * a) == la * lb - lb * la

    def test_ext_three_leibniz_signs(self):
        # derivation on the top power of a 3-space is the trace
        rng = random.Random(48)
        a = rand_matrix(rng, 3)
        out = constr_lie(parse_construction("ext(3,base)"), a)
        trace = a.data[0][0] + a.data[1][1] + a.data[2][2]
        assert out.rows == 1 and out[(0, 0)] == trace
