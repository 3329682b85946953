import random
from fractions import Fraction

import pytest

from conftest import mat_q, mat_t
from azcurve.linalg import (
    FieldMatrix,
    FunctionField,
    QQ,
    SpanSolver,
    algebra_closure,
    char_poly,
    dvr_lattice_regular,
    dvr_reduce,
    kernel_basis,
    min_poly,
    poly_at_matrix,
    trace_radical,
)
from azcurve.polys import ExactError, Place, Poly, RatFunc

FT = FunctionField("t")


def rand_mat(rng, n, lo=-5, hi=5):
    return mat_q([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])


class TestCharPoly:
    def test_examples(self):
        m = mat_t([["0", "t"], ["1", "0"]])
        cp = char_poly(m, FT)
        assert [c.pretty() for c in cp] == ["-t", "0", "1"]
        z = FieldMatrix.zeros(3, 3, QQ)
        assert char_poly(z, QQ) == [Fraction(0)] * 3 + [Fraction(1)]
        d = mat_q([[1, 0], [0, 2]])
        assert char_poly(d, QQ) == [Fraction(2), Fraction(-3), Fraction(1)]

    def test_non_square(self):
        with pytest.raises(ExactError):
            char_poly(FieldMatrix.zeros(2, 3, QQ), QQ)

    def test_cayley_hamilton_q(self):
        rng = random.Random(11)
        for _ in range(100):
            n = rng.randint(1, 5)
            m = rand_mat(rng, n)
            cp = char_poly(m, QQ)
            assert poly_at_matrix(cp, m, QQ).is_zero(QQ)

    def test_cayley_hamilton_qt(self):
        rng = random.Random(12)
        t = RatFunc.var()
        for _ in range(100):
            n = rng.randint(1, 3)
            entries = [
                [
                    RatFunc(Poly([Fraction(rng.randint(-3, 3)) for _ in range(rng.randint(1, 3))]))
                    for _ in range(n)
                ]
                for _ in range(n)
            ]
            m = FieldMatrix(entries)
            cp = char_poly(m, FT)
            assert poly_at_matrix(cp, m, FT).is_zero(FT)
            mp = min_poly(m, FT)
            # min divides char exactly
            from azcurve.fpoly import fp_divmod

            _, rem = fp_divmod(cp, mp, FT)
            assert not rem


class TestMinPoly:
    def test_examples(self):
        d = mat_q([[1, 0, 0], [0, 1, 0], [0, 0, 2]])
        assert min_poly(d, QQ) == [Fraction(2), Fraction(-3), Fraction(1)]
        j = mat_q([[0, 1], [0, 0]])
        assert min_poly(j, QQ) == [Fraction(0), Fraction(0), Fraction(1)]
        m = mat_t([["t", "1"], ["0", "t"]])
        mp = min_poly(m, FT)
        # (x - t)^2: checked by direct multiplication as well
        shifted = m - FieldMatrix([[RatFunc.var(), FT.zero], [FT.zero, RatFunc.var()]])
        assert not shifted.is_zero(FT)
        assert (shifted * shifted).is_zero(FT)
        assert [c.pretty() for c in mp] == ["t^2", "-2*t", "1"]


class TestAlgebraClosure:
    def test_examples(self):
        assert len(algebra_closure([mat_q([[1, 0], [0, 2]])], QQ)) == 2
        assert len(algebra_closure([FieldMatrix.zeros(2, 2, QQ)], QQ)) == 1
        m = mat_t([["t", "1"], ["0", "t"]])
        assert len(algebra_closure([m], FT)) == 2

    def test_non_commuting_rejected(self):
        a = mat_q([[0, 1], [0, 0]])
        b = mat_q([[0, 0], [1, 0]])
        with pytest.raises(ExactError, match="do not commute"):
            algebra_closure([a, b], QQ)

    def test_dimension_invariant_under_permutation(self):
        rng = random.Random(3)
        for _ in range(10):
            n = rng.randint(2, 4)
            base = rand_mat(rng, n, -2, 2)
            gens = [base, base * base, poly_at_matrix([Fraction(1), Fraction(2), Fraction(1)], base, QQ)]
            sizes = set()
            for perm in ([0, 1, 2], [2, 0, 1], [1, 2, 0]):
                sizes.add(len(algebra_closure([gens[i] for i in perm], QQ)))
            assert len(sizes) == 1


class TestTraceRadical:
    def test_examples(self):
        j = mat_q([[0, 1], [0, 0]])
        basis = algebra_closure([j], QQ)
        rad = trace_radical(basis, QQ)
        assert len(rad) == 1
        d = mat_q([[1, 0], [0, 2]])
        assert trace_radical(algebra_closure([d], QQ), QQ) == []
        assert trace_radical([FieldMatrix.identity(3, QQ)], QQ) == []

    def test_radical_elements_nilpotent(self):
        rng = random.Random(5)
        for _ in range(20):
            n = rng.randint(2, 4)
            # build a commuting algebra with nilpotent part
            nilp = FieldMatrix.zeros(n, n, QQ)
            for i in range(n - 1):
                nilp.entries[i][i + 1] = Fraction(rng.randint(0, 2))
            scalar = FieldMatrix.identity(n, QQ).scale(Fraction(rng.randint(-3, 3)))
            m = scalar + nilp
            basis = algebra_closure([m], QQ)
            for nelt in trace_radical(basis, QQ):
                assert nelt.power(n, QQ).is_zero(QQ)

    def test_not_closed_rejected(self):
        incomplete = [mat_q([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), mat_q([[1, 0, 0], [0, 2, 0], [0, 0, 4]])]
        with pytest.raises(ExactError, match="not multiplicatively closed"):
            trace_radical(incomplete, QQ)  # the square escapes the span


class TestSpanSolver:
    def test_function_field_backend(self):
        t = RatFunc.var()
        one = RatFunc.const(1)
        rows = [[t, one, t * t], [one, t, one / (t + one)]]
        solver = SpanSolver(rows, FT)
        assert solver.rank == 2
        target = [t * r0 + r1 for r0, r1 in zip(rows[0], rows[1])]
        coords = solver.solve(target)
        assert coords[0] == t and coords[1] == one
        assert solver.solve([one, one, one]) is None

    def test_q_backend_matches(self):
        rows = [[Fraction(1), Fraction(2)], [Fraction(0), Fraction(1)]]
        solver = SpanSolver(rows, QQ)
        assert solver.solve([Fraction(1), Fraction(3)]) == [Fraction(1), Fraction(1)]


class TestDvr:
    def test_reduce_and_regularity(self):
        t = RatFunc.var()
        one = RatFunc.const(1)
        place = Place.rational(Fraction(0))
        vectors = [[one, t], [one / t, one + one]]
        regular, worst = dvr_lattice_regular(vectors, place)
        assert not regular and worst == -1
        basis = dvr_reduce(vectors, place)
        assert len(basis) == 2

    def test_reduce_collapses_proportional_vectors(self):
        t = RatFunc.var()
        one = RatFunc.const(1)
        place = Place.rational(Fraction(0))
        vectors = [[one, t], [one / t, one]]  # second = first / t
        basis = dvr_reduce(vectors, place)
        assert len(basis) == 1

    def test_lattice_membership_structure(self):
        t = RatFunc.var()
        one = RatFunc.const(1)
        place = Place.rational(Fraction(0))
        vectors = [[one, FT.zero], [FT.zero, t]]
        regular, worst = dvr_lattice_regular(vectors, place)
        assert regular
