import random
from fractions import Fraction

import pytest

from conftest import mat_q
from azcurve.dzero import (
    DZeroError,
    d0_classify,
    d0_iso,
    d0_point,
    d0_support,
    d0_validate,
)
from azcurve.linalg import FieldMatrix, QQ, char_poly, min_poly
from azcurve.polys import Poly


def rand_invertible(rng, n):
    while True:
        s = mat_q([[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)])
        cp = char_poly(s, QQ)
        det = cp[0] if n % 2 == 0 else -cp[0]
        if det != 0:
            return s


def inverse_of(s):
    from azcurve.morphisms import _matrix_inverse

    return _matrix_inverse(s, QQ)


class TestValidate:
    def test_examples(self):
        assert d0_validate(d0_point([mat_q([[1, 0], [0, 2]]), mat_q([[3, 0], [0, 4]])])).ok
        rep = d0_validate(d0_point([mat_q([[0, 1], [0, 0]]), mat_q([[0, 0], [1, 0]])]))
        assert not rep.ok and rep.failing_pairs == [(0, 1)]
        assert d0_validate(d0_point([FieldMatrix.identity(3, QQ)])).ok

    def test_shape_error(self):
        bad = FieldMatrix([[Fraction(0), Fraction(1)]])
        rep = d0_validate(d0_point([bad]))
        assert not rep.ok and rep.shape_errors


class TestSupport:
    def test_simultaneous_diagonal(self):
        s = d0_support(d0_point([mat_q([[1, 0, 0], [0, 1, 0], [0, 0, 2]]),
                                 mat_q([[3, 0, 0], [0, 4, 0], [0, 0, 5]])]))
        pts = [(p.coordinates, p.length) for p in s.points]
        assert pts == [
            ((Fraction(1), Fraction(3)), 1),
            ((Fraction(1), Fraction(4)), 1),
            ((Fraction(2), Fraction(5)), 1),
        ]

    def test_nilpotent_thickening(self):
        s = d0_support(d0_point([mat_q([[0, 1], [0, 0]])]))
        assert len(s.points) == 1
        p = s.points[0]
        assert p.coordinates == (Fraction(0),) and p.space_dim == 2

    def test_conjugate_cluster(self):
        s = d0_support(d0_point([mat_q([[0, 2], [1, 0]])]))
        assert len(s.points) == 1
        p = s.points[0]
        assert p.coordinates[0] == Poly([Fraction(-2), Fraction(0), Fraction(1)])
        assert p.degree == 2 and p.length == 1 and p.space_dim == 2

    def test_joint_cluster_splitting(self):
        # two closed points sharing every per-matrix factor
        c = mat_q([[0, 2, 0, 0], [1, 0, 0, 0], [0, 0, 0, 2], [0, 0, 1, 0]])
        d = mat_q([[0, 2, 0, 0], [1, 0, 0, 0], [0, 0, 0, -2], [0, 0, -1, 0]])
        s = d0_support(d0_point([c, d]))
        assert len(s.points) == 2
        assert all(p.degree == 2 and p.length == 1 for p in s.points)
        assert s.total_length() == 4

    def test_length_conservation_random(self):
        rng = random.Random(31)
        for _ in range(25):
            n = rng.randint(2, 4)
            base = mat_q([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
            mats = [base, base * base]
            s = d0_support(d0_point(mats))
            assert s.total_length() == n


class TestClassify:
    def test_examples(self):
        c1 = d0_classify(d0_point([mat_q([[1, 0], [0, 2]])]))
        assert (c1.chow, c1.hilb, c1.singleton) == (True, True, False)
        c2 = d0_classify(d0_point([mat_q([[0, 1], [0, 0]])]))
        assert (c2.chow, c2.hilb, c2.singleton) == (False, True, True)
        c3 = d0_classify(d0_point([mat_q([[0, 0], [0, 0]])]))
        assert (c3.chow, c3.hilb, c3.singleton) == (True, False, True)

    def test_hilb_implies_algebra_dim(self):
        rng = random.Random(17)
        for _ in range(20):
            n = rng.randint(2, 4)
            m = mat_q([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
            rep = d0_classify(d0_point([m]))
            if rep.hilb is True:
                assert rep.algebra_dim == n

    def test_scalar_iff_chow_and_singleton(self):
        rng = random.Random(19)
        for _ in range(30):
            n = rng.randint(2, 3)
            m = mat_q([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
            rep = d0_classify(d0_point([m]))
            if rep.chow and rep.singleton:
                scalar = all(
                    m.entries[i][j] == (m.entries[0][0] if i == j else 0)
                    for i in range(n)
                    for j in range(n)
                )
                assert scalar

    def test_conjugation_invariance(self):
        rng = random.Random(23)
        for _ in range(10):
            n = rng.randint(2, 3)
            m = mat_q([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
            s = rand_invertible(rng, n)
            sinv = inverse_of(s)
            conj = s * m * sinv
            a = d0_classify(d0_point([m]))
            b = d0_classify(d0_point([conj]))
            assert (a.chow, a.singleton) == (b.chow, b.singleton)
            assert len(d0_support(d0_point([m])).points) == len(
                d0_support(d0_point([conj])).points
            )


class TestIso:
    def test_same_simple_spectrum(self):
        rep = d0_iso(d0_point([mat_q([[1, 0], [0, 2]])]), d0_point([mat_q([[1, 1], [0, 2]])]))
        assert rep.verdict and rep.witness is not None

    def test_different_min_poly(self):
        rep = d0_iso(d0_point([mat_q([[0, 0], [0, 0]])]), d0_point([mat_q([[0, 1], [0, 0]])]))
        assert not rep.verdict
        assert "minimal polynomial" in rep.certificate

    def test_conjugation_round_trip(self):
        rng = random.Random(41)
        for _ in range(10):
            n = rng.randint(2, 4)
            m = mat_q([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
            s = rand_invertible(rng, n)
            conj = s * m * inverse_of(s)
            rep = d0_iso(d0_point([m]), d0_point([conj]))
            assert rep.verdict
            w = rep.witness
            assert (w * m - conj * w).is_zero(QQ)

    def test_reflexive_symmetric(self):
        rng = random.Random(43)
        for _ in range(6):
            n = rng.randint(2, 3)
            a = mat_q([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
            b = mat_q([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
            assert d0_iso(d0_point([a]), d0_point([a])).verdict
            ab = d0_iso(d0_point([a]), d0_point([b])).verdict
            ba = d0_iso(d0_point([b]), d0_point([a])).verdict
            assert ab == ba

    def test_rank_mismatch(self):
        with pytest.raises(DZeroError):
            d0_iso(d0_point([mat_q([[0]])]), d0_point([mat_q([[0, 0], [0, 0]])]))

    def test_same_char_poly_not_isomorphic(self):
        # J3(0) vs J2(0) + J1(0): same char poly, different Jordan type
        a = mat_q([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
        b = mat_q([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
        rep = d0_iso(d0_point([a]), d0_point([b]))
        assert not rep.verdict
