import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from azcurve.polys import (
    ExactError,
    Place,
    Poly,
    RatFunc,
    poly_interpolate,
    rational_roots,
    ratfunc_normalize,
    valuation_at,
)


def P(*coeffs):
    return Poly([Fraction(c) for c in coeffs])


class TestPoly:
    def test_strip_and_degree(self):
        assert P(1, 2, 0, 0).degree == 1
        assert P().is_zero()
        assert P(0, 0).is_zero()

    def test_arithmetic(self):
        a, b = P(1, 1), P(-1, 1)
        assert a * b == P(-1, 0, 1)
        assert a + b == P(0, 2)
        assert (a - a).is_zero()
        assert a**3 == P(1, 3, 3, 1)

    def test_divmod_exact(self):
        q, r = P(-1, 0, 1).divmod(P(-1, 1))
        assert q == P(1, 1) and r.is_zero()
        with pytest.raises(ExactError):
            P(1).divmod(P())

    def test_gcd(self):
        a = P(1, 2, 1)  # (t+1)^2
        b = P(-1, 0, 1)  # (t-1)(t+1)
        assert a.gcd(b) == P(1, 1)
        assert P().gcd(b) == b.monic()
        # gcd with rational coefficients stays exact
        c = P(Fraction(2, 3), Fraction(4, 3))
        assert c.gcd(P(1, 2)) == P(Fraction(1, 2), 1)

    def test_squarefree_decomposition(self):
        p = P(0, 1) ** 3 * P(1, 1) ** 2 * P(2, 1)
        layers = dict((i, g) for g, i in p.squarefree_decomposition())
        assert layers[3] == P(0, 1)
        assert layers[2] == P(1, 1)
        assert layers[1] == P(2, 1)

    def test_shift(self):
        p = P(0, 0, 1)
        assert p.shift(Fraction(1)) == P(1, 2, 1)

    def test_interpolation(self):
        pts = [(Fraction(i), Fraction(i * i + 3)) for i in range(5)]
        assert poly_interpolate(pts) == P(3, 0, 1)


class TestRationalRoots:
    def test_simple(self):
        roots, residual = rational_roots(P(2, -3, 1))
        assert roots == [(Fraction(1), 1), (Fraction(2), 1)]
        assert residual == P(1)

    def test_irrational_residual(self):
        roots, residual = rational_roots(P(-2, 0, 1))
        assert roots == []
        assert residual == P(-2, 0, 1)

    def test_multiplicity(self):
        roots, residual = rational_roots(P(0, 0, 0, 1))
        assert roots == [(Fraction(0), 3)]
        assert residual == P(1)

    def test_fractional_root(self):
        p = P(-3, 2) * P(5, 1)  # roots 3/2 and -5
        roots, residual = rational_roots(p)
        assert (Fraction(3, 2), 1) in roots and (Fraction(-5), 1) in roots
        assert residual == P(1)


class TestRatFunc:
    def test_normalize_examples(self):
        f = ratfunc_normalize(P(-1, 0, 1), P(-1, 1))
        assert f == RatFunc(P(1, 1))
        assert ratfunc_normalize(P(), P(2, 0, 0, 1)) == RatFunc(P(0))
        g = ratfunc_normalize(P(0, 2), P(2))
        assert g.num == P(0, 1) and g.den == P(1)

    def test_zero_denominator(self):
        with pytest.raises(ExactError, match="division by zero polynomial"):
            ratfunc_normalize(P(1), P())

    def test_field_ops(self):
        t = RatFunc.var()
        f = (t * t - 1) / (t - 1)
        assert f == t + 1
        assert (f - f).is_zero()
        assert (1 / t) * t == RatFunc.const(1)

    def test_eval(self):
        t = RatFunc.var()
        f = (t + 1) / (t - 1)
        assert f.eval(Fraction(3)) == 2
        with pytest.raises(ExactError):
            f.eval(Fraction(1))
        assert f.eval_at_infinity() == 1
        assert (1 / (t * t)).eval_at_infinity() == 0


class TestValuations:
    def test_examples(self):
        t = RatFunc.var()
        f = (t - 1) ** 2 / (t + 2)
        assert valuation_at(f, Place.rational(1)) == 2
        assert valuation_at(t, Place.infinity()) == -1
        irr = Place.irreducible(P(1, 0, 1))
        assert valuation_at(1 / (t * t + 1), irr) == -1

    def test_zero_rejected(self):
        with pytest.raises(ExactError, match="valuation of zero"):
            valuation_at(RatFunc.const(0), Place.rational(0))

    def test_irreducible_place_guards(self):
        with pytest.raises(ExactError):
            Place.irreducible(P(-1, 0, 1))  # t^2 - 1 has rational roots
        with pytest.raises(ExactError):
            Place.irreducible(P(1, 2, 1))  # (t+1)^2 is not squarefree
        quartic = Place.irreducible(P(2, 0, 0, 0, 1))
        assert quartic.unverified

    @settings(max_examples=60, derandomize=True)
    @given(st.integers(-30, 30), st.integers(-30, 30), st.integers(1, 60))
    def test_valuation_additive(self, a, b, denom):
        t = RatFunc.var()
        f = (t - Fraction(a, denom)) * (t + 2) ** 2
        g = RatFunc(P(Fraction(b), 1), P(Fraction(a, denom), 0, 1))
        for place in (Place.rational(Fraction(a, denom)), Place.infinity(), Place.rational(-2)):
            assert valuation_at(f * g, place) == valuation_at(f, place) + valuation_at(g, place)


class TestGcdProperties:
    @settings(max_examples=40, derandomize=True)
    @given(st.lists(st.integers(-9, 9), min_size=1, max_size=6),
           st.lists(st.integers(-9, 9), min_size=1, max_size=6))
    def test_gcd_divides_and_coprime_quotients(self, aco, bco):
        a, b = P(*aco), P(*bco)
        if a.is_zero() or b.is_zero():
            return
        g = a.gcd(b)
        qa = a.exact_div(g)
        qb = b.exact_div(g)
        assert (a % g).is_zero() and (b % g).is_zero()
        assert qa.gcd(qb).degree == 0
