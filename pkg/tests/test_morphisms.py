import random
from fractions import Fraction

import pytest

from conftest import mat_q, mat_t, morphism_t, random_parametrization
from azcurve.curves import Component, Node, build_curve, projective_line
from azcurve.linalg import FieldMatrix, QQ
from azcurve.morphisms import (
    AzMorphism,
    BranchSpec,
    FiberError,
    FT,
    MorphismError,
    branch_model,
    comb_type,
    fiber_at,
    from_branches,
    function_field_roots,
    hilbert_poly,
    hilbert_pretty,
    image_degree,
    morphism_validate,
    surrogate_summary,
)
from azcurve.exprs import parse_ratfunc
from azcurve.polys import Place, Poly, RatFunc


class TestFunctionFieldRoots:
    def test_polynomial_roots(self):
        t = RatFunc.var()
        one = RatFunc.const(1)
        # (x - t)(x - t^2)
        coeffs = [t**3, -(t + t * t), one]
        roots = function_field_roots(coeffs)
        assert sorted(f.pretty() for f in roots) == ["t", "t^2"]

    def test_rational_function_root(self):
        t = RatFunc.var()
        one = RatFunc.const(1)
        f = (t + 1) / (t * t + 2)
        coeffs = [f * 7, -(f + 7), one]  # (x - f)(x - 7)
        roots = function_field_roots(coeffs)
        assert f in roots and RatFunc.const(7) in roots

    def test_irreducible_has_no_roots(self):
        t = RatFunc.var()
        one = RatFunc.const(1)
        assert function_field_roots([-t, FT.zero, one]) == []  # x^2 - t

    def test_zero_root_peeled(self):
        t = RatFunc.var()
        one = RatFunc.const(1)
        roots = function_field_roots([FT.zero, -t, one])  # x(x - t)
        assert RatFunc.const(0) in roots and t in roots


class TestValidate:
    def test_self_commuting(self):
        phi = morphism_t([[["0", "t"], ["1", "0"]]])
        assert morphism_validate(phi).ok

    def test_node_mismatch(self):
        chain = build_curve(
            [Component("c0"), Component("c1")],
            [Node("c0", Place.rational(0), "c1", Place.rational(0))],
        )
        bad = AzMorphism(
            chain,
            2,
            1,
            {
                "c0": (mat_t([["t", "0"], ["0", "2*t"]]),),
                "c1": (mat_t([["t", "0"], ["0", "1 + t"]]),),
            },
        )
        rep = morphism_validate(bad)
        assert not rep.ok and "reduced fibers differ" in rep.problems[0]
        good = AzMorphism(
            chain,
            2,
            1,
            {
                "c0": (mat_t([["t", "0"], ["0", "2*t"]]),),
                "c1": (mat_t([["t", "0"], ["0", "2*t^2"]]),),
            },
        )
        assert morphism_validate(good).ok

    def test_commutation_failure(self):
        phi = morphism_t([[["0", "1"], ["0", "0"]], [["0", "0"], ["1", "0"]]])
        rep = morphism_validate(phi)
        assert not rep.ok and "do not commute" in rep.problems[0]


class TestFibers:
    def test_split_fiber(self):
        phi = morphism_t([[["0", "t"], ["1", "0"]]])
        fib = fiber_at(phi, "c0", Place.rational(4))
        pts = sorted(p.homogeneous for p in fib.points)
        assert pts == [
            (Fraction(1), Fraction(-2)),
            (Fraction(1), Fraction(2)),
        ]
        assert all(p.length == 1 for p in fib.points)

    def test_nilpotent_fiber(self):
        phi = morphism_t([[["0", "t"], ["1", "0"]]])
        fib = fiber_at(phi, "c0", Place.rational(0))
        assert len(fib.points) == 1
        assert fib.points[0].homogeneous == (Fraction(1), Fraction(0))
        assert fib.points[0].length == 2

    def test_chart_switch_at_infinity(self):
        phi = morphism_t([[["t", "0"], ["0", "t"]]])
        fib = fiber_at(phi, "c0", Place.infinity())
        assert len(fib.points) == 1
        assert fib.points[0].homogeneous == (Fraction(0), Fraction(1))
        assert fib.points[0].length == 2

    def test_fiber_not_proper(self):
        # nilpotent direction with unbounded entry: no chart captures t=inf
        phi = morphism_t([[["0", "0"], ["t", "0"]]])
        # the branch parametrization is exact (y = 0), so this one is fine
        fib = fiber_at(phi, "c0", Place.infinity())
        assert fib.points[0].homogeneous == (Fraction(1), Fraction(0))

    def test_length_conservation(self, branch_corpus):
        rng = random.Random(77)
        for specs, phi in branch_corpus[:10]:
            for _ in range(5):
                place = Place.rational(Fraction(rng.randint(-30, 30), rng.randint(1, 7)))
                try:
                    fib = fiber_at(phi, "c0", place)
                except FiberError:
                    continue
                assert fib.total_length() == phi.r


class TestBranchModel:
    def test_two_graphs(self):
        phi = morphism_t([[["t", "0"], ["0", "t^2"]]])
        model = branch_model(phi)
        got = sorted((b.length, b.map_degree, b.parametrization[0].pretty()) for b in model.branches)
        assert got == [(1, 1, "t"), (1, 2, "t^2")]

    def test_jordan_thickening(self):
        phi = morphism_t([[["t", "1"], ["0", "t"]]])
        model = branch_model(phi)
        assert len(model.branches) == 1
        b = model.branches[0]
        assert b.kind == "exact" and b.length == 2 and b.map_degree == 1

    def test_cluster_branch(self):
        phi = morphism_t([[["0", "t"], ["1", "0"]]])
        model = branch_model(phi)
        b = model.branches[0]
        assert b.kind == "cluster"
        assert b.length == 1 and b.degree_over_c == 2 and b.map_degree == 1
        assert [c.pretty() for c in b.cluster_poly] == ["-t", "0", "1"]

    def test_coincident_sheets_merge(self):
        p1 = projective_line()
        t = RatFunc.var()
        phi = from_branches(p1, [BranchSpec("c0", (t,), 2, "split")], 2, 1)
        model = branch_model(phi)
        assert len(model.branches) == 1 and model.branches[0].length == 2


class TestFromBranches:
    def test_split_blocks(self):
        p1 = projective_line()
        t = RatFunc.var()
        phi = from_branches(p1, [BranchSpec("c0", (t,), 1), BranchSpec("c0", (t * t,), 1)], 2, 1)
        assert phi.matrices["c0"][0] == mat_t([["t", "0"], ["0", "t^2"]])

    def test_jordan_block(self):
        p1 = projective_line()
        t = RatFunc.var()
        phi = from_branches(p1, [BranchSpec("c0", (t,), 2, "jordan")], 2, 1)
        assert phi.matrices["c0"][0] == mat_t([["t", "1"], ["0", "t"]])

    def test_length_mismatch(self):
        p1 = projective_line()
        t = RatFunc.var()
        with pytest.raises(MorphismError, match="sum to"):
            from_branches(p1, [BranchSpec("c0", (t,), 1)], 2, 1)

    def test_round_trip_sample(self, branch_corpus):
        for specs, phi in branch_corpus[:15]:
            model = branch_model(phi)
            got = sorted(
                (b.length, b.map_degree, tuple(f.pretty() for f in b.parametrization))
                for b in model.branches
            )
            from azcurve.morphisms import map_degree_of_params

            want = sorted(
                (s.length, map_degree_of_params(list(s.parametrization)),
                 tuple(f.pretty() for f in s.parametrization))
                for s in specs
            )
            assert got == want


class TestInvariants:
    def test_comb_type_examples(self):
        phi = morphism_t([[["t", "0"], ["0", "t^2"]]])
        assert comb_type(phi).to_json() == {"g": 0, "r": 2, "chi": 2, "beta": 3}
        assert hilbert_pretty(*hilbert_poly(phi)) == "5m + 2"
        phi2 = morphism_t([[["0", "t"], ["1", "0"]]])
        assert comb_type(phi2).to_json() == {"g": 0, "r": 2, "chi": 2, "beta": 1}

    def test_cycle_example(self):
        cyc = build_curve(
            [Component("c0"), Component("c1")],
            [
                Node("c0", Place.rational(0), "c1", Place.rational(0)),
                Node("c0", Place.infinity(), "c1", Place.infinity()),
            ],
        )
        m = mat_t([["t", "0"], ["0", "t"]])
        phi = AzMorphism(cyc, 2, 1, {"c0": (m,), "c1": (m,)})
        assert morphism_validate(phi).ok
        ct = comb_type(phi)
        assert ct.to_json() == {"g": 1, "r": 2, "chi": 0, "beta": 4}
        assert hilbert_pretty(*hilbert_poly(phi)) == "8m + 0"

    def test_contracted_branches(self):
        phi = morphism_t([[["1", "0"], ["0", "-1"]]])
        assert comb_type(phi).beta == 0

    def test_image_degree_requires_exact(self):
        # x^2 - (t^3+t+1): irreducible quadratic whose curve is not rational
        # over the lambda line in our restricted sense (t-degree 3)
        phi = morphism_t([[["0", "t^3 + t + 1"], ["1", "0"]]])
        model = branch_model(phi)
        assert model.branches[0].kind == "sampled"
        with pytest.raises(MorphismError, match="exact branches"):
            image_degree(model)

    def test_conjugation_invariance(self, branch_corpus):
        rng = random.Random(55)
        for specs, phi in branch_corpus[:6]:
            n = phi.r
            while True:
                s = mat_q([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
                from azcurve.linalg import char_poly

                cp = char_poly(s, QQ)
                det = cp[0] if n % 2 == 0 else -cp[0]
                if det != 0:
                    break
            from azcurve.morphisms import _matrix_inverse

            s_t = s.map(lambda c: RatFunc.const(c))
            sinv = _matrix_inverse(s_t, FT)
            conj = AzMorphism(
                phi.curve,
                phi.r,
                phi.k,
                {"c0": tuple(s_t * m * sinv for m in phi.matrices["c0"])},
                phi.deg_e,
            )
            assert comb_type(conj) == comb_type(phi)


class TestSurrogate:
    def test_drop_places(self):
        phi = morphism_t([[["t", "0"], ["0", "t^2"]]])
        rep = surrogate_summary(phi)[0]
        assert rep.generic_degree == 2
        drops = sorted(d.place.pretty() for d in rep.drops)
        assert drops == ["t=0", "t=1"]
        assert all(d.nilpotent_verified for d in rep.drops)

    def test_scalar_no_drops(self):
        phi = morphism_t([[["t", "0"], ["0", "t"]]])
        rep = surrogate_summary(phi)[0]
        assert rep.generic_degree == 1 and rep.drops == []

    def test_jordan_no_drops(self):
        phi = morphism_t([[["t", "1"], ["0", "t"]]])
        rep = surrogate_summary(phi)[0]
        assert rep.generic_degree == 2 and rep.drops == []

    def test_degree_bound(self, branch_corpus):
        for specs, phi in branch_corpus[:10]:
            rep = surrogate_summary(phi)[0]
            assert rep.generic_degree <= phi.r * phi.r
