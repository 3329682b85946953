import math
from fractions import Fraction

import pytest

from conftest import morphism_t
from azcurve.bounds import BoundsError, TangentialIntersection, support_bounds_check
from azcurve.curves import Component, Node, build_curve
from azcurve.linalg import FieldMatrix
from azcurve.morphisms import AzMorphism
from azcurve.exprs import parse_ratfunc
from azcurve.polys import Place


def mat_t(rows):
    return FieldMatrix([[parse_ratfunc(c) for c in row] for row in rows])


class TestSupportPolynomial:
    def test_two_graphs(self):
        # branches y = t and y = t^2 meet at t = 0, t = 1, and once more
        # over t = infinity (the class computation (A+B).(A+2B) = 3 in the
        # product of two lines), so chi = 2 - 3 = -1
        phi = morphism_t([[["t", "0"], ["0", "t^2"]]])
        rep = support_bounds_check(phi, m_max=5, m0=5)
        assert rep.alpha == 5
        assert rep.branch_count == 2 and rep.intersection_pairs == 3
        assert rep.chi_support == -1 and rep.graph_genus == 2
        assert rep.inequalities_hold and rep.genus_in_interval and rep.ok

    def test_identity_graph(self):
        phi = morphism_t([[["t", "0"], ["0", "t"]]])
        rep = support_bounds_check(phi, m_max=5, m0=5)
        assert rep.alpha == 2 and rep.chi_support == 1
        for m, ps, pa in rep.ambient:
            assert ps == 2 * m + 1
            assert pa == (m + 1) * (m + 1)
            assert 0 <= ps <= pa

    def test_constant_map(self):
        phi = morphism_t([[["0"]]])
        rep = support_bounds_check(phi, m_max=5, m0=5)
        assert rep.alpha == 1 and rep.chi_support == 1
        for m, ps, pa in rep.ambient:
            assert ps == m + 1 and pa == (m + 1) * (m + 1)

    def test_tangential_rejected(self):
        # y = 0 and y = t^2 meet with contact order two at t = 0
        phi = morphism_t([[["0", "0"], ["0", "t^2"]]])
        with pytest.raises(TangentialIntersection, match="multiplicity > 1"):
            support_bounds_check(phi, m_max=3, m0=3)

    def test_tangency_at_infinity_rejected(self):
        # polynomial branches of degrees 2 and 4 are tangent over t = inf
        phi = morphism_t([[["t^2", "0"], ["0", "t^4 + 1"]]])
        with pytest.raises(TangentialIntersection, match="infinity"):
            support_bounds_check(phi, m_max=3, m0=3)

    def test_cluster_rejected(self):
        phi = morphism_t([[["0", "t"], ["1", "0"]]])
        with pytest.raises(BoundsError, match="exact branches"):
            support_bounds_check(phi, m_max=3, m0=3)

    def test_irrational_intersections_counted(self):
        # y = t + 1 and y = t^2 meet where t^2 - t - 1 = 0: two conjugate
        # points, plus one contact at infinity
        phi = morphism_t([[["t + 1", "0"], ["0", "t^2"]]])
        rep = support_bounds_check(phi, m_max=5, m0=5)
        assert rep.intersection_pairs == 3

    def test_node_gluing_counts(self):
        cyc = build_curve(
            [Component("c0"), Component("c1")],
            [
                Node("c0", Place.rational(0), "c1", Place.rational(0)),
                Node("c0", Place.infinity(), "c1", Place.infinity()),
            ],
        )
        m = mat_t([["t", "0"], ["0", "t"]])
        phi = AzMorphism(cyc, 2, 1, {"c0": (m,), "c1": (m,)})
        rep = support_bounds_check(phi, m_max=5, m0=5)
        # two identity graphs glued over both nodes: a cycle, genus 1
        assert rep.branch_count == 2 and rep.intersection_pairs == 2
        assert rep.graph_genus == 1

    def test_genus_interval_formula(self):
        phi = morphism_t([[["t", "0"], ["0", "t^2"]]])
        m0 = 7
        rep = support_bounds_check(phi, m_max=3, m0=m0)
        ambient_at_m0 = (1 * m0 + 1) * math.comb(m0 + 1, 1)
        assert rep.genus_interval[0] == 1 - ambient_at_m0 + m0
        assert rep.genus_interval[1] == 1 + (2 * 1 + 3) * m0
