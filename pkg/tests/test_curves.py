import pytest

from azcurve.curves import (
    Component,
    CurveError,
    Node,
    arithmetic_genus,
    build_curve,
    euler_char,
    projective_line,
)
from azcurve.polys import Place


def chain(n):
    comps = [Component(f"c{i}") for i in range(n)]
    nodes = [
        Node(f"c{i}", Place.infinity(), f"c{i+1}", Place.rational(0))
        for i in range(n - 1)
    ]
    return build_curve(comps, nodes)


def cycle(n):
    comps = [Component(f"c{i}") for i in range(n)]
    nodes = [
        Node(f"c{i}", Place.infinity(), f"c{(i+1) % n}", Place.rational(0))
        for i in range(n)
    ]
    return build_curve(comps, nodes)


class TestBuild:
    def test_single_component(self):
        c = projective_line()
        assert arithmetic_genus(c) == 0

    def test_chain(self):
        assert arithmetic_genus(chain(2)) == 0
        assert arithmetic_genus(chain(3)) == 0

    def test_self_node(self):
        c = build_curve(
            [Component("c0")],
            [Node("c0", Place.rational(0), "c0", Place.infinity())],
        )
        assert arithmetic_genus(c) == 1

    def test_two_self_nodes(self):
        c = build_curve(
            [Component("c0")],
            [
                Node("c0", Place.rational(0), "c0", Place.infinity()),
                Node("c0", Place.rational(1), "c0", Place.rational(2)),
            ],
        )
        assert arithmetic_genus(c) == 2

    def test_disconnected_rejected(self):
        with pytest.raises(CurveError, match="disconnected"):
            build_curve([Component("a"), Component("b")], [])

    def test_duplicate_attachment_rejected(self):
        with pytest.raises(CurveError, match="two node ends"):
            build_curve(
                [Component("a"), Component("b")],
                [
                    Node("a", Place.rational(0), "b", Place.rational(0)),
                    Node("a", Place.rational(0), "b", Place.rational(1)),
                ],
            )

    def test_degenerate_self_gluing_rejected(self):
        with pytest.raises(CurveError):
            build_curve(
                [Component("a")], [Node("a", Place.rational(0), "a", Place.rational(0))]
            )

    def test_irrational_attachment_rejected(self):
        from azcurve.polys import Poly
        from fractions import Fraction

        irr = Place.irreducible(Poly([Fraction(1), Fraction(0), Fraction(1)]))
        with pytest.raises(CurveError, match="rational or infinity"):
            build_curve(
                [Component("a"), Component("b")],
                [Node("a", irr, "b", Place.rational(0))],
            )

    def test_bad_polarization(self):
        with pytest.raises(CurveError):
            Component("a", 0)


class TestGenusAndEuler:
    def test_cycle_genus(self):
        assert arithmetic_genus(cycle(3)) == 1

    def test_genus_zero_iff_tree(self):
        for n in (1, 2, 4):
            assert arithmetic_genus(chain(n)) == 0
        for n in (2, 3, 5):
            assert arithmetic_genus(cycle(n)) == 1

    def test_euler_examples(self):
        assert euler_char(projective_line(), 2, 0) == 2
        assert euler_char(cycle(3), 3, 0) == 0
        assert euler_char(projective_line(), 1, 5) == 6

    def test_euler_additive_in_degree(self):
        c = cycle(2)
        for d in range(-3, 4):
            assert euler_char(c, 2, d) + 1 == euler_char(c, 2, d + 1)
