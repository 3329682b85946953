"""Hilbert-polynomial inequalities for the reduced support of the graph.

For a morphism whose branch model is exact with pairwise transverse
branches, the reduced graph inside (curve) x P^k is a nodal union of
smooth rational curves.  Its Hilbert polynomial under the product
polarization is alpha * m + chi where alpha sums the per-branch bidegrees
and chi is the branch count minus the number of pairwise intersection
points; both sides of the comparison against the ambient structure sheaf
are exact integers.  Tangential intersections are rejected, not
miscounted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .curves import arithmetic_genus
from .morphisms import (
    AzMorphism,
    Branch,
    BranchModel,
    EXACT,
    MorphismError,
    branch_model,
    comb_type,
    homogenized_params,
)
from .polys import ExactError, INFINITY, Place, Poly, RatFunc


class BoundsError(MorphismError):
    pass


class TangentialIntersection(BoundsError):
    pass


def _homogenized(branch: Branch) -> list[Poly]:
    """Coprime homogeneous coordinate tuple (h_0 ... h_k) in the branch
    parameter."""
    return homogenized_params(list(branch.parametrization))


def _common_degree(tuple_polys: list[Poly]) -> int:
    return max(p.degree for p in tuple_polys if not p.is_zero())


def _pair_intersections(h1: list[Poly], h2: list[Poly]) -> tuple[int, list[str]]:
    """Number of geometric intersection points of two branch sections on
    the same component, all contacts required transverse."""
    k1 = len(h1)
    minors = []
    for i in range(k1):
        for j in range(i + 1, k1):
            m = h1[i] * h2[j] - h1[j] * h2[i]
            if not m.is_zero():
                minors.append(m)
    if not minors:
        raise BoundsError("branches coincide")
    g = minors[0].monic()
    for m in minors[1:]:
        g = g.gcd(m)
        if g.degree == 0:
            break
    count = 0
    witnesses = []
    if g.degree > 0:
        sq = g.squarefree_part()
        if sq.degree != g.degree:
            raise TangentialIntersection(
                "intersection multiplicity > 1 unsupported (finite contact)"
            )
        count += g.degree
        witnesses.append(f"finite contact locus {g.pretty()}")
    # contact at the parameter's point at infinity
    d1, d2 = _common_degree(h1), _common_degree(h2)
    r1 = [p.reverse(d1) for p in h1]
    r2 = [p.reverse(d2) for p in h2]
    inf_ord = None
    for i in range(k1):
        for j in range(i + 1, k1):
            m = r1[i] * r2[j] - r1[j] * r2[i]
            if m.is_zero():
                continue
            ord_u = 0
            while m.constant_term() == 0:
                m = m.exact_div(Poly.x())
                ord_u += 1
            inf_ord = ord_u if inf_ord is None else min(inf_ord, ord_u)
    if inf_ord is None:
        raise BoundsError("branches coincide at infinity")
    if inf_ord >= 2:
        raise TangentialIntersection(
            "intersection multiplicity > 1 unsupported (contact at infinity)"
        )
    if inf_ord == 1:
        count += 1
        witnesses.append("contact at parameter infinity")
    return count, witnesses


def _branch_point_at(h: list[Poly], place: Place) -> tuple[Fraction, ...]:
    if place.kind == INFINITY:
        d = _common_degree(h)
        vals = [p.reverse(d).constant_term() for p in h]
    else:
        vals = [p.eval(place.coordinate) for p in h]
    for v in vals:
        if v != 0:
            return tuple(x / v for x in vals)
    raise BoundsError("homogeneous tuple vanished at a point")


@dataclass
class BoundsReport:
    ok: bool
    alpha: int
    chi_support: int
    branch_count: int
    intersection_pairs: int
    graph_genus: int
    ambient: list[tuple[int, int, int]]  # (m, P_supp(m), P_ambient(m))
    genus_interval: tuple[int, int]
    genus_in_interval: bool
    inequalities_hold: bool
    notes: list[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "support_slope": self.alpha,
            "support_constant": self.chi_support,
            "branches": self.branch_count,
            "intersection_pairs": self.intersection_pairs,
            "graph_genus": self.graph_genus,
            "rows": [
                {"m": m, "support": ps, "ambient": pa} for (m, ps, pa) in self.ambient
            ],
            "genus_interval": list(self.genus_interval),
            "genus_in_interval": self.genus_in_interval,
            "inequalities_hold": self.inequalities_hold,
            "notes": list(self.notes),
        }


def support_bounds_check(phi: AzMorphism, m_max: int, m0: int) -> BoundsReport:
    """Verify 0 <= P(Supp, m) <= P(ambient, m) on 1..m_max and locate the
    graph genus inside the regularity interval at m0.

    Requires an exact branch model with transverse branches; tangencies
    raise TangentialIntersection.
    """
    model = branch_model(phi)
    for b in model.branches:
        if b.kind != EXACT:
            raise BoundsError("support bounds require exact branches")
    notes: list[str] = []
    homog = {id(b): _homogenized(b) for b in model.branches}
    alpha = 0
    for b in model.branches:
        a_c = phi.curve.component(b.component).polarization
        alpha += b.degree_over_c * a_c + b.map_degree
    # pairwise intersections within a component
    pair_count = 0
    for comp in phi.curve.components:
        branches = model.for_component(comp.label)
        for i in range(len(branches)):
            for j in range(i + 1, len(branches)):
                cnt, wit = _pair_intersections(homog[id(branches[i])], homog[id(branches[j])])
                pair_count += cnt
                for w in wit:
                    notes.append(
                        f"{comp.label}: branches {i} and {j}: {w}"
                    )
    # gluing over nodes: cross-side incidences at shared fiber points
    for node in phi.curve.nodes:
        side_a = model.for_component(node.component_a)
        side_b = model.for_component(node.component_b)
        points_a: dict = {}
        for b in side_a:
            pt = _branch_point_at(homog[id(b)], node.place_a)
            points_a[pt] = points_a.get(pt, 0) + 1
        points_b: dict = {}
        for b in side_b:
            pt = _branch_point_at(homog[id(b)], node.place_b)
            points_b[pt] = points_b.get(pt, 0) + 1
        for pt, ca in points_a.items():
            cb = points_b.get(pt, 0)
            pair_count += ca * cb
    branch_count = len(model.branches)
    chi_support = branch_count - pair_count
    graph_genus = 1 - chi_support
    g = arithmetic_genus(phi.curve)
    deg_c = phi.curve.total_degree()
    k = phi.k

    def ambient_poly(m: int) -> int:
        return (deg_c * m + 1 - g) * math.comb(m + k, k)

    def supp_poly(m: int) -> int:
        return alpha * m + chi_support

    rows = []
    ineq = True
    for m in range(1, m_max + 1):
        ps, pa = supp_poly(m), ambient_poly(m)
        rows.append((m, ps, pa))
        if not (0 <= ps <= pa):
            ineq = False
    ct = comb_type(phi)
    slope = phi.r * deg_c + ct.beta
    lower = 1 - ambient_poly(m0) + m0
    upper = 1 + slope * m0
    in_interval = lower <= graph_genus <= upper
    return BoundsReport(
        ok=ineq and in_interval,
        alpha=alpha,
        chi_support=chi_support,
        branch_count=branch_count,
        intersection_pairs=pair_count,
        graph_genus=graph_genus,
        ambient=rows,
        genus_interval=(lower, upper),
        genus_in_interval=in_interval,
        inequalities_hold=ineq,
        notes=notes,
    )
