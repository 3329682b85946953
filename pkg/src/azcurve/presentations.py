"""General chart presentations: admissible idempotent pseudo-sections, the
four atlas gluing conditions, nondegeneracy relative to the standard
hyperplanes, and spectral curves.

A chart presentation carries, per curve component, one constant idempotent
per standard chart together with the full grid of chart coordinates
m[i][j] (the chart-i picture of y_j/y_i), with m[i][i] equal to the chart
idempotent.  Conditions (1) to (3) are exact matrix identities; the
regularity condition (4) is checked effectively at a finite candidate set
of places through local-ring lattice reduction, with the idempotent
weights combining the per-chart lattices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

from .curves import PrestableCurve
from .linalg import (
    FieldMatrix,
    FunctionField,
    QQ,
    dvr_lattice_intersect,
    dvr_lattice_regular,
    dvr_reduce,
    min_poly,
    rref,
)
from .fpoly import fp_deg
from .morphisms import (
    AzMorphism,
    Branch,
    CLUSTER,
    EXACT,
    FT,
    MorphismError,
    branch_model,
    char_poly,
    homogenized_params,
)
from .polys import (
    ExactError,
    INFINITY,
    IRREDUCIBLE,
    Place,
    Poly,
    RATIONAL,
    RatFunc,
    places_of_poly,
    valuation_at,
)


class PresentationError(ExactError):
    pass


# ---------------------------------------------------------------------------
# pseudo-sections


@dataclass
class PseudoSection:
    """Per-component constant idempotent with its declared rank."""

    values: dict[str, FieldMatrix]  # label -> r x r rational matrix
    declared_ranks: dict[str, int]

    def value(self, label: str) -> FieldMatrix:
        return self.values[label]


def matrix_rank_q(m: FieldMatrix) -> int:
    red, _ = rref(m.entries, QQ)
    return len(red)


def is_idempotent(m: FieldMatrix) -> bool:
    return (m * m - m).is_zero(QQ)


def subordinate(e_small: FieldMatrix, e_big: FieldMatrix) -> bool:
    """e' <= e tested as e e' = e' e = e'."""
    return (e_big * e_small - e_small).is_zero(QQ) and (
        e_small * e_big - e_small
    ).is_zero(QQ)


@dataclass
class AdmissibilityReport:
    ok: bool
    failures: list[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures)}


def check_admissible(sections: Sequence[PseudoSection], curve: PrestableCurve) -> AdmissibilityReport:
    """Idempotency and declared rank per component; commutation plus
    one-way subordination of the two values at every node."""
    report = AdmissibilityReport(ok=True)
    for sidx, sec in enumerate(sections):
        for comp in curve.components:
            if comp.label not in sec.values:
                report.failures.append(f"section {sidx}: no value on {comp.label!r}")
                report.ok = False
                continue
            e = sec.values[comp.label]
            if not is_idempotent(e):
                report.failures.append(
                    f"section {sidx}, component {comp.label!r}: not idempotent"
                )
                report.ok = False
            declared = sec.declared_ranks.get(comp.label)
            if declared is not None and matrix_rank_q(e) != declared:
                report.failures.append(
                    f"section {sidx}, component {comp.label!r}: rank "
                    f"{matrix_rank_q(e)} does not match declared {declared}"
                )
                report.ok = False
        for nidx, node in enumerate(curve.nodes):
            ea = sec.values.get(node.component_a)
            eb = sec.values.get(node.component_b)
            if ea is None or eb is None:
                continue
            if not ea.commutes_with(eb, QQ):
                report.failures.append(
                    f"section {sidx}, node {nidx}: values do not commute"
                )
                report.ok = False
                continue
            if not (subordinate(ea, eb) or subordinate(eb, ea)):
                report.failures.append(
                    f"section {sidx}, node {nidx}: neither value subordinate to the other"
                )
                report.ok = False
    return report


# ---------------------------------------------------------------------------
# chart presentations


@dataclass
class ChartPresentation:
    """Full chart data on each component: k+1 idempotents and the grid of
    chart coordinates, with m[i][i] the i-th idempotent."""

    curve: PrestableCurve
    r: int
    k: int
    idempotents: dict[str, list[FieldMatrix]]  # label -> k+1 rational matrices
    matrices: dict[str, list[list[FieldMatrix]]]  # label -> (k+1) x (k+1) over Q(t)


@dataclass
class ConditionVerdict:
    ok: bool
    witnesses: list[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "witnesses": list(self.witnesses)}


@dataclass
class AtlasReport:
    ok: bool
    conditions: dict[int, ConditionVerdict]
    structural: list[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "conditions": {str(i): v.to_json() for i, v in sorted(self.conditions.items())},
            "structural": list(self.structural),
        }


def _inclusion_exclusion(idems: list[FieldMatrix], indices: Sequence[int]) -> FieldMatrix:
    """Alternating sum over nonempty subsets of the given indices."""
    r = idems[0].rows
    acc = FieldMatrix.zeros(r, r, QQ)
    for size in range(1, len(indices) + 1):
        sign = 1 if size % 2 == 1 else -1
        for subset in itertools.combinations(indices, size):
            prod = FieldMatrix.identity(r, QQ)
            for i in subset:
                prod = prod * idems[i]
            acc = acc + prod.scale(Fraction(sign))
    return acc


def _complement_weight(idems: list[FieldMatrix], inside: Sequence[int]) -> FieldMatrix:
    """1 - sum e_j + sum e_j e_j' - ... over indices outside `inside`."""
    r = idems[0].rows
    outside = [j for j in range(len(idems)) if j not in inside]
    acc = FieldMatrix.identity(r, QQ)
    for size in range(1, len(outside) + 1):
        sign = -1 if size % 2 == 1 else 1
        for subset in itertools.combinations(outside, size):
            prod = FieldMatrix.identity(r, QQ)
            for j in subset:
                prod = prod * idems[j]
            acc = acc + prod.scale(Fraction(sign))
    return acc


def _lift_q_matrix(m: FieldMatrix) -> FieldMatrix:
    return FieldMatrix([[RatFunc.const(e) for e in row] for row in m.entries])


def check_atlas_conditions(pres: ChartPresentation) -> AtlasReport:
    """The four gluing conditions for a chart presentation.

    (1) the idempotents partition the identity through inclusion-exclusion;
    (2), (3) chart-transition matrix identities over Q(t);
    (4) the combined algebra is regular: at every candidate place, the
    idempotent-weighted sum of intersections of the per-chart monomial
    lattices is entry-wise regular.  The candidate set and the monomial
    degree cap make (4) an effective substitute for the sheaf condition.
    """
    conditions = {i: ConditionVerdict(ok=True) for i in (1, 2, 3, 4)}
    structural: list[str] = []
    n_charts = pres.k + 1
    for comp in pres.curve.components:
        label = comp.label
        idems = pres.idempotents.get(label)
        grid = pres.matrices.get(label)
        if idems is None or grid is None:
            structural.append(f"component {label!r}: missing data")
            continue
        if len(idems) != n_charts or len(grid) != n_charts or any(
            len(row) != n_charts for row in grid
        ):
            structural.append(f"component {label!r}: wrong chart count")
            continue
        for i in range(n_charts):
            if not is_idempotent(idems[i]):
                structural.append(f"component {label!r}: e_({i}) is not idempotent")
            if grid[i][i] != _lift_q_matrix(idems[i]):
                structural.append(
                    f"component {label!r}: m[({i}),({i})] differs from e_({i})"
                )
        # commutation of the full coordinate set
        flat = [grid[i][j] for i in range(n_charts) for j in range(n_charts)]
        for a in range(len(flat)):
            for b in range(a + 1, len(flat)):
                if not flat[a].commutes_with(flat[b], FT):
                    structural.append(
                        f"component {label!r}: chart coordinates do not all commute"
                    )
                    break
            else:
                continue
            break
        # (1)
        total = _inclusion_exclusion(idems, range(n_charts))
        if not (total - FieldMatrix.identity(pres.r, QQ)).is_zero(QQ):
            conditions[1].ok = False
            conditions[1].witnesses.append(
                f"component {label!r}: inclusion-exclusion sum differs from the identity"
            )
        # (2)
        for i in range(n_charts):
            for j in range(n_charts):
                lhs = (grid[j][j] * grid[i][j]) * (grid[j][j] * grid[j][i])
                rhs = grid[i][i] * grid[j][j]
                if not (lhs - rhs).is_zero(FT):
                    conditions[2].ok = False
                    conditions[2].witnesses.append(
                        f"component {label!r}: (i, j) = ({i}, {j})"
                    )
        # (3)
        for i in range(n_charts):
            for j in range(n_charts):
                for l in range(n_charts):
                    lhs = grid[j][j] * grid[i][l]
                    rhs = grid[j][l] * (grid[j][j] * grid[i][j])
                    if not (lhs - rhs).is_zero(FT):
                        conditions[3].ok = False
                        conditions[3].witnesses.append(
                            f"component {label!r}: (i, j, l) = ({i}, {j}, {l})"
                        )
        # (4)
        _check_regularity(pres, label, idems, grid, conditions[4])
    ok = all(v.ok for v in conditions.values()) and not structural
    return AtlasReport(ok=ok, conditions=conditions, structural=structural)


def _candidate_places(grid: list[list[FieldMatrix]]) -> list[Place]:
    places: list[Place] = [Place.infinity()]
    n = len(grid)
    for i in range(n):
        for j in range(n):
            for row in grid[i][j].entries:
                for e in row:
                    if e.is_zero():
                        continue
                    if e.den.degree > 0:
                        for place, _ in places_of_poly(e.den):
                            if place not in places:
                                places.append(place)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            prod = grid[j][j] * grid[i][j]
            cp = char_poly(prod, FT)
            det = cp[0] if prod.rows % 2 == 0 else -cp[0]
            if not det.is_zero() and det.num.degree > 0:
                for place, _ in places_of_poly(det.num):
                    if place not in places:
                        places.append(place)
    return sorted(places, key=lambda p: p.sort_key())


def _chart_monomials(gens: list[FieldMatrix], r: int, cap: Optional[int] = None) -> list[FieldMatrix]:
    """Products of the commuting chart generators, up to total degree r^2
    but pruned one multiplication round after the linear span stabilizes
    (later monomials are function-field combinations of the kept ones)."""
    from .linalg import SpanSolver

    cap = cap if cap is not None else r * r
    monomials = [FieldMatrix.identity(r, FT)]
    frontier = [FieldMatrix.identity(r, FT)]
    vectors = [monomials[0].vec()]
    solver = SpanSolver(vectors, FT)
    stable_rounds = 0
    for _ in range(cap):
        nxt = []
        for m in frontier:
            for g in gens:
                nxt.append(m * g)
        fresh = []
        seen = {hash(m) for m in monomials}
        grew_span = False
        for m in nxt:
            h = hash(m)
            if h not in seen:
                seen.add(h)
                fresh.append(m)
                if not solver.contains(m.vec()):
                    vectors.append(m.vec())
                    solver = SpanSolver(vectors, FT)
                    grew_span = True
        if not fresh:
            break
        monomials.extend(fresh)
        frontier = fresh
        stable_rounds = 0 if grew_span else stable_rounds + 1
        if stable_rounds >= 1:
            break
        if len(monomials) > 4 * r * r * (len(gens) + 1):
            break
    return monomials


def _check_regularity(
    pres: ChartPresentation,
    label: str,
    idems: list[FieldMatrix],
    grid: list[list[FieldMatrix]],
    verdict: ConditionVerdict,
) -> None:
    n_charts = pres.k + 1
    places = _candidate_places(grid)
    chart_monomials = []
    for i in range(n_charts):
        gens = [grid[i][j] for j in range(n_charts) if j != i]
        monos = _chart_monomials(gens, pres.r)
        seed = _lift_q_matrix(idems[i])
        chart_monomials.append([seed.vec()] + [m.vec() for m in monos])
    weights = []
    for size in range(1, n_charts + 1):
        for subset in itertools.combinations(range(n_charts), size):
            w = FieldMatrix.identity(pres.r, QQ)
            for i in subset:
                w = w * idems[i]
            w = w * _complement_weight(idems, subset)
            if not w.is_zero(QQ):
                weights.append((subset, _lift_q_matrix(w)))
    for place in places:
        vectors: list[list[RatFunc]] = []
        lattices = {}
        for i in range(n_charts):
            lattices[i] = dvr_reduce(chart_monomials[i], place)
        for subset, w in weights:
            lattice = lattices[subset[0]]
            for i in subset[1:]:
                lattice = dvr_lattice_intersect(lattice, lattices[i], place)
                if not lattice:
                    break
            for v in lattice:
                mat = FieldMatrix.from_vec(v, pres.r, pres.r)
                vectors.append((mat * w).vec())
        if not vectors:
            continue
        regular, worst = dvr_lattice_regular(vectors, place)
        if not regular:
            verdict.ok = False
            verdict.witnesses.append(
                f"component {label!r}: combined algebra has a pole at "
                f"{place.pretty()} (valuation {worst})"
            )


def embed_morphism(phi: AzMorphism) -> ChartPresentation:
    """Lift a chart-0 morphism to a full presentation with identity
    idempotents; every coordinate must be generically invertible."""
    from .morphisms import _matrix_inverse

    n_charts = phi.k + 1
    identity_q = FieldMatrix.identity(phi.r, QQ)
    idems = {}
    matrices = {}
    for comp in phi.curve.components:
        label = comp.label
        mats = [FieldMatrix.identity(phi.r, FT)] + list(phi.component_matrices(label))
        inverses = []
        for j, m in enumerate(mats):
            inv = _matrix_inverse(m, FT)
            if inv is None:
                raise PresentationError(
                    f"component {label!r}: coordinate {j} is not generically invertible"
                )
            inverses.append(inv)
        grid = [[None] * n_charts for _ in range(n_charts)]
        for i in range(n_charts):
            for j in range(n_charts):
                grid[i][j] = mats[j] * inverses[i]
        idems[label] = [identity_q] * n_charts
        matrices[label] = grid
    return ChartPresentation(phi.curve, phi.r, phi.k, idems, matrices)


# ---------------------------------------------------------------------------
# nondegeneracy


@dataclass
class HyperplaneVerdict:
    index: int
    verdict: str  # "nondegenerate" | "degenerate" | "undetermined"
    reasons: list[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"hyperplane": self.index, "verdict": self.verdict, "reasons": list(self.reasons)}


def _place_overlap(a: Place, b: Place) -> bool:
    if a.kind != b.kind:
        return False
    if a.kind == RATIONAL:
        return a.coordinate == b.coordinate
    if a.kind == INFINITY:
        return True
    return a.poly.gcd(b.poly).degree > 0


def _branch_contact_places(h1: list[Poly], h2: list[Poly]) -> list[Place]:
    """Places on the first branch's parameter line where the two branches
    meet (finite contact locus plus possibly the parameter infinity)."""
    minors = []
    for i in range(len(h1)):
        for j in range(i + 1, len(h1)):
            m = h1[i] * h2[j] - h1[j] * h2[i]
            if not m.is_zero():
                minors.append(m)
    if not minors:
        return [Place.infinity()]  # coinciding branches: treat all as contact
    g = minors[0].monic()
    for m in minors[1:]:
        g = g.gcd(m)
        if g.degree == 0:
            break
    out = [place for place, _ in places_of_poly(g)] if g.degree > 0 else []
    d1 = max(p.degree for p in h1 if not p.is_zero())
    d2 = max(p.degree for p in h2 if not p.is_zero())
    r1 = [p.reverse(d1) for p in h1]
    r2 = [p.reverse(d2) for p in h2]
    inf_contact = True
    for i in range(len(h1)):
        for j in range(i + 1, len(h1)):
            m = r1[i] * r2[j] - r1[j] * r2[i]
            if not m.is_zero() and m.constant_term() != 0:
                inf_contact = False
    if inf_contact:
        out.append(Place.infinity())
    return out


def check_nondegenerate(phi: AzMorphism) -> list[HyperplaneVerdict]:
    """Per standard hyperplane: the pullback must be a divisor avoiding the
    singular points of the reduced graph (branch intersections and points
    over nodes)."""
    model = branch_model(phi)
    if any(b.kind not in (EXACT,) for b in model.branches):
        return [
            HyperplaneVerdict(i, "undetermined", ["non-exact branches present"])
            for i in range(phi.k + 1)
        ]
    homog = {id(b): homogenized_params(list(b.parametrization)) for b in model.branches}
    # singular parameter places per branch
    singular: dict[int, list[Place]] = {id(b): [] for b in model.branches}
    for comp in phi.curve.components:
        branches = model.for_component(comp.label)
        for i in range(len(branches)):
            for j in range(len(branches)):
                if i == j:
                    continue
                contacts = _branch_contact_places(homog[id(branches[i])], homog[id(branches[j])])
                singular[id(branches[i])].extend(contacts)
        for place in phi.curve.node_places(comp.label):
            for b in branches:
                singular[id(b)].append(place)
    out = []
    for i in range(phi.k + 1):
        verdict = HyperplaneVerdict(i, "nondegenerate")
        for b in model.branches:
            h = homog[id(b)]
            hi = h[i]
            if hi.is_zero():
                verdict.verdict = "degenerate"
                verdict.reasons.append(
                    f"{b.component}: coordinate {i} vanishes along a branch "
                    f"(pullback is not a divisor)"
                )
                continue
            pullback: list[Place] = [place for place, _ in places_of_poly(hi)] if hi.degree > 0 else []
            d = max(p.degree for p in h if not p.is_zero())
            if hi.degree < d:
                pullback.append(Place.infinity())
            for p in pullback:
                for s in singular[id(b)]:
                    if _place_overlap(p, s):
                        verdict.verdict = "degenerate"
                        verdict.reasons.append(
                            f"{b.component}: pullback point {p.pretty()} meets a "
                            f"singular point of the reduced graph"
                        )
        out.append(verdict)
    return out


@dataclass
class StrongVerdict:
    strong: bool
    reasons: list[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"strongly_nondegenerate": self.strong, "reasons": list(self.reasons)}


def check_strongly_nondegenerate(phi: AzMorphism) -> StrongVerdict:
    """Nondegenerate, and no branch meets any H_i intersect H_j: for every
    pair the homogeneous coordinates have no common zero on the branch,
    including the point at infinity of the parameter."""
    nd = check_nondegenerate(phi)
    out = StrongVerdict(strong=True)
    for v in nd:
        if v.verdict != "nondegenerate":
            out.strong = False
            out.reasons.append(f"hyperplane {v.index}: {v.verdict}")
    model = branch_model(phi)
    if any(b.kind != EXACT for b in model.branches):
        out.strong = False
        out.reasons.append("non-exact branches present")
        return out
    for b in model.branches:
        h = homogenized_params(list(b.parametrization))
        d = max(p.degree for p in h if not p.is_zero())
        for i in range(len(h)):
            for j in range(i + 1, len(h)):
                if h[i].is_zero() or h[j].is_zero():
                    continue
                g = h[i].gcd(h[j])
                if g.degree > 0:
                    out.strong = False
                    out.reasons.append(
                        f"{b.component}: coordinates {i} and {j} share the zero "
                        f"locus {g.pretty()}"
                    )
                if h[i].degree < d and h[j].degree < d:
                    out.strong = False
                    out.reasons.append(
                        f"{b.component}: coordinates {i} and {j} both vanish at "
                        f"the parameter infinity"
                    )
    return out


# ---------------------------------------------------------------------------
# spectral curves


@dataclass
class SpectralCurve:
    """Content-free integer bivariate form of det(lambda - a) = 0."""

    rank: int
    lambda_coeffs: list[Poly]  # index = lambda power, integer polynomials in t
    cleared_denominator: Poly
    strict_subscheme: bool  # minimal polynomial strictly divides

    def pretty(self) -> str:
        parts = []
        for j in range(self.rank, -1, -1):
            p = self.lambda_coeffs[j]
            if p.is_zero():
                continue
            parts.append(_lambda_term(p, j))
        if not parts:
            return "0"
        first = parts[0]
        if first.startswith("+ "):
            first = first[2:]
        elif first.startswith("- "):
            first = "-" + first[2:]
        return " ".join([first] + parts[1:])

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "lambda_coeffs": [
                [str(int(c)) for c in p.coeffs] for p in self.lambda_coeffs
            ],
            "pretty": self.pretty(),
            "cleared_denominator": self.cleared_denominator.pretty(),
            "strict_subscheme": self.strict_subscheme,
        }

    def __eq__(self, other):
        return (
            isinstance(other, SpectralCurve)
            and self.rank == other.rank
            and self.lambda_coeffs == other.lambda_coeffs
        )


def _lambda_term(p: Poly, power: int) -> str:
    lam = "" if power == 0 else ("l" if power == 1 else f"l^{power}")
    nonzero = sum(1 for c in p.coeffs if c != 0)
    if nonzero == 1:
        sign = 1 if p.leading() > 0 else -1
        mag = p.scale(sign)
        if not lam:
            body = mag.pretty()
        elif mag.degree == 0 and mag.constant_term() == 1:
            body = lam
        else:
            body = f"{mag.pretty()}*{lam}"
        return f"+ {body}" if sign > 0 else f"- {body}"
    body = f"({p.pretty()})"
    return f"+ {body}*{lam}" if lam else f"+ {body}"


def spectral_curve(a: FieldMatrix) -> SpectralCurve:
    """Characteristic polynomial with denominators cleared to a
    content-free integer bivariate polynomial, plus the flag telling when
    the generated algebra is a strict subscheme of the spectral curve."""
    if not a.is_square():
        raise PresentationError("spectral curve needs a square matrix")
    r = a.rows
    cp = char_poly(a, FT)
    den = Poly.const(1)
    for c in cp:
        den = den.lcm(c.den)
    cleared = [c.num * den.exact_div(c.den) for c in cp]
    # strip rational content across the whole bivariate polynomial
    import math as _math

    den_lcm = 1
    num_gcd = 0
    for p in cleared:
        for c in p.coeffs:
            den_lcm = den_lcm * c.denominator // _math.gcd(den_lcm, c.denominator)
    for p in cleared:
        for c in p.coeffs:
            num_gcd = _math.gcd(num_gcd, abs(int(c * den_lcm)))
    if num_gcd == 0:
        raise PresentationError("zero characteristic polynomial")
    scale = Fraction(den_lcm, num_gcd)
    if cleared[r].leading() * scale < 0:
        scale = -scale
    cleared = [p.scale(scale) for p in cleared]
    mp = min_poly(a, FT)
    return SpectralCurve(
        rank=r,
        lambda_coeffs=cleared,
        cleared_denominator=den,
        strict_subscheme=fp_deg(mp) < r,
    )
