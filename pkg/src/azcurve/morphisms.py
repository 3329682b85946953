"""Morphisms presented as commuting matrix tuples over rational function
fields, one tuple per curve component.

A morphism of rank r to projective k-space is stored in the affine-chart
convention: on each component with coordinate t, the chart coordinates
y_1/y_0, ..., y_k/y_0 act on the trivial rank-r module as pairwise
commuting r x r matrices over Q(t) (the chart-0 coordinate itself is the
identity).  Fibers over points of the hyperplane y_0 = 0 are reached by
switching charts on the fly.

The central computation is the branch model: the joint generalized
eigenstructure over the function field, which realizes the graph of the
morphism as parametrized branches with generic lengths and map degrees.
Everything downstream (image degree, combinatorial type, Hilbert
polynomial, support bounds, deformation scans) reads off the branch model.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

from .curves import PrestableCurve, arithmetic_genus, euler_char
from .decomp import (
    Factorization,
    joint_primary_decomposition,
    restrict_matrix,
)
from .dzero import SupportPoint, d0_point, d0_support
from .fpoly import (
    fp_deg,
    fp_discriminant,
    fp_eval,
    fp_exact_div,
    fp_monic,
    fp_mul,
    fp_sub,
    fp_trim,
    fp_yun,
)
from .linalg import (
    FieldMatrix,
    FunctionField,
    QQ,
    SpanSolver,
    algebra_closure,
    char_poly,
    kernel_basis,
    min_poly,
    rref,
)
from .polys import (
    ExactError,
    INFINITY,
    Place,
    Poly,
    RatFunc,
    poly_interpolate,
    pade_approximant,
    places_of_poly,
    series_inverse,
    series_mul,
    valuation_at,
)

FT = FunctionField("t")


class MorphismError(ExactError):
    pass


class FiberError(MorphismError):
    """Fiber escapes every standard chart at the given place."""


# ---------------------------------------------------------------------------
# roots of lambda-polynomials over Q(t)


def _coefficient_series(num: Poly, den: Poly, x: Fraction, n: int) -> list[Fraction]:
    """Power-series expansion of num/den at t = x to precision n."""
    ns = list(num.shift(x).coeffs) + [Fraction(0)] * n
    ds = list(den.shift(x).coeffs) + [Fraction(0)] * n
    inv = series_inverse(ds, n)
    return series_mul(ns, inv, n)


def _newton_root_series(
    coeff_series: list[list[Fraction]], start: Fraction, n: int
) -> Optional[list[Fraction]]:
    """Lift a simple rational root of the specialized polynomial to a power
    series root mod tau^n by Newton iteration."""
    deg = len(coeff_series) - 1
    dcoeffs = [series_mul([Fraction(j)], coeff_series[j], n) for j in range(1, deg + 1)]
    f = [start] + [Fraction(0)] * (n - 1)
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        val = _series_poly_eval(coeff_series, f, prec)
        dval = _series_poly_eval(dcoeffs, f, prec)
        if dval[0] == 0:
            return None
        correction = series_mul(val, series_inverse(dval, prec), prec)
        f = [(a - b) for a, b in zip(f + [Fraction(0)] * prec, correction + [Fraction(0)] * prec)][:n]
    return f


def _series_poly_eval(coeff_series: list[list[Fraction]], f: list[Fraction], prec: int) -> list[Fraction]:
    acc = [Fraction(0)] * prec
    for cs in reversed(coeff_series):
        acc = series_mul(acc, f, prec)
        for i, c in enumerate(cs[:prec]):
            acc[i] += c
    return acc


def function_field_roots(coeffs: list[RatFunc]) -> list[RatFunc]:
    """All roots in Q(t) of a squarefree monic polynomial in lambda.

    Candidate roots are lifted from simple rational roots of good
    specializations (deep Newton jets at a handful of expansion points),
    reconstructed as rational functions, and certified by exact division.
    """
    coeffs = fp_trim(list(coeffs), FT)
    roots: list[RatFunc] = []
    # peel a zero root (simple, because the input is squarefree)
    if coeffs and coeffs[0].is_zero():
        roots.append(RatFunc.const(0))
        coeffs = coeffs[1:]
    if fp_deg(coeffs) < 1:
        return roots
    if fp_deg(coeffs) == 1:
        roots.append(-coeffs[0])
        return roots
    den = Poly.const(1)
    for c in coeffs:
        den = den.lcm(c.den)
    cleared = [(c.num * den.exact_div(c.den)) for c in coeffs]
    b_num = max(cleared[0].degree, 0)
    b_den = den.degree
    n = b_num + b_den + 2
    # expansion points where the specialization stays squarefree
    points: list[Fraction] = []
    x = 0
    guard = 0
    while len(points) < b_den + 2 and guard < 100:
        cand = Fraction(x)
        x = -x if x > 0 else -x + 1
        guard += 1
        if den.eval(cand) == 0:
            continue
        spec = Poly([c.num.eval(cand) / c.den.eval(cand) for c in coeffs])
        if spec.degree != len(coeffs) - 1:
            continue
        if spec.gcd(spec.derivative()).degree != 0:
            continue
        points.append(cand)
    seen = set()
    for x0 in points:
        coeff_series = [
            _coefficient_series(c.num, c.den, x0, n) for c in coeffs
        ]
        spec = Poly([cs[0] for cs in coeff_series])
        rational_starts, _, _ = spec.rational_roots()
        for start, _mult in rational_starts:
            series = _newton_root_series(coeff_series, start, n)
            if series is None:
                continue
            pade = pade_approximant(series, b_num, b_den)
            if pade is None:
                continue
            u, v = pade
            cand = RatFunc(u.shift(-x0), v.shift(-x0))
            if cand in seen:
                continue
            if fp_eval(coeffs, cand, FT).is_zero():
                seen.add(cand)
                roots.append(cand)
    return roots


def _clear_lambda_poly(coeffs: Sequence[RatFunc]) -> list[Poly]:
    """Scale a lambda-polynomial over Q(t) to polynomial coefficients."""
    den = Poly.const(1)
    for c in coeffs:
        if not c.is_zero():
            den = den.lcm(c.den)
    return [c.num * den.exact_div(c.den) if not c.is_zero() else Poly.zero() for c in coeffs]


def _biv_content(f: list[Poly]) -> Poly:
    g = Poly.zero()
    for p in f:
        if not p.is_zero():
            g = p.monic() if g.is_zero() else g.gcd(p)
            if g.degree == 0:
                return Poly.const(1)
    return g if not g.is_zero() else Poly.const(1)


def _biv_primitive(f: list[Poly]) -> list[Poly]:
    while f and f[-1].is_zero():
        f = f[:-1]
    if not f:
        return []
    c = _biv_content(f)
    if c.degree == 0:
        return list(f)
    return [p.exact_div(c) if not p.is_zero() else p for p in f]


def _biv_prem(f: list[Poly], g: list[Poly]) -> list[Poly]:
    """Pseudo-remainder of lambda-polynomials with Q[t] coefficients."""
    rem = list(f)
    dg = len(g) - 1
    lead = g[-1]
    while len(rem) - 1 >= dg and rem:
        c = rem[-1]
        shift = len(rem) - 1 - dg
        rem = [lead * p for p in rem]
        for j, gc in enumerate(g):
            rem[shift + j] = rem[shift + j] - c * gc
        rem.pop()
        while rem and rem[-1].is_zero():
            rem.pop()
    return rem


def bivariate_gcd(f: list[Poly], g: list[Poly]) -> list[Poly]:
    """Gcd in lambda of two polynomials with Q[t] coefficients, by the
    primitive polynomial remainder sequence (content removed each step, so
    all coefficient arithmetic stays polynomial)."""
    f = _biv_primitive(f)
    g = _biv_primitive(g)
    if not f:
        return g
    if not g:
        return f
    if len(f) < len(g):
        f, g = g, f
    while g:
        r = _biv_prem(f, g)
        f, g = g, _biv_primitive(r)
    return f


def qt_gcd(a: Sequence[RatFunc], b: Sequence[RatFunc]) -> list[RatFunc]:
    """Monic gcd of lambda-polynomials over Q(t), via the bivariate
    primitive remainder sequence."""
    fa = fp_trim(list(a), FT)
    fb = fp_trim(list(b), FT)
    if not fa:
        return fp_monic(fb, FT)
    if not fb:
        return fp_monic(fa, FT)
    gg = bivariate_gcd(_clear_lambda_poly(fa), _clear_lambda_poly(fb))
    return fp_monic([RatFunc(p) for p in gg], FT)


def qt_yun(coeffs: Sequence[RatFunc]) -> list[tuple[list[RatFunc], int]]:
    """Squarefree decomposition over Q(t), with the gcd steps routed
    through the bivariate remainder sequence."""
    a = fp_monic(fp_trim(list(coeffs), FT), FT)
    if fp_deg(a) <= 0:
        return []
    da = [c * FT.from_int(i) for i, c in enumerate(a)][1:]
    g = qt_gcd(a, da)
    w = fp_exact_div(a, g, FT)
    y = fp_exact_div(da, g, FT)
    out = []
    i = 1
    while fp_deg(w) > 0:
        z = fp_sub(y, _fp_derivative_ft(w), FT)
        h = qt_gcd(w, z)
        if fp_deg(h) > 0:
            out.append((h, i))
        w = fp_exact_div(w, h, FT)
        y = fp_exact_div(z, h, FT)
        i += 1
    return out


def _fp_derivative_ft(a: Sequence[RatFunc]) -> list[RatFunc]:
    return fp_trim([c * FT.from_int(i) for i, c in enumerate(a)][1:], FT)


def resultant_in_t(f: list[Poly], g: list[Poly]) -> Poly:
    """Resultant in lambda of two polynomials with Q[t] coefficients,
    computed by evaluation and interpolation (it is a polynomial in t).

    Sample points where either leading coefficient vanishes are skipped so
    the specialization degrees match the generic ones.
    """
    from .fpoly import fp_resultant as _fp_res

    if not f or not g:
        return Poly.zero()
    df, dg = len(f) - 1, len(g) - 1
    max_f = max((p.degree for p in f if not p.is_zero()), default=0)
    max_g = max((p.degree for p in g if not p.is_zero()), default=0)
    bound = dg * max_f + df * max_g
    points = []
    x = 0
    guard = 0
    while len(points) < bound + 1 and guard < 8 * (bound + 4):
        cand = Fraction(x)
        x = -x if x > 0 else -x + 1
        guard += 1
        if f[-1].eval(cand) == 0 or g[-1].eval(cand) == 0:
            continue
        fv = [p.eval(cand) for p in f]
        gv = [p.eval(cand) for p in g]
        points.append((cand, _fp_res(fv, gv, QQ)))
    from .polys import poly_interpolate

    return poly_interpolate(points)


def lambda_discriminant_places(coeffs: Sequence[RatFunc]) -> list[Place]:
    """Finite places where a squarefree lambda-polynomial over Q(t) has a
    repeated root after specialization (zeros of the cleared resultant of
    the polynomial and its lambda-derivative)."""
    if fp_deg(list(coeffs)) < 2:
        return []
    cleared = _clear_lambda_poly(coeffs)
    deriv = [p.scale(i) for i, p in enumerate(cleared)][1:]
    res = resultant_in_t(cleared, deriv)
    if res.is_zero() or res.degree == 0:
        return []
    return [place for place, _ in places_of_poly(res)]


def qt_factorization(coeffs: Sequence[RatFunc]) -> Factorization:
    """Squarefree layers of a char polynomial over Q(t), with Q(t)-rational
    roots extracted and rootless residuals kept as cluster factors."""
    fact = Factorization()
    for layer, mult in qt_yun(list(coeffs)):
        layer_roots = function_field_roots(layer)
        residual = layer
        for f in layer_roots:
            residual = fp_exact_div(residual, [-f, FT.one], FT)
            fact.roots.append((f, mult))
        residual = fp_monic(residual, FT)
        if fp_deg(residual) >= 1:
            fact.residuals.append((residual, mult, fp_deg(residual) <= 3))
    return fact


# ---------------------------------------------------------------------------
# morphism data


@dataclass
class AzMorphism:
    """Chart-0 presentation: per component, the k commuting matrices."""

    curve: PrestableCurve
    r: int
    k: int
    matrices: dict[str, tuple[FieldMatrix, ...]]
    deg_e: int = 0
    _branch_cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def component_matrices(self, label: str) -> tuple[FieldMatrix, ...]:
        if label not in self.matrices:
            raise MorphismError(f"no matrices for component {label!r}")
        return self.matrices[label]


EXACT = "exact"
CLUSTER = "cluster"
SAMPLED = "sampled"


@dataclass
class Branch:
    """One irreducible piece of the graph over a single component.

    exact: the branch is the graph of a k-tuple of rational functions.
    cluster: one coordinate satisfies an irreducible quadratic over Q(t);
    when that curve is rational over the lambda-line the normalization
    parametrization is stored.
    sampled: structure certified only by fiber statistics at sample points.
    """

    component: str
    kind: str
    length: int
    space_dim: int
    degree_over_c: int
    parametrization: Optional[tuple[RatFunc, ...]] = None
    cluster_coord: Optional[int] = None
    cluster_poly: Optional[list[RatFunc]] = None
    normalization: Optional[tuple[RatFunc, ...]] = None  # in the lambda variable
    map_degree: Optional[int] = None
    confirmed: bool = True
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        out = {
            "component": self.component,
            "kind": self.kind,
            "length": self.length,
            "degree_over_component": self.degree_over_c,
            "map_degree": self.map_degree,
            "confirmed": self.confirmed,
        }
        if self.parametrization is not None:
            out["parametrization"] = [f.pretty() for f in self.parametrization]
        if self.cluster_poly is not None:
            out["cluster"] = {
                "coordinate": self.cluster_coord,
                "poly": [c.pretty() for c in self.cluster_poly],
            }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


@dataclass
class BranchModel:
    r: int
    k: int
    branches: list[Branch]

    def for_component(self, label: str) -> list[Branch]:
        return [b for b in self.branches if b.component == label]

    def all_exact(self) -> bool:
        return all(b.kind != SAMPLED for b in self.branches)

    def to_json(self) -> dict:
        return {"r": self.r, "k": self.k, "branches": [b.to_json() for b in self.branches]}


@dataclass(frozen=True)
class CombType:
    g: int
    r: int
    chi: int
    beta: int

    def to_json(self) -> dict:
        return {"g": self.g, "r": self.r, "chi": self.chi, "beta": self.beta}

    def pretty(self) -> str:
        return f"({self.g}, {self.r}, {self.chi} | {self.beta})"


# ---------------------------------------------------------------------------
# fibers


@dataclass(frozen=True)
class FiberPoint:
    """A point of a fiber: exact homogeneous coordinates over Q, or a
    conjugate cluster tagged with the chart it was computed in."""

    homogeneous: Optional[tuple[Fraction, ...]]
    cluster: Optional[tuple] = None  # (chart, coord descriptors, degree)
    length: int = 1

    def key(self):
        if self.homogeneous is not None:
            return ("pt", self.homogeneous)
        chart, coords, degree = self.cluster
        return ("cluster", chart, coords, degree)

    def to_json(self) -> dict:
        if self.homogeneous is not None:
            return {
                "point": [_frac(c) for c in self.homogeneous],
                "length": self.length,
            }
        chart, coords, degree = self.cluster
        return {
            "cluster": {
                "chart": chart,
                "coordinates": [
                    {"value": _frac(c)} if isinstance(c, Fraction) else {"cluster": c.pretty("l")}
                    for c in coords
                ],
                "degree": degree,
            },
            "length": self.length,
        }


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass
class FiberData:
    component: str
    place: Place
    points: list[FiberPoint]

    def total_length(self) -> int:
        return sum(p.length for p in self.points)

    def reduced_keys(self) -> set:
        return {p.key() for p in self.points}

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "place": self.place.pretty(),
            "points": [p.to_json() for p in self.points],
            "total_length": self.total_length(),
        }


def _normalize_homogeneous(coords: list[Fraction]) -> tuple[Fraction, ...]:
    for c in coords:
        if c != 0:
            return tuple(x / c for x in coords)
    raise MorphismError("zero homogeneous tuple")


def _entry_regular(e: RatFunc, place: Place) -> bool:
    return e.is_zero() or valuation_at(e, place) >= 0


def _matrix_regular(m: FieldMatrix, place: Place) -> bool:
    return all(_entry_regular(e, place) for row in m.entries for e in row)


def _eval_entry(e: RatFunc, place: Place) -> Fraction:
    if e.is_zero():
        return Fraction(0)
    if place.kind == INFINITY:
        return e.eval_at_infinity()
    return e.eval(place.coordinate)


def _eval_matrix(m: FieldMatrix, place: Place) -> FieldMatrix:
    return FieldMatrix([[_eval_entry(e, place) for e in row] for row in m.entries])


def _support_to_fiber_points(support, chart: int, k: int) -> list[FiberPoint]:
    """Translate a joint support of an evaluated chart tuple into fiber
    points with homogeneous coordinates (chart coordinate set to 1)."""
    coord_slots = [j for j in range(k + 1) if j != chart]
    points = []
    for sp in support.points:
        if sp.is_rational():
            homog = [Fraction(0)] * (k + 1)
            homog[chart] = Fraction(1)
            for slot, value in zip(coord_slots, sp.coordinates):
                homog[slot] = value
            points.append(
                FiberPoint(_normalize_homogeneous(homog), None, sp.space_dim)
            )
        else:
            points.append(
                FiberPoint(None, (chart, tuple(sp.coordinates), sp.degree), sp.space_dim)
            )
    return points


def _chart_zero_support_points(mats_q: list[FieldMatrix], k: int) -> list[FiberPoint]:
    support = d0_support(d0_point(mats_q))
    # chart-0 tuple omits the identity coordinate, so slots are 1..k
    points = []
    for sp in support.points:
        if sp.is_rational():
            homog = [Fraction(1)] + list(sp.coordinates)
            points.append(FiberPoint(_normalize_homogeneous(homog), None, sp.space_dim))
        else:
            points.append(FiberPoint(None, (0, tuple(sp.coordinates), sp.degree), sp.space_dim))
    return points


def _matrix_inverse(m: FieldMatrix, field) -> Optional[FieldMatrix]:
    n = m.rows
    aug = [list(m.entries[i]) + [field.one if j == i else field.zero for j in range(n)] for i in range(n)]
    red, pivots = rref(aug, field)
    if pivots != list(range(n)):
        return None
    return FieldMatrix([row[n:] for row in red])


def _merge_points(points: list[FiberPoint]) -> list[FiberPoint]:
    merged: dict = {}
    order = []
    for p in points:
        key = p.key()
        if key in merged:
            old = merged[key]
            merged[key] = FiberPoint(old.homogeneous, old.cluster, old.length + p.length)
        else:
            merged[key] = p
            order.append(key)
    return [merged[k] for k in order]


def fiber_at(phi: AzMorphism, component: str, place: Place) -> FiberData:
    """Fiber of the graph over a rational point or infinity.

    Entries regular at the place are evaluated directly; otherwise the
    fiber is assembled branch by branch, switching standard charts with
    valuation bookkeeping.  A block whose chart coordinates have poles in
    every chart makes the fiber non-proper and raises FiberError.
    """
    if place.kind not in ("finite-rational", INFINITY):
        raise MorphismError("fibers are computed at rational places or infinity")
    mats = phi.component_matrices(component)
    if all(_matrix_regular(m, place) for m in mats):
        evaluated = [_eval_matrix(m, place) for m in mats]
        points = _chart_zero_support_points(evaluated, phi.k)
        return FiberData(component, place, _merge_points(points))
    points: list[FiberPoint] = []
    for block in _component_blocks(phi, component):
        points.extend(_block_fiber_points(block, phi.k, place))
    return FiberData(component, place, _merge_points(points))


@dataclass
class _Block:
    """A joint invariant subspace over Q(t) with its restricted tuple and,
    when available, its exact parametrization."""

    basis: list[list]
    restricted: list[FieldMatrix]
    parametrization: Optional[tuple[RatFunc, ...]]

    @property
    def dim(self) -> int:
        return len(self.basis)


def _component_blocks(phi: AzMorphism, component: str) -> list[_Block]:
    key = ("blocks", component)
    if key in phi._branch_cache:
        return phi._branch_cache[key]
    mats = phi.component_matrices(component)
    extra = []
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            extra.append(mats[i] * mats[j])
            extra.append(mats[i] + mats[j])
    spaces = joint_primary_decomposition(mats, FT, qt_factorization, extra_mats=extra)
    blocks = []
    for basis in spaces:
        restricted = [restrict_matrix(m, basis, FT) for m in mats]
        params = []
        exact = True
        for a in restricted:
            value = _single_eigenvalue(a)
            if value is None:
                exact = False
                break
            params.append(value)
        blocks.append(_Block(basis, restricted, tuple(params) if exact else None))
    phi._branch_cache[key] = blocks
    return blocks


def _single_eigenvalue(a: FieldMatrix) -> Optional[RatFunc]:
    """The unique Q(t)-eigenvalue when the squarefree part of the
    characteristic polynomial is linear."""
    cp = char_poly(a, FT)
    sq = _squarefree_part(cp)
    if fp_deg(sq) == 1:
        return -sq[0]
    return None


def _squarefree_part(coeffs: list[RatFunc]) -> list[RatFunc]:
    a = fp_monic(fp_trim(list(coeffs), FT), FT)
    if fp_deg(a) <= 1:
        return a
    g = qt_gcd(a, _fp_derivative_ft(a))
    if fp_deg(g) == 0:
        return a
    return fp_monic(fp_exact_div(a, g, FT), FT)


def _block_fiber_points(block: _Block, k: int, place: Place) -> list[FiberPoint]:
    if block.parametrization is not None:
        return [_exact_branch_fiber_point(block.parametrization, block.dim, place, k)]
    # chart switching on the restricted tuple
    mats = block.restricted
    if all(_matrix_regular(m, place) for m in mats):
        evaluated = [_eval_matrix(m, place) for m in mats]
        return _chart_zero_support_points(evaluated, k)
    for chart in range(1, k + 1):
        inv = _matrix_inverse(mats[chart - 1], FT)
        if inv is None:
            continue
        tuple_in_chart = [inv] + [mats[j - 1] * inv for j in range(1, k + 1) if j != chart]
        if all(_matrix_regular(m, place) for m in tuple_in_chart):
            evaluated = [_eval_matrix(m, place) for m in tuple_in_chart]
            support = d0_support(d0_point(evaluated))
            return _support_to_fiber_points(support, chart, k)
    raise FiberError(f"fiber not proper at {place.pretty()}")


def _exact_branch_fiber_point(params: tuple[RatFunc, ...], dim: int, place: Place, k: int) -> FiberPoint:
    vals = []
    for f in params:
        vals.append(None if f.is_zero() else valuation_at(f, place))
    vmin = min([0] + [v for v in vals if v is not None])
    coords = [_shift_and_eval(RatFunc.const(1), -vmin, place)]
    for f in params:
        coords.append(_shift_and_eval(f, -vmin, place))
    return FiberPoint(_normalize_homogeneous(coords), None, dim)


def _shift_and_eval(f: RatFunc, k_shift: int, place: Place) -> Fraction:
    if f.is_zero():
        return Fraction(0)
    if k_shift:
        if place.kind == INFINITY:
            f = f * RatFunc.var() ** (-k_shift)
        else:
            pi = RatFunc(Poly((-place.coordinate, Fraction(1))))
            f = f * pi**k_shift
    return _eval_entry(f, place)


# ---------------------------------------------------------------------------
# validation


@dataclass
class MorphismReport:
    ok: bool
    problems: list[str] = dc_field(default_factory=list)
    warnings: list[str] = dc_field(default_factory=list)
    pole_places: list[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "problems": list(self.problems),
            "warnings": list(self.warnings),
            "pole_places": list(self.pole_places),
        }


def morphism_validate(phi: AzMorphism) -> MorphismReport:
    """Structural validation: shapes, per-component commutation, entry pole
    diagnostics, and reduced-fiber agreement over every node."""
    report = MorphismReport(ok=True)
    labels = phi.curve.labels()
    for label in labels:
        if label not in phi.matrices:
            report.problems.append(f"component {label!r}: matrices missing")
            report.ok = False
    if not report.ok:
        return report
    for label in labels:
        mats = phi.matrices[label]
        if len(mats) != phi.k:
            report.problems.append(
                f"component {label!r}: expected {phi.k} matrices, found {len(mats)}"
            )
            report.ok = False
            continue
        for j, m in enumerate(mats):
            if not m.is_square() or m.rows != phi.r:
                report.problems.append(
                    f"component {label!r}, coordinate {j + 1}: expected {phi.r}x{phi.r}"
                )
                report.ok = False
    if not report.ok:
        return report
    for label in labels:
        mats = phi.matrices[label]
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                if not mats[i].commutes_with(mats[j], FT):
                    report.problems.append(
                        f"component {label!r}: coordinates {i + 1} and {j + 1} do not commute"
                    )
                    report.ok = False
        seen_places = set()
        for m in mats:
            for row in m.entries:
                for e in row:
                    if e.is_zero():
                        continue
                    for place, _ in places_of_poly(e.den) if e.den.degree > 0 else []:
                        if place not in seen_places:
                            seen_places.add(place)
                            report.pole_places.append(f"{label}: {place.pretty()}")
                    if valuation_at(e, Place.infinity()) < 0:
                        inf = Place.infinity()
                        if inf not in seen_places:
                            seen_places.add(inf)
                            report.pole_places.append(f"{label}: {inf.pretty()}")
        for j, m in enumerate(mats):
            cp = char_poly(m, FT)
            if cp[0].is_zero():
                report.warnings.append(
                    f"component {label!r}: coordinate {j + 1} is generically singular"
                )
    if not report.ok:
        return report
    for idx, node in enumerate(phi.curve.nodes):
        try:
            fa = fiber_at(phi, node.component_a, node.place_a)
            fb = fiber_at(phi, node.component_b, node.place_b)
        except FiberError as exc:
            report.problems.append(f"node {idx}: {exc}")
            report.ok = False
            continue
        if fa.reduced_keys() != fb.reduced_keys():
            report.problems.append(
                f"node {idx}: reduced fibers differ: "
                f"{sorted(_pretty_key(k) for k in fa.reduced_keys())} vs "
                f"{sorted(_pretty_key(k) for k in fb.reduced_keys())}"
            )
            report.ok = False
    return report


def _pretty_key(key) -> str:
    if key[0] == "pt":
        return "(" + ":".join(_frac(c) for c in key[1]) + ")"
    _, chart, coords, degree = key
    parts = []
    for c in coords:
        parts.append(_frac(c) if isinstance(c, Fraction) else c.pretty("l"))
    return f"cluster[chart {chart}; {', '.join(parts)}; degree {degree}]"


# ---------------------------------------------------------------------------
# branch model


def branch_model(phi: AzMorphism) -> BranchModel:
    """Decompose every component's module over Q(t) into branches.

    Exact branches carry parametrizations; certified quadratic residuals
    become cluster branches (with a lambda-line normalization when the
    defining curve is rational over it); anything deeper degrades to
    sampled mode with an explicit note, never silently.
    """
    key = ("model",)
    if key in phi._branch_cache:
        return phi._branch_cache[key]
    branches: list[Branch] = []
    for comp in phi.curve.components:
        label = comp.label
        for block in _component_blocks(phi, label):
            branches.append(_classify_block(phi, label, block))
    _confirm_lengths(phi, branches)
    model = BranchModel(phi.r, phi.k, branches)
    phi._branch_cache[key] = model
    return model


def _classify_block(phi: AzMorphism, label: str, block: _Block) -> Branch:
    k = phi.k
    if block.parametrization is not None:
        d = map_degree_of_params(list(block.parametrization))
        return Branch(
            component=label,
            kind=EXACT,
            length=block.dim,
            space_dim=block.dim,
            degree_over_c=1,
            parametrization=block.parametrization,
            map_degree=d,
        )
    # identify the factor structure per coordinate
    coord_data: list = []
    notes: list[str] = []
    for a in block.restricted:
        cp = char_poly(a, FT)
        sq = _squarefree_part(cp)
        if fp_deg(sq) == 1:
            coord_data.append(("value", -sq[0]))
        else:
            certified = fp_deg(sq) == 2
            coord_data.append(("cluster", sq, certified))
    clusters = [i for i, cd in enumerate(coord_data) if cd[0] == "cluster"]
    if len(clusters) == 1 and coord_data[clusters[0]][2]:
        idx = clusters[0]
        sq = coord_data[idx][1]
        dim = block.dim
        deg_c = fp_deg(sq)
        normalization = _cluster_normalization(coord_data, idx)
        if normalization is not None and dim % deg_c == 0:
            d = map_degree_of_params(list(normalization))
            return Branch(
                component=label,
                kind=CLUSTER,
                length=dim // deg_c,
                space_dim=dim,
                degree_over_c=deg_c,
                cluster_coord=idx + 1,
                cluster_poly=sq,
                normalization=normalization,
                map_degree=d,
            )
        notes.append("cluster curve is not rational over the lambda line")
    # sampled fallback
    notes.append("branch structure certified only at sample points")
    stats = _sampled_statistics(block, phi.k)
    return Branch(
        component=label,
        kind=SAMPLED,
        length=stats,
        space_dim=block.dim,
        degree_over_c=0,
        map_degree=None,
        confirmed=False,
        notes=tuple(notes),
    )


def _cluster_normalization(coord_data: list, cluster_idx: int) -> Optional[tuple[RatFunc, ...]]:
    """Normalization parametrized by the cluster coordinate itself: solve
    the defining quadratic for t when it is linear in t."""
    sq = coord_data[cluster_idx][1]
    den = Poly.const(1)
    for c in sq:
        den = den.lcm(c.den)
    cleared = [c.num * den.exact_div(c.den) for c in sq]
    max_t_deg = max(p.degree for p in cleared)
    if max_t_deg != 1:
        return None
    # G(lambda, t) = A(lambda) * t + B(lambda)
    a_poly = Poly([p.coeffs[1] if p.degree >= 1 else Fraction(0) for p in cleared])
    b_poly = Poly([p.constant_term() for p in cleared])
    if a_poly.is_zero():
        return None
    t_of_lambda = RatFunc(-b_poly, a_poly)
    coords = []
    for i, cd in enumerate(coord_data):
        if i == cluster_idx:
            coords.append(RatFunc.var())
        elif cd[0] == "value":
            coords.append(ratfunc_compose(cd[1], t_of_lambda))
        else:
            return None
    return tuple(coords)


def ratfunc_compose(f: RatFunc, g: RatFunc) -> RatFunc:
    """f(g) for rational functions."""
    num = f.num.eval_in(g, RatFunc.const(1))
    den = f.den.eval_in(g, RatFunc.const(1))
    return num / den


def homogenized_params(params: list[RatFunc]) -> list[Poly]:
    """Coprime homogeneous coordinate tuple (h_0 ... h_k) of the map
    (1 : f_1 : ... : f_k), as polynomials in the branch parameter."""
    den = Poly.const(1)
    for f in params:
        den = den.lcm(f.den)
    tuple_polys = [den]
    for f in params:
        tuple_polys.append(f.num * den.exact_div(f.den))
    g = Poly.zero()
    for p in tuple_polys:
        if not p.is_zero():
            g = p.monic() if g.is_zero() else g.gcd(p)
    if g.degree > 0:
        tuple_polys = [p.exact_div(g) if not p.is_zero() else p for p in tuple_polys]
    return tuple_polys


def map_degree_of_params(params: list[RatFunc]) -> int:
    """Hyperplane degree of (1 : f_1 : ... : f_k): maximum degree of the
    coprime homogenized coordinate tuple."""
    return max(p.degree for p in homogenized_params(params) if not p.is_zero())


def _sampled_statistics(block: _Block, k: int) -> int:
    """Generic length estimated at five sample points (degraded mode)."""
    lengths = []
    x = 0
    tried = 0
    while len(lengths) < 5 and tried < 60:
        place = Place.rational(Fraction(x))
        x = -x if x > 0 else -x + 1
        tried += 1
        if not all(_matrix_regular(m, place) for m in block.restricted):
            continue
        evaluated = [_eval_matrix(m, place) for m in block.restricted]
        support = d0_support(d0_point(evaluated))
        lengths.append(min(p.length for p in support.points))
    return min(lengths) if lengths else 0


def _generic_sample_places(phi: AzMorphism, label: str, count: int = 3) -> list[Place]:
    """Sample places certified generic: entries regular, restricted
    characteristic polynomials stay squarefree where they generically are,
    and node attachment points are avoided."""
    mats = phi.component_matrices(label)
    bad: set = set()
    for m in mats:
        for row in m.entries:
            for e in row:
                if e.den.degree > 0:
                    for place, _ in places_of_poly(e.den):
                        if place.kind == "finite-rational":
                            bad.add(place.coordinate)
    for place in phi.curve.node_places(label):
        if place.kind == "finite-rational":
            bad.add(place.coordinate)
    for block in _component_blocks(phi, label):
        for a in block.restricted:
            sq = _squarefree_part(char_poly(a, FT))
            for place in lambda_discriminant_places(sq):
                if place.kind == "finite-rational":
                    bad.add(place.coordinate)
    out = []
    x = 0
    tried = 0
    while len(out) < count and tried < 200:
        cand = Fraction(x)
        x = -x if x > 0 else -x + 1
        tried += 1
        if cand in bad:
            continue
        out.append(Place.rational(cand))
    return out


def _confirm_lengths(phi: AzMorphism, branches: list[Branch]) -> None:
    """Check branch lengths against fibers at certified-generic samples."""
    by_component: dict[str, list[Branch]] = {}
    for b in branches:
        by_component.setdefault(b.component, []).append(b)
    for label, comp_branches in by_component.items():
        for place in _generic_sample_places(phi, label):
            try:
                fiber = fiber_at(phi, label, place)
            except FiberError:
                continue
            if fiber.total_length() != phi.r:
                for b in comp_branches:
                    b.confirmed = False
                continue
            expected: dict = {}
            for b in comp_branches:
                if b.kind != EXACT:
                    continue
                pt = _exact_branch_fiber_point(b.parametrization, b.space_dim, place, phi.k)
                expected[pt.key()] = expected.get(pt.key(), 0) + pt.length
            actual = {p.key(): p.length for p in fiber.points}
            for key, length in expected.items():
                if actual.get(key) != length:
                    for b in comp_branches:
                        if b.kind == EXACT:
                            b.confirmed = b.confirmed and False
                    break


# ---------------------------------------------------------------------------
# construction from branch data


@dataclass(frozen=True)
class BranchSpec:
    component: str
    parametrization: tuple[RatFunc, ...]
    length: int
    style: str = "split"  # or "jordan"


def from_branches(curve: PrestableCurve, specs: Sequence[BranchSpec], r: int, k: int, deg_e: int = 0) -> AzMorphism:
    """Block-diagonal morphism realizing the given branches.

    A branch of length l contributes l scalar copies of its parametrization
    (split) or an l x l Jordan-style block with the nilpotent shift added
    to the first coordinate (jordan).
    """
    matrices: dict[str, tuple[FieldMatrix, ...]] = {}
    for comp in curve.components:
        comp_specs = [s for s in specs if s.component == comp.label]
        total = sum(s.length for s in comp_specs)
        if total != r:
            raise MorphismError(
                f"component {comp.label!r}: branch lengths sum to {total}, expected {r}"
            )
        mats = []
        for j in range(k):
            blocks = []
            for s in comp_specs:
                if len(s.parametrization) != k:
                    raise MorphismError("parametrization arity mismatch")
                f = s.parametrization[j]
                block = [[f if a == b else FT.zero for b in range(s.length)] for a in range(s.length)]
                if s.style == "jordan" and j == 0:
                    for a in range(s.length - 1):
                        block[a][a + 1] = block[a][a + 1] + FT.one
                elif s.style not in ("split", "jordan"):
                    raise MorphismError(f"unknown branch style {s.style!r}")
                blocks.append(block)
            mats.append(_block_diagonal(blocks))
        matrices[comp.label] = tuple(mats)
    return AzMorphism(curve, r, k, matrices, deg_e)


def _block_diagonal(blocks: list[list[list[RatFunc]]]) -> FieldMatrix:
    n = sum(len(b) for b in blocks)
    out = [[FT.zero] * n for _ in range(n)]
    offset = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, e in enumerate(row):
                out[offset + i][offset + j] = e
        offset += len(b)
    return FieldMatrix(out)


# ---------------------------------------------------------------------------
# numerical invariants


def image_degree(model: BranchModel) -> int:
    """Hyperplane degree of the image class: sum of length * map degree."""
    total = 0
    for b in model.branches:
        if b.kind == SAMPLED or b.map_degree is None:
            raise MorphismError("image degree requires exact branches")
        total += b.length * b.map_degree
    return total


def comb_type(phi: AzMorphism) -> CombType:
    model = branch_model(phi)
    return CombType(
        g=arithmetic_genus(phi.curve),
        r=phi.r,
        chi=euler_char(phi.curve, phi.r, phi.deg_e),
        beta=image_degree(model),
    )


def hilbert_poly(phi: AzMorphism) -> tuple[int, int]:
    """(slope, constant) of the Hilbert polynomial: slope is
    r * deg(C) + beta, the constant is chi."""
    ct = comb_type(phi)
    slope = phi.r * phi.curve.total_degree() + ct.beta
    return slope, ct.chi


def hilbert_pretty(slope: int, constant: int) -> str:
    if constant < 0:
        return f"{slope}m - {-constant}"
    return f"{slope}m + {constant}"


# ---------------------------------------------------------------------------
# surrogate summary


@dataclass
class DropPlace:
    place: Place
    evaluated_rank: int
    lost_dimension: int
    nilpotent_verified: bool

    def to_json(self) -> dict:
        return {
            "place": self.place.pretty(),
            "evaluated_rank": self.evaluated_rank,
            "lost_dimension": self.lost_dimension,
            "nilpotent_verified": self.nilpotent_verified,
        }


@dataclass
class SurrogateComponentReport:
    component: str
    generic_degree: int
    drops: list[DropPlace]
    pole_places: list[Place]
    notes: list[str]

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "generic_degree": self.generic_degree,
            "drop_places": [d.to_json() for d in self.drops],
            "pole_places": [p.pretty() for p in self.pole_places],
            "notes": list(self.notes),
        }


def surrogate_summary(phi: AzMorphism, seed: int = 0) -> list[SurrogateComponentReport]:
    """Per component: the generic dimension of the generated algebra over
    Q(t) and the finite list of places where the evaluated algebra drops.

    Candidate places come from denominators of the algebra basis, zeros of
    the discriminant of a seeded random element's minimal polynomial, and
    infinity; at each candidate the local lattice of the algebra over the
    local ring is evaluated and its rank compared with the generic degree.
    Lost directions are verified nilpotent through evaluated structure
    constants.
    """
    import random as _random

    out = []
    for comp in phi.curve.components:
        label = comp.label
        gens = list(phi.component_matrices(label))
        basis = algebra_closure(gens, FT, check_commute=False)
        generic = len(basis)
        rng = _random.Random(seed)
        rand_elt = None
        for b in basis:
            c = rng.randint(-5, 5)
            scaled = b.scale(RatFunc.const(c))
            rand_elt = scaled if rand_elt is None else rand_elt + scaled
        candidates: list[Place] = [Place.infinity()]
        notes: list[str] = []
        for b in basis:
            for row in b.entries:
                for e in row:
                    if e.den.degree > 0:
                        for place, _ in places_of_poly(e.den):
                            if place not in candidates:
                                candidates.append(place)
        # the squarefree part of the characteristic polynomial has the same
        # roots as the minimal polynomial, and its specialization
        # degeneracies come from the cleared resultant with its derivative
        sq = _squarefree_part(char_poly(rand_elt, FT))
        for place in lambda_discriminant_places(sq):
            if place not in candidates:
                candidates.append(place)
        drops: list[DropPlace] = []
        poles: list[Place] = []
        for place in sorted(candidates, key=lambda p: p.sort_key()):
            if place.unverified:
                notes.append(
                    f"candidate place {place.pretty()} skipped: irreducibility "
                    f"not certified"
                )
                continue
            if not all(_matrix_regular(m, place) for m in gens):
                poles.append(place)
                continue
            try:
                drop = _evaluate_drop(gens, place, generic)
            except ExactError as exc:
                notes.append(f"candidate place {place.pretty()} skipped: {exc}")
                continue
            if drop is not None:
                drops.append(drop)
        out.append(SurrogateComponentReport(label, generic, drops, poles, notes))
    return out


def _local_lattice(gens: list[FieldMatrix], place: Place, cap_rounds: int = 60) -> list[list[RatFunc]]:
    """O_x-module basis of the algebra generated by the (regular) tuple:
    close the monomial lattice under multiplication by the generators."""
    from .linalg import dvr_reduce

    vectors = [FieldMatrix.identity(gens[0].rows, FT).vec()]
    lattice = dvr_reduce(vectors, place)
    for _ in range(cap_rounds):
        grew = False
        mats = [FieldMatrix.from_vec(v, gens[0].rows, gens[0].rows) for v in lattice]
        for bm in mats:
            for g in gens:
                cand = (bm * g).vec()
                if not _in_lattice(cand, lattice, place):
                    lattice = dvr_reduce(lattice + [cand], place)
                    grew = True
        if not grew:
            return lattice
    raise MorphismError("local lattice closure did not stabilize")


def _in_lattice(vec: list[RatFunc], lattice: list[list[RatFunc]], place: Place) -> bool:
    solver = SpanSolver([list(v) for v in lattice], FT)
    coords = solver.solve(list(vec))
    if coords is None:
        return False
    return all(c.is_zero() or valuation_at(c, place) >= 0 for c in coords)


def _evaluate_drop(gens: list[FieldMatrix], place: Place, generic: int) -> Optional[DropPlace]:
    from .linalg import residue_field, ratfunc_residue

    lattice = _local_lattice(gens, place)
    fld = residue_field(place)
    residues = [[ratfunc_residue(e, place) for e in v] for v in lattice]
    red, pivots = rref(residues, fld)
    w = len(red)
    if w >= generic:
        return None
    # kernel of the evaluation on the lattice
    ker = kernel_basis(FieldMatrix(residues).transpose(), fld)
    nilpotent_ok = _kernel_nilpotent(lattice, ker, place, fld, gens[0].rows)
    return DropPlace(place, w, generic - w, nilpotent_ok)


def _kernel_nilpotent(lattice: list[list[RatFunc]], kernel: list[list], place: Place, fld, r: int) -> bool:
    """Verify z^r = 0 in the abstract fiber algebra for each lost
    direction z, multiplying through evaluated structure constants."""
    from .linalg import ratfunc_residue

    n = len(lattice)
    solver = SpanSolver([list(v) for v in lattice], FT)
    size = len(lattice[0])
    consts = []
    for i in range(n):
        row = []
        vi = lattice[i]
        mi = FieldMatrix.from_vec(vi, int(size**0.5), int(size**0.5))
        for j in range(n):
            mj = FieldMatrix.from_vec(lattice[j], int(size**0.5), int(size**0.5))
            coords = solver.solve((mi * mj).vec())
            if coords is None:
                return False
            if any((not c.is_zero()) and valuation_at(c, place) < 0 for c in coords):
                return False
            row.append([ratfunc_residue(c, place) for c in coords])
        consts.append(row)

    def mult(a: list, b: list) -> list:
        out = [fld.zero] * n
        for i, ca in enumerate(a):
            if fld.is_zero(ca):
                continue
            for j, cb in enumerate(b):
                if fld.is_zero(cb):
                    continue
                prod = ca * cb
                for l, c in enumerate(consts[i][j]):
                    out[l] = out[l] + prod * c
        return out

    for z in kernel:
        acc = list(z)
        for _ in range(r - 1):
            acc = mult(acc, z)
        if any(not fld.is_zero(c) for c in acc):
            return False
    return True
