"""Zero-dimensional module points: commuting tuples over Q on an affine
chart, their supports, the Chow/Hilb/singleton classification, and the
conjugation-orbit equivalence test.

A point of rank r with k coordinates is a k-tuple of pairwise-commuting
r x r rational matrices; the module Q^r over the generated algebra is
supported on the joint spectrum.  Supports are reported over Q: a point
with non-rational coordinates appears as a conjugate cluster carrying the
monic factor of each coordinate, its geometric degree, and the per-point
length.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .decomp import (
    Factorization,
    joint_primary_decomposition,
    restrict_matrix,
)
from .linalg import (
    FieldMatrix,
    QQ,
    SpanSolver,
    algebra_closure,
    char_poly,
    kernel_basis,
    min_poly,
    trace_radical,
)
from .polys import ExactError, Poly


class DZeroError(ExactError):
    pass


@dataclass(frozen=True)
class DZeroPoint:
    r: int
    matrices: tuple[FieldMatrix, ...]

    @property
    def k(self) -> int:
        return len(self.matrices)


def d0_point(matrices: Sequence[FieldMatrix]) -> DZeroPoint:
    if not matrices:
        raise DZeroError("a point needs at least one coordinate matrix")
    r = matrices[0].rows
    return DZeroPoint(r, tuple(matrices))


@dataclass
class ValidationReport:
    ok: bool
    r: int
    k: int
    failing_pairs: list[tuple[int, int]] = field(default_factory=list)
    shape_errors: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "r": self.r,
            "k": self.k,
            "failing_pairs": [list(p) for p in self.failing_pairs],
            "shape_errors": list(self.shape_errors),
        }


def d0_validate(point: DZeroPoint) -> ValidationReport:
    """Shape and pairwise-commutation check; every failing pair is listed."""
    report = ValidationReport(ok=True, r=point.r, k=point.k)
    for idx, m in enumerate(point.matrices):
        if not m.is_square() or m.rows != point.r:
            report.shape_errors.append(f"matrix {idx}: expected {point.r}x{point.r}")
            report.ok = False
    if report.shape_errors:
        return report
    for i in range(point.k):
        for j in range(i + 1, point.k):
            if not point.matrices[i].commutes_with(point.matrices[j], QQ):
                report.failing_pairs.append((i, j))
                report.ok = False
    return report


# ---------------------------------------------------------------------------
# support


@dataclass(frozen=True)
class SupportPoint:
    """One closed point of the joint support.

    coordinates: per-chart-coordinate entry, a Fraction for a rational
    value or a monic Poly (the factor of that coordinate) for a cluster.
    degree: number of geometric points (1 for a rational point).
    length: module length at each geometric point of the cluster.
    space_dim: dimension of the joint subspace (= degree * length).
    """

    coordinates: tuple
    degree: int
    length: int
    space_dim: int
    certified: bool = True

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coordinates)

    def sort_key(self):
        key = []
        for c in self.coordinates:
            if isinstance(c, Fraction):
                key.append((0, c, ()))
            else:
                key.append((1, Fraction(0), c.coeffs))
        return tuple(key)

    def to_json(self) -> dict:
        coords = []
        for c in self.coordinates:
            if isinstance(c, Fraction):
                coords.append({"value": _frac(c)})
            else:
                coords.append({"cluster": c.pretty("l")})
        return {
            "coordinates": coords,
            "degree": self.degree,
            "length": self.length,
            "total_length": self.space_dim,
            "certified": self.certified,
        }


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class SupportCycle:
    r: int
    points: tuple[SupportPoint, ...]

    def total_length(self) -> int:
        return sum(p.space_dim for p in self.points)

    def to_json(self) -> dict:
        return {"r": self.r, "points": [p.to_json() for p in self.points]}


def _q_factorization(coeffs: Sequence[Fraction]) -> Factorization:
    p = Poly(coeffs)
    fact = Factorization()
    roots, _, _ = p.rational_roots()
    for root, mult in roots:
        fact.roots.append((root, mult))
    for g, mult in p.squarefree_decomposition():
        _, residual, _ = g.rational_roots()
        if residual.degree >= 1:
            certified = residual.degree <= 3
            fact.residuals.append((list(residual.coeffs), mult, certified))
    return fact


def _coordinate_on_space(m: FieldMatrix, basis: list[list]):
    """Action of one coordinate matrix on a final joint subspace: either a
    single rational generalized eigenvalue or a cluster factor."""
    a = restrict_matrix(m, basis, QQ)
    cp = Poly(char_poly(a, QQ))
    sq = cp.squarefree_part()
    roots, residual, _ = sq.rational_roots()
    if sq.degree == 1 and roots:
        return roots[0][0], True
    return residual.monic() if residual.degree > 1 else sq.monic(), residual.degree <= 3


def d0_support(point: DZeroPoint) -> SupportCycle:
    """Joint generalized eigenstructure of the tuple.

    The ambient space is split by iterated primary decomposition along each
    matrix; elements of the generated algebra refine the splitting so that
    each reported entry is one closed point.  Lengths sum to r.
    """
    report = d0_validate(point)
    if not report.ok:
        raise DZeroError("invalid point: " + _summary(report))
    basis = algebra_closure(point.matrices, QQ, check_commute=False)
    spaces = joint_primary_decomposition(
        point.matrices, QQ, _q_factorization, extra_mats=basis[1:]
    )
    pts = []
    for space in spaces:
        coords = []
        certified = True
        for m in point.matrices:
            value, cert = _coordinate_on_space(m, space)
            coords.append(value)
            certified = certified and cert
        dim = len(space)
        restricted = [restrict_matrix(b, space, QQ) for b in point.matrices]
        local_basis = algebra_closure(restricted, QQ, check_commute=False)
        radical = trace_radical(local_basis, QQ)
        degree = len(local_basis) - len(radical)
        if degree <= 0 or dim % degree != 0:
            # several closed points sharing all factor data; keep honest
            pts.append(SupportPoint(tuple(coords), degree, dim // max(degree, 1), dim, False))
        else:
            pts.append(SupportPoint(tuple(coords), degree, dim // degree, dim, certified))
    pts.sort(key=lambda p: p.sort_key())
    return SupportCycle(point.r, tuple(pts))


def _summary(report: ValidationReport) -> str:
    bits = list(report.shape_errors)
    bits += [f"pair {p} does not commute" for p in report.failing_pairs]
    return "; ".join(bits)


# ---------------------------------------------------------------------------
# classification


@dataclass
class ClassifyReport:
    chow: bool
    hilb: object  # True / False / "undetermined"
    singleton: bool
    algebra_dim: int
    radical_dim: int
    support_points: int

    def to_json(self) -> dict:
        return {
            "chow": self.chow,
            "hilb": self.hilb,
            "singleton": self.singleton,
            "algebra_dim": self.algebra_dim,
            "radical_dim": self.radical_dim,
            "support_points": self.support_points,
        }


def _cyclic_vector(basis: list[FieldMatrix], r: int, seed: int, tries: int = 20) -> Optional[list[Fraction]]:
    """Search for v with A v = Q^r over the standard basis, then seeded
    random rational vectors."""
    candidates = [
        [Fraction(1) if i == j else Fraction(0) for j in range(r)] for i in range(r)
    ]
    rng = random.Random(seed)
    for _ in range(tries):
        candidates.append([Fraction(rng.randint(-9, 9)) for _ in range(r)])
    for v in candidates:
        orbit = []
        for b in basis:
            orbit.append([sum(row[j] * v[j] for j in range(r)) for row in b.entries])
        if SpanSolver(orbit, QQ).rank == r:
            return v
    return None


def d0_classify(point: DZeroPoint, seed: int = 0) -> ClassifyReport:
    """Membership flags for the three distinguished loci.

    chow: the support is reduced (trace-form radical vanishes).
    hilb: the module is the structure sheaf of its support (algebra
    dimension r plus a cyclic vector; a failed bounded search with the
    dimension matching reports "undetermined" rather than False).
    singleton: the support is one rational point.
    """
    report = d0_validate(point)
    if not report.ok:
        raise DZeroError("invalid point: " + _summary(report))
    basis = algebra_closure(point.matrices, QQ, check_commute=False)
    radical = trace_radical(basis, QQ)
    chow = not radical
    support = d0_support(point)
    singleton = len(support.points) == 1 and support.points[0].is_rational()
    if len(basis) != point.r:
        hilb: object = False
    else:
        v = _cyclic_vector(basis, point.r, seed)
        hilb = True if v is not None else "undetermined"
    return ClassifyReport(
        chow=chow,
        hilb=hilb,
        singleton=singleton,
        algebra_dim=len(basis),
        radical_dim=len(radical),
        support_points=len(support.points),
    )


# ---------------------------------------------------------------------------
# orbit equivalence


@dataclass
class IsoReport:
    verdict: bool
    witness: Optional[FieldMatrix]
    certificate: str

    def to_json(self) -> dict:
        out = {"isomorphic": self.verdict, "certificate": self.certificate}
        if self.witness is not None:
            out["witness"] = [[_frac(e) for e in row] for row in self.witness.entries]
        return out


def _intertwiner_space(a: Sequence[FieldMatrix], b: Sequence[FieldMatrix], r: int) -> list[FieldMatrix]:
    """Basis of { S : S a_i = b_i S for all i }."""
    rows = []
    for ai, bi in zip(a, b):
        # (S a_i - b_i S)[p][q] = sum_j S[p][j] a_i[j][q] - sum_j b_i[p][j] S[j][q]
        for p in range(r):
            for q in range(r):
                row = [Fraction(0)] * (r * r)
                for j in range(r):
                    row[p * r + j] += ai.entries[j][q]
                    row[j * r + q] -= bi.entries[p][j]
                rows.append(row)
    ker = kernel_basis(FieldMatrix(rows), QQ)
    return [FieldMatrix.from_vec(v, r, r) for v in ker]


def _det(m: FieldMatrix) -> Fraction:
    cp = char_poly(m, QQ)
    d = cp[0]
    return d if m.rows % 2 == 0 else -d


def _random_words(k: int, rng: random.Random, count: int = 10) -> list[list[int]]:
    words = []
    for _ in range(count):
        length = rng.randint(2, 4)
        words.append([rng.randrange(k) for _ in range(length)])
    return words


def d0_iso(a: DZeroPoint, b: DZeroPoint, seed: int = 0) -> IsoReport:
    """Simultaneous-conjugation equivalence.

    A "true" verdict always carries an exhibited invertible witness S with
    S a_i = b_i S checked exactly.  A "false" verdict is certified by an
    invariant mismatch, a zero intertwiner space, or by the determinant of
    a generic intertwiner vanishing at a full grid of sample coefficients.
    """
    if a.r != b.r or a.k != b.k:
        raise DZeroError("rank or chart dimension mismatch")
    r, k = a.r, a.k
    rng = random.Random(seed)
    for i in range(k):
        if char_poly(a.matrices[i], QQ) != char_poly(b.matrices[i], QQ):
            return IsoReport(False, None, f"characteristic polynomial of coordinate {i} differs")
        if min_poly(a.matrices[i], QQ) != min_poly(b.matrices[i], QQ):
            return IsoReport(False, None, f"minimal polynomial of coordinate {i} differs")
    for word in _random_words(k, rng):
        wa = FieldMatrix.identity(r, QQ)
        wb = FieldMatrix.identity(r, QQ)
        for idx in word:
            wa = wa * a.matrices[idx]
            wb = wb * b.matrices[idx]
        if char_poly(wa, QQ) != char_poly(wb, QQ):
            return IsoReport(False, None, "characteristic polynomial of a product word differs")
    space = _intertwiner_space(a.matrices, b.matrices, r)
    if not space:
        return IsoReport(False, None, "intertwiner space is zero")
    m = len(space)

    def check(coeffs: list[Fraction]) -> Optional[FieldMatrix]:
        s = FieldMatrix.zeros(r, r, QQ)
        for c, base in zip(coeffs, space):
            if c:
                s = s + base.scale(c)
        if _det(s) != 0:
            return s
        return None

    candidates: list[list[Fraction]] = []
    for i in range(m):
        candidates.append([Fraction(1) if j == i else Fraction(0) for j in range(m)])
    for _ in range(50):
        candidates.append([Fraction(rng.randint(-9, 9)) for _ in range(m)])
    for _ in range((m + 1) ** 2):
        candidates.append([Fraction(rng.randint(-19, 19)) for _ in range(m)])
    for coeffs in candidates:
        s = check(coeffs)
        if s is not None:
            for ai, bi in zip(a.matrices, b.matrices):
                if not (s * ai - bi * s).is_zero(QQ):
                    raise DZeroError("intertwiner residual is nonzero")
            return IsoReport(True, s, "invertible intertwiner exhibited")
    return IsoReport(
        False,
        None,
        "intertwiner determinant vanished on the full sample grid",
    )
