"""Deformation families: specialize a two-variable presentation at sample
values and watch the combinatorial type.

Family entries are expression trees in the component coordinate t and the
deformation parameter s; a scan substitutes each sample for s, validates
the specialized morphism, computes its combinatorial type and surrogate
degrees, and tabulates fiber supports over a grid of t-values so support
trajectories can be rendered.  A type jump across samples is reported as
evidence that the naive limit family fails to be flat at the jump, not as
a defect of the constancy statement for flat families.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

from .curves import PrestableCurve
from .exprs import EvalError, Expr, eval_expr
from .linalg import FieldMatrix
from .morphisms import (
    AzMorphism,
    FiberError,
    MorphismError,
    comb_type,
    fiber_at,
    morphism_validate,
    surrogate_summary,
)
from .polys import ExactError, Place, RatFunc

CONSTANT = "CONSTANT"
NOT_CONSTANT = "NOT CONSTANT"


@dataclass
class FamilyPresentation:
    """Matrices of expression trees over (t, s), one tuple per component."""

    curve: PrestableCurve
    r: int
    k: int
    entries: dict[str, list[list[list[Expr]]]]  # label -> k matrices of ASTs
    deg_e: int = 0

    def specialize(self, sample: Fraction) -> AzMorphism:
        bindings = {"t": RatFunc.var(), "s": RatFunc.const(sample)}
        matrices: dict[str, tuple[FieldMatrix, ...]] = {}
        for label, mats in self.entries.items():
            specialized = []
            for mat in mats:
                specialized.append(
                    FieldMatrix([[eval_expr(e, bindings) for e in row] for row in mat])
                )
            matrices[label] = tuple(specialized)
        return AzMorphism(self.curve, self.r, self.k, matrices, self.deg_e)


@dataclass
class TrajectoryPoint:
    """One support point at one (sample, grid value) cell."""

    value: Optional[Fraction]  # first affine coordinate; None when not drawable
    at_infinity: bool
    cluster: bool
    length: int

    def to_json(self) -> dict:
        out = {
            "length": self.length,
            "at_infinity": self.at_infinity,
            "cluster": self.cluster,
        }
        if self.value is not None:
            out["value"] = _frac(self.value)
        return out


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass
class SampleResult:
    sample: Fraction
    skipped: bool
    notice: Optional[str]
    type: Optional[object]  # CombType
    hilbert: Optional[tuple[int, int]]
    surrogate_degrees: dict[str, int]

    def to_json(self) -> dict:
        out = {"s": _frac(self.sample), "skipped": self.skipped}
        if self.notice:
            out["notice"] = self.notice
        if self.type is not None:
            out["type"] = self.type.to_json()
        if self.hilbert is not None:
            out["hilbert"] = {"slope": str(self.hilbert[0]), "constant": str(self.hilbert[1])}
        if self.surrogate_degrees:
            out["surrogate_degrees"] = dict(sorted(self.surrogate_degrees.items()))
        return out


@dataclass
class Trajectory:
    component: str
    grid_value: Fraction
    per_sample: list[Optional[list[TrajectoryPoint]]]

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "t": _frac(self.grid_value),
            "per_sample": [
                None if pts is None else [p.to_json() for p in pts]
                for pts in self.per_sample
            ],
        }


@dataclass
class FamilyScanReport:
    samples: list[SampleResult]
    verdict: str
    jumps: list[str]
    trajectories: list[Trajectory]
    notes: list[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "samples": [s.to_json() for s in self.samples],
            "verdict": self.verdict,
            "jumps": list(self.jumps),
            "trajectories": [t.to_json() for t in self.trajectories],
            "notes": list(self.notes),
        }


def _fiber_trajectory_points(phi: AzMorphism, component: str, grid: Fraction) -> list[TrajectoryPoint]:
    fiber = fiber_at(phi, component, Place.rational(grid))
    points = []
    for p in fiber.points:
        if p.homogeneous is not None:
            if p.homogeneous[0] != 0:
                first = p.homogeneous[1] / p.homogeneous[0] if len(p.homogeneous) > 1 else Fraction(0)
                points.append(TrajectoryPoint(first, False, False, p.length))
            else:
                points.append(TrajectoryPoint(None, True, False, p.length))
        else:
            points.append(TrajectoryPoint(None, False, True, p.length))
    points.sort(key=lambda tp: (tp.value is None, tp.value if tp.value is not None else Fraction(0)))
    return points


def family_scan(
    family: FamilyPresentation,
    samples: Sequence[Fraction],
    t_grid: Sequence[Fraction] = (Fraction(0),),
) -> FamilyScanReport:
    """Specialize at every sample, compare combinatorial types, and gather
    the support trajectory table.

    Samples where the specialization has a pole in s, fails validation, or
    has no computable type are skipped with a notice and excluded from the
    constancy comparison.
    """
    if not samples:
        raise MorphismError("empty sample list")
    results: list[SampleResult] = []
    trajectories: dict[tuple[str, Fraction], list] = {
        (comp.label, g): [] for comp in family.curve.components for g in t_grid
    }
    notes: list[str] = []
    for s in samples:
        phi: Optional[AzMorphism] = None
        notice = None
        try:
            phi = family.specialize(s)
        except (EvalError, ExactError) as exc:
            notice = f"specialization failed: {exc}"
        if phi is not None:
            vrep = morphism_validate(phi)
            if not vrep.ok:
                notice = "specialization is not a valid morphism: " + "; ".join(vrep.problems)
                phi = None
        ct = None
        hp = None
        degrees: dict[str, int] = {}
        if phi is not None:
            try:
                ct = comb_type(phi)
                slope = phi.r * phi.curve.total_degree() + ct.beta
                hp = (slope, ct.chi)
            except MorphismError as exc:
                notice = f"combinatorial type not computable: {exc}"
            for rep in surrogate_summary(phi):
                degrees[rep.component] = rep.generic_degree
        results.append(
            SampleResult(
                sample=s,
                skipped=ct is None,
                notice=notice,
                type=ct,
                hilbert=hp,
                surrogate_degrees=degrees,
            )
        )
        for (label, g), cells in trajectories.items():
            if phi is None:
                cells.append(None)
                continue
            try:
                cells.append(_fiber_trajectory_points(phi, label, g))
            except (FiberError, MorphismError) as exc:
                cells.append(None)
                notes.append(f"s={_frac(s)}, {label}, t={_frac(g)}: {exc}")
    computed = [r for r in results if r.type is not None]
    jumps: list[str] = []
    verdict = CONSTANT
    if computed:
        reference = computed[0].type
        for r in computed[1:]:
            if r.type != reference:
                jumps.append(_frac(r.sample))
        if jumps:
            verdict = NOT_CONSTANT
            notes.append(
                "combinatorial type jumps across samples: the naive limit "
                "family is not flat at the jump samples"
            )
    else:
        verdict = "NO DATA"
    trajectory_list = [
        Trajectory(label, g, cells) for (label, g), cells in sorted(
            trajectories.items(), key=lambda kv: (kv[0][0], kv[0][1])
        )
    ]
    return FamilyScanReport(
        samples=results,
        verdict=verdict,
        jumps=jumps,
        trajectories=trajectory_list,
        notes=notes,
    )
