"""Exact-arithmetic toolkit for matrix-tuple morphisms from nodal curves
to projective space: supports, branch models, combinatorial types, Hilbert
polynomials, zero-dimensional module classification, chart-presentation
checks, and deformation scans, all over Q and Q(t)."""

from .curves import (
    Component,
    CurveError,
    Node,
    PrestableCurve,
    arithmetic_genus,
    build_curve,
    euler_char,
    projective_line,
)
from .dzero import (
    DZeroError,
    DZeroPoint,
    SupportCycle,
    d0_classify,
    d0_iso,
    d0_point,
    d0_support,
    d0_validate,
)
from .linalg import (
    FieldMatrix,
    FunctionField,
    QQ,
    algebra_closure,
    char_poly,
    min_poly,
    trace_radical,
)
from .morphisms import (
    AzMorphism,
    Branch,
    BranchModel,
    BranchSpec,
    CombType,
    FiberData,
    FiberError,
    MorphismError,
    branch_model,
    comb_type,
    fiber_at,
    from_branches,
    hilbert_poly,
    image_degree,
    morphism_validate,
    surrogate_summary,
)
from .bounds import BoundsError, TangentialIntersection, support_bounds_check
from .families import FamilyPresentation, FamilyScanReport, family_scan
from .polys import (
    ExactError,
    Place,
    Poly,
    Rat,
    RatFunc,
    rational_roots,
    ratfunc_normalize,
    valuation_at,
)
from .presentations import (
    ChartPresentation,
    PseudoSection,
    SpectralCurve,
    check_admissible,
    check_atlas_conditions,
    check_nondegenerate,
    check_strongly_nondegenerate,
    embed_morphism,
    spectral_curve,
)
from .exprs import ParseError, parse_ratfunc
from .documents import Document, DocumentError, emit_report, parse_document

__version__ = "0.1.0"
