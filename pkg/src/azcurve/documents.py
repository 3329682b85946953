"""Versioned JSON documents for curves, module points, morphisms,
deformation families, and chart presentations, plus canonical report
serialization.

Matrix entries are strings in the expression grammar, rationals serialize
as "p/q" strings (never floats), and report emission uses sorted keys and
fixed separators so identical inputs produce byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .curves import Component, CurveError, Node, PrestableCurve, build_curve
from .dzero import DZeroPoint, d0_point
from .exprs import EvalError, ParseError, eval_expr, expr_variables, parse_expr
from .families import FamilyPresentation
from .linalg import FieldMatrix, QQ
from .morphisms import AzMorphism, FT
from .polys import ExactError, Place, RatFunc
from .presentations import ChartPresentation

SCHEMA_VERSION = 1

KINDS = ("curve", "d0", "morphism", "family", "presentation")


class DocumentError(ValueError):
    """Schema violation; the message carries the offending field path."""


@dataclass
class Document:
    kind: str
    payload: dict
    model: object
    extra: dict

    def to_json(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "kind": self.kind}
        out.update(self.payload)
        return out


def _require(payload: dict, key: str, path: str):
    if key not in payload:
        raise DocumentError(f"{path}{key}: missing")
    return payload[key]


def _as_int(value, path: str, minimum: Optional[int] = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise DocumentError(f"{path}: expected an integer")
    if minimum is not None and value < minimum:
        raise DocumentError(f"{path}: must be >= {minimum}")
    return value


def parse_rational(text, path: str) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise DocumentError(f"{path}: expected a rational string")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f"{path}: not a rational number: {text!r}")


def _parse_place(text, path: str) -> Place:
    if isinstance(text, str) and text.strip().lower() in ("infinity", "inf"):
        return Place.infinity()
    return Place.rational(parse_rational(text, path))


def _place_str(place: Place) -> str:
    if place.kind == "infinity":
        return "infinity"
    c = place.coordinate
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# curve


def _parse_curve_payload(payload: dict, path: str = "") -> PrestableCurve:
    comps_raw = _require(payload, "components", path)
    if not isinstance(comps_raw, list) or not comps_raw:
        raise DocumentError(f"{path}components: expected a nonempty list")
    components = []
    for i, c in enumerate(comps_raw):
        label = _require(c, "label", f"{path}components[{i}].")
        if not isinstance(label, str):
            raise DocumentError(f"{path}components[{i}].label: expected a string")
        pol = c.get("polarization", 1)
        components.append(Component(label, _as_int(pol, f"{path}components[{i}].polarization", 1)))
    nodes = []
    for i, n in enumerate(payload.get("nodes", [])):
        a = _require(n, "a", f"{path}nodes[{i}].")
        b = _require(n, "b", f"{path}nodes[{i}].")
        nodes.append(
            Node(
                _require(a, "component", f"{path}nodes[{i}].a."),
                _parse_place(_require(a, "place", f"{path}nodes[{i}].a."), f"{path}nodes[{i}].a.place"),
                _require(b, "component", f"{path}nodes[{i}].b."),
                _parse_place(_require(b, "place", f"{path}nodes[{i}].b."), f"{path}nodes[{i}].b.place"),
            )
        )
    try:
        return build_curve(components, nodes)
    except CurveError as exc:
        raise DocumentError(f"{path}curve: {exc}")


def curve_payload(curve: PrestableCurve) -> dict:
    return {
        "components": [
            {"label": c.label, "polarization": c.polarization} for c in curve.components
        ],
        "nodes": [
            {
                "a": {"component": n.component_a, "place": _place_str(n.place_a)},
                "b": {"component": n.component_b, "place": _place_str(n.place_b)},
            }
            for n in curve.nodes
        ],
    }


# ---------------------------------------------------------------------------
# matrices of expressions


def _parse_matrix(raw, r: int, path: str) -> FieldMatrix:
    """Matrix of rational functions in t."""
    if not isinstance(raw, list) or len(raw) != r:
        raise DocumentError(f"{path}: expected {r} rows, found {len(raw) if isinstance(raw, list) else 'non-list'}")
    total = sum(len(row) if isinstance(row, list) else -1 for row in raw)
    if any(not isinstance(row, list) for row in raw) or total != r * r:
        raise DocumentError(f"{path}: entries: expected {r * r}, found {total}")
    rows = []
    for i, row in enumerate(raw):
        out = []
        for j, cell in enumerate(row):
            if not isinstance(cell, str):
                raise DocumentError(f"{path}[{i}][{j}]: expected an expression string")
            try:
                expr = parse_expr(cell, ("t",))
                value = eval_expr(expr, {"t": RatFunc.var()})
            except ParseError as exc:
                raise DocumentError(f"{path}[{i}][{j}]: {exc}")
            except EvalError as exc:
                raise DocumentError(f"{path}[{i}][{j}]: {exc}")
            out.append(value)
        rows.append(out)
    return FieldMatrix(rows)


def _parse_expr_matrix(raw, r: int, path: str, variables: tuple[str, ...]) -> list[list]:
    """Matrix of parsed (unevaluated) expression trees."""
    if not isinstance(raw, list) or len(raw) != r:
        raise DocumentError(f"{path}: expected {r} rows, found {len(raw) if isinstance(raw, list) else 'non-list'}")
    total = sum(len(row) if isinstance(row, list) else -1 for row in raw)
    if any(not isinstance(row, list) for row in raw) or total != r * r:
        raise DocumentError(f"{path}: entries: expected {r * r}, found {total}")
    rows = []
    for i, row in enumerate(raw):
        out = []
        for j, cell in enumerate(row):
            if not isinstance(cell, str):
                raise DocumentError(f"{path}[{i}][{j}]: expected an expression string")
            try:
                out.append(parse_expr(cell, variables))
            except ParseError as exc:
                raise DocumentError(f"{path}[{i}][{j}]: {exc}")
        rows.append(out)
    return rows


# ---------------------------------------------------------------------------
# per-kind parsing


def _parse_d0(payload: dict) -> tuple[object, dict]:
    r = _as_int(_require(payload, "r", ""), "r", 1)
    k = _as_int(_require(payload, "k", ""), "k", 1)
    mats_raw = _require(payload, "matrices", "")
    if not isinstance(mats_raw, list) or len(mats_raw) != k:
        raise DocumentError(f"matrices: expected {k} matrices")
    mats = []
    for idx, m in enumerate(mats_raw):
        rows = _parse_expr_matrix(m, r, f"matrices[{idx}]", ())
        mats.append(FieldMatrix([[eval_expr(e, {"_": Fraction(0)}) for e in row] for row in rows]))
    point = d0_point(mats)
    extra = {}
    if "matrices_b" in payload:
        mats_b = []
        for idx, m in enumerate(payload["matrices_b"]):
            rows = _parse_expr_matrix(m, r, f"matrices_b[{idx}]", ())
            mats_b.append(FieldMatrix([[eval_expr(e, {"_": Fraction(0)}) for e in row] for row in rows]))
        extra["other"] = d0_point(mats_b)
    return point, extra


def _parse_morphism(payload: dict) -> AzMorphism:
    curve = _parse_curve_payload(_require(payload, "curve", ""), "curve.")
    r = _as_int(_require(payload, "r", ""), "r", 1)
    k = _as_int(_require(payload, "k", ""), "k", 1)
    deg_e = _as_int(payload.get("deg_e", 0), "deg_e")
    mats_raw = _require(payload, "matrices", "")
    matrices = {}
    for comp in curve.components:
        if comp.label not in mats_raw:
            raise DocumentError(f"matrices.{comp.label}: missing")
        comp_mats = mats_raw[comp.label]
        if not isinstance(comp_mats, list) or len(comp_mats) != k:
            raise DocumentError(f"matrices.{comp.label}: expected {k} matrices")
        parsed = []
        for idx, m in enumerate(comp_mats):
            parsed.append(_parse_matrix(m, r, f"matrices.{comp.label}[{idx}]"))
        matrices[comp.label] = tuple(parsed)
    return AzMorphism(curve, r, k, matrices, deg_e)


def _parse_family(payload: dict) -> tuple[FamilyPresentation, dict]:
    curve = _parse_curve_payload(_require(payload, "curve", ""), "curve.")
    r = _as_int(_require(payload, "r", ""), "r", 1)
    k = _as_int(_require(payload, "k", ""), "k", 1)
    deg_e = _as_int(payload.get("deg_e", 0), "deg_e")
    mats_raw = _require(payload, "matrices", "")
    entries = {}
    for comp in curve.components:
        if comp.label not in mats_raw:
            raise DocumentError(f"matrices.{comp.label}: missing")
        comp_mats = mats_raw[comp.label]
        if not isinstance(comp_mats, list) or len(comp_mats) != k:
            raise DocumentError(f"matrices.{comp.label}: expected {k} matrices")
        entries[comp.label] = [
            _parse_expr_matrix(m, r, f"matrices.{comp.label}[{idx}]", ("t", "s"))
            for idx, m in enumerate(comp_mats)
        ]
    family = FamilyPresentation(curve, r, k, entries, deg_e)
    extra = {}
    if "samples" in payload:
        extra["samples"] = [
            parse_rational(s, f"samples[{i}]") for i, s in enumerate(payload["samples"])
        ]
    if "t_grid" in payload:
        extra["t_grid"] = [
            parse_rational(s, f"t_grid[{i}]") for i, s in enumerate(payload["t_grid"])
        ]
    return family, extra


def _parse_presentation(payload: dict) -> ChartPresentation:
    curve = _parse_curve_payload(_require(payload, "curve", ""), "curve.")
    r = _as_int(_require(payload, "r", ""), "r", 1)
    k = _as_int(_require(payload, "k", ""), "k", 1)
    comps_raw = _require(payload, "components", "")
    idempotents = {}
    matrices = {}
    for comp in curve.components:
        if comp.label not in comps_raw:
            raise DocumentError(f"components.{comp.label}: missing")
        data = comps_raw[comp.label]
        idem_raw = _require(data, "idempotents", f"components.{comp.label}.")
        if not isinstance(idem_raw, list) or len(idem_raw) != k + 1:
            raise DocumentError(
                f"components.{comp.label}.idempotents: expected {k + 1} matrices"
            )
        idems = []
        for idx, m in enumerate(idem_raw):
            rows = _parse_expr_matrix(m, r, f"components.{comp.label}.idempotents[{idx}]", ())
            idems.append(
                FieldMatrix([[eval_expr(e, {"_": Fraction(0)}) for e in row] for row in rows])
            )
        grid_raw = _require(data, "matrices", f"components.{comp.label}.")
        if not isinstance(grid_raw, list) or len(grid_raw) != k + 1 or any(
            not isinstance(row, list) or len(row) != k + 1 for row in grid_raw
        ):
            raise DocumentError(
                f"components.{comp.label}.matrices: expected a {k + 1}x{k + 1} grid"
            )
        grid = []
        for i in range(k + 1):
            row = []
            for j in range(k + 1):
                row.append(
                    _parse_matrix(
                        grid_raw[i][j], r, f"components.{comp.label}.matrices[{i}][{j}]"
                    )
                )
            grid.append(row)
        idempotents[comp.label] = idems
        matrices[comp.label] = grid
    return ChartPresentation(curve, r, k, idempotents, matrices)


def parse_document(text: str) -> Document:
    """Parse and validate a JSON document, returning it together with the
    constructed model object."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}")
    if not isinstance(data, dict):
        raise DocumentError("document: expected a JSON object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(f"schema_version: expected {SCHEMA_VERSION}, found {version!r}")
    kind = data.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"kind: expected one of {', '.join(KINDS)}, found {kind!r}")
    payload = {k: v for k, v in data.items() if k not in ("schema_version", "kind")}
    extra: dict = {}
    try:
        if kind == "curve":
            model: object = _parse_curve_payload(payload)
        elif kind == "d0":
            model, extra = _parse_d0(payload)
        elif kind == "morphism":
            model = _parse_morphism(payload)
        elif kind == "family":
            model, extra = _parse_family(payload)
        else:
            model = _parse_presentation(payload)
    except (ExactError, CurveError) as exc:
        raise DocumentError(str(exc))
    return Document(kind, payload, model, extra)


# ---------------------------------------------------------------------------
# canonical emission


def emit_report(obj) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing
    newline; rationals must already be strings."""
    if hasattr(obj, "to_json"):
        obj = obj.to_json()
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def emit_document(doc: Document) -> str:
    return emit_report(doc.to_json())
