"""Command-line driver: every analysis as a subcommand with JSON in/out.

Exit status contract: 0 on success, 2 when the input fails validation (a
machine-readable report is still emitted), 1 on I/O, parse, or usage
errors (diagnostics on stderr, nothing on stdout).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional

from .bounds import BoundsError, TangentialIntersection, support_bounds_check
from .curves import arithmetic_genus, euler_char
from .documents import Document, DocumentError, emit_report, parse_document, parse_rational
from .dzero import DZeroError, d0_classify, d0_iso, d0_support, d0_validate
from .families import family_scan
from .morphisms import (
    FiberError,
    MorphismError,
    branch_model,
    comb_type,
    hilbert_poly,
    hilbert_pretty,
    morphism_validate,
    surrogate_summary,
)
from .polys import ExactError
from .presentations import check_atlas_conditions, spectral_curve

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are I/O-class failures (exit 1)
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_IO)


def _build_parser() -> _Parser:
    parser = _Parser(prog="azcurve", description=__doc__)
    parser.add_argument("--input", "-i", default="-", help="input document path, '-' for stdin")
    parser.add_argument("--output", "-o", default="-", help="report path, '-' for stdout")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized searches")
    sub = parser.add_subparsers(dest="command", required=True)

    d0 = sub.add_parser("d0", help="zero-dimensional module points")
    d0sub = d0.add_subparsers(dest="subcommand", required=True)
    d0sub.add_parser("classify", help="Chow/Hilb/singleton flags and support")
    d0sub.add_parser("support", help="joint support cycle")
    d0sub.add_parser("iso", help="conjugation-orbit equivalence of the pair in one document")

    morph = sub.add_parser("morphism", help="matrix-tuple morphisms")
    morphsub = morph.add_subparsers(dest="subcommand", required=True)
    morphsub.add_parser("validate", help="structural and node checks")
    morphsub.add_parser("analyze", help="branches, type, Hilbert polynomial, surrogate")
    bounds = morphsub.add_parser("bounds", help="support Hilbert-polynomial inequalities")
    bounds.add_argument("--m0", type=int, required=True, help="regularity anchor")
    bounds.add_argument("--mmax", type=int, required=True, help="upper end of the check range")

    pres = sub.add_parser("presentation", help="chart presentations")
    pressub = pres.add_subparsers(dest="subcommand", required=True)
    pressub.add_parser("check", help="gluing conditions (1)-(4)")

    spectral = sub.add_parser("spectral", help="spectral curve of one coordinate matrix")
    spectral.add_argument("--component", default=None, help="component label (default: first)")
    spectral.add_argument("--coordinate", type=int, default=1, help="which coordinate matrix (1-based)")

    family = sub.add_parser("family", help="deformation families")
    famsub = family.add_subparsers(dest="subcommand", required=True)
    scan = famsub.add_parser("scan", help="per-sample types and support trajectories")
    scan.add_argument("--samples", default=None, help="comma-separated rational samples")
    scan.add_argument("--t-grid", default=None, help="comma-separated grid of t values")
    scan.add_argument("--svg-out", default=None, help="write the trajectory figure here")
    return parser


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_output(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _fail(message: str) -> int:
    print(f"azcurve: error: {message}", file=sys.stderr)
    return EXIT_IO


def _expect_kind(doc: Document, kind: str) -> None:
    if doc.kind != kind:
        raise DocumentError(f"kind: expected {kind!r} for this subcommand, found {doc.kind!r}")


def _parse_rational_list(text: str, what: str) -> list[Fraction]:
    out = []
    for i, chunk in enumerate(text.split(",")):
        chunk = chunk.strip()
        if not chunk:
            continue
        out.append(parse_rational(chunk, f"{what}[{i}]"))
    if not out:
        raise DocumentError(f"{what}: empty list")
    return out


def _envelope(command: str, ok: bool, report: dict) -> dict:
    return {"schema_version": 1, "command": command, "ok": ok, "report": report}


def _run_d0(args, doc: Document) -> tuple[int, dict]:
    _expect_kind(doc, "d0")
    point = doc.model
    name = f"d0 {args.subcommand}"
    vrep = d0_validate(point)
    if not vrep.ok:
        return EXIT_INVALID, _envelope(name, False, {"validation": vrep.to_json()})
    if args.subcommand == "support":
        return EXIT_OK, _envelope(name, True, {"support": d0_support(point).to_json()})
    if args.subcommand == "classify":
        rep = d0_classify(point, seed=args.seed)
        return EXIT_OK, _envelope(
            name, True, {"flags": rep.to_json(), "support": d0_support(point).to_json()}
        )
    other = doc.extra.get("other")
    if other is None:
        raise DocumentError("matrices_b: required by 'd0 iso'")
    vrep_b = d0_validate(other)
    if not vrep_b.ok:
        return EXIT_INVALID, _envelope(name, False, {"validation_b": vrep_b.to_json()})
    rep = d0_iso(point, other, seed=args.seed)
    return EXIT_OK, _envelope(name, True, rep.to_json())


def _run_morphism(args, doc: Document) -> tuple[int, dict]:
    _expect_kind(doc, "morphism")
    phi = doc.model
    name = f"morphism {args.subcommand}"
    vrep = morphism_validate(phi)
    if args.subcommand == "validate":
        code = EXIT_OK if vrep.ok else EXIT_INVALID
        return code, _envelope(name, vrep.ok, {"validation": vrep.to_json()})
    if not vrep.ok:
        return EXIT_INVALID, _envelope(name, False, {"validation": vrep.to_json()})
    if args.subcommand == "analyze":
        report: dict = {"validation": vrep.to_json()}
        model = branch_model(phi)
        report["branches"] = model.to_json()
        try:
            ct = comb_type(phi)
            slope, constant = hilbert_poly(phi)
            report["type"] = ct.to_json()
            report["hilbert"] = {
                "slope": str(slope),
                "constant": str(constant),
                "pretty": hilbert_pretty(slope, constant),
            }
        except MorphismError as exc:
            report["type_error"] = str(exc)
        report["surrogate"] = [rep.to_json() for rep in surrogate_summary(phi, seed=args.seed)]
        report["genus"] = arithmetic_genus(phi.curve)
        report["euler_characteristic"] = euler_char(phi.curve, phi.r, phi.deg_e)
        return EXIT_OK, _envelope(name, True, report)
    # bounds
    try:
        rep = support_bounds_check(phi, m_max=args.mmax, m0=args.m0)
    except (TangentialIntersection, BoundsError) as exc:
        return EXIT_INVALID, _envelope(name, False, {"error": str(exc)})
    return EXIT_OK if rep.ok else EXIT_INVALID, _envelope(name, rep.ok, rep.to_json())


def _run_presentation(args, doc: Document) -> tuple[int, dict]:
    _expect_kind(doc, "presentation")
    rep = check_atlas_conditions(doc.model)
    name = "presentation check"
    code = EXIT_OK if rep.ok else EXIT_INVALID
    return code, _envelope(name, rep.ok, rep.to_json())


def _run_spectral(args, doc: Document) -> tuple[int, dict]:
    _expect_kind(doc, "morphism")
    phi = doc.model
    label = args.component or phi.curve.components[0].label
    mats = phi.component_matrices(label)
    if not 1 <= args.coordinate <= len(mats):
        raise DocumentError(f"--coordinate: expected 1..{len(mats)}")
    curve = spectral_curve(mats[args.coordinate - 1])
    return EXIT_OK, _envelope("spectral", True, curve.to_json())


def _run_family(args, doc: Document) -> tuple[int, dict]:
    _expect_kind(doc, "family")
    family = doc.model
    samples = doc.extra.get("samples")
    if args.samples:
        samples = _parse_rational_list(args.samples, "--samples")
    if not samples:
        raise DocumentError("samples: required (document field or --samples)")
    t_grid = doc.extra.get("t_grid", [Fraction(0)])
    if args.t_grid:
        t_grid = _parse_rational_list(args.t_grid, "--t-grid")
    report = family_scan(family, samples, t_grid)
    if args.svg_out:
        from .figures import emit_svg_scan

        emit_svg_scan(report, args.svg_out)
    return EXIT_OK, _envelope("family scan", True, report.to_json())


def run_command(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        text = _read_input(args.input)
    except OSError as exc:
        return _fail(f"cannot read input: {exc}")
    try:
        doc = parse_document(text)
        if args.command == "d0":
            code, report = _run_d0(args, doc)
        elif args.command == "morphism":
            code, report = _run_morphism(args, doc)
        elif args.command == "presentation":
            code, report = _run_presentation(args, doc)
        elif args.command == "spectral":
            code, report = _run_spectral(args, doc)
        else:
            code, report = _run_family(args, doc)
    except DocumentError as exc:
        return _fail(str(exc))
    except (DZeroError, FiberError, MorphismError, ExactError) as exc:
        return _fail(str(exc))
    try:
        _write_output(args.output, emit_report(report))
    except OSError as exc:
        return _fail(f"cannot write output: {exc}")
    return code


def main(argv: Optional[list[str]] = None) -> int:
    return run_command(argv)


if __name__ == "__main__":
    raise SystemExit(main())
