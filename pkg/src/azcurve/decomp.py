"""Joint primary decomposition of commuting matrix families.

Splits the ambient column space into joint invariant subspaces by iterated
primary decomposition: for each matrix, the characteristic polynomial of
its restriction is factored into rational roots plus squarefree residual
layers, and the space splits into kernels of the corresponding primary
factors.  The engine is field-generic; the factoring step is injected, so
the same code serves exact points (over Q) and generic fibers (over Q(t)).

Residual factors that resist certified factorization stay together as
"cluster" blocks; callers decide how to present them.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

from .linalg import FieldMatrix, SpanSolver, char_poly, kernel_basis, poly_at_matrix, rref
from .polys import ExactError


@dataclass
class Factorization:
    """Factor structure of one characteristic polynomial.

    roots: [(eigenvalue, multiplicity)] with eigenvalues in the field;
    residuals: [(monic coeff list, multiplicity, certified_irreducible)]
    for the rootless squarefree layers.
    """

    roots: list = dc_field(default_factory=list)
    residuals: list = dc_field(default_factory=list)

    @property
    def factor_count(self) -> int:
        return len(self.roots) + len(self.residuals)


FactorFn = Callable[[Sequence], Factorization]


def apply_matrix(m: FieldMatrix, v: list, field) -> list:
    out = []
    for i in range(m.rows):
        acc = field.zero
        row = m.entries[i]
        for j, c in enumerate(v):
            if not field.is_zero(c):
                acc = acc + row[j] * c
        out.append(acc)
    return out


def restrict_matrix(m: FieldMatrix, basis: list[list], field) -> FieldMatrix:
    """Matrix of the action of m on an invariant subspace, in the given
    basis (basis vectors are coordinate lists in the ambient space)."""
    solver = SpanSolver([list(v) for v in basis], field)
    cols = []
    for v in basis:
        sol = solver.solve(apply_matrix(m, v, field))
        if sol is None:
            raise ExactError("subspace is not invariant")
        cols.append(sol)
    return FieldMatrix([[cols[j][i] for j in range(len(basis))] for i in range(len(basis))])


def lift_vectors(basis: list[list], small_vectors: list[list], field) -> list[list]:
    """Send coordinate vectors on a subspace back to ambient coordinates."""
    out = []
    for sv in small_vectors:
        acc = [field.zero] * len(basis[0])
        for c, b in zip(sv, basis):
            if not field.is_zero(c):
                acc = [a + c * e for a, e in zip(acc, b)]
        out.append(acc)
    return out


def preimage_space(m: FieldMatrix, span_vectors: list[list], field) -> list[list]:
    """Basis of { v : m v in span(span_vectors) }."""
    n = m.cols
    red, pivots = rref([list(v) for v in span_vectors], field)
    # residue of each column of m modulo the span; v is in the preimage
    # exactly when the residues cancel, i.e. v lies in the kernel of R
    residue_cols = []
    for j in range(n):
        col = [m.entries[r][j] for r in range(m.rows)]
        for rrow, pc in zip(red, pivots):
            if not field.is_zero(col[pc]):
                f = col[pc]
                col = [a - f * b for a, b in zip(col, rrow)]
        residue_cols.append(col)
    residue_matrix = FieldMatrix(
        [[residue_cols[j][i] for j in range(n)] for i in range(m.rows)]
    )
    return kernel_basis(residue_matrix, field)


def kernel_of_power(m: FieldMatrix, power: int, field) -> list[list]:
    """Basis of ker(m^power) by iterated preimages (no explicit powers)."""
    current = kernel_basis(m, field)
    if power <= 1 or not current:
        return current
    for _ in range(power - 1):
        nxt = preimage_space(m, current, field)
        if len(nxt) == len(current):
            break
        current = nxt
    return current


def primary_split(a: FieldMatrix, fact: Factorization, field) -> list[tuple[list[list], object]]:
    """Split the full space of a square matrix along its factor structure.

    Returns [(subspace basis, tag)] where the tag is ("root", value) or
    ("residual", coeffs, certified).  Multiplicities are respected, so the
    subspace dimensions add up to the matrix size.
    """
    out = []
    n = a.rows
    for value, mult in fact.roots:
        shifted = FieldMatrix(
            [
                [a.entries[i][j] - (value if i == j else field.zero) for j in range(n)]
                for i in range(n)
            ]
        )
        ker = kernel_of_power(shifted, mult, field)
        out.append((ker, ("root", value)))
    for coeffs, mult, certified in fact.residuals:
        b = poly_at_matrix(coeffs, a, field)
        ker = kernel_of_power(b, mult, field)
        out.append((ker, ("residual", coeffs, certified)))
    total = sum(len(k) for k, _ in out)
    if total != n:
        raise ExactError("primary components do not fill the space")
    return out


def joint_primary_decomposition(
    mats: Sequence[FieldMatrix],
    field,
    factor_fn: FactorFn,
    extra_mats: Sequence[FieldMatrix] = (),
) -> list[list[list]]:
    """Stable list of joint invariant subspaces (bases of ambient vectors).

    Splits along each matrix in turn until no further refinement occurs;
    `extra_mats` (for example algebra products) participate in splitting
    but are not reported as coordinates.
    """
    if not mats:
        raise ExactError("no matrices to decompose")
    r = mats[0].rows
    spaces: list[list[list]] = [
        [[field.one if i == j else field.zero for j in range(r)] for i in range(r)]
    ]
    all_mats = list(mats) + list(extra_mats)
    changed = True
    while changed:
        changed = False
        for m in all_mats:
            new_spaces: list[list[list]] = []
            for basis in spaces:
                if len(basis) == 1:
                    new_spaces.append(basis)
                    continue
                a = restrict_matrix(m, basis, field)
                fact = factor_fn(char_poly(a, field))
                if fact.factor_count <= 1:
                    new_spaces.append(basis)
                    continue
                pieces = primary_split(a, fact, field)
                if len(pieces) == 1:
                    new_spaces.append(basis)
                    continue
                changed = True
                for small, _tag in pieces:
                    new_spaces.append(lift_vectors(basis, small, field))
            spaces = new_spaces
    return spaces
