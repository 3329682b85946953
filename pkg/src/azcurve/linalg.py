"""Dense exact linear algebra over a generic field.

Fields are passed around as small adapter objects (`QQ`, `FunctionField`,
`QuotientField`); matrix entries are whatever element type the adapter
works with (Fraction, RatFunc, or residue classes), and all arithmetic goes
through Python operators, so everything stays exact.

Besides the generic kernel/rref/solve kit this module holds the matrix
operations the rest of the package is built on: characteristic and minimal
polynomials, the unital algebra closure of a commuting family, the trace
form radical of a finite-dimensional commutative algebra, and lattice
reduction over the local ring at a place (valuation pivoting), which backs
the regularity checks.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional, Sequence

from .polys import (
    ExactError,
    INFINITY,
    IRREDUCIBLE,
    RATIONAL,
    Place,
    Poly,
    RatFunc,
    poly_interpolate,
    ratfunc_regular_at,
    valuation_at,
)


# ---------------------------------------------------------------------------
# field adapters


class QQAdapter:
    """The rationals."""

    name = "QQ"

    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, n: int):
        return Fraction(n)

    def is_zero(self, x) -> bool:
        return x == 0


class FunctionField:
    """Q(t) (or any other variable name) with RatFunc elements."""

    def __init__(self, var: str = "t"):
        self.var = var
        self.name = f"QQ({var})"
        self.zero = RatFunc.const(0)
        self.one = RatFunc.const(1)

    def from_int(self, n: int):
        return RatFunc.const(n)

    def is_zero(self, x) -> bool:
        return x.is_zero()


class QElem:
    """Element of Q[u]/(p): a polynomial reduced mod the modulus."""

    __slots__ = ("rep", "field")

    def __init__(self, rep: Poly, field: "QuotientField"):
        self.rep = rep % field.modulus
        self.field = field

    def _lift(self, other) -> "QElem":
        if isinstance(other, QElem):
            return other
        if isinstance(other, (int, Fraction)):
            return QElem(Poly.const(other), self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        return QElem(self.rep + other.rep, self.field) if other is not NotImplemented else NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return QElem(-self.rep, self.field)

    def __sub__(self, other):
        other = self._lift(other)
        return QElem(self.rep - other.rep, self.field) if other is not NotImplemented else NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        return QElem(self.rep * other.rep, self.field) if other is not NotImplemented else NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        return self * other.inverse()

    def inverse(self) -> "QElem":
        g, s = _poly_half_xgcd(self.rep, self.field.modulus)
        if g.degree != 0:
            raise ExactError("non-invertible residue: modulus is reducible")
        return QElem(s.scale(1 / g.constant_term()), self.field)

    def __eq__(self, other):
        other = self._lift(other)
        return other is not NotImplemented and self.rep == other.rep

    def __hash__(self):
        return hash((self.rep, id(self.field)))

    def __repr__(self):
        return f"QElem({self.rep.pretty('u')})"


def _poly_half_xgcd(a: Poly, m: Poly) -> tuple[Poly, Poly]:
    """Return (g, s) with g = gcd(a, m) and s*a = g mod m."""
    r0, r1 = m, a % m
    s0, s1 = Poly.zero(), Poly.const(1)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    return r0, s0 % m


class QuotientField:
    """Q[u]/(p) for a monic squarefree p declared irreducible."""

    def __init__(self, modulus: Poly):
        self.modulus = modulus.monic()
        self.name = f"QQ[u]/({modulus.pretty('u')})"
        self.zero = QElem(Poly.zero(), self)
        self.one = QElem(Poly.const(1), self)

    def from_int(self, n: int):
        return QElem(Poly.const(n), self)

    def from_poly(self, p: Poly):
        return QElem(p, self)

    def is_zero(self, x) -> bool:
        return x.rep.is_zero()


QQ = QQAdapter()


# ---------------------------------------------------------------------------
# matrices


class FieldMatrix:
    """Row-major dense matrix with entries in a fixed field."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise ExactError("ragged matrix rows")

    @staticmethod
    def identity(n: int, field) -> "FieldMatrix":
        return FieldMatrix(
            [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def zeros(rows: int, cols: int, field) -> "FieldMatrix":
        return FieldMatrix([[field.zero] * cols for _ in range(rows)])

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        return (
            isinstance(other, FieldMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and all(
                self.entries[i][j] == other.entries[i][j]
                for i in range(self.rows)
                for j in range(self.cols)
            )
        )

    def __hash__(self):
        return hash(tuple(tuple(row) for row in self.entries))

    def __repr__(self):
        return f"FieldMatrix({self.entries!r})"

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        return FieldMatrix(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        return FieldMatrix(
            [
                [self.entries[i][j] - other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __mul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.cols != other.rows:
            raise ExactError("matrix dimension mismatch")
        out = []
        for i in range(self.rows):
            row = []
            arow = self.entries[i]
            for j in range(other.cols):
                acc = None
                for k in range(self.cols):
                    term = arow[k] * other.entries[k][j]
                    acc = term if acc is None else acc + term
                row.append(acc)
            out.append(row)
        return FieldMatrix(out)

    def scale(self, c) -> "FieldMatrix":
        return FieldMatrix([[c * e for e in row] for row in self.entries])

    def map(self, fn: Callable) -> "FieldMatrix":
        return FieldMatrix([[fn(e) for e in row] for row in self.entries])

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def trace(self):
        acc = self.entries[0][0]
        for i in range(1, self.rows):
            acc = acc + self.entries[i][i]
        return acc

    def is_zero(self, field) -> bool:
        return all(field.is_zero(e) for row in self.entries for e in row)

    def vec(self) -> list:
        return [e for row in self.entries for e in row]

    @staticmethod
    def from_vec(v: Sequence, rows: int, cols: int) -> "FieldMatrix":
        return FieldMatrix([list(v[i * cols : (i + 1) * cols]) for i in range(rows)])

    def power(self, n: int, field) -> "FieldMatrix":
        result = FieldMatrix.identity(self.rows, field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def commutes_with(self, other: "FieldMatrix", field) -> bool:
        return (self * other - other * self).is_zero(field)


# ---------------------------------------------------------------------------
# elimination


def rref(rows: list[list], field) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (in place on a copy) and pivot columns."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if not field.is_zero(m[i][c]):
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.one / m[r][c]
        m[r] = [inv * e for e in m[r]]
        for i in range(nrows):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m[:r], pivots


def rank(rows: list[list], field) -> int:
    return len(rref(rows, field)[0])


def kernel_basis(mat: FieldMatrix, field) -> list[list]:
    """Basis of the right kernel as coordinate vectors."""
    red, pivots = rref(mat.entries, field)
    free = [c for c in range(mat.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * mat.cols
        v[fc] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve_in_span(span_rows: list[list], target: list, field) -> Optional[list]:
    """Coefficients c with sum(c_i * span_i) = target, or None.

    The span rows are arbitrary vectors; a fresh elimination is run, so
    prefer `SpanSolver` when solving against the same span repeatedly.
    """
    return SpanSolver(span_rows, field).solve(target)


class SpanSolver:
    """Reusable membership/coordinate solver for a fixed list of vectors.

    Over a function field the elimination is delegated to a fraction-free
    polynomial backend (denominators cleared once per row, no gcd inside
    the loop); the generic path works for any field adapter.
    """

    def __new__(cls, span_rows, field):
        if cls is SpanSolver and isinstance(field, FunctionField):
            return object.__new__(_PolySpanSolver)
        return object.__new__(cls)

    def __init__(self, span_rows: list[list], field):
        self.field = field
        self.n = len(span_rows[0]) if span_rows else 0
        self.k = len(span_rows)
        # eliminate on [row | e_i] to track coordinates
        aug = [list(r) + [field.one if j == i else field.zero for j in range(self.k)]
               for i, r in enumerate(span_rows)]
        self.red, self.pivots = rref(aug, field) if aug else ([], [])
        self.pivots = [p for p in self.pivots if p < self.n]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, target: list) -> Optional[list]:
        field = self.field
        v = list(target) + [field.zero] * self.k
        for r, pc in enumerate(self.pivots):
            if not field.is_zero(v[pc]):
                f = v[pc]
                v = [a - f * b for a, b in zip(v, self.red[r])]
        if any(not field.is_zero(v[j]) for j in range(self.n)):
            return None
        return [-c for c in v[self.n :]]

    def contains(self, target: list) -> bool:
        return self.solve(target) is not None


def _clear_ratfunc_row(row: list[RatFunc]) -> tuple[list[Poly], Poly]:
    """Scale a RatFunc row to polynomials; returns (polys, scale) with
    polys = scale * row."""
    den = Poly.const(1)
    for e in row:
        if not e.is_zero():
            den = den.lcm(e.den)
    return [e.num * den.exact_div(e.den) if not e.is_zero() else Poly.zero() for e in row], den


class _PolySpanSolver(SpanSolver):
    """Fraction-free span solver over Q(t).

    Rows are cleared to polynomial vectors and brought to row echelon form
    by the two-term Bareiss recurrence, with an augmented identity tracking
    the combination.  Membership reduction of a candidate multiplies
    through pivots instead of dividing, so the hot loop is pure polynomial
    arithmetic; coordinates are normalized back to rational functions only
    on success.
    """

    def __init__(self, span_rows: list[list], field):
        self.field = field
        self.n = len(span_rows[0]) if span_rows else 0
        self.k = len(span_rows)
        rows: list[list[Poly]] = []
        self._zero = Poly.zero()
        for i, r in enumerate(span_rows):
            cleared, den = _clear_ratfunc_row(list(r))
            aug = [Poly.zero()] * self.k
            aug[i] = den
            rows.append(cleared + aug)
        self.red: list[list[Poly]] = []
        self.pivots: list[int] = []
        self._bareiss(rows)

    def _bareiss(self, rows: list[list[Poly]]) -> None:
        prev = Poly.const(1)
        r = 0
        ncols = self.n
        total_cols = self.n + self.k
        for c in range(ncols):
            pivot_row = None
            for i in range(r, len(rows)):
                if not rows[i][c].is_zero():
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            piv = rows[r][c]
            for i in range(r + 1, len(rows)):
                if rows[i][c].is_zero():
                    # scaling keeps the Bareiss divisions exact
                    rows[i] = [
                        (piv * rows[i][j]).exact_div(prev) for j in range(total_cols)
                    ]
                else:
                    fi = rows[i][c]
                    rows[i] = [
                        (piv * rows[i][j] - fi * rows[r][j]).exact_div(prev)
                        for j in range(total_cols)
                    ]
            prev = piv
            self.pivots.append(c)
            r += 1
            if r == len(rows):
                break
        self.red = rows[:r]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, target: list) -> Optional[list]:
        v, den = _clear_ratfunc_row(list(target))
        v = v + [Poly.zero()] * self.k
        scale = Poly.const(1)
        for row, pc in zip(self.red, self.pivots):
            piv = row[pc]
            if v[pc].is_zero():
                continue
            fv = v[pc]
            v = [piv * a - fv * b for a, b in zip(v, row)]
            scale = scale * piv
        if any(not v[j].is_zero() for j in range(self.n)):
            return None
        denom = den * scale
        return [RatFunc(-v[self.n + j], denom) for j in range(self.k)]

    def contains(self, target: list) -> bool:
        v, _ = _clear_ratfunc_row(list(target))
        for row, pc in zip(self.red, self.pivots):
            if v[pc].is_zero():
                continue
            piv = row[pc]
            fv = v[pc]
            v = [piv * a - fv * b for a, b in zip(v[: self.n], row[: self.n])]
        return all(x.is_zero() for x in v[: self.n])


# ---------------------------------------------------------------------------
# characteristic and minimal polynomials


def char_poly_leverrier(m: FieldMatrix, field) -> list:
    """Coefficients (low to high) of det(lambda*I - M), computed by the
    Faddeev-LeVerrier recursion; only exact divisions by integers occur."""
    n = m.rows
    coeffs = [field.zero] * (n + 1)
    coeffs[n] = field.one
    b = FieldMatrix.identity(n, field)
    for k in range(1, n + 1):
        c = m * b
        a = c.trace() * (field.one / field.from_int(k))
        coeffs[n - k] = -a
        b = FieldMatrix(
            [
                [c.entries[i][j] - (a if i == j else field.zero) for j in range(n)]
                for i in range(n)
            ]
        )
    return coeffs


def char_poly_q(m: FieldMatrix) -> Poly:
    """Characteristic polynomial of a rational matrix."""
    return Poly(char_poly_leverrier(m, QQ))


_CHAR_POLY_CACHE: dict = {}


def char_poly_ratfunc(m: FieldMatrix) -> list[RatFunc]:
    """Characteristic polynomial coefficients of a matrix over Q(t).

    Denominators are cleared first and the polynomial-matrix computation is
    reduced to rational evaluations and interpolation, avoiding elimination
    over the function field entirely.  Results are memoized by entry value.
    """
    key = tuple(tuple(row) for row in m.entries)
    cached = _CHAR_POLY_CACHE.get(key)
    if cached is not None:
        return list(cached)
    n = m.rows
    den = Poly.const(1)
    for row in m.entries:
        for e in row:
            den = den.lcm(e.den)
    # P = den * M has polynomial entries
    p_entries = [[(e.num * den.exact_div(e.den)) for e in row] for row in m.entries]
    max_deg = max((p.degree for row in p_entries for p in row if not p.is_zero()), default=0)
    npts = n * max(max_deg, 0) + 1
    samples = []
    x = 0
    while len(samples) < npts:
        samples.append(Fraction(x))
        x = -x if x > 0 else -x + 1
    per_coeff_points: list[list[tuple[Fraction, Fraction]]] = [[] for _ in range(n + 1)]
    for s in samples:
        ms = FieldMatrix([[p.eval(s) for p in row] for row in p_entries])
        cs = char_poly_leverrier(ms, QQ)
        for i, c in enumerate(cs):
            per_coeff_points[i].append((s, c))
    # char_M coefficients: chi_P(q*lambda) * q^(-n)
    out = []
    for j in range(n + 1):
        aj = poly_interpolate(per_coeff_points[j])
        out.append(RatFunc(aj, den ** (n - j)))
    if len(_CHAR_POLY_CACHE) > 4096:
        _CHAR_POLY_CACHE.clear()
    _CHAR_POLY_CACHE[key] = tuple(out)
    return out


def char_poly(m: FieldMatrix, field) -> list:
    """det(lambda*I - M) as a coefficient list over the entry field."""
    if not m.is_square():
        raise ExactError("characteristic polynomial of a non-square matrix")
    if isinstance(field, FunctionField):
        return char_poly_ratfunc(m)
    return char_poly_leverrier(m, field)


def poly_at_matrix(coeffs: Sequence, m: FieldMatrix, field) -> FieldMatrix:
    """Evaluate a polynomial (coefficient list over the field) at a matrix."""
    n = m.rows
    acc = FieldMatrix.zeros(n, n, field)
    for c in reversed(list(coeffs)):
        acc = acc * m
        for i in range(n):
            acc.entries[i][i] = acc.entries[i][i] + c
    return acc


def min_poly(m: FieldMatrix, field) -> list:
    """Monic least-degree annihilating polynomial, as a coefficient list."""
    if not m.is_square():
        raise ExactError("minimal polynomial of a non-square matrix")
    n = m.rows
    powers = [FieldMatrix.identity(n, field).vec()]
    cur = FieldMatrix.identity(n, field)
    for _ in range(n):
        cur = cur * m
        target = cur.vec()
        solver = SpanSolver(powers, field)
        sol = solver.solve(target)
        if sol is not None:
            return [-c for c in sol] + [field.one]
        powers.append(target)
    raise ExactError("minimal polynomial search exceeded dimension")


# ---------------------------------------------------------------------------
# commutative algebra of matrices


def algebra_closure(generators: Sequence[FieldMatrix], field, check_commute: bool = True) -> list[FieldMatrix]:
    """Basis of the unital algebra generated by pairwise-commuting matrices.

    Multiplies the running basis by the generators until the span
    stabilizes; the dimension is capped by r^2.
    """
    if not generators:
        raise ExactError("empty generator list")
    r = generators[0].rows
    for g in generators:
        if not g.is_square() or g.rows != r:
            raise ExactError("generators must be square of equal size")
    if check_commute:
        for i in range(len(generators)):
            for j in range(i + 1, len(generators)):
                if not generators[i].commutes_with(generators[j], field):
                    raise ExactError("generators do not commute")
    basis = [FieldMatrix.identity(r, field)]
    vectors = [basis[0].vec()]
    solver = SpanSolver(vectors, field)
    frontier = list(basis)
    while frontier:
        new_frontier = []
        for b in frontier:
            for g in generators:
                cand = b * g
                v = cand.vec()
                if not solver.contains(v):
                    basis.append(cand)
                    vectors.append(v)
                    solver = SpanSolver(vectors, field)
                    new_frontier.append(cand)
                    if len(basis) > r * r:
                        raise ExactError("algebra closure exceeded dimension bound")
        frontier = new_frontier
    return basis


def structure_constants(basis: Sequence[FieldMatrix], field) -> list[list[list]]:
    """c[i][j] = coordinates of basis[i]*basis[j] in the basis.

    Raises when the span is not multiplicatively closed.
    """
    solver = SpanSolver([b.vec() for b in basis], field)
    n = len(basis)
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            sol = solver.solve((basis[i] * basis[j]).vec())
            if sol is None:
                raise ExactError("basis is not multiplicatively closed")
            row.append(sol)
        table.append(row)
    return table


def trace_radical(basis: Sequence[FieldMatrix], field) -> list[FieldMatrix]:
    """Basis of the kernel of the trace form (x, y) -> tr(L_{xy}) on the
    commutative algebra spanned by `basis`, where L_z is multiplication by
    z acting on the algebra itself.  In characteristic zero this kernel is
    exactly the set of nilpotents."""
    table = structure_constants(basis, field)
    n = len(basis)
    # trace of multiplication by basis[m]: sum_l table[m][l][l]
    mult_trace = [sum(table[m][l][l] for l in range(n)) for m in range(n)]
    gram = []
    for i in range(n):
        row = []
        for j in range(n):
            # b_i * b_j = sum_m c_m b_m; tr L_{b_i b_j} = sum_m c_m tr L_{b_m}
            acc = field.zero
            for mdx, c in enumerate(table[i][j]):
                acc = acc + c * mult_trace[mdx]
            row.append(acc)
        gram.append(row)
    radical = []
    for v in kernel_basis(FieldMatrix(gram), field):
        acc = None
        for c, b in zip(v, basis):
            term = b.scale(c)
            acc = term if acc is None else acc + term
        radical.append(acc)
    return radical


# ---------------------------------------------------------------------------
# lattices over the local ring at a place


def ratfunc_val(f: RatFunc, place: Place) -> Optional[int]:
    """Valuation at a place, None for the zero function."""
    if f.is_zero():
        return None
    return valuation_at(f, place)


def residue_field(place: Place):
    if place.kind == IRREDUCIBLE:
        return QuotientField(place.poly)
    return QQ


def ratfunc_residue(f: RatFunc, place: Place):
    """Image of a regular rational function in the residue field."""
    if f.is_zero():
        return residue_field(place).zero
    if place.kind == RATIONAL:
        return f.eval(place.coordinate)
    if place.kind == INFINITY:
        return f.eval_at_infinity()
    fld = QuotientField(place.poly)
    num = QElem(f.num % place.poly, fld)
    den = QElem(f.den % place.poly, fld)
    return num / den


def _shift_val(f: RatFunc, place: Place, k: int) -> RatFunc:
    """Multiply by uniformizer^k (for infinity the uniformizer is 1/t)."""
    if k == 0:
        return f
    if place.kind == INFINITY:
        t = RatFunc.var()
        return f * t ** (-k)
    pi = RatFunc(place.uniformizer())
    return f * pi**k


def dvr_reduce(vectors: list[list[RatFunc]], place: Place) -> list[list[RatFunc]]:
    """Basis of the O_x-module spanned by the vectors, via column reduction
    with valuation pivoting; the span over Q(t) is unchanged and the
    returned vectors are O_x-independent."""
    work = [list(v) for v in vectors if any(not e.is_zero() for e in v)]
    ncols = len(work[0]) if work else 0
    basis: list[list[RatFunc]] = []
    used_pivots: list[tuple[int, int]] = []  # (column, valuation)
    while work:
        # pick vector and column with the minimal valuation
        best = None
        for vi, v in enumerate(work):
            for c in range(ncols):
                if v[c].is_zero():
                    continue
                val = valuation_at(v[c], place)
                if best is None or val < best[0]:
                    best = (val, vi, c)
        if best is None:
            break
        val, vi, c = best
        piv = work.pop(vi)
        basis.append(piv)
        used_pivots.append((c, val))
        # eliminate: all other vectors have valuation >= val at column c,
        # so the elimination coefficient lies in O_x
        for v in work:
            if not v[c].is_zero():
                coef = v[c] / piv[c]
                for j in range(ncols):
                    v[j] = v[j] - coef * piv[j]
        work = [v for v in work if any(not e.is_zero() for e in v)]
    return basis


def dvr_lattice_regular(vectors: list[list[RatFunc]], place: Place) -> tuple[bool, Optional[int]]:
    """Whether every element of the spanned O_x-lattice is entry-wise
    regular at the place.  Returns (flag, worst valuation seen)."""
    basis = dvr_reduce(vectors, place)
    worst = None
    for v in basis:
        for e in v:
            if e.is_zero():
                continue
            val = valuation_at(e, place)
            if worst is None or val < worst:
                worst = val
    return (worst is None or worst >= 0), worst


def dvr_saturate(vectors: list[list[RatFunc]], place: Place) -> list[list[RatFunc]]:
    """Saturated O_x-lattice basis: scale reduced basis vectors into the
    regular range and repeatedly divide out residue-field dependencies."""
    basis = dvr_reduce(vectors, place)
    out = []
    for v in basis:
        vmin = min(valuation_at(e, place) for e in v if not e.is_zero())
        out.append([_shift_val(e, place, -vmin) for e in v])
    changed = True
    while changed:
        changed = False
        fld = residue_field(place)
        red_rows = [[ratfunc_residue(e, place) for e in v] for v in out]
        ker = _residue_kernel(red_rows, fld)
        if ker:
            c = ker[0]
            # combine with lifted rational coefficients, divide by uniformizer
            lift = _lift_residue_coeffs(c, place)
            comb = [RatFunc.const(0)] * len(out[0])
            for coef, v in zip(lift, out):
                comb = [a + coef * b for a, b in zip(comb, v)]
            if any(not e.is_zero() for e in comb):
                comb = [_shift_val(e, place, -min(valuation_at(e, place) for e in comb if not e.is_zero())) for e in comb]
            # replace the first vector with nonzero coefficient
            for i, coef in enumerate(lift):
                if not coef.is_zero():
                    out[i] = comb
                    break
            out = dvr_reduce(out, place)
            out2 = []
            for v in out:
                vmin = min(valuation_at(e, place) for e in v if not e.is_zero())
                out2.append([_shift_val(e, place, -vmin) for e in v])
            out = out2
            changed = True
    return out


def _residue_kernel(red_rows: list[list], fld) -> list[list]:
    """Left kernel of the residue matrix (dependencies among rows)."""
    if not red_rows:
        return []
    mat = FieldMatrix(red_rows).transpose()
    return kernel_basis(mat, fld)


def _lift_residue_coeffs(coeffs: list, place: Place) -> list[RatFunc]:
    out = []
    for c in coeffs:
        if isinstance(c, Fraction):
            out.append(RatFunc.const(c))
        else:  # QElem
            out.append(RatFunc(c.rep))
    return out


def dvr_lattice_intersect(a: list[list[RatFunc]], b: list[list[RatFunc]], place: Place) -> list[list[RatFunc]]:
    """O_x-basis of the intersection of two lattices given by bases."""
    if not a or not b:
        return []
    ncols = len(a[0])
    tf = FunctionField("t")
    # solve u*A = v*B over Q(t): kernel of stacked [A; -B] acting on (u, v)
    rows = [list(v) for v in a] + [[RatFunc.const(0) - e for e in v] for v in b]
    ker = kernel_basis(FieldMatrix(rows).transpose(), tf)
    # each kernel vector gives coefficients (u | v); the intersection vector
    # is u*A; the O_x-structure comes from an additional reduction step
    cand = []
    for k in ker:
        u = k[: len(a)]
        vec = [RatFunc.const(0)] * ncols
        for coef, av in zip(u, a):
            vec = [x + coef * y for x, y in zip(vec, av)]
        if any(not e.is_zero() for e in vec):
            cand.append(vec)
    if not cand:
        return []
    # the candidates span the Q(t)-intersection; the lattice intersection is
    # span ∩ A-lattice ∩ B-lattice: reduce candidates so membership in both
    # lattices holds with O_x coefficients
    result = []
    for vec in cand:
        scaled = _fit_into_lattices(vec, a, b, place)
        if scaled is not None:
            result.append(scaled)
    return dvr_reduce(result, place) if result else []


def _coords_in_lattice(vec: list[RatFunc], basis: list[list[RatFunc]]) -> Optional[list[RatFunc]]:
    tf = FunctionField("t")
    solver = SpanSolver([list(v) for v in basis], tf)
    return solver.solve(list(vec))


def _fit_into_lattices(vec, a, b, place) -> Optional[list[RatFunc]]:
    """Scale vec by a power of the uniformizer so its coordinates in both
    lattice bases are regular at the place, as deep as possible."""
    ca = _coords_in_lattice(vec, dvr_reduce(a, place))
    cb = _coords_in_lattice(vec, dvr_reduce(b, place))
    if ca is None or cb is None:
        return None
    worst = 0
    for c in ca + cb:
        if not c.is_zero():
            worst = min(worst, valuation_at(c, place))
    return [_shift_val(e, place, -worst) for e in vec]
