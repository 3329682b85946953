"""Exact univariate arithmetic: polynomials and rational functions over Q.

Coefficients are `fractions.Fraction` throughout, so every operation is
exact.  A polynomial is a tuple of coefficients, lowest degree first, with
no trailing zeros (the zero polynomial is the empty tuple).  A rational
function is a reduced fraction num/den with a monic denominator.

The module also provides the closed-point bookkeeping used everywhere
else: a `Place` is a rational point of the affine line, the point at
infinity, or a monic irreducible polynomial standing for a conjugate
cluster of points.  Irreducibility is certified for degree <= 3 (squarefree
plus no rational roots); higher-degree factors are accepted as declared and
flagged `unverified`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rat = Fraction

_DIVISOR_LIMIT = 10**9


class ExactError(ValueError):
    """Raised when an exactness contract is violated (division by zero
    polynomial, valuation of zero, and similar)."""


def _strip(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Dense univariate polynomial over Q, lowest-degree coefficient first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction | int] = ()):
        self.coeffs: tuple[Fraction, ...] = _strip([Fraction(c) for c in coeffs])

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return Poly(())

    @staticmethod
    def const(c) -> "Poly":
        return Poly((Fraction(c),))

    @staticmethod
    def x() -> "Poly":
        return Poly((0, 1))

    @staticmethod
    def from_roots(roots: Iterable[Fraction]) -> "Poly":
        p = Poly.const(1)
        for r in roots:
            p = p * Poly((-Fraction(r), Fraction(1)))
        return p

    # -- basics --------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ExactError("leading coefficient of zero polynomial")
        return self.coeffs[-1]

    def constant_term(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Poly({self.pretty()})"

    # -- ring operations ------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] += ca * cb
        return Poly(out)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        return Poly([c * a for a in self.coeffs])

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ExactError("negative polynomial power")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ExactError("division by zero polynomial")
        rem = list(self.coeffs)
        dn, dd = len(rem) - 1, other.degree
        lead = other.leading()
        if dn < dd:
            return Poly.zero(), self
        quo = [Fraction(0)] * (dn - dd + 1)
        for i in range(dn, dd - 1, -1):
            c = rem[i]
            if c:
                q = c / lead
                quo[i - dd] = q
                for j, oc in enumerate(other.coeffs):
                    rem[i - dd + j] -= q * oc
        return Poly(quo), Poly(rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ExactError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.leading())

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_in(self, x, one):
        """Horner evaluation in any ring; `one` is the ring identity."""
        acc = one - one
        for c in reversed(self.coeffs):
            acc = acc * x + one * c
        return acc

    def shift(self, c: Fraction) -> "Poly":
        """Substitute t -> t + c."""
        out = Poly.zero()
        xc = Poly((Fraction(c), Fraction(1)))
        for coeff in reversed(self.coeffs):
            out = out * xc + Poly.const(coeff)
        return out

    def reverse(self, degree: Optional[int] = None) -> "Poly":
        d = self.degree if degree is None else degree
        out = [Fraction(0)] * (d + 1)
        for i, c in enumerate(self.coeffs):
            out[d - i] = c
        return Poly(out)

    # -- gcd and factor utilities ----------------------------------------

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd via the subresultant remainder sequence over the
        integers (no rational blowup in the Euclid loop)."""
        if self.is_zero():
            return other.monic()
        if other.is_zero():
            return self.monic()
        a = _int_coeffs(self)
        b = _int_coeffs(other)
        g = _int_poly_gcd(a, b)
        return Poly([Fraction(c) for c in g]).monic()

    def lcm(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly.zero()
        return (self * other).exact_div(self.gcd(other)).monic()

    def squarefree_part(self) -> "Poly":
        if self.degree <= 0:
            return Poly.const(1)
        return self.exact_div(self.gcd(self.derivative())).monic()

    def squarefree_decomposition(self) -> list[tuple["Poly", int]]:
        """Yun's algorithm: return [(g_i, i)] with self = lc * prod g_i^i,
        the g_i squarefree, pairwise coprime, monic, possibly trivial."""
        if self.degree <= 0:
            return []
        f = self.monic()
        df = f.derivative()
        a = f.gcd(df)
        w = f.exact_div(a)
        y = df.exact_div(a)
        out = []
        i = 1
        while w.degree > 0:
            z = y - w.derivative()
            g = w.gcd(z)
            if g.degree > 0:
                out.append((g.monic(), i))
            w = w.exact_div(g)
            y = z.exact_div(g)
            i += 1
        return out

    def integer_cleared(self) -> tuple["Poly", Fraction]:
        """Return (P, c) with P = c * self, P having coprime integer
        coefficients and positive leading coefficient."""
        if self.is_zero():
            return self, Fraction(1)
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, abs(v))
        if ints[-1] < 0:
            g = -g
        return Poly([Fraction(v, g) for v in ints]), Fraction(den, g)

    def rational_roots(self) -> tuple[list[tuple[Fraction, int]], "Poly", bool]:
        """All rational roots with multiplicities, the rootless monic
        cofactor, and a completeness flag (False when coefficient size
        forced the divisor search to be truncated)."""
        if self.is_zero():
            raise ExactError("rational roots of zero polynomial")
        roots: list[tuple[Fraction, int]] = []
        residual = Poly.const(1)
        complete = True
        for g, mult in self.monic().squarefree_decomposition():
            layer_roots, layer_res, ok = _squarefree_rational_roots(g)
            complete = complete and ok
            roots.extend((r, mult) for r in layer_roots)
            residual = residual * layer_res**mult
        roots.sort(key=lambda rm: (rm[0], rm[1]))
        return roots, residual.monic(), complete

    # -- display ----------------------------------------------------------

    def pretty(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                term = _frac_str(abs(c))
            else:
                v = var if i == 1 else f"{var}^{i}"
                term = v if abs(c) == 1 else f"{_frac_str(abs(c))}*{v}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# integer-coefficient helpers for the subresultant gcd


def _int_coeffs(p: Poly) -> list[int]:
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in p.coeffs]


def _int_primitive(a: list[int]) -> list[int]:
    g = 0
    for c in a:
        g = math.gcd(g, abs(c))
    if g == 0:
        return []
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Canonical pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b."""
    db = len(b) - 1
    lb = b[-1]
    rem = list(a)
    scale_left = len(a) - len(b) + 1
    while len(rem) - 1 >= db and rem:
        c = rem[-1]
        shift = len(rem) - 1 - db
        rem = [lb * x for x in rem]
        for j, bc in enumerate(b):
            rem[shift + j] -= c * bc
        rem.pop()
        while rem and rem[-1] == 0:
            rem.pop()
        scale_left -= 1
    if scale_left > 0 and rem:
        factor = lb**scale_left
        rem = [factor * x for x in rem]
    return rem


def _int_poly_gcd(a: list[int], b: list[int]) -> list[int]:
    a = _int_primitive(a)
    b = _int_primitive(b)
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    g, h = 1, 1
    while True:
        d = len(a) - len(b)
        r = _int_prem(a, b)
        if not r:
            return _int_primitive(b)
        if len(r) == 1:
            return [1]
        divisor = g * h**d
        a, b = b, [c // divisor for c in r]
        g = a[-1]
        if d == 1:
            h = g
        elif d > 1:
            h = g**d // h ** (d - 1)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = set()
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.add(i)
            out.add(n // i)
        i += 1
    return sorted(out)


def _squarefree_rational_roots(g: Poly) -> tuple[list[Fraction], Poly, bool]:
    """Rational roots of a squarefree monic polynomial, its rootless
    cofactor, and completeness of the search."""
    roots: list[Fraction] = []
    rem = g.monic()
    # peel root 0 first
    if rem.degree >= 1 and rem.constant_term() == 0:
        roots.append(Fraction(0))
        rem = rem.exact_div(Poly.x())
    if rem.degree >= 1:
        p_int, _ = rem.integer_cleared()
        a0 = int(p_int.constant_term())
        an = int(p_int.leading())
        f_at_1 = int(sum(p_int.coeffs))
        f_at_m1 = int(p_int.eval(Fraction(-1)))
        complete = abs(a0) <= _DIVISOR_LIMIT and abs(an) <= _DIVISOR_LIMIT
        if complete:
            for num in _divisors(a0):
                for den in _divisors(an):
                    for cand in (Fraction(num, den), Fraction(-num, den)):
                        # classical filters: (q*m - p) divides f(m) exactly
                        p, q = cand.numerator, cand.denominator
                        if f_at_1 != 0 and (q - p) != 0 and f_at_1 % (q - p) != 0:
                            continue
                        if f_at_m1 != 0 and (-q - p) != 0 and f_at_m1 % (q + p) != 0:
                            continue
                        if rem.degree >= 1 and rem.eval(cand) == 0:
                            roots.append(cand)
                            rem = rem.exact_div(Poly((-cand, Fraction(1))))
        else:
            # fall back to float root hints verified exactly
            for cand in _numeric_root_hints(p_int):
                if rem.degree >= 1 and rem.eval(cand) == 0:
                    roots.append(cand)
                    rem = rem.exact_div(Poly((-cand, Fraction(1))))
        return sorted(roots), rem.monic(), complete
    return sorted(roots), Poly.const(1), True


def _numeric_root_hints(p: Poly) -> list[Fraction]:
    try:
        import numpy
    except ImportError:  # pragma: no cover
        return []
    cs = [float(c) for c in reversed(p.coeffs)]
    try:
        rr = numpy.roots(cs)
    except Exception:  # pragma: no cover
        return []
    hints = []
    for z in rr:
        if abs(z.imag) < 1e-6:
            hints.append(Fraction(z.real).limit_denominator(10**6))
    return hints


# ---------------------------------------------------------------------------
# rational functions


class RatFunc:
    """Reduced rational function num/den over Q with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = None, _reduced: bool = False):
        if den is None:
            den = Poly.const(1)
        if den.is_zero():
            raise ExactError("division by zero polynomial")
        if not _reduced:
            if num.is_zero():
                num, den = Poly.zero(), Poly.const(1)
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num, den = num.exact_div(g), den.exact_div(g)
                lc = den.leading()
                if lc != 1:
                    num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(c) -> "RatFunc":
        return RatFunc(Poly.const(c))

    @staticmethod
    def var() -> "RatFunc":
        return RatFunc(Poly.x())

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc(p)

    # -- basics ------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def as_poly(self) -> Poly:
        if not self.is_poly():
            raise ExactError("rational function is not polynomial")
        return self.num

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def as_constant(self) -> Fraction:
        if not self.is_constant():
            raise ExactError("rational function is not constant")
        return self.num.constant_term()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(other)
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"RatFunc({self.pretty()})"

    # -- field operations ----------------------------------------------------

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ExactError("division by zero polynomial")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (RatFunc.const(1) / self) ** (-n)
        return RatFunc(self.num**n, self.den**n)

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ExactError("inverse of zero")
        return RatFunc(self.den, self.num)

    def derivative(self) -> "RatFunc":
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    # -- evaluation -----------------------------------------------------------

    def eval(self, x: Fraction) -> Fraction:
        d = self.den.eval(x)
        if d == 0:
            raise ExactError(f"pole at {x}")
        return self.num.eval(x) / d

    def eval_at_infinity(self) -> Fraction:
        v = self.den.degree - self.num.degree
        if v < 0:
            raise ExactError("pole at infinity")
        if v > 0 or self.is_zero():
            return Fraction(0)
        return self.num.leading() / self.den.leading()

    def pretty(self, var: str = "t") -> str:
        ns = self.num.pretty(var)
        if self.den.degree == 0:
            return ns
        return f"({ns})/({self.den.pretty(var)})"


def ratfunc_normalize(num: Poly, den: Poly) -> RatFunc:
    """Reduced form with monic denominator, value-equal to num/den."""
    return RatFunc(num, den)


# ---------------------------------------------------------------------------
# places


RATIONAL = "finite-rational"
INFINITY = "infinity"
IRREDUCIBLE = "irreducible"


@dataclass(frozen=True)
class Place:
    """A closed point of the projective t-line over Q."""

    kind: str
    coordinate: Optional[Fraction] = None
    poly: Optional[Poly] = None
    unverified: bool = field(default=False, compare=False)

    @staticmethod
    def rational(c) -> "Place":
        return Place(RATIONAL, coordinate=Fraction(c))

    @staticmethod
    def infinity() -> "Place":
        return Place(INFINITY)

    @staticmethod
    def irreducible(p: Poly) -> "Place":
        p = p.monic()
        if p.degree < 2:
            raise ExactError("irreducible place needs degree >= 2")
        if p.squarefree_part() != p:
            raise ExactError("irreducible place polynomial is not squarefree")
        roots, _, _ = p.rational_roots()
        if roots:
            raise ExactError("irreducible place polynomial has a rational root")
        # degree 2 and 3 are certified by having no rational root
        return Place(IRREDUCIBLE, poly=p, unverified=p.degree >= 4)

    @property
    def degree(self) -> int:
        if self.kind == IRREDUCIBLE:
            return self.poly.degree
        return 1

    def uniformizer(self) -> Poly:
        if self.kind == RATIONAL:
            return Poly((-self.coordinate, Fraction(1)))
        if self.kind == IRREDUCIBLE:
            return self.poly
        raise ExactError("infinity has no polynomial uniformizer")

    def sort_key(self):
        if self.kind == RATIONAL:
            return (0, self.coordinate, ())
        if self.kind == IRREDUCIBLE:
            return (1, Fraction(0), self.poly.coeffs)
        return (2, Fraction(0), ())

    def pretty(self, var: str = "t") -> str:
        if self.kind == RATIONAL:
            return f"{var}={_frac_str(self.coordinate)}"
        if self.kind == INFINITY:
            return f"{var}=infinity"
        return f"{var}-factor {self.poly.pretty(var)}"


def poly_valuation(p: Poly, place: Place) -> int:
    """Order of vanishing of a nonzero polynomial at a place."""
    if p.is_zero():
        raise ExactError("valuation of zero")
    if place.kind == INFINITY:
        return -p.degree
    u = place.uniformizer()
    v = 0
    while True:
        q, r = p.divmod(u)
        if not r.is_zero():
            return v
        p, v = q, v + 1


def valuation_at(f: RatFunc, place: Place) -> int:
    """Order of vanishing (negative for a pole) of f at the place."""
    if f.is_zero():
        raise ExactError("valuation of zero")
    return poly_valuation(f.num, place) - poly_valuation(f.den, place)


def ratfunc_regular_at(f: RatFunc, place: Place) -> bool:
    return f.is_zero() or valuation_at(f, place) >= 0


def places_of_poly(p: Poly) -> list[tuple[Place, int]]:
    """Zero locus of a nonzero polynomial as places with multiplicities.

    Rational roots become rational places; each squarefree residual factor
    becomes a single irreducible-kind place (flagged unverified when its
    irreducibility is not certified).
    """
    if p.is_zero():
        raise ExactError("places of zero polynomial")
    out: list[tuple[Place, int]] = []
    roots, _, _ = p.rational_roots()
    for r, m in roots:
        out.append((Place.rational(r), m))
    for g, mult in p.squarefree_decomposition():
        _, residual, _ = g.rational_roots()
        if residual.degree >= 2:
            out.append((Place(IRREDUCIBLE, poly=residual.monic(),
                              unverified=residual.degree >= 4), mult))
    out.sort(key=lambda pm: pm[0].sort_key())
    return out


def rational_roots(p: Poly) -> tuple[list[tuple[Fraction, int]], Poly]:
    """Rational roots with multiplicities and the rootless residual."""
    roots, residual, _ = p.rational_roots()
    return roots, residual


# ---------------------------------------------------------------------------
# interpolation and power-series helpers (used by the function-field layer)


def poly_interpolate(points: Sequence[tuple[Fraction, Fraction]]) -> Poly:
    """Unique polynomial of degree < n through n points with distinct x
    (Newton's divided differences)."""
    xs = [x for x, _ in points]
    coeffs = [y for _, y in points]
    n = len(points)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (xs[i] - xs[i - level])
    # Horner assembly of the Newton form
    result = Poly.zero()
    for i in range(n - 1, -1, -1):
        result = result * Poly((-xs[i], Fraction(1))) + Poly.const(coeffs[i])
    return result


def series_inverse(a: Sequence[Fraction], n: int) -> list[Fraction]:
    """Multiplicative inverse of a power series mod x^n (a[0] != 0)."""
    if not a or a[0] == 0:
        raise ExactError("series not invertible")
    inv = [Fraction(0)] * n
    inv[0] = 1 / a[0]
    for k in range(1, n):
        s = Fraction(0)
        for j in range(1, min(k, len(a) - 1) + 1):
            s += a[j] * inv[k - j]
        inv[k] = -s / a[0]
    return inv


def series_mul(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, ca in enumerate(a[:n]):
        if ca:
            for j, cb in enumerate(b[: n - i]):
                if cb:
                    out[i + j] += ca * cb
    return out


def pade_approximant(series: Sequence[Fraction], num_deg: int, den_deg: int) -> Optional[tuple[Poly, Poly]]:
    """Rational reconstruction u/v of a power series with deg u <= num_deg,
    deg v <= den_deg, v(0) != 0, agreeing mod x^(num_deg+den_deg+1).

    Uses the extended Euclidean algorithm on (x^N, series).  Returns None
    when no admissible approximant exists.
    """
    n = num_deg + den_deg + 1
    m = Poly([Fraction(0)] * n + [Fraction(1)])
    f = Poly(list(series[:n]))
    r0, r1 = m, f
    s0, s1 = Poly.zero(), Poly.const(1)
    while not r1.is_zero() and r1.degree > num_deg:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if s1.is_zero() or s1.constant_term() == 0 or s1.degree > den_deg:
        return None
    u, v = r1, s1
    c = v.constant_term()
    return u.scale(1 / c), v.scale(1 / c)
