"""Polynomials in one indeterminate with coefficients in a generic field.

Used for characteristic polynomials in lambda whose coefficients live in
Q(t).  A polynomial is a plain coefficient list, lowest degree first; the
field is the same adapter object the matrix layer uses.  Everything is
exact; gcds are normalized monic at each step.
"""

from __future__ import annotations

from typing import Sequence

from .polys import ExactError


def fp_trim(coeffs: Sequence, field) -> list:
    out = list(coeffs)
    while out and field.is_zero(out[-1]):
        out.pop()
    return out


def fp_deg(coeffs: Sequence) -> int:
    return len(coeffs) - 1


def fp_is_zero(coeffs: Sequence) -> bool:
    return len(coeffs) == 0


def fp_add(a: Sequence, b: Sequence, field) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return fp_trim(out, field)


def fp_neg(a: Sequence) -> list:
    return [-c for c in a]


def fp_sub(a: Sequence, b: Sequence, field) -> list:
    return fp_add(a, fp_neg(b), field)


def fp_mul(a: Sequence, b: Sequence, field) -> list:
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if not field.is_zero(ca):
            for j, cb in enumerate(b):
                if not field.is_zero(cb):
                    out[i + j] = out[i + j] + ca * cb
    return fp_trim(out, field)


def fp_scale(a: Sequence, c, field) -> list:
    return fp_trim([c * x for x in a], field)


def fp_divmod(a: Sequence, b: Sequence, field) -> tuple[list, list]:
    if not b:
        raise ExactError("division by zero polynomial")
    rem = list(a)
    db, lead = len(b) - 1, b[-1]
    if len(rem) - 1 < db:
        return [], fp_trim(rem, field)
    quo = [field.zero] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if not field.is_zero(c):
            q = c / lead
            quo[i - db] = q
            for j, bc in enumerate(b):
                rem[i - db + j] = rem[i - db + j] - q * bc
    return fp_trim(quo, field), fp_trim(rem, field)


def fp_exact_div(a: Sequence, b: Sequence, field) -> list:
    q, r = fp_divmod(a, b, field)
    if r:
        raise ExactError("inexact polynomial division")
    return q


def fp_monic(a: Sequence, field) -> list:
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def fp_gcd(a: Sequence, b: Sequence, field) -> list:
    a, b = fp_trim(a, field), fp_trim(b, field)
    while b:
        _, r = fp_divmod(a, b, field)
        a, b = b, fp_monic(r, field)
    return fp_monic(a, field)


def fp_derivative(a: Sequence, field) -> list:
    out = []
    for i, c in enumerate(a):
        if i > 0:
            out.append(field.from_int(i) * c)
    return fp_trim(out, field)


def fp_eval(a: Sequence, x, field):
    acc = field.zero
    for c in reversed(list(a)):
        acc = acc * x + c
    return acc


def fp_yun(a: Sequence, field) -> list[tuple[list, int]]:
    """Squarefree decomposition [(g_i, i)] of a nonconstant polynomial."""
    a = fp_monic(a, field)
    if fp_deg(a) <= 0:
        return []
    da = fp_derivative(a, field)
    g = fp_gcd(a, da, field)
    w = fp_exact_div(a, g, field)
    y = fp_exact_div(da, g, field)
    out = []
    i = 1
    while fp_deg(w) > 0:
        z = fp_sub(y, fp_derivative(w, field), field)
        h = fp_gcd(w, z, field)
        if fp_deg(h) > 0:
            out.append((fp_monic(h, field), i))
        w = fp_exact_div(w, h, field)
        y = fp_exact_div(z, h, field)
        i += 1
    return out


def fp_resultant(a: Sequence, b: Sequence, field):
    """Resultant via the Euclidean recursion."""
    a, b = fp_trim(a, field), fp_trim(b, field)
    if not a or not b:
        return field.zero
    da, db = fp_deg(a), fp_deg(b)
    if db == 0:
        return b[0] ** da if da >= 0 else field.one
    _, r = fp_divmod(a, b, field)
    if not r:
        return field.zero
    dr = fp_deg(r)
    sign = field.one if (da * db) % 2 == 0 else -field.one
    return sign * b[-1] ** (da - dr) * fp_resultant(b, r, field)


def fp_discriminant(a: Sequence, field):
    """Discriminant up to the standard sign, normalized by the leading
    coefficient; zero exactly when the polynomial has a repeated root."""
    da = fp_deg(a)
    if da < 1:
        raise ExactError("discriminant needs degree >= 1")
    res = fp_resultant(a, fp_derivative(a, field), field)
    return res / a[-1]
