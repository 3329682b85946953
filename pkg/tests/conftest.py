import random
from fractions import Fraction

import pytest

from azcurve.curves import projective_line
from azcurve.linalg import FieldMatrix
from azcurve.morphisms import AzMorphism, BranchSpec, from_branches
from azcurve.polys import Poly, RatFunc


def mat_q(rows):
    return FieldMatrix([[Fraction(x) for x in row] for row in rows])


def mat_t(rows):
    from azcurve.exprs import parse_ratfunc

    return FieldMatrix([[parse_ratfunc(cell) for cell in row] for row in rows])


def morphism_t(entries, r=None, k=None, curve=None, deg_e=0):
    """Single-component morphism from entry strings (list of k matrices)."""
    curve = curve or projective_line()
    mats = tuple(mat_t(m) for m in entries)
    r = r or mats[0].rows
    k = k or len(mats)
    return AzMorphism(curve, r, k, {curve.components[0].label: mats}, deg_e)


def random_poly(rng: random.Random, max_deg: int) -> Poly:
    deg = rng.randint(0, max_deg)
    coeffs = [Fraction(rng.randint(-4, 4)) for _ in range(deg)]
    coeffs.append(Fraction(rng.choice([1, 2, 3, -1, -2])))
    return Poly(coeffs)


def random_parametrization(rng: random.Random, k: int, max_deg: int = 4):
    out = []
    for _ in range(k):
        num = random_poly(rng, max_deg)
        if rng.random() < 0.25:
            den = Poly([Fraction(rng.randint(-3, 3)), Fraction(1)])
            out.append(RatFunc(num, den))
        else:
            out.append(RatFunc(num))
    return tuple(out)


def build_branch_corpus(count: int = 100, seed: int = 20240801):
    """Shared corpus of branch specifications: rank <= 6, at most 4
    branches, parametrization degrees <= 4, both block styles."""
    rng = random.Random(seed)
    corpus = []
    p1 = projective_line()
    while len(corpus) < count:
        n_branches = rng.randint(1, 4)
        k = rng.choice([1, 1, 2])
        params = []
        seen = set()
        guard = 0
        while len(params) < n_branches and guard < 50:
            guard += 1
            p = random_parametrization(rng, k)
            if p not in seen:
                seen.add(p)
                params.append(p)
        if len(params) < n_branches:
            continue
        max_len = max(1, 6 // n_branches)
        lengths = [rng.randint(1, max_len) for _ in range(n_branches)]
        specs = [
            BranchSpec("c0", p, l, rng.choice(["split", "jordan"]))
            for p, l in zip(params, lengths)
        ]
        r = sum(lengths)
        phi = from_branches(p1, specs, r, k)
        corpus.append((specs, phi))
    return corpus


@pytest.fixture(scope="session")
def branch_corpus():
    return build_branch_corpus()
