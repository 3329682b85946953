from fractions import Fraction

import pytest

from azcurve.curves import projective_line
from azcurve.exprs import parse_expr
from azcurve.families import CONSTANT, NOT_CONSTANT, FamilyPresentation, family_scan
from azcurve.morphisms import MorphismError


def family(entry_strings, r, k, curve=None):
    curve = curve or projective_line()
    entries = {
        curve.components[0].label: [
            [[parse_expr(e, ("t", "s")) for e in row] for row in mat]
            for mat in entry_strings
        ]
    }
    return FamilyPresentation(curve, r, k, entries)


F = Fraction


class TestScan:
    def test_support_merge_family(self):
        fam = family([[["0", "1"], ["s^2", "0"]]], 2, 1)
        rep = family_scan(fam, [F(1), F(1, 2), F(0)])
        assert rep.verdict == CONSTANT
        types = [r.type.to_json() for r in rep.samples]
        assert types == [{"g": 0, "r": 2, "chi": 2, "beta": 0}] * 3
        # the support trajectory merges +s and -s into 0
        cells = rep.trajectories[0].per_sample
        assert [p.value for p in cells[0]] == [F(-1), F(1)]
        assert [p.value for p in cells[1]] == [F(-1, 2), F(1, 2)]
        assert [(p.value, p.length) for p in cells[2]] == [(F(0), 2)]

    def test_nilpotent_to_scalar_family(self):
        fam = family([[["t", "s"], ["0", "t"]]], 2, 1)
        rep = family_scan(fam, [F(1), F(0)])
        assert rep.verdict == CONSTANT
        assert [r.type.to_json() for r in rep.samples] == [
            {"g": 0, "r": 2, "chi": 2, "beta": 2}
        ] * 2
        # the surrogate algebra dimension drops 2 -> 1 while the type holds
        assert [r.surrogate_degrees["c0"] for r in rep.samples] == [2, 1]

    def test_non_flat_limit_family(self):
        fam = family([[["0", "s"], ["t", "0"]]], 2, 1)
        rep = family_scan(fam, [F(1), F(0)])
        assert rep.verdict == NOT_CONSTANT
        assert rep.jumps == ["0"]
        types = [r.type.to_json() for r in rep.samples]
        assert types[0] == {"g": 0, "r": 2, "chi": 2, "beta": 1}
        assert types[1] == {"g": 0, "r": 2, "chi": 2, "beta": 0}
        assert any("not flat" in note for note in rep.notes)

    def test_pole_in_s_skipped(self):
        fam = family([[["1/s", "0"], ["0", "t"]]], 2, 1)
        rep = family_scan(fam, [F(1), F(0)])
        assert rep.samples[0].skipped is False
        assert rep.samples[1].skipped is True
        assert "division by zero" in rep.samples[1].notice
        assert rep.verdict == CONSTANT  # single computed sample

    def test_empty_samples_rejected(self):
        fam = family([[["t"]]], 1, 1)
        with pytest.raises(MorphismError, match="empty sample list"):
            family_scan(fam, [])

    def test_hilbert_reported(self):
        fam = family([[["t", "0"], ["0", "t^2"]]], 2, 1)
        rep = family_scan(fam, [F(1)])
        assert rep.samples[0].hilbert == (5, 2)
