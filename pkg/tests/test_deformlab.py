import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import polys
from milnorlab.catalog import example41, example43, rotation_region_radius
from milnorlab.deformlab import (
    TO_INFINITY,
    TO_ISOLATED,
    TO_W,
    DeformationFamily,
    TSchedule,
    check_stability,
    chordal,
    classify_limits,
    match_copies,
    perturb,
    restricted_family,
    totally_simple_perturbation,
    verify_lower_bound,
)
from milnorlab.errors import AmbiguousMatching, DimensionMismatch, NotTotallySimple
from milnorlab.foliation import CompleteIntersection, VectorField, singular_ideal
from milnorlab.solver import SolvedPoint, solve_points

ORIGIN = CompleteIntersection.parse(2, ["z1", "z2"])


def V(*texts):
    return VectorField.parse(len(texts), list(texts))


def split_family():
    # zeros at (+-sqrt t, 0), both tending to the origin
    return DeformationFamily(V("z1^2", "z2"), V("1", "0"), "split", ORIGIN)


def escape_family():
    # zeros at 0 and at 1/t
    return DeformationFamily(V("z1", "z2"), V("z1^2", "0"), "escape", CompleteIntersection.parse(2, ["z1 - 1", "z2"]))


class TestPerturb:
    @given(polys(n=2, max_deg=2), polys(n=2, max_deg=2), polys(n=2, max_deg=2), polys(n=2, max_deg=2))
    def test_affine_in_t(self, a, b, c, d):
        base, direction = VectorField(2, (a, b)), VectorField(2, (c, d))
        s, t = Fraction(1, 3), Fraction(-2, 7)
        # X_{s+t} - X_s - X_t + X_0 vanishes for an affine family
        lhs = perturb(base, direction, s + t) - perturb(base, direction, s)
        rhs = perturb(base, direction, t) - base
        assert lhs == rhs

    def test_zero_t(self):
        assert perturb(V("z1", "z2"), V("1", "1"), 0) == V("z1", "z2")

    def test_dimension(self):
        with pytest.raises(DimensionMismatch):
            perturb(V("z1", "z2"), V("1", "1", "1"), 1)


class TestSchedule:
    def test_parse(self):
        s = TSchedule.parse("1/10, 1/100,1/1000")
        assert s.ts == (Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000))

    @pytest.mark.parametrize("text", ["1, 1/2", "1, 1, 1/2", "1/10, 1/5, 1/100", "1, 0, -1"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            TSchedule.parse(text)


class TestMatching:
    def test_chordal(self):
        assert chordal((0,), (0,)) == 0
        assert chordal((1e9,), (2e9,)) < 1e-8
        assert chordal((1e9,), (-1e9,)) > 1

    def test_conserves_multiplicity(self):
        prev = [SolvedPoint((0.0,), 2, 0.0), SolvedPoint((5.0,), 1, 0.0)]
        nxt = [SolvedPoint((0.1,), 1, 0.0), SolvedPoint((-0.1,), 1, 0.0), SolvedPoint((5.1,), 1, 0.0)]
        flow = match_copies(prev, nxt)
        assert flow == {(0, 0): 1, (0, 1): 1, (1, 2): 1}

    def test_mismatch_raises(self):
        with pytest.raises(AmbiguousMatching):
            match_copies([SolvedPoint((0.0,), 2, 0.0)], [SolvedPoint((0.0,), 1, 0.0)])

    def test_opt_in_tie_check(self):
        prev = [SolvedPoint((0.0,), 2, 0.0)]
        nxt = [SolvedPoint((1.0,), 1, 0.0), SolvedPoint((-1.0,), 1, 0.0)]
        match_copies(prev, nxt)
        with pytest.raises(AmbiguousMatching):
            match_copies(prev, nxt, ambiguity=1.5)


class TestClassify:
    def test_split_goes_to_W(self):
        rep = classify_limits(split_family())
        assert [tr.classification for tr in rep.trajectories] == [TO_W, TO_W]
        assert rep.mu_along_W == 2

    def test_escape_and_isolated(self):
        rep = classify_limits(escape_family())
        kinds = sorted(tr.classification for tr in rep.trajectories)
        assert kinds == [TO_INFINITY, TO_ISOLATED]
        assert rep.mu_along_W == 0

    def test_region_filter(self):
        W = CompleteIntersection.parse(2, ["z1 - 2", "z2"])
        for radius, mu in [(1.0, 0), (3.0, 2)]:
            fam = DeformationFamily(V("(z1 - 2)^2", "z2"), V("1", "0"), "shifted", W, radius)
            rep = classify_limits(fam)
            assert rep.count(TO_W) == 2 and rep.mu_along_W == mu

    def test_json_is_deterministic(self):
        a = classify_limits(split_family(), seed=5).to_json()
        b = classify_limits(split_family(), seed=5).to_json()
        assert a == b
        doc = json.loads(a)
        assert doc["mu_along_W"] == 2 and doc["norm"] == "max_abs_coefficient"
        assert doc["schedule"]["t"] == ["1/100", "1/1000", "1/10000"]

    def test_count(self):
        rep = classify_limits(escape_family())
        assert rep.count(TO_INFINITY) == 1 and rep.count(TO_W) == 0


class TestLowerBound:
    def test_cases(self):
        rep = classify_limits(split_family())
        assert verify_lower_bound(rep, 0) == (True, 2)
        assert verify_lower_bound(rep, 2) == (True, 0)
        assert verify_lower_bound(rep, 3) == (False, -1)
        with pytest.raises(ValueError):
            verify_lower_bound(rep, -1)


class TestStability:
    def test_stable(self):
        sched = TSchedule((Fraction(1, 100), Fraction(1, 1000), Fraction(1, 10000), Fraction(1, 100000)))
        rep = check_stability(split_family(), sched)
        assert rep.mu_along_W == 2

    def test_needs_four(self):
        with pytest.raises(ValueError):
            check_stability(split_family(), TSchedule())


class TestTotallySimple:
    def test_rotation_field_zeros_stay_outside_region(self):
        fam, _ = example43(kappa=1, special=True)
        ts = totally_simple_perturbation(fam.base, fam.W, [1])
        assert "away from zeros" in ts.description
        radius = rotation_region_radius(1)
        for t in (Fraction(1, 10), Fraction(1, 1000)):
            for p in solve_points(singular_ideal(ts.at(t))):
                assert abs(p.point[2]) > radius

    def test_simple_normal_block(self):
        X = V("z1", "z2", "0")
        fam = totally_simple_perturbation(X, CompleteIntersection.coordinate(3, (0, 1)), [2])
        assert "global" in fam.description
        assert solve_points(singular_ideal(fam.at(Fraction(1, 100)))) == []

    def test_line_family_refused(self):
        fam, _ = example41(2)
        with pytest.raises(NotTotallySimple):
            totally_simple_perturbation(fam.base, fam.W, [1])

    def test_bad_eps(self):
        with pytest.raises(ValueError):
            totally_simple_perturbation(V("z1", "z2", "0"), CompleteIntersection.coordinate(3, (0, 1)), [0])


def test_restricted_family_is_affine():
    fam, _ = example41(2, seed=3, perturbation="power")
    R = restricted_family(fam, 2)
    from milnorlab.foliation import chart_restrict

    t = Fraction(1, 1000)
    assert R.at(t) == chart_restrict(fam.at(t), 2)


@pytest.mark.parametrize("make", [split_family, escape_family, lambda: example41(3, beta=1, seed=2)[0]])
def test_multiplicity_is_conserved(make):
    from milnorlab.groebner import multiplicity_dim

    fam = make()
    rep = classify_limits(fam)
    carried = sum(tr.multiplicity for tr in rep.trajectories)
    for t, _ in rep.per_t:
        assert carried == multiplicity_dim(singular_ideal(fam.at(t)))
