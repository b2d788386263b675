import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from milnorlab.errors import IllConditioned, NotZeroDimensional
from milnorlab.groebner import GREVLEX, LEX, Ideal, buchberger, multiplicity_dim
from milnorlab.polycore import Poly, parse_poly
from milnorlab.solver import (
    EigenData,
    charpoly,
    cluster_multiplicities,
    exact_matmul,
    multiplication_matrices,
    multiplication_matrix,
    solve_points,
    total_multiplicity,
)
from oracles import dense_system


def I(*texts, n=3):
    return Ideal(n, [parse_poly(t, n) for t in texts])


class TestMultiplicationMatrices:
    def test_square_root_of_two(self):
        G = buchberger(I("z1^2 - 2", n=1))
        M = multiplication_matrix(G, 0)
        assert charpoly(M.rows) == [-2, 0, 1]

    def test_single_point(self):
        M = multiplication_matrix(buchberger(I("z1 - 5", n=1)), 0)
        assert M.rows == ((5,),)

    def test_identified_variables(self):
        G = buchberger(I("z1^2", "z2 - z1", n=2))
        assert multiplication_matrix(G, 0).rows == multiplication_matrix(G, 1).rows

    def test_commute_exactly(self):
        G = buchberger(I("z1^2 + z2*z3 - 1", "z2^2 - z3 + 2", "z3^2 - z1*z2"))
        mats = [m.rows for m in multiplication_matrices(G)]
        for a in mats:
            for b in mats:
                assert exact_matmul(a, b) == exact_matmul(b, a)

    def test_eigenvalues_match_eliminant(self):
        # z1 satisfies z1^3 - z1 - 1 once z2 is eliminated through z2 = z1^2
        G = buchberger(I("z2 - z1^2", "z1*z2 - z1 - 1", n=2))
        M = multiplication_matrix(G, 0).to_numpy()
        ev = np.sort_complex(np.linalg.eigvals(M))
        ref = np.sort_complex(np.roots([1, 0, -1, -1]))
        assert np.allclose(ev, ref, atol=1e-8)

    def test_charpoly_matches_numpy(self):
        rng = random.Random(1)
        for n in (1, 3, 6):
            a = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
            cp = charpoly(a)
            ref = np.poly(np.array(a, dtype=float))[::-1]
            assert np.allclose([float(c) for c in cp], ref, atol=1e-8)


class TestSolve:
    def test_two_simple_points(self):
        pts = solve_points(I("z1^2 - 1", "z2 - 1", "z3"))
        coords = sorted((round(p.point[0].real), round(p.point[1].real), round(p.point[2].real)) for p in pts)
        assert coords == [(-1, 1, 0), (1, 1, 0)]
        assert [p.multiplicity for p in pts] == [1, 1]

    def test_double_point(self):
        pts = solve_points(I("z1^2", "z2", "z3"))
        assert len(pts) == 1 and pts[0].multiplicity == 2
        assert max(abs(z) for z in pts[0].point) < 1e-8

    def test_not_zero_dimensional(self):
        with pytest.raises(NotZeroDimensional):
            solve_points(I("z1*z2", "z3"))

    def test_empty_variety(self):
        assert solve_points(I("z1", "z1 - 1", "z2", "z3")) == []

    def test_lex_order_gives_same_points(self):
        a = solve_points(I("z1^2 + z2^2 - 5", "z1*z2 - 2", n=2), order=GREVLEX)
        b = solve_points(I("z1^2 + z2^2 - 5", "z1*z2 - 2", n=2), order=LEX)
        assert [p.multiplicity for p in a] == [p.multiplicity for p in b]
        for p, q in zip(a, b):
            assert np.allclose(p.point, q.point, atol=1e-9)

    def test_deterministic_in_seed(self):
        ideal = I("z1^3 - z2", "z2^2 - z3 - 1", "z3^2 - z1")
        assert solve_points(ideal, seed=4) == solve_points(ideal, seed=4)

    def test_mixed_multiplicities(self):
        # (z1 - 1)^2 (z1 + 2)^3 on a line
        ideal = I("(z1 - 1)^2*(z1 + 2)^3", "z2 - z1", "z3", n=3)
        pts = solve_points(ideal)
        got = sorted((round(p.point[0].real), p.multiplicity) for p in pts)
        assert got == [(-2, 3), (1, 2)]

    @settings(max_examples=12)
    @given(st.integers(0, 10**6), st.integers(1, 3))
    def test_bezout_and_residuals(self, seed, n):
        rng = random.Random(seed)
        degs = [rng.randint(1, 3) for _ in range(n)]
        ideal = dense_system(rng, n, degs)
        pts = solve_points(ideal)
        assert total_multiplicity(pts) == multiplicity_dim(ideal) == int(np.prod(degs))
        assert all(p.residual < 1e-8 for p in pts)


class TestCluster:
    def test_merge(self):
        out = cluster_multiplicities(EigenData([], [(1.0,), (1.0 + 1e-12,)]), 1e-6)
        assert len(out) == 1 and out[0].multiplicity == 2

    def test_simple_spectrum(self):
        out = cluster_multiplicities(EigenData([], [(0.0,), (1.0,), (2.0,)]), 1e-6)
        assert [p.multiplicity for p in out] == [1, 1, 1]

    def test_ambiguous_band(self):
        with pytest.raises(IllConditioned):
            cluster_multiplicities(EigenData([], [(0.0,), (3e-6,)]), 1e-6)

    def test_splitting_pair_conserves_multiplicity(self):
        for t in (Fraction(1, 100), Fraction(1, 10**4), Fraction(1, 10**6)):
            ideal = Ideal(2, [parse_poly("z1^2", 2) - Poly.constant(2, t), parse_poly("z2", 2)])
            pts = solve_points(ideal)
            assert total_multiplicity(pts) == 2
            if len(pts) == 2:
                assert abs(abs(pts[0].point[0]) - float(t) ** 0.5) < 1e-8
