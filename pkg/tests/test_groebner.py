import itertools
import random

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import polys
from milnorlab.errors import NotZeroDimensional, ResourceLimitExceeded
from milnorlab.groebner import (
    GREVLEX,
    LEX,
    Ideal,
    MonomialOrder,
    buchberger,
    contains,
    eliminate,
    ideal_contains,
    ideals_equal,
    multiplicity_dim,
    normal_form,
    quotient_basis,
    s_polynomial,
    saturate,
)
from milnorlab.polycore import Poly, format_poly, parse_poly
from oracles import brute_staircase


def I(*texts, n=3):
    return Ideal(n, [parse_poly(t, n) for t in texts])


def assert_buchberger_criterion(G):
    for f, g in itertools.combinations(G.elements, 2):
        assert normal_form(s_polynomial(f, g, G.order), G).is_zero()


class TestBuchberger:
    def test_variables(self):
        G = buchberger(I("z1", "z2"))
        assert {format_poly(g) for g in G} == {"z1", "z2"}

    def test_twisted_cubic_lex(self):
        order = MonomialOrder("lex", priority=(2, 1, 0))
        G = buchberger(I("z2 - z1^2", "z3 - z1^3"), order)
        assert parse_poly("z2 - z1^2", 3) in G.elements
        assert parse_poly("z3 - z1^3", 3) in G.elements
        assert_buchberger_criterion(G)

    def test_membership_by_construction(self):
        G = buchberger(I("z1^2 - z2*z1"))
        assert contains(G, parse_poly("z1^3 - z2*z1^2", 3))

    def test_budget(self):
        with pytest.raises(ResourceLimitExceeded):
            buchberger(I("z1^2*z2 - z3", "z1*z2^2 - z1 + 1", "z2*z3 - z1^2"), GREVLEX, budget=2)

    def test_deterministic(self):
        a = buchberger(I("z1^2 + z2*z3 - 1", "z2^2 - z3", "z1*z3 - z2"))
        b = buchberger(I("z2^2 - z3", "z1*z3 - z2", "z1^2 + z2*z3 - 1"))
        assert a.elements == b.elements

    @given(st.lists(polys(max_deg=2, max_terms=3), min_size=1, max_size=3))
    def test_criterion_holds_on_random_ideals(self, gens):
        ideal = Ideal(3, gens)
        if not len(ideal):
            return
        G = buchberger(ideal)
        assert_buchberger_criterion(G)
        for g in ideal:
            assert contains(G, g)

    def test_matches_sympy_reduced_basis(self):
        rng = random.Random(3)
        z = sympy.symbols("z1:4")
        for _ in range(6):
            gens = []
            for _ in range(3):
                terms = {}
                for _ in range(3):
                    e = tuple(rng.randint(0, 2) for _ in range(3))
                    terms[e] = rng.randint(-3, 3)
                gens.append(Poly(3, terms))
            gens = [g for g in gens if g]
            if not gens:
                continue
            ours = buchberger(Ideal(3, gens), GREVLEX)
            exprs = [sympy.sympify(format_poly(g).replace("^", "**")) for g in gens]
            theirs = sympy.groebner(exprs, *z, order="grevlex")
            mine = {sympy.expand(sympy.sympify(format_poly(g).replace("^", "**"))) for g in ours}
            other = {sympy.expand(g / sympy.Poly(g, *z).LC(order="grevlex")) for g in theirs.exprs}
            assert mine == other


class TestNormalForm:
    def test_generator_reduces_to_zero(self):
        G = buchberger(I("z2 - z1^2", "z3 - z1^3"))
        assert normal_form(parse_poly("z3 - z1^3", 3), G).is_zero()

    def test_unit_remainder(self):
        G = buchberger(I("z1", "z2"))
        assert normal_form(Poly.constant(3, 1), G) == Poly.constant(3, 1)

    def test_twisted_cubic_quadric(self):
        G = buchberger(I("z2 - z1^2", "z3 - z1^3"))
        assert normal_form(parse_poly("z2^2 - z1*z3", 3), G).is_zero()

    @given(polys(), polys())
    def test_additive(self, p, q):
        G = buchberger(I("z1^2 - z2", "z2*z3 - 1"))
        lhs = normal_form(p + q, G)
        rhs = normal_form(normal_form(p, G) + normal_form(q, G), G)
        assert lhs == rhs


class TestElimination:
    def test_twisted_cubic_projection(self):
        E = eliminate(I("z2 - z1^2", "z3 - z1^3"), 1)
        assert ideal_contains(E, I("z2^3 - z3^2"))

    def test_nothing_survives(self):
        assert len(eliminate(I("z1 - 1", n=2), 1)) == 0

    def test_free_generator_kept(self):
        E = eliminate(I("z1*z2 - 1", "z2", n=2), 1)
        G = buchberger(E)
        assert G.is_unit() or contains(G, parse_poly("z2", 2))


class TestSaturation:
    def test_component_removal(self):
        assert ideals_equal(saturate(I("z1*z2", n=2), parse_poly("z1", 2)), I("z2", n=2))

    def test_everything_removed(self):
        assert buchberger(saturate(I("z1^2", n=2), parse_poly("z1", 2))).is_unit()

    def test_two_generators(self):
        sat = saturate(I("z1*z2", "z1*z3"), parse_poly("z1", 3))
        assert ideals_equal(sat, I("z2", "z3"))

    @given(st.sampled_from(["z1*z2^2", "z1^2*z3 - z1*z2", "z1*(z2 - 1)*(z3 + 1)"]),
           st.sampled_from(["z1", "z2", "z1*z2"]))
    def test_contains_original_and_idempotent(self, gen, g):
        base = I(gen, "z3^2 - z3")
        gp = parse_poly(g, 3)
        once = saturate(base, gp)
        assert ideal_contains(once, base)
        assert ideals_equal(saturate(once, gp), once)


class TestQuotient:
    def test_maximal_ideal(self):
        assert quotient_basis(buchberger(I("z1", "z2", n=2))) == [(0, 0)]

    def test_monomial_box(self):
        assert len(quotient_basis(buchberger(I("z1^2", "z2^3", n=2)))) == 6

    def test_line_is_infinite(self):
        with pytest.raises(NotZeroDimensional):
            quotient_basis(buchberger(I("z1", n=2)))

    def test_dimensions(self):
        assert multiplicity_dim(I("z1^2", "z2^2", "z3^2")) == 8
        assert multiplicity_dim(I("z1 - 1", "z2 - 2", "z3")) == 1

    def test_deformed_twisted_cubic_family(self):
        from fractions import Fraction

        from milnorlab.catalog import example42
        from milnorlab.foliation import singular_ideal

        _, fam, _ = example42()
        assert multiplicity_dim(singular_ideal(fam.at(Fraction(1, 1000)))) == 27

    @given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5)), min_size=0, max_size=4),
           st.tuples(st.integers(1, 5), st.integers(1, 5), st.integers(1, 5)))
    def test_monomial_ideals_match_enumeration(self, extra, pure):
        gens = [tuple(pure[i] if j == i else 0 for j in range(3)) for i in range(3)] + [e for e in extra if any(e)]
        ideal = Ideal(3, [Poly.monomial(e) for e in gens])
        assert multiplicity_dim(ideal) == brute_staircase(gens, 3)
