from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from milnorlab.errors import InconsistentBalance, MissingTableEntry
from milnorlab.invariants import (
    AmbientSetup,
    ChernCoefficientTable,
    brute_force_W,
    complete_symmetric_W,
    global_balance,
    load_preset,
    nu_terms,
    nu_value,
    parse_preset,
    phi_derivative,
    phi_polynomial,
    preset_names,
    preset_setup,
    projective_count,
    soares_bound,
)
from milnorlab.polycore import u_derivative, u_eval, u_mul

LINE = AmbientSetup(n=3, d=2, k=2, degW=1, ks=(1, 1), ell=1)


class TestW:
    @pytest.mark.parametrize("delta,ks,want", [(0, (7, 2), 1), (1, (2, 3), 5), (2, (2, 3), 19), (3, (1, 1), 4)])
    def test_values(self, delta, ks, want):
        assert complete_symmetric_W(delta, ks) == want

    def test_matches_enumeration(self):
        for delta in range(7):
            for d in range(1, 4):
                for ks in _tuples(d, 4):
                    assert complete_symmetric_W(delta, ks) == brute_force_W(delta, ks)

    def test_bad_input(self):
        with pytest.raises(ValueError):
            complete_symmetric_W(-1, (1,))
        with pytest.raises(ValueError):
            complete_symmetric_W(1, ())


def _tuples(d, top):
    if d == 0:
        yield ()
        return
    for head in range(1, top + 1):
        for rest in _tuples(d - 1, top):
            yield (head,) + rest


class TestPhi:
    def test_first_derivative_at_one(self):
        poly, val = phi_derivative(0, 0, LINE, 1)
        assert poly == [1, 4, 3] and val == 8

    def test_zeroth_is_phi(self):
        assert phi_derivative(1, 0, LINE, 0)[0] == phi_polynomial(1, 0, LINE)

    def test_expand_oracle(self):
        # x (1+x)^2 built by hand
        want = u_mul([0, 1], u_mul([1, 1], [1, 1]))
        assert phi_polynomial(0, 0, LINE) == want

    def test_over_differentiation(self):
        poly, val = phi_derivative(0, 0, LINE, 4)
        assert u_eval(poly, 3) == 0 and val == 0

    def test_index_range(self):
        with pytest.raises(IndexError):
            phi_polynomial(3, 0, LINE)
        with pytest.raises(IndexError):
            phi_polynomial(0, 2, LINE)

    @given(st.integers(0, 2), st.integers(0, 1), st.integers(0, 4))
    def test_derivative_recurrence(self, a1, a2, m):
        p_m, _ = phi_derivative(a1, a2, LINE, m)
        p_next, _ = phi_derivative(a1, a2, LINE, m + 1)
        assert [Fraction(c) for c in p_next] == [Fraction(c) for c in u_derivative(p_m, 1)] or (
            all(c == 0 for c in p_next) and all(c == 0 for c in u_derivative(p_m, 1))
        )


class TestNu:
    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_preset(self, m):
        table = load_preset("p3-line")
        assert nu_value(preset_setup("p3-line", m), table) == -(m ** 3 + m ** 2)

    def test_zero_table(self):
        zero = ChernCoefficientTable({0: 0, 1: 0, 2: 0}, {0: 0, 1: 0})
        assert nu_value(LINE, zero) == 0

    def test_deltas_nonnegative(self):
        setup = AmbientSetup(n=5, d=2, k=3, degW=2, ks=(1, 2), ell=2)
        table = ChernCoefficientTable({i: 1 for i in range(3)}, {i: 1 for i in range(4)})
        for a1, a2, m, _ in nu_terms(setup, table):
            assert a1 + a2 + m <= setup.n - setup.d

    @given(
        st.lists(st.integers(-5, 5), min_size=3, max_size=3),
        st.lists(st.integers(-5, 5), min_size=3, max_size=3),
        st.lists(st.integers(-5, 5), min_size=2, max_size=2),
        st.integers(-3, 3),
    )
    def test_linear_in_sigma(self, s1, s2, tau, c):
        setup = AmbientSetup(n=3, d=2, k=3, degW=2, ks=(1, 2), ell=1)
        tt = dict(enumerate(tau))
        A = ChernCoefficientTable(dict(enumerate(s1)), tt)
        B = ChernCoefficientTable(dict(enumerate(s2)), tt)
        C = ChernCoefficientTable({i: s1[i] + c * s2[i] for i in range(3)}, tt)
        assert nu_value(setup, C) == nu_value(setup, A) + c * nu_value(setup, B)

    @given(st.lists(st.integers(-5, 5), min_size=3, max_size=3), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
    def test_linear_in_tau(self, t1, t2):
        setup = AmbientSetup(n=4, d=2, k=2, degW=3, ks=(1, 3), ell=2)
        sig = {0: 2, 1: -1, 2: 3}
        A = ChernCoefficientTable(sig, dict(enumerate(t1)))
        B = ChernCoefficientTable(sig, dict(enumerate(t2)))
        C = ChernCoefficientTable(sig, {i: t1[i] + t2[i] for i in range(3)})
        assert nu_value(setup, C) == nu_value(setup, A) + nu_value(setup, B)

    def test_missing_entry(self):
        with pytest.raises(MissingTableEntry, match="tau.1"):
            nu_value(LINE, ChernCoefficientTable({0: 1, 1: 1}, {0: 1}))

    def test_setup_validation(self):
        with pytest.raises(ValueError):
            AmbientSetup(n=2, d=2, k=1, degW=1, ks=(1, 1), ell=0)
        with pytest.raises(ValueError):
            AmbientSetup(n=3, d=2, k=1, degW=1, ks=(1,), ell=0)


class TestPresets:
    def test_names(self):
        assert "p3-line" in preset_names()

    def test_unknown(self):
        with pytest.raises(MissingTableEntry):
            load_preset("nope")
        with pytest.raises(MissingTableEntry):
            preset_setup("nope", 2)

    def test_parse(self):
        t = parse_preset("# c\nsigma.0 = 1/2\ntau.0 = 3  # x\nchi = 2\nsource = calibrated\n")
        assert t.sigma == {0: Fraction(1, 2)} and t.tau == {0: 3} and t.chi == 2
        with pytest.raises(ValueError):
            parse_preset("sigma.0 1")


class TestBounds:
    def test_values(self):
        assert soares_bound(1, 3, False) == 1
        assert soares_bound(2, 3, False) == 8
        assert soares_bound(3, 3, True) == 14

    def test_radial_formula_matches_line_family(self):
        for m in range(2, 6):
            assert soares_bound(m + 1, 3, True) - 1 == m ** 3 + m ** 2 + m - 1

    def test_radial_below_generic(self):
        for k in range(1, 7):
            for n in range(1, 6):
                assert sum((k - 1) ** i for i in range(1, n + 1)) <= k ** n

    def test_invalid(self):
        with pytest.raises(ValueError):
            soares_bound(0, 3, False)


class TestBalance:
    def test_line_family(self):
        for m in (2, 3):
            rep = global_balance(3, m, m + 1, [-(m ** 3 + m ** 2)])
            assert rep.N == (0,) and rep.mu_along_W == (m ** 3 + m ** 2,)

    def test_embedded_point(self):
        rep = global_balance(3, 2, 2, [-12])
        assert rep.N == (1,) and rep.mu_along_W == (13,)

    def test_no_components(self):
        assert projective_count(1, 3) == 4
        global_balance(3, 1, 4, [], [])
        with pytest.raises(InconsistentBalance):
            global_balance(3, 1, 5, [], [])

    def test_consistency_mode(self):
        global_balance(3, 2, 3, [-12], [0])
        with pytest.raises(InconsistentBalance):
            global_balance(3, 2, 3, [-12], [1])

    def test_negative_N(self):
        with pytest.raises(InconsistentBalance):
            global_balance(3, 2, 4, [-12])

    def test_two_unknowns(self):
        with pytest.raises(ValueError):
            global_balance(3, 2, 3, [-6, -6], [None, None])

    @given(st.integers(1, 4), st.integers(0, 60), st.lists(st.integers(-40, 0), min_size=1, max_size=3))
    def test_inequality_or_error(self, k, iso, nus):
        try:
            rep = global_balance(3, k, iso, nus)
        except InconsistentBalance:
            return
        for mu, nu in zip(rep.mu_along_W, rep.nu_values):
            assert mu >= -nu
        assert iso == projective_count(k, 3) + sum(rep.nu_values) - sum(rep.N)
