from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from milnorlab.polycore import Poly

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, n=3, max_deg=3, max_terms=5):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        deg = draw(st.integers(0, max_deg))
        e = [0] * n
        for _ in range(deg):
            e[draw(st.integers(0, n - 1))] += 1
        terms[tuple(e)] = draw(small_fractions)
    return Poly(n, terms)


@st.composite
def rational_points(draw, n=3):
    return tuple(draw(small_fractions) for _ in range(n))


def F(x):
    return Fraction(x)
