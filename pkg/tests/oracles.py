"""Independent oracles shared by the unit tests and the acceptance script."""

import itertools

from milnorlab.groebner import Ideal
from milnorlab.polycore import Poly


def brute_staircase(exponents, n):
    """Count monomials outside the monomial ideal by direct enumeration of a box."""
    bound = [max((e[i] for e in exponents if all(x == 0 for j, x in enumerate(e) if j != i)), default=None) for i in range(n)]
    assert all(b is not None for b in bound)
    count = 0
    for m in itertools.product(*[range(b) for b in bound]):
        if not any(all(m[i] >= e[i] for i in range(n)) for e in exponents):
            count += 1
    return count


def monomials(n, d):
    """Exponent vectors of total degree at most d."""
    if n == 1:
        return [(k,) for k in range(d + 1)]
    return [(k,) + rest for k in range(d + 1) for rest in monomials(n - 1, d - k)]


def dense_system(rng, n, degs):
    """Random system with nonzero top-degree coefficients, so no solutions escape to infinity generically."""
    gens = []
    for d in degs:
        terms = {e: rng.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5]) if sum(e) == d else rng.randint(-5, 5)
                 for e in monomials(n, d)}
        gens.append(Poly(n, terms))
    return Ideal(n, gens)
