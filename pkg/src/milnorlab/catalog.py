"""Worked families: translation and power perturbations along a line in C^3,
the twisted-cubic field with its embedded point, and the rotation field with
truncated trigonometric coefficients.

Each builder returns a :class:`~milnorlab.deformlab.DeformationFamily` together
with :class:`Predictions`, the counts the construction is expected to produce.
Random choices come from a seeded ``random.Random`` and are small integers, so
every family is exact and reproducible.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .deformlab import DeformationFamily, restricted_family
from .eigen import companion_roots
from .errors import NonCoprimeAB, RepeatedRootsInPm, UnknownGenerator
from .foliation import CompleteIntersection, VectorField
from .polycore import (
    Poly,
    as_rational,
    u_add,
    u_degree,
    u_gcd,
    u_is_squarefree,
    u_mul,
    u_scale,
    u_squarefree_decomposition,
    u_to_poly,
    u_trim,
)


@dataclass(frozen=True)
class Predictions:
    mu_along_W: int | None = None       # expected observed multiplicity onto W
    minimum: int | None = None          # smallest value over the family's perturbation class
    total: int | None = None            # total multiplicity of sing(X_t) in the affine chart
    extra: dict = field(default_factory=dict)


def univariate_common_roots(a, b) -> int:
    """Number of common roots over C, with multiplicity: the degree of ``gcd(a, b)``."""
    a, b = u_trim(a), u_trim(b)
    if not a or not b:
        raise ValueError("common roots of the zero polynomial are undefined")
    return u_degree(u_gcd(a, b))


def _distinct_roots(a) -> int:
    return sum(len(s) - 1 for s in u_squarefree_decomposition(a))


def _rand_poly(rng, deg, lo=-5, hi=5):
    """Random integer polynomial of exact degree ``deg``."""
    c = [Fraction(rng.randint(lo, hi)) for _ in range(deg + 1)]
    while not c[-1]:
        c[-1] = Fraction(rng.randint(lo, hi))
    return c


def _pad(a, size):
    a = list(a) + [Fraction(0)] * size
    return a[:size]


# -- lines in C^3 -------------------------------------------------------------


@dataclass(frozen=True)
class LineData:
    """Coefficients of the degree-m field vanishing on ``{z1 = z2 = 0}``."""

    m: int
    a: tuple          # a_0..a_m
    b: tuple          # b_0..b_m
    alpha: tuple      # alpha[i][j], i = 0..m-1, j = 0..3
    eps: tuple        # eps_1..eps_3

    def alpha_poly(self, j):
        return u_trim([self.alpha[i][j] for i in range(self.m)])

    def field(self) -> VectorField:
        m, n = self.m, 3
        z1, z2, z3 = Poly.gens(n)
        x1 = sum(((z1 ** (m - i) * z2 ** i).scale(self.a[i]) for i in range(m + 1)), Poly.zero(n))
        x2 = sum(((z1 ** (m - i) * z2 ** i).scale(self.b[i]) for i in range(m + 1)), Poly.zero(n))
        x3 = Poly.zero(n)
        for i in range(m):
            al = self.alpha[i]
            c = Poly.constant(n, al[0]) + z1.scale(al[1]) + z2.scale(al[2]) + z3.scale(al[3])
            x3 = x3 + c * z1 ** (m - 1 - i) * z2 ** i
        return VectorField(n, (x1, x2, x3))

    def characteristic(self):
        """``eps_1 b(lambda) - eps_2 a(lambda)``."""
        return u_add(u_scale(list(self.b), self.eps[0]), u_scale(list(self.a), -self.eps[1]))


def line_data(m: int, beta: int = 0, seed: int = 0, alpha3_zero: bool = False, tries: int = 200) -> LineData:
    """Random coefficients with exactly ``beta`` planted common roots of ``alpha_3`` and the characteristic polynomial."""
    if m < 2:
        raise ValueError("need m >= 2")
    if alpha3_zero and beta:
        raise ValueError("beta counts roots of alpha_3, which is zero here")
    if not 0 <= beta <= m - 1:
        raise ValueError(f"beta must lie in 0..{m - 1}")
    rng = random.Random(seed)
    for _ in range(tries):
        roots = rng.sample(range(-4, 5), beta)
        planted = [Fraction(1)]
        for r in roots:
            planted = u_mul(planted, [Fraction(-r), Fraction(1)])
        a = _rand_poly(rng, m)
        e1 = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
        e2 = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
        e3 = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
        # b = (e2 a + planted * h) / e1, so e1 b - e2 a = planted * h
        h = _rand_poly(rng, m - beta)
        b = u_scale(u_add(u_scale(a, e2), u_mul(planted, h)), 1 / e1)
        if len(u_trim(b)) != m + 1 or u_degree(u_gcd(a, b)) != 0:
            continue
        alpha = [[Fraction(rng.randint(-5, 5)) for _ in range(4)] for _ in range(m)]
        if alpha3_zero:
            a3 = []
        else:
            a3 = u_mul(planted, _rand_poly(rng, m - 1 - beta))
        for i in range(m):
            alpha[i][3] = _pad(a3, m)[i]
        data = LineData(m, tuple(_pad(a, m + 1)), tuple(_pad(b, m + 1)), tuple(tuple(r) for r in alpha), (e1, e2, e3))
        char = data.characteristic()
        if len(char) != m + 1 or not u_is_squarefree(char):
            continue
        if alpha3_zero:
            return data
        got = univariate_common_roots(data.alpha_poly(3), char)
        # alpha_0 must not vanish at the characteristic roots, or limits land off the generic pattern
        if got == beta and univariate_common_roots(data.alpha_poly(0) or [Fraction(1)], char) == 0:
            return data
    raise RuntimeError("could not draw coefficients with the requested common-root count")


def example41(
    m: int = 2,
    beta: int = 0,
    seed: int = 0,
    alpha3_zero: bool = False,
    perturbation: str = "translation",
    data: LineData | None = None,
):
    """Degree-m field on C^3 vanishing on the line ``z1 = z2 = 0``.

    ``perturbation="translation"`` subtracts ``t * eps``; ``"power"`` also
    subtracts ``t * z3^m`` from the third component.
    """
    data = data or line_data(m, beta, seed, alpha3_zero)
    m = data.m
    if u_degree(u_gcd(list(data.a), list(data.b))) != 0:
        raise NonCoprimeAB("a(lambda) and b(lambda) share a root")
    X = data.field()
    n = 3
    e1, e2, e3 = data.eps
    third = Poly.constant(n, e3)
    if perturbation == "power":
        third = third + Poly.var(n, 2) ** m
    elif perturbation != "translation":
        raise ValueError(f"unknown perturbation {perturbation!r}")
    direction = VectorField(n, (Poly.constant(n, e1), Poly.constant(n, e2), third))
    W = CompleteIntersection.coordinate(n, (0, 1))
    a3 = data.alpha_poly(3)
    char = data.characteristic()
    b = univariate_common_roots(a3, char) if a3 else 0
    mu = m * m - b * m if a3 else None
    minimum = m * m - m * _distinct_roots(a3) if a3 else 0
    total = (m * m - b * m) if perturbation == "translation" else m ** 3
    if not a3:
        total = None
    preds = Predictions(
        mu_along_W=mu,
        minimum=minimum,
        total=total,
        extra={
            "beta": b,
            "isolated_projective_points": m + 1,
            "alpha3_zero": not a3,
            "k": m,
            "ell": m - 1,
            "minus_nu": m ** 3 + m ** 2,
        },
    )
    fam = DeformationFamily(X, direction, f"line family m={m} beta={b} ({perturbation})", W)
    return fam, preds


def example41_infinity(m: int = 2, beta: int = 0, seed: int = 0):
    """Power perturbation restricted to the hyperplane at infinity, chart ``xi_2 = 1``."""
    fam, preds = example41(m, beta, seed, perturbation="power")
    return restricted_family(fam, 2), preds


# -- twisted cubic ------------------------------------------------------------

TWISTED_CUBIC = ("z2 - z1^2", "z3 - z1^3")
POINT_A = (1, 3, -5)
POINT_P = (1, 1, 1)


def twisted_cubic_field() -> VectorField:
    return VectorField.parse(3, [
        "3*z1*(z2 - z1^2) + z3 - z1^3",
        "(z1 + 5)*(z2 - z1^2) + 2*(z3 - z1^3)",
        "z2*(z2 - z1^2) + z3 - z1^3",
    ])


def twisted_cubic() -> CompleteIntersection:
    return CompleteIntersection.parse(3, TWISTED_CUBIC)


def example42(eps=(2, 3, 5), alpha=(7, -4, 3)):
    """``(X, Y_t, predictions)`` for the twisted-cubic field and its degree-3 deformation.

    ``Y_t`` replaces ``z3 - z1^3`` by ``z3 - z1^3 - t z2^3`` inside X and subtracts
    ``t (eps_1, eps_2, eps_3 + alpha_0 z1^3 + alpha_1 z2^3 + alpha_2 z3^3)``.
    """
    X = twisted_cubic_field()
    n = 3
    e = [as_rational(x) for x in eps]
    al = [as_rational(x) for x in alpha]
    z1, z2, z3 = Poly.gens(n)
    # Y_t - X = -t (z2^3 * (1, 2, 1) + eps + alpha part)
    cubic = z2 ** 3
    dirs = (
        cubic + Poly.constant(n, e[0]),
        cubic.scale(2) + Poly.constant(n, e[1]),
        cubic + Poly.constant(n, e[2]) + (z1 ** 3).scale(al[0]) + (z2 ** 3).scale(al[1]) + (z3 ** 3).scale(al[2]),
    )
    fam = DeformationFamily(X, VectorField(n, dirs), "twisted cubic, cubic deformation", twisted_cubic())
    preds = Predictions(
        mu_along_W=None,
        minimum=1,
        total=27,
        extra={
            "to_A": 1,
            "to_P": 7,
            "near_z1_equal_1": 8,
            "h3_count": 13,
            "h3_limit": (Fraction(16, 7), Fraction(12, 7)),
            "W_t": ("xi1*xi3 - xi0^2", "xi2*xi3^2 - xi0^3 - t*xi1^3"),
        },
    )
    return X, fam, preds


def example42_translation(eps=(2, 3, 5)):
    """Constant translation of the twisted-cubic field."""
    X = twisted_cubic_field()
    e = [as_rational(x) for x in eps]
    n = 3
    direction = VectorField(n, tuple(Poly.constant(n, x) for x in e))
    fam = DeformationFamily(X, direction, "twisted cubic, translation", twisted_cubic())
    if 2 * e[0] != e[1]:
        preds = Predictions(mu_along_W=2, minimum=1, total=3, extra={"to_A": 1})
    else:
        preds = Predictions(mu_along_W=1, minimum=1, total=2, extra={"to_A": 1, "to_P": 1})
    return fam, preds


def example42_infinity(eps=(2, 3, 5), alpha=(7, -4, 3)):
    _, fam, preds = example42(eps, alpha)
    return restricted_family(fam, 2), preds


# -- rotation field with truncated trigonometric coefficients ------------------

_GENERATORS = ("trig",)


def truncate_series(generator: str, kappa: int):
    """``(f_kappa, g_kappa)``: cosine and sine truncated after ``kappa + 1`` terms, as coefficient lists."""
    if generator not in _GENERATORS:
        raise UnknownGenerator(f"unknown series generator {generator!r}")
    if kappa < 0:
        raise ValueError("truncation order must be nonnegative")
    f = [Fraction(0)] * (2 * kappa + 2)
    g = [Fraction(0)] * (2 * kappa + 2)
    for i in range(kappa + 1):
        f[2 * i] = Fraction((-1) ** i, math.factorial(2 * i))
        g[2 * i + 1] = Fraction((-1) ** i, math.factorial(2 * i + 1))
    return u_trim(f), u_trim(g)


def _default_pm(m):
    # roots i/(m+1), inside the unit disc
    p = [Fraction(1)]
    for i in range(1, m + 1):
        p = u_mul(p, [Fraction(-i, m + 1), Fraction(1)])
    return p


def truncate_series_field(generator: str, kappa: int, pm: Sequence | None = None) -> VectorField:
    """``(z1 f + z2 g, -z1 g + z2 f, z1 P_m(z3))`` with truncated ``f, g``."""
    f, g = truncate_series(generator, kappa)
    pm = u_trim(pm) if pm is not None else _default_pm(2)
    n = 3
    z1, z2, _ = Poly.gens(n)
    F = u_to_poly(f, n, 2)
    G = u_to_poly(g, n, 2)
    P = u_to_poly(pm, n, 2)
    return VectorField(n, (z1 * F + z2 * G, z2 * F - z1 * G, z1 * P))


def rotation_region_radius(kappa: int) -> float:
    """Half the smallest modulus of a zero of ``f^2 + g^2``, where the 2x2 block degenerates."""
    f, g = truncate_series("trig", kappa)
    det = u_add(u_mul(f, f), u_mul(g, g))
    if len(det) <= 1:
        return math.inf
    roots = companion_roots([float(c) for c in det])
    return 0.5 * float(np.min(np.abs(roots)))


def example43(
    m: int = 2,
    kappa: int = 2,
    pm: Sequence | None = None,
    a: Sequence | None = None,
    special: bool = False,
    seed: int = 0,
):
    """Rotation field with ``P_m`` on the third axis and the affine perturbation ``a``.

    ``a`` is a 3x3 table with rows ``(a_i0, a_i1, a_i2)``.  ``special=True``
    keeps only ``a_30 = 1``; otherwise missing tables are drawn at random.
    """
    pm = u_trim(pm) if pm is not None else _default_pm(m)
    if u_degree(pm) != m:
        raise ValueError("P_m must have degree m")
    if not u_is_squarefree(pm):
        raise RepeatedRootsInPm("P_m has a repeated root")
    X = truncate_series_field("trig", kappa, pm)
    if special:
        a = ((0, 0, 0), (0, 0, 0), (1, 0, 0))
    elif a is None:
        rng = random.Random(seed)
        a = tuple(tuple(rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(3)) for _ in range(3))
    a = tuple(tuple(as_rational(x) for x in row) for row in a)
    n = 3
    z1, z2, _ = Poly.gens(n)
    direction = VectorField(n, tuple(Poly.constant(n, r[0]) + z1.scale(r[1]) + z2.scale(r[2]) for r in a))
    W = CompleteIntersection.coordinate(n, (0, 1))
    radius = rotation_region_radius(kappa)
    block_zero = all(x == 0 for r in a[:2] for x in r)
    preds = Predictions(
        mu_along_W=0 if block_zero and a[2][0] else None,
        minimum=0,
        total=None,
        extra={"min_isolated": 4 * kappa + 2, "region_radius": radius},
    )
    fam = DeformationFamily(X, direction, f"rotation field kappa={kappa} m={m}", W, radius)
    return fam, preds


def example43_general(n: int = 4, d: int = 2, a: Sequence | None = None):
    """Higher-dimensional analogue: unimodular ``d x d`` block in the normal variables.

    The block is upper unitriangular with entries ``z_{d+1}``, ``z_{d+2}``, ...
    above the diagonal; the tangential components are ``z_1 * z_{d+1} + z_d``.
    """
    if not 1 <= d < n:
        raise ValueError("need 1 <= d < n")
    a = [as_rational(x) for x in (a or [1] * (n - d))]
    if len(a) != n - d or any(x == 0 for x in a):
        raise ValueError(f"need {n - d} nonzero constants")
    gens = Poly.gens(n)
    tang = gens[d:]
    comps = []
    for i in range(d):
        p = gens[i]
        for j in range(i + 1, d):
            p = p + gens[j] * tang[(i + j) % len(tang)]
        comps.append(p)
    for i in range(d, n):
        comps.append(gens[0] * gens[i] + gens[d - 1])
    X = VectorField(n, tuple(comps))
    direction = VectorField(n, tuple([Poly.zero(n)] * d + [Poly.constant(n, x) for x in a]))
    W = CompleteIntersection.coordinate(n, range(d))
    fam = DeformationFamily(X, direction, f"unimodular block n={n} d={d}", W)
    return fam, Predictions(mu_along_W=0, minimum=0, total=0)


# -- seeded directions ----------------------------------------------------------

SEEDED_FAMILIES = ("example41", "example42", "example42-translation", "example43", "example43-general")


def _nonzero(rng, lo=-5, hi=5):
    return rng.choice([x for x in range(lo, hi + 1) if x])


def seeded_family(name: str, seed: int):
    """``(family, predictions)`` for the named catalog family with a seeded perturbation direction."""
    rng = random.Random(seed)
    if name == "example41":
        return example41(2, beta=seed % 2, seed=seed)
    if name == "example42":
        eps = tuple(_nonzero(rng) for _ in range(3))
        alpha = tuple(_nonzero(rng, -9, 9) for _ in range(3))
        _, fam, preds = example42(eps, alpha)
        return fam, preds
    if name == "example42-translation":
        return example42_translation(tuple(_nonzero(rng) for _ in range(3)))
    if name == "example43":
        return example43(kappa=1, seed=seed)
    if name == "example43-general":
        return example43_general(4, 2, [_nonzero(rng) for _ in range(2)])
    raise KeyError(f"unknown catalog family {name!r}")
