"""Vector fields, singular schemes and the local geometry along a component W.

Conventions
-----------
Affine coordinates are ``z_1..z_n`` (indices ``0..n-1`` in code).  Projective
coordinates are ``xi_0..xi_n`` with ``z_i = xi_{i-1} / xi_n``, so chart ``n`` is
the original affine chart and ``{xi_n = 0}`` is the hyperplane at infinity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    DimensionMismatch,
    NotGraphForm,
    WNotCoordinate,
    WNotInSingularLocus,
    ZeroField,
)
from .groebner import DEFAULT_BUDGET, GREVLEX, Ideal, buchberger, contains
from .polycore import Poly, format_poly, parse_poly


@dataclass(frozen=True)
class VectorField:
    n: int
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != self.n:
            raise DimensionMismatch(f"{len(comps)} components for n={self.n}")
        if any(c.n != self.n for c in comps):
            raise DimensionMismatch("components must share the ambient dimension")
        object.__setattr__(self, "components", comps)

    @classmethod
    def parse(cls, n: int, texts: Sequence[str]) -> "VectorField":
        return cls(n, tuple(parse_poly(t, n) for t in texts))

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    @property
    def degree(self):
        return max(c.degree for c in self.components)

    def __sub__(self, other: "VectorField"):
        if other.n != self.n:
            raise DimensionMismatch("fields in different dimensions")
        return VectorField(self.n, tuple(a - b for a, b in zip(self, other)))

    def __add__(self, other: "VectorField"):
        if other.n != self.n:
            raise DimensionMismatch("fields in different dimensions")
        return VectorField(self.n, tuple(a + b for a, b in zip(self, other)))

    def scale(self, c):
        return VectorField(self.n, tuple(p.scale(c) for p in self))

    def evaluate_complex(self, point):
        return tuple(p.evaluate_complex(point) for p in self)

    def jacobian(self):
        return [[p.diff(j) for j in range(self.n)] for p in self]

    def lines(self):
        return [f"X{i + 1} = {format_poly(p)}" for i, p in enumerate(self)]

    def __str__(self):
        return "(" + ", ".join(format_poly(p) for p in self) + ")"


def gradient_field(f: Poly) -> VectorField:
    return VectorField(f.n, tuple(f.diff(i) for i in range(f.n)))


@dataclass(frozen=True)
class CompleteIntersection:
    n: int
    polys: tuple

    def __post_init__(self):
        polys = tuple(self.polys)
        if any(p.n != self.n for p in polys):
            raise DimensionMismatch("defining polynomials must share the ambient dimension")
        if any(p.is_zero() for p in polys):
            raise ValueError("defining polynomials must be nonzero")
        object.__setattr__(self, "polys", polys)

    @classmethod
    def parse(cls, n: int, texts: Sequence[str]):
        return cls(n, tuple(parse_poly(t, n) for t in texts))

    @classmethod
    def coordinate(cls, n: int, indices: Sequence[int]):
        return cls(n, tuple(Poly.var(n, i) for i in indices))

    @property
    def d(self):
        return len(self.polys)

    @property
    def degrees(self):
        return tuple(p.degree for p in self.polys)

    def ideal(self) -> Ideal:
        return Ideal(self.n, self.polys)

    def residual(self, point) -> float:
        return max(abs(p.evaluate_complex(point)) for p in self.polys)

    def coordinate_indices(self):
        """Indices ``i`` with ``polys = (c z_i, ...)``, or ``None`` if W is not coordinate."""
        out = []
        for p in self.polys:
            if len(p.terms) != 1:
                return None
            (e, _), = p.terms.items()
            if sum(e) != 1:
                return None
            out.append(e.index(1))
        if len(set(out)) != len(out):
            return None
        return out

    def jacobian_rank_at(self, point, tol=1e-9) -> int:
        import numpy as np

        jac = np.array([[p.diff(j).evaluate_complex(point) for j in range(self.n)] for p in self.polys])
        if jac.size == 0:
            return 0
        s = np.linalg.svd(jac, compute_uv=False)
        return int((s > tol * max(1.0, s[0])).sum())

    def is_smooth_at(self, points) -> bool:
        return all(self.jacobian_rank_at(p) == self.d for p in points)

    def lines(self):
        return ["W = " + "; ".join(format_poly(p) for p in self.polys)]


@dataclass(frozen=True)
class FoliationDegree:
    k: int
    radial_top: bool
    g: Poly | None = None

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("foliation degree must be nonnegative")


@dataclass(frozen=True)
class ExceptionalData:
    m_E: int
    dicritical: bool
    ell: int

    def __post_init__(self):
        want = self.m_E - 1 if self.dicritical else self.m_E
        if self.ell != want or self.ell < 0:
            raise ValueError(f"inconsistent exceptional data {self}")


@dataclass(frozen=True)
class MultiplicityProfile:
    """Orders ``m_i`` of the components in powers of the ideal of W.

    ``None`` marks an identically zero component (infinite order).
    """

    orders: tuple
    m_W: int


# -- singular scheme --------------------------------------------------------


def singular_ideal(X: VectorField) -> Ideal:
    if X.is_zero():
        raise ZeroField("the zero field has no singular scheme")
    return Ideal(X.n, X.components)


def _power_ideal(W: CompleteIntersection, m: int) -> Ideal:
    gens = []
    for combo in itertools.combinations_with_replacement(range(W.d), m):
        p = Poly.constant(W.n, 1)
        for i in combo:
            p = p * W.polys[i]
        gens.append(p)
    return Ideal(W.n, gens)


def mult_along_W(X: VectorField, W: CompleteIntersection, budget: int = DEFAULT_BUDGET) -> MultiplicityProfile:
    if X.n != W.n:
        raise DimensionMismatch("field and W live in different dimensions")
    if X.is_zero():
        raise ZeroField("the zero field has no multiplicity along W")
    bases = {}

    def basis(m):
        if m not in bases:
            bases[m] = buchberger(_power_ideal(W, m), GREVLEX, budget)
        return bases[m]

    orders = []
    for i, p in enumerate(X):
        if p.is_zero():
            orders.append(None)
            continue
        if not contains(basis(1), p):
            raise WNotInSingularLocus(f"component X{i + 1} does not vanish on W")
        m = 1
        # a nonzero polynomial has order at most its degree at any point of W
        while m <= p.degree and contains(basis(m + 1), p):
            m += 1
        orders.append(m)
    return MultiplicityProfile(tuple(orders), min(o for o in orders if o is not None))


def _s_order(p: Poly, var: int):
    return min(e[var] for e in p.terms) if p.terms else None


def _divide_by_var_power(p: Poly, var: int, k: int) -> Poly:
    out = {}
    for e, c in p.terms.items():
        if e[var] < k:
            raise ValueError("polynomial not divisible by the requested power")
        f = list(e)
        f[var] -= k
        out[tuple(f)] = c
    return Poly(p.n, out, _trusted=True)


def blowup_chart(X: VectorField, normal: Sequence[int], j: int) -> VectorField:
    """Pull back along the chart ``w_j = s, w_i = s v_i`` of the blow-up of ``{w = 0}``.

    The chart keeps the variable slots of X: slot ``j`` carries ``s`` and the
    other normal slots carry the ``v_i``.
    """
    n = X.n
    s = Poly.var(n, j)
    images = list(Poly.gens(n))
    for i in normal:
        if i != j:
            images[i] = s * Poly.var(n, i)
    pulled = [p.subs(images) for p in X]
    comps = list(pulled)
    for i in normal:
        if i != j:
            comps[i] = _divide_by_var_power(pulled[i] - Poly.var(n, i) * pulled[j], j, 1)
    return VectorField(n, tuple(comps))


def exceptional_order(X: VectorField, W: CompleteIntersection) -> ExceptionalData:
    normal = W.coordinate_indices()
    if normal is None:
        raise WNotCoordinate("W must be given by coordinate hyperplanes; straighten first")
    for i, p in enumerate(X):
        if not p.is_zero() and any(all(e[k] == 0 for k in normal) for e in p.terms):
            raise WNotInSingularLocus(f"component X{i + 1} does not vanish on W")
    if X.is_zero():
        raise ZeroField("the zero field has no exceptional order")
    best = None
    for j in normal:
        chart = blowup_chart(X, normal, j)
        orders = [_s_order(p, j) for p in chart if not p.is_zero()]
        if not orders:
            continue
        m = min(orders)
        a_s = chart[j]
        dic = False
        if not a_s.is_zero() and _s_order(a_s, j) == m:
            dic = True
        if best is None or m < best[0]:
            best = (m, dic)
        elif m == best[0]:
            best = (m, best[1] or dic)
    m_e, dic = best
    return ExceptionalData(m_e, dic, m_e - 1 if dic else m_e)


# -- totally simple ---------------------------------------------------------


def _det(rows):
    k = len(rows)
    if k == 1:
        return rows[0][0]
    if k == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = None
    for c in range(k):
        if rows[0][c].is_zero():
            continue
        minor = [r[:c] + r[c + 1:] for r in rows[1:]]
        term = rows[0][c] * _det(minor)
        if c % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc if acc is not None else rows[0][0] * 0


def jacobian_minors(X: VectorField, d: int):
    """``{(rows, cols): det}`` for every d x d minor of the Jacobian of X."""
    jac = X.jacobian()
    out = {}
    for rows in itertools.combinations(range(X.n), d):
        for cols in itertools.combinations(range(X.n), d):
            out[(rows, cols)] = _det([[jac[r][c] for c in cols] for r in rows])
    return out


def _check_in_sing(X: VectorField, W: CompleteIntersection, budget):
    G = buchberger(W.ideal(), GREVLEX, budget)
    for i, p in enumerate(X):
        if not contains(G, p):
            raise WNotInSingularLocus(f"component X{i + 1} does not vanish on W")


def totally_simple(X: VectorField, W: CompleteIntersection, budget: int = DEFAULT_BUDGET) -> bool:
    """Every point of W has some d x d Jacobian minor that is invertible there.

    Decided exactly: the minors have no common zero on W iff the ideal
    ``(f_1..f_d, all minors)`` is the unit ideal.
    """
    _check_in_sing(X, W, budget)
    minors = [m for m in jacobian_minors(X, W.d).values() if not m.is_zero()]
    if not minors:
        return False
    G = buchberger(Ideal(W.n, list(W.polys) + minors), GREVLEX, budget)
    return G.is_unit()


def uniform_minor(X: VectorField, W: CompleteIntersection, budget: int = DEFAULT_BUDGET):
    """A single ``(rows, cols)`` minor whose determinant vanishes nowhere on W, or ``None``."""
    _check_in_sing(X, W, budget)
    for key, det in jacobian_minors(X, W.d).items():
        if det.is_zero():
            continue
        if buchberger(Ideal(W.n, list(W.polys) + [det]), GREVLEX, budget).is_unit():
            return key
    return None


# -- straightening ----------------------------------------------------------


@dataclass(frozen=True)
class Straightening:
    """Polynomial coordinate change ``u = psi(z)`` with explicit inverse."""

    forward: tuple   # psi_i(z)
    inverse: tuple   # z_i(u)
    tangential: tuple  # original indices carried as u_{d+1}, ...

    def push(self, X: VectorField) -> VectorField:
        comps = []
        for psi in self.forward:
            acc = Poly.zero(X.n)
            for k, xk in enumerate(X):
                dk = psi.diff(k)
                if not dk.is_zero():
                    acc = acc + xk * dk
            comps.append(acc.subs(list(self.inverse)))
        return VectorField(X.n, tuple(comps))


def _graph_form(W: CompleteIntersection):
    """Choose ``sigma`` with ``f_i = c_i z_sigma(i) - h_i(remaining)``; ``None`` if impossible."""
    n = W.n
    for sigma in itertools.permutations(range(n), W.d):
        ok = True
        for i, f in enumerate(W.polys):
            k = sigma[i]
            e = tuple(1 if x == k else 0 for x in range(n))
            if not f.coeff(e):
                ok = False
                break
            for mono in f.terms:
                if mono != e and any(mono[s] for s in sigma):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return sigma
    return None


def _linear_inverse(W: CompleteIntersection):
    n, d = W.n, W.d
    if any(f.degree > 1 for f in W.polys):
        return None
    rows = []
    for f in W.polys:
        rows.append([f.coeff(tuple(1 if x == k else 0 for x in range(n))) for k in range(n)])
    # pivot columns by exact elimination
    work = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, d) if work[i][c]), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        for i in range(d):
            if i != r and work[i][c]:
                f = work[i][c] / work[r][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    if r < d:
        return None
    tang = [c for c in range(n) if c not in pivots]
    full = [list(rr) for rr in rows] + [[Fraction(int(k == c)) for k in range(n)] for c in tang]
    consts = [f.constant_term() for f in W.polys] + [Fraction(0)] * len(tang)
    inv = _invert(full)
    u = Poly.gens(n)
    images = []
    for i in range(n):
        acc = Poly.zero(n)
        for j in range(n):
            if inv[i][j]:
                acc = acc + (u[j] - consts[j]).scale(inv[i][j])
        images.append(acc)
    return tuple(tang), tuple(images)


def _invert(a):
    n = len(a)
    m = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        p = next(i for i in range(c, n) if m[i][c])
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [r[n:] for r in m]


def straightening_map(W: CompleteIntersection) -> Straightening:
    n, d = W.n, W.d
    sigma = _graph_form(W)
    if sigma is not None:
        tang = tuple(k for k in range(n) if k not in sigma)
        u = Poly.gens(n)
        tang_images = {k: u[d + pos] for pos, k in enumerate(tang)}
        inverse = [None] * n
        for k, img in tang_images.items():
            inverse[k] = img
        for i, f in enumerate(W.polys):
            k = sigma[i]
            e = tuple(1 if x == k else 0 for x in range(n))
            c = f.coeff(e)
            rest = f - Poly.monomial(e, c)
            # c z_k + rest(tangential) = u_i
            rest_u = rest.subs([tang_images.get(x, Poly.zero(n)) for x in range(n)])
            inverse[k] = (u[i] - rest_u).scale(Fraction(1) / c)
        forward = tuple(W.polys) + tuple(Poly.var(n, k) for k in tang)
        return Straightening(forward, tuple(inverse), tang)
    lin = _linear_inverse(W)
    if lin is not None:
        tang, inverse = lin
        forward = tuple(W.polys) + tuple(Poly.var(n, k) for k in tang)
        return Straightening(forward, inverse, tang)
    raise NotGraphForm("no variable splits off linearly in the defining polynomials")


def straighten(W: CompleteIntersection, X: VectorField):
    """Push X forward along ``psi = (f_1, .., f_d, remaining variables)``.

    Returns ``(psi_* X, W_0)`` with ``W_0 = {u_1 = .. = u_d = 0}``.
    """
    if W.n != X.n:
        raise DimensionMismatch("field and W live in different dimensions")
    psi = straightening_map(W)
    return psi.push(X), CompleteIntersection.coordinate(W.n, range(W.d))


# -- degree and charts ------------------------------------------------------


def foliation_degree(X: VectorField) -> FoliationDegree:
    if X.is_zero():
        raise ZeroField("the zero field induces no foliation")
    D = X.degree
    tops = [p.homogeneous_part(D) for p in X]
    i = next(k for k, t in enumerate(tops) if not t.is_zero())
    g = None
    if all(e[i] >= 1 for e in tops[i].terms):
        cand = Poly(X.n, {tuple(x - (j == i) for j, x in enumerate(e)): c for e, c in tops[i].terms.items()}, _trusted=True)
        if all(t == cand * Poly.var(X.n, k) for k, t in enumerate(tops)):
            g = cand
    if g is not None:
        return FoliationDegree(D - 1, True, g)
    return FoliationDegree(D, False, None)


def _homogenized(X: VectorField, D: int):
    """Components ``X_k^h(xi_0..xi_n)`` of total degree D (slot n is the affine xi_n)."""
    n = X.n
    out = []
    for p in X:
        terms = {}
        for e, c in p.terms.items():
            terms[tuple(e) + (D - sum(e),)] = c
        out.append(Poly(n + 1, terms, _trusted=True))
    return out


def chart_coordinates(n: int, j: int):
    """Names of the chart-``j`` coordinates in terms of ``xi``: list of (numerator, denominator)."""
    if j == n:
        return [(i, n) for i in range(n)]
    return [(i, j) for i in range(n) if i != j] + [(n, j)]


def chart_field(X: VectorField, j: int) -> VectorField:
    """The foliation of X in the chart ``xi_j = 1`` of P^n.

    For ``j < n`` the coordinates are ``u_i = xi_i / xi_j`` (``i != j``, increasing)
    followed by ``w = xi_n / xi_j``; the field is cleared of poles along ``w = 0``
    and, when the top part is radial, divided by the extra factor ``w``.
    """
    n = X.n
    if not 0 <= j <= n:
        raise ValueError(f"chart index must lie in 0..{n}")
    if j == n:
        return X
    fd = foliation_degree(X)
    D = X.degree
    hom = _homogenized(X, D)
    # chart variables: slot a < n-1 -> u for xi index others[a]; slot n-1 -> w
    others = [i for i in range(n) if i != j]
    images = [None] * (n + 1)
    for a, i in enumerate(others):
        images[i] = Poly.var(n, a)
    images[j] = Poly.constant(n, 1)
    images[n] = Poly.var(n, n - 1)
    h = [p.subs(images) for p in hom]
    w = Poly.var(n, n - 1)
    comps = []
    for a, i in enumerate(others):
        comps.append(h[i] - Poly.var(n, a) * h[j])
    comps.append(-(w * h[j]))
    if fd.radial_top:
        comps = [_divide_by_var_power(c, n - 1, 1) for c in comps]
    return VectorField(n, tuple(comps))


def chart_restrict(X: VectorField, j: int) -> VectorField:
    """Chart ``n`` returns X; chart ``j < n`` returns the field on ``{xi_n = 0}`` in coordinates u."""
    n = X.n
    if j == n:
        return X
    full = chart_field(X, j)
    images = list(Poly.gens(n - 1)) + [Poly.zero(n - 1)]
    return VectorField(n - 1, tuple(p.subs(images) for p in full.components[:-1]))


# -- manifest ---------------------------------------------------------------


@dataclass(frozen=True)
class Manifest:
    field: VectorField
    W: CompleteIntersection | None


def parse_manifest(text: str) -> Manifest:
    """Line format: ``n = <int>``, ``X<i> = <poly>`` for i = 1..n, optional ``W = p; q; ...``.

    Blank lines and ``#`` comments are ignored.
    """
    n = None
    comps = {}
    wtext = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "n":
            n = int(value)
        elif key == "W":
            wtext = [s.strip() for s in value.split(";") if s.strip()]
        elif key.startswith("X") and key[1:].isdigit():
            comps[int(key[1:])] = value
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if n is None:
        raise ValueError("manifest lacks 'n = <int>'")
    if sorted(comps) != list(range(1, n + 1)):
        raise ValueError(f"manifest needs exactly X1..X{n}")
    X = VectorField.parse(n, [comps[i] for i in range(1, n + 1)])
    W = CompleteIntersection.parse(n, wtext) if wtext else None
    return Manifest(X, W)


def format_manifest(X: VectorField, W: CompleteIntersection | None = None) -> str:
    lines = [f"n = {X.n}"] + X.lines()
    if W is not None:
        lines += W.lines()
    return "\n".join(lines) + "\n"
