"""Points of zero-dimensional ideals from multiplication matrices.

The quotient ring is handled exactly: multiplication matrices and the
characteristic polynomial of a random integer combination are rational.  The
square-free decomposition of that polynomial fixes the multiplicity of each
eigenvalue, so the floating-point side only has to decide which Schur
eigenvalue belongs to which root.  Coordinates are read off as traces of the
coordinate matrices over the reordered invariant subspaces.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import eigen
from .errors import IllConditioned, NotZeroDimensional
from .groebner import (
    DEFAULT_BUDGET,
    GREVLEX,
    GroebnerBasis,
    Ideal,
    MonomialOrder,
    buchberger,
    normal_form,
    quotient_basis,
)
from .polycore import Poly, u_squarefree_decomposition

DEFAULT_TOL = 1e-8
DEFAULT_CLUSTER_TOL = 1e-6
COEFF_RANGE = 10


@dataclass(frozen=True)
class SolvedPoint:
    point: tuple
    multiplicity: int
    residual: float


@dataclass(frozen=True)
class MultiplicationMatrix:
    """Matrix of multiplication by ``z_var`` on the staircase basis.

    Column ``j`` holds the coordinates of ``NF(z_var * basis[j])``.
    """

    var: int
    basis: tuple
    rows: tuple  # tuple of tuples of Fraction

    @property
    def size(self):
        return len(self.basis)

    def to_numpy(self):
        return np.array([[float(x) for x in r] for r in self.rows], dtype=float).reshape(self.size, self.size)


@dataclass
class EigenData:
    """Raw output of the eigen stage: one entry per eigenvalue, with multiplicity."""

    values: list
    coords: list


class _Quotient:
    """Staircase plus cached normal forms of border monomials."""

    def __init__(self, G: GroebnerBasis):
        self.G = G
        self.basis = tuple(quotient_basis(G))
        self.index = {m: i for i, m in enumerate(self.basis)}
        self._nf = {}

    def reduce_monomial(self, e):
        if e in self.index:
            return {self.index[e]: Fraction(1)}
        hit = self._nf.get(e)
        if hit is None:
            r = normal_form(Poly.monomial(e), self.G)
            hit = {self.index[m]: c for m, c in r.terms.items()}
            self._nf[e] = hit
        return hit

    def matrix(self, var):
        d = len(self.basis)
        rows = [[Fraction(0)] * d for _ in range(d)]
        for j, b in enumerate(self.basis):
            e = list(b)
            e[var] += 1
            for i, c in self.reduce_monomial(tuple(e)).items():
                rows[i][j] = c
        return MultiplicationMatrix(var, self.basis, tuple(tuple(r) for r in rows))


def multiplication_matrix(G: GroebnerBasis, var: int) -> MultiplicationMatrix:
    if not 0 <= var < G.n:
        raise IndexError(f"variable index {var} out of range")
    return _Quotient(G).matrix(var)


def multiplication_matrices(G: GroebnerBasis) -> list:
    q = _Quotient(G)
    return [q.matrix(i) for i in range(G.n)]


def exact_matmul(a, b):
    n = len(a)
    m = len(b[0]) if b else 0
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(a[i], bt[j]) if x and y), Fraction(0)) for j in range(m)] for i in range(n)]


def charpoly(rows) -> list:
    """Exact characteristic polynomial (lowest degree first, monic) of a rational matrix.

    Similarity reduction to Hessenberg form by elimination, then the usual
    three-term style recurrence on the leading principal minors.
    """
    h = [[Fraction(x) for x in r] for r in rows]
    n = len(h)
    for m in range(1, n - 1):
        piv = None
        for i in range(m, n):
            if h[i][m - 1]:
                c = h[i][m - 1]
                size = c.numerator.bit_length() + c.denominator.bit_length()
                if piv is None or size < piv[1]:
                    piv = (i, size)
        if piv is None:
            continue
        i = piv[0]
        if i != m:
            h[i], h[m] = h[m], h[i]
            for r in h:
                r[i], r[m] = r[m], r[i]
        t = h[m][m - 1]
        for i in range(m + 1, n):
            u = h[i][m - 1] / t
            if not u:
                continue
            ri, rm = h[i], h[m]
            for j in range(n):
                if rm[j]:
                    ri[j] -= u * rm[j]
            for r in h:
                if r[i]:
                    r[m] += u * r[i]
    polys = [[Fraction(1)]]
    for m in range(n):
        # p_{m+1} = (x - h_mm) p_m - sum_i h_im * prod_{j=i+1..m} h_{j,j-1} * p_i
        prev = polys[-1]
        nxt = [Fraction(0)] + list(prev)
        for k, c in enumerate(prev):
            nxt[k] -= h[m][m] * c
        prod = Fraction(1)
        for i in range(m - 1, -1, -1):
            prod *= h[i + 1][i]
            if not prod:
                break
            coef = h[i][m] * prod
            if coef:
                for k, c in enumerate(polys[i]):
                    nxt[k] -= coef * c
        polys.append(nxt)
    return polys[-1]


def _assign(values, roots):
    """Index of the nearest root for every eigenvalue."""
    roots = np.asarray(roots)
    return [int(np.argmin(np.abs(roots - v))) for v in values]


def cluster_multiplicities(
    data: EigenData,
    tol: float = DEFAULT_CLUSTER_TOL,
    residual_fn: Callable | None = None,
) -> list:
    """Merge eigen-data entries whose coordinates lie within ``tol`` (max norm).

    Merging is single-linkage.  Entries separated by more than ``tol`` but less
    than ``10 * tol`` make the grouping ambiguous and raise ``IllConditioned``.
    """
    pts = [np.asarray(c, dtype=complex) for c in data.coords]
    k = len(pts)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            d = float(np.max(np.abs(pts[i] - pts[j]))) if pts[i].size else 0.0
            if d <= tol:
                parent[find(i)] = find(j)
            elif d < 10 * tol:
                raise IllConditioned(f"points {d:.3g} apart: ambiguous at tolerance {tol:g}")
    groups = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    out = []
    for members in sorted(groups.values()):
        p = tuple(complex(x) for x in np.mean([pts[i] for i in members], axis=0)) if pts[0].size else ()
        res = float(residual_fn(p)) if residual_fn else 0.0
        out.append(SolvedPoint(p, len(members), res))
    return out


def _residual(polys, p):
    return max((abs(g.evaluate_complex(p)) for g in polys), default=0.0)


def _newton(polys, jac, p, steps=6):
    p = np.array(p, dtype=complex)
    best = _residual(polys, p)
    for _ in range(steps):
        if best == 0.0:
            break
        f = np.array([g.evaluate_complex(p) for g in polys])
        j = np.array([[d.evaluate_complex(p) for d in row] for row in jac])
        step, *_ = np.linalg.lstsq(j, -f, rcond=None)
        q = p + step
        r = _residual(polys, q)
        if not r < best:
            break
        p, best = q, r
    return tuple(complex(x) for x in p), best


@dataclass
class _Prepared:
    polys: list
    n: int
    basis: tuple
    mats: list


def _prepare(I: Ideal, budget, order=GREVLEX) -> _Prepared:
    G = buchberger(I, order, budget)
    q = _Quotient(G)
    mats = [q.matrix(i) for i in range(I.n)] if q.basis else []
    return _Prepared(list(I.generators), I.n, q.basis, mats)


def _eigen_attempt(prep: _Prepared, coeffs, cluster_tol):
    d = len(prep.basis)
    combo = [[Fraction(0)] * d for _ in range(d)]
    for c, M in zip(coeffs, prep.mats):
        if c:
            for i, row in enumerate(M.rows):
                crow = combo[i]
                for j, x in enumerate(row):
                    if x:
                        crow[j] += c * x
    chi = charpoly(combo)
    factors = u_squarefree_decomposition(chi)
    roots, mult = [], []
    for k, s in enumerate(factors, start=1):
        if len(s) > 1:
            for r in eigen.companion_roots(s):
                roots.append(r)
                mult.append(k)
    if sum(mult) != d:
        raise IllConditioned("square-free decomposition does not account for every eigenvalue")
    numeric, scal = eigen.balance(np.array([[float(x) for x in r] for r in combo]))
    T, Z = eigen.schur(numeric)
    vals = np.diag(T)
    owner = _assign(vals, roots)
    counts = [0] * len(roots)
    for o in owner:
        counts[o] += 1
    if counts != mult:
        raise IllConditioned("numerical eigenvalues do not match exact multiplicities")
    if len(roots) > 1:
        rr = np.asarray(roots)
        gaps = np.abs(rr[:, None] - rr[None, :])
        np.fill_diagonal(gaps, np.inf)
        scale = max(1.0, float(np.abs(rr).max()))
        if float(gaps.min()) < 1e-10 * scale:
            raise IllConditioned("distinct eigenvalues of the combination are numerically indistinct")
    order = sorted(range(d), key=lambda i: (owner[i], i))
    T, Z = eigen.reorder_schur(T, Z, order)
    # same diagonal similarity as the combination, so the Schur vectors stay valid
    numeric_mats = [M.to_numpy() * scal[None, :] / scal[:, None] for M in prep.mats]
    values, coords, blocks = [], [], []
    pos = 0
    for r, k in zip(roots, mult):
        Zb = Z[:, pos:pos + k]
        xs = tuple(complex(np.trace(Zb.conj().T @ (A @ Zb)) / k) for A in numeric_mats)
        values.append(r)
        coords.append(xs)
        blocks.append(k)
        pos += k
    return values, coords, blocks


def solve_points(
    I: Ideal,
    tol: float = DEFAULT_TOL,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    seed: int = 0,
    retries: int = 6,
    budget: int = DEFAULT_BUDGET,
    order: MonomialOrder = GREVLEX,
) -> list:
    """All points of ``V(I)`` with their local multiplicities.

    Raises ``NotZeroDimensional`` for positive-dimensional ideals and
    ``IllConditioned`` when no attempt passes the residual and separation checks.
    """
    prep = _prepare(I, budget, order)
    if not prep.basis:
        return []
    polys = prep.polys
    jac = [[g.diff(i) for i in range(prep.n)] for g in polys]
    rng = random.Random(seed)
    last = None
    for _ in range(retries):
        coeffs = [0] * prep.n
        while not any(coeffs):
            coeffs = [rng.randint(-COEFF_RANGE, COEFF_RANGE) for _ in range(prep.n)]
        try:
            values, coords, blocks = _eigen_attempt(prep, coeffs, cluster_tol)
            out = []
            for xs, k in zip(coords, blocks):
                if k == 1:
                    xs, res = _newton(polys, jac, xs)
                else:
                    res = _residual(polys, xs)
                if not res <= tol:
                    raise IllConditioned(f"residual {res:.3g} exceeds {tol:g} at multiplicity-{k} point")
                out.append(SolvedPoint(xs, k, res))
            # distinct points must stay apart; otherwise the combination was not separating
            merged = cluster_multiplicities(EigenData([], [p.point for p in out]), cluster_tol)
            if len(merged) != len(out):
                raise IllConditioned("distinct eigenvalues produced coincident points")
            return sorted(out, key=_point_key)
        except IllConditioned as exc:
            last = exc
    raise IllConditioned(f"no certified decomposition after {retries} attempts: {last}")


def _point_key(p: SolvedPoint):
    return tuple((round(z.real, 9), round(z.imag, 9)) for z in p.point)


def total_multiplicity(points: Sequence[SolvedPoint]) -> int:
    return sum(p.multiplicity for p in points)
