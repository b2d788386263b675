"""Buchberger's algorithm and the ideal operations built on it.

Pair selection uses the normal strategy (smallest lcm degree first, ties broken
on the lcm exponent tuple) and the Gebauer-Moeller installation of the chain and
product criteria.  Every public entry point is a pure function of its inputs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import DimensionMismatch, NotZeroDimensional, ResourceLimitExceeded
from .polycore import Poly

DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class MonomialOrder:
    """``grevlex``, ``lex`` (optionally with a variable priority), or ``elim`` of the first ``k`` variables.

    For ``lex``, ``priority`` lists variable indices from most to least significant.
    """

    kind: str = "grevlex"
    k: int = 0
    priority: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "elim" and self.k <= 0:
            raise ValueError("elimination order needs k > 0")

    def key(self, e):
        return _key_function(self)(e)

    def __str__(self):
        if self.kind == "elim":
            return f"elim({self.k})"
        if self.kind == "lex" and self.priority is not None:
            return "lex(" + ">".join(f"z{i + 1}" for i in self.priority) + ")"
        return self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def elimination_order(k):
    return MonomialOrder("elim", k)


def _grevlex(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


@lru_cache(maxsize=None)
def _key_function(order: MonomialOrder):
    if order.kind == "grevlex":
        return _grevlex
    if order.kind == "lex":
        if order.priority is None:
            return tuple
        prio = order.priority
        return lambda e: tuple(e[i] for i in prio)
    k = order.k
    return lambda e: _grevlex(e[:k]) + _grevlex(e[k:])


@dataclass(frozen=True)
class Ideal:
    n: int
    generators: tuple = ()

    def __init__(self, n, generators=()):
        gens = []
        for g in generators:
            if not isinstance(g, Poly):
                g = Poly.constant(n, g)
            if g.n != n:
                raise DimensionMismatch(f"generator in {g.n} variables, ideal in {n}")
            if g:
                gens.append(g)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "generators", tuple(gens))

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __add__(self, other):
        return Ideal(self.n, self.generators + tuple(other))


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic Groebner basis, elements sorted by increasing leading monomial."""

    order: MonomialOrder
    n: int
    elements: tuple
    leading: tuple = field(repr=False)
    stats: dict = field(default_factory=dict, compare=False, repr=False)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def is_unit(self):
        return any(not any(m) for m in self.leading)

    def ideal(self):
        return Ideal(self.n, self.elements)


def leading_monomial(p: Poly, order: MonomialOrder = GREVLEX):
    key = _key_function(order)
    return max(p.terms, key=key)


def leading_term(p: Poly, order: MonomialOrder = GREVLEX):
    m = leading_monomial(p, order)
    return m, p.terms[m]


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _disjoint(a, b):
    return all(not (x and y) for x, y in zip(a, b))


class _Elem:
    __slots__ = ("lm", "tail", "poly")

    def __init__(self, lm, terms):
        self.lm = lm
        self.tail = [(e, c) for e, c in terms.items() if e != lm]
        self.poly = terms


def _reduce(terms, basis, key, tail_only_from=None):
    """Full reduction of ``terms`` (a dict) by ``basis`` (list of monic _Elem)."""
    p = dict(terms)
    heap = []
    for e in p:
        heap.append((tuple(-x for x in key(e)), e))
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = p.pop(m, None)
        if c is None:
            continue
        for g in basis:
            lm = g.lm
            if all(x <= y for x, y in zip(lm, m)):
                break
        else:
            rem[m] = c
            continue
        q = tuple(y - x for x, y in zip(lm, m))
        for e, a in g.tail:
            f = tuple(x + y for x, y in zip(e, q))
            v = p.get(f)
            if v is None:
                p[f] = -c * a
                heapq.heappush(heap, (tuple(-x for x in key(f)), f))
            else:
                s = v - c * a
                if s:
                    p[f] = s
                else:
                    del p[f]
    return rem


def _monic(terms, key):
    if not terms:
        return None
    lm = max(terms, key=key)
    lc = terms[lm]
    if lc != 1:
        terms = {e: c / lc for e, c in terms.items()}
    return _Elem(lm, terms)


def _spoly(f: _Elem, g: _Elem):
    lcm = _lcm(f.lm, g.lm)
    qf = tuple(a - b for a, b in zip(lcm, f.lm))
    qg = tuple(a - b for a, b in zip(lcm, g.lm))
    out = {}
    for e, c in f.tail:
        out[tuple(a + b for a, b in zip(e, qf))] = c
    for e, c in g.tail:
        k = tuple(a + b for a, b in zip(e, qg))
        s = out.get(k, 0) - c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def s_polynomial(f: Poly, g: Poly, order: MonomialOrder = GREVLEX) -> Poly:
    key = _key_function(order)
    ef, eg = _monic(dict(f.terms), key), _monic(dict(g.terms), key)
    return Poly(f.n, _spoly(ef, eg))


def buchberger(ideal: Ideal, order: MonomialOrder = GREVLEX, budget: int = DEFAULT_BUDGET) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal``.

    Raises :class:`ResourceLimitExceeded` once more than ``budget`` S-pairs
    have been reduced.
    """
    n = ideal.n
    key = _key_function(order)
    elems: list[_Elem] = []
    active: list[int] = []
    pairs: list = []
    pair_set: set = set()
    reductions = 0

    def pair_key(i, j):
        lcm = _lcm(elems[i].lm, elems[j].lm)
        return (sum(lcm), lcm, i, j)

    def install(h_terms):
        h = _monic(h_terms, key)
        elems.append(h)
        hi = len(elems) - 1
        hlm = h.lm
        # Gebauer-Moeller update
        cand = [(hi, g) for g in active]
        keep = []
        for idx, (_, g1) in enumerate(cand):
            l1 = _lcm(hlm, elems[g1].lm)
            if _disjoint(hlm, elems[g1].lm):
                keep.append(g1)
                continue
            dominated = False
            for _, g2 in cand[idx + 1:]:
                if _divides(_lcm(hlm, elems[g2].lm), l1):
                    dominated = True
                    break
            if not dominated:
                for g2 in keep:
                    if _divides(_lcm(hlm, elems[g2].lm), l1):
                        dominated = True
                        break
            if not dominated:
                keep.append(g1)
        new_pairs = [g for g in keep if not _disjoint(hlm, elems[g].lm)]
        # prune old pairs via the chain criterion
        stale = []
        for (i, j) in pair_set:
            lij = _lcm(elems[i].lm, elems[j].lm)
            if (
                _divides(hlm, lij)
                and _lcm(elems[i].lm, hlm) != lij
                and _lcm(hlm, elems[j].lm) != lij
            ):
                stale.append((i, j))
        for p in stale:
            pair_set.discard(p)
        for g in new_pairs:
            i, j = (g, hi) if g < hi else (hi, g)
            pair_set.add((i, j))
            heapq.heappush(pairs, pair_key(i, j))
        active[:] = [g for g in active if not _divides(hlm, elems[g].lm)] + [hi]

    # interreduce the input so the start is small
    start = []
    for g in ideal.generators:
        t = dict(g.terms)
        if t:
            start.append(t)
    start.sort(key=lambda t: key(max(t, key=key)))
    for t in start:
        r = _reduce(t, [elems[i] for i in active], key)
        if r:
            install(r)

    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        if (i, j) not in pair_set:
            continue
        pair_set.discard((i, j))
        reductions += 1
        if reductions > budget:
            raise ResourceLimitExceeded(f"Buchberger budget of {budget} pair reductions exhausted")
        s = _spoly(elems[i], elems[j])
        r = _reduce(s, [elems[g] for g in active], key)
        if r:
            install(r)

    # reduce: drop redundant leading terms, interreduce tails
    basis = [elems[g] for g in active]
    basis = [b for b in basis if not any(o is not b and _divides(o.lm, b.lm) for o in basis)]
    basis.sort(key=lambda b: key(b.lm))
    final = []
    for b in basis:
        others = [o for o in basis if o is not b]
        tail = _reduce(dict(b.tail), others, key)
        tail[b.lm] = Fraction(1)
        final.append(Poly(n, tail, _trusted=True))
    return GroebnerBasis(
        order,
        n,
        tuple(final),
        tuple(b.lm for b in basis),
        {"pair_reductions": reductions},
    )


def _elems_of(G: GroebnerBasis):
    key = _key_function(G.order)
    return [_Elem(lm, g.terms) for lm, g in zip(G.leading, G.elements)], key


def normal_form(p: Poly, G: GroebnerBasis) -> Poly:
    """Remainder of ``p`` modulo ``G``; zero exactly when ``p`` lies in the ideal."""
    if p.n != G.n:
        raise DimensionMismatch(f"polynomial in {p.n} variables, basis in {G.n}")
    elems, key = _elems_of(G)
    return Poly(p.n, _reduce(dict(p.terms), elems, key), _trusted=True)


def contains(G: GroebnerBasis, p: Poly) -> bool:
    return normal_form(p, G).is_zero()


def ideal_contains(big: Ideal, small: Ideal, budget=DEFAULT_BUDGET) -> bool:
    G = buchberger(big, GREVLEX, budget)
    return all(contains(G, g) for g in small.generators)


def ideals_equal(a: Ideal, b: Ideal, budget=DEFAULT_BUDGET) -> bool:
    return buchberger(a, GREVLEX, budget).elements == buchberger(b, GREVLEX, budget).elements


def eliminate(ideal: Ideal, first_k: int, budget: int = DEFAULT_BUDGET) -> Ideal:
    """Generators of the intersection with the ring of the last ``n - first_k`` variables.

    The result stays in the ambient ``n`` variables (the first ``first_k`` never occur).
    """
    if not 0 < first_k < ideal.n:
        raise ValueError(f"first_k must lie strictly between 0 and {ideal.n}")
    G = buchberger(ideal, elimination_order(first_k), budget)
    keep = [g for g in G.elements if all(not any(e[:first_k]) for e in g.terms)]
    return Ideal(ideal.n, keep)


def saturate(ideal: Ideal, g: Poly, budget: int = DEFAULT_BUDGET) -> Ideal:
    """``I : g^oo`` through one auxiliary variable ``y`` and elimination of ``y``."""
    if g.is_zero():
        raise ValueError("cannot saturate by the zero polynomial")
    n = ideal.n
    pos = list(range(1, n + 1))
    lifted = [h.embed(n + 1, pos) for h in ideal.generators]
    y = Poly.var(n + 1, 0)
    lifted.append(1 - y * g.embed(n + 1, pos))
    elim = eliminate(Ideal(n + 1, lifted), 1, budget)
    down = []
    for h in elim.generators:
        down.append(Poly(n, {e[1:]: c for e, c in h.terms.items()}, _trusted=True))
    return Ideal(n, down)


def is_zero_dimensional(G: GroebnerBasis) -> bool:
    if G.is_unit():
        return True
    pure = set()
    for m in G.leading:
        nz = [i for i, x in enumerate(m) if x]
        if len(nz) == 1:
            pure.add(nz[0])
    return len(pure) == G.n


def quotient_basis(G: GroebnerBasis) -> list:
    """Standard monomials (the staircase) of a zero-dimensional basis, sorted grevlex ascending."""
    if not G.elements:
        raise NotZeroDimensional("zero ideal has an infinite staircase")
    if not is_zero_dimensional(G):
        raise NotZeroDimensional("some variable has no pure-power leading monomial")
    if G.is_unit():
        return []
    n = G.n
    lead = G.leading
    seen = {(0,) * n}
    frontier = [(0,) * n]
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(n):
                e = list(m)
                e[i] += 1
                e = tuple(e)
                if e in seen or any(_divides(L, e) for L in lead):
                    continue
                seen.add(e)
                nxt.append(e)
        frontier = nxt
    return sorted(seen, key=_grevlex)


def multiplicity_dim(ideal: Ideal, budget: int = DEFAULT_BUDGET) -> int:
    """Vector-space dimension of the quotient ring (total multiplicity of the points)."""
    return len(quotient_basis(buchberger(ideal, GREVLEX, budget)))


def coordinates_in_basis(p: Poly, basis: Sequence[tuple]):
    """Coefficient vector of a reduced polynomial in the staircase basis."""
    index = {m: i for i, m in enumerate(basis)}
    vec = [Fraction(0)] * len(basis)
    for e, c in p.terms.items():
        vec[index[e]] = c
    return vec
