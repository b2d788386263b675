"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a map from exponent tuples to nonzero :class:`fractions.Fraction`
coefficients.  Values are immutable once built and may be shared freely.

Text form::

    z1^2 + 3/2*z2 - (z1 + z3)^3

Variables are ``z1 .. zn``; literals are nonnegative integers or ``p/q``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch, PolySyntaxError, VariableRangeError

Rational = Fraction
Monomial = tuple  # tuple[int, ...]


class _MinusInfinity:
    """Degree of the zero polynomial.  Compares below every integer, refuses arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "MINUS_INFINITY"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("milnorlab.MINUS_INFINITY")


MINUS_INFINITY = _MinusInfinity()


def as_rational(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, _RationalABC)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


def grevlex_key(e):
    """Sort key: larger key means larger monomial in graded reverse lex."""
    return (sum(e),) + tuple(-x for x in reversed(e))


class Poly:
    """Polynomial in ``n`` variables over the rationals."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[tuple, object] | None = None, *, _trusted=False):
        self.n = n
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for e, c in (terms or {}).items():
                e = tuple(int(x) for x in e)
                if len(e) != n or any(x < 0 for x in e):
                    raise DimensionMismatch(f"exponent {e} invalid for n={n}")
                c = as_rational(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
            self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n):
        return cls(n, {}, _trusted=True)

    @classmethod
    def constant(cls, n, c):
        c = as_rational(c)
        return cls(n, {(0,) * n: c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, n, i):
        if not 0 <= i < n:
            raise VariableRangeError(f"variable index {i} out of range for n={n}")
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): Fraction(1)}, _trusted=True)

    @classmethod
    def gens(cls, n):
        return [cls.var(n, i) for i in range(n)]

    @classmethod
    def monomial(cls, e, c=1):
        c = as_rational(c)
        return cls(len(e), {tuple(e): c} if c else {}, _trusted=True)

    # -- basic queries ------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    @property
    def degree(self):
        if not self.terms:
            return MINUS_INFINITY
        return max(sum(e) for e in self.terms)

    def degree_in(self, i):
        if not self.terms:
            return MINUS_INFINITY
        return max(e[i] for e in self.terms)

    def order(self):
        """Lowest total degree of a term (the order at the origin)."""
        if not self.terms:
            return MINUS_INFINITY
        return min(sum(e) for e in self.terms)

    def coeff(self, e) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def constant_term(self):
        return self.coeff((0,) * self.n)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return sorted(used)

    def homogeneous_part(self, d):
        return Poly(self.n, {e: c for e, c in self.terms.items() if sum(e) == d}, _trusted=True)

    def max_abs_coeff(self):
        return max((abs(c) for c in self.terms.values()), default=Fraction(0))

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.n != self.n:
                raise DimensionMismatch(f"ambient dimensions {self.n} and {other.n} differ")
            return other
        return Poly.constant(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.n, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = as_rational(c)
        if not c:
            return Poly.zero(self.n)
        return Poly(self.n, {e: c * a for e, a in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly(self.n, out, _trusted=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, e, c=1):
        c = as_rational(c)
        return Poly(
            self.n,
            {tuple(a + b for a, b in zip(m, e)): c * a_ for m, a_ in self.terms.items()},
            _trusted=True,
        )

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, _RationalABC)):
            return self.terms == Poly.constant(self.n, other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and composition ---------------------------------------
    def diff(self, i):
        """Formal partial derivative with respect to variable ``i`` (0-based)."""
        if not 0 <= i < self.n:
            raise VariableRangeError(f"variable index {i} out of range for n={self.n}")
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Poly(self.n, out, _trusted=True)

    def subs(self, images: Sequence["Poly"]):
        """Compose: replace variable i by ``images[i]``.  Images share one ambient dimension."""
        if len(images) != self.n:
            raise DimensionMismatch(f"need {self.n} images, got {len(images)}")
        m = images[0].n if images else 0
        if any(g.n != m for g in images):
            raise DimensionMismatch("images live in different ambient dimensions")
        powers = [dict() for _ in range(self.n)]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = images[i] ** k
            return cache[k]

        acc = {}
        for e, c in self.terms.items():
            term = Poly.constant(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for f, a in term.terms.items():
                s = acc.get(f, 0) + a
                if s:
                    acc[f] = s
                else:
                    acc.pop(f, None)
        return Poly(m, acc, _trusted=True)

    def embed(self, m, positions):
        """Re-home into ``m`` variables, sending variable i to ``positions[i]``."""
        out = {}
        for e, c in self.terms.items():
            f = [0] * m
            for i, k in enumerate(e):
                f[positions[i]] += k
            out[tuple(f)] = c
        return Poly(m, out, _trusted=True)

    def evaluate(self, point):
        """Evaluate at a point.  Exact when every coordinate is an int or Fraction."""
        if len(point) != self.n:
            raise DimensionMismatch(f"point has {len(point)} coordinates, need {self.n}")
        exact = all(isinstance(x, (int, _RationalABC)) for x in point)
        zero = Fraction(0) if exact else 0j
        if not self.terms:
            return zero
        point = [Fraction(x) if exact else complex(x) for x in point]
        maxdeg = [0] * self.n
        for e in self.terms:
            for i, k in enumerate(e):
                if k > maxdeg[i]:
                    maxdeg[i] = k
        table = []
        for i, x in enumerate(point):
            row = [Fraction(1) if exact else 1 + 0j]
            for _ in range(maxdeg[i]):
                row.append(row[-1] * x)
            table.append(row)
        total = zero
        for e, c in self.terms.items():
            v = c if exact else complex(c)
            for i, k in enumerate(e):
                if k:
                    v = v * table[i][k]
            total += v
        return total

    def evaluate_complex(self, point) -> complex:
        return complex(self.evaluate([complex(x) for x in point]))

    # -- text -------------------------------------------------------------
    def sorted_terms(self, key=grevlex_key):
        return sorted(self.terms.items(), key=lambda kv: key(kv[0]), reverse=True)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({self.n}, {format_poly(self)!r})"


def format_monomial(e):
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"z{i + 1}")
        elif k > 1:
            parts.append(f"z{i + 1}^{k}")
    return "*".join(parts)


def format_poly(p: Poly, key=grevlex_key) -> str:
    if not p.terms:
        return "0"
    out = []
    for e, c in p.sorted_terms(key):
        mon = format_monomial(e)
        if not mon:
            s = str(c)
        elif c == 1:
            s = mon
        elif c == -1:
            s = "-" + mon
        else:
            s = f"{c}*{mon}"
        if not out:
            out.append(s)
        elif s.startswith("-"):
            out.append(" - " + s[1:])
        else:
            out.append(" + " + s)
    return "".join(out)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|z(\d+)|([-+*^()/]))")


def _tokenize(text):
    pos = 0
    tokens = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", len(text[:pos].encode()))
        start = m.start(m.lastindex)
        offset = len(text[:start].encode())
        if m.group(1) is not None:
            tokens.append(("num", int(m.group(1)), offset))
        elif m.group(2) is not None:
            tokens.append(("var", int(m.group(2)), offset))
        else:
            tokens.append((m.group(3), None, offset))
        pos = m.end()
    tokens.append(("end", None, len(text.encode())))
    return tokens


class _Parser:
    def __init__(self, text, n):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n

    def peek(self):
        return self.tokens[self.i][0]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            want = "number" if kind == "num" else repr(kind)
            raise PolySyntaxError(f"expected {want}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        p = self.expr()
        if self.peek() != "end":
            raise PolySyntaxError(f"unexpected token {self.peek()!r}", self.tokens[self.i][2])
        return p

    def expr(self):
        p = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while self.peek() == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self):
        if self.peek() == "-":
            self.take()
            return -self.factor()
        if self.peek() == "+":
            self.take()
            return self.factor()
        base = self.atom()
        if self.peek() == "^":
            self.take()
            k = self.take("num")[1]
            base = base ** k
        return base

    def atom(self):
        kind, val, off = self.tokens[self.i]
        if kind == "num":
            self.take()
            if self.peek() == "/":
                self.take()
                den = self.take("num")
                if den[1] == 0:
                    raise PolySyntaxError("zero denominator", den[2])
                return Poly.constant(self.n, Fraction(val, den[1]))
            return Poly.constant(self.n, val)
        if kind == "var":
            self.take()
            if not 1 <= val <= self.n:
                raise VariableRangeError(f"variable z{val} out of range for n={self.n} (at byte {off})")
            return Poly.var(self.n, val - 1)
        if kind == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        if kind == "end":
            raise PolySyntaxError("unexpected end of input", off)
        raise PolySyntaxError(f"unexpected token {kind!r}", off)


def parse_poly(text: str, n: int) -> Poly:
    """Parse polynomial text in ``n`` variables."""
    return _Parser(text, n).parse()


def multiply(p: Poly, q: Poly) -> Poly:
    return p * q


def differentiate(p: Poly, var: int) -> Poly:
    return p.diff(var)


def substitute(p: Poly, images: Sequence[Poly]) -> Poly:
    return p.subs(images)


def evaluate_complex(p: Poly, point) -> complex:
    return p.evaluate_complex(point)


# ---------------------------------------------------------------------------
# Univariate helpers.  Dense coefficient lists, lowest degree first.

def u_trim(a):
    a = [as_rational(c) for c in a]
    while a and not a[-1]:
        a.pop()
    return a


def u_from_poly(p: Poly, var=0):
    others = [i for i in range(p.n) if i != var]
    if any(e[i] for e in p.terms for i in others):
        raise ValueError("polynomial is not univariate in the requested variable")
    out = [Fraction(0)] * (p.degree_in(var) + 1 if p.terms else 0)
    for e, c in p.terms.items():
        out[e[var]] = c
    return u_trim(out)


def u_to_poly(a, n=1, var=0):
    terms = {}
    for k, c in enumerate(a):
        if c:
            e = [0] * n
            e[var] = k
            terms[tuple(e)] = c
    return Poly(n, terms)


def u_degree(a):
    a = u_trim(a)
    return len(a) - 1 if a else MINUS_INFINITY


def u_eval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def u_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return u_trim(out)


def u_add(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] += y
    return u_trim(out)


def u_scale(a, c):
    return u_trim([c * x for x in a])


def u_divmod(a, b):
    a, b = u_trim(a), u_trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        f = r[-1] / lead
        q[k] = f
        for i, y in enumerate(b):
            r[i + k] -= f * y
        r = u_trim(r)
    return u_trim(q), r


def u_monic(a):
    a = u_trim(a)
    return [c / a[-1] for c in a] if a else []


def _primitive_int(a):
    """Integer coefficient list with content 1 and positive leading coefficient."""
    den = 1
    for c in a:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return []
    ints = [x // g for x in ints]
    return [-x for x in ints] if ints[-1] < 0 else ints


def _int_prem(a, b):
    """Pseudo-remainder of integer lists (no content removal)."""
    r = list(a)
    lb = b[-1]
    db = len(b) - 1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        k = len(r) - 1 - db
        r = [x * lb for x in r]
        for i, y in enumerate(b):
            r[i + k] -= lr * y
        while r and r[-1] == 0:
            r.pop()
    return r


def u_gcd(a, b):
    """Monic gcd over the rationals; gcd(0, 0) = 0.

    Primitive pseudo-remainder sequence over the integers, which keeps
    coefficient growth in check compared with plain Euclid over Q.
    """
    a, b = u_trim(a), u_trim(b)
    if not a or not b:
        return u_monic(a or b)
    x, y = _primitive_int(a), _primitive_int(b)
    if len(x) < len(y):
        x, y = y, x
    while y:
        r = _int_prem(x, y)
        x, y = y, (_primitive_int([Fraction(c) for c in r]) if r else [])
    return u_monic([Fraction(c) for c in x])


def _mod_gcd_degree(a, b, p):
    """Degree of gcd(a mod p, b mod p) for integer lists, or None if p divides a leading coefficient."""
    a = [x % p for x in a]
    b = [x % p for x in b]
    if a[-1] == 0 or b[-1] == 0:
        return None
    while b and b[-1] == 0:
        b.pop()
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            f = a[-1] * inv % p
            k = len(a) - len(b)
            for i, y in enumerate(b):
                a[i + k] = (a[i + k] - f * y) % p
            while a and a[-1] == 0:
                a.pop()
            if not a:
                break
        a, b = b, a
    return len(a) - 1


_SQF_PRIMES = (2147483647, 2305843009213693951, 1000000007)


def u_is_squarefree(a):
    """True when ``a`` has no repeated complex root.

    A trivial gcd with the derivative modulo a prime not dividing the leading
    coefficient certifies the answer; otherwise the exact gcd decides.
    """
    a = u_trim(a)
    if len(a) <= 2:
        return True
    x = _primitive_int(a)
    dx = [i * c for i, c in enumerate(x)][1:]
    for p in _SQF_PRIMES:
        d = _mod_gcd_degree(x, dx, p)
        if d == 0:
            return True
    return len(u_gcd(a, u_derivative(a))) <= 1


def u_derivative(a, k=1):
    a = u_trim(a)
    for _ in range(k):
        a = u_trim([i * c for i, c in enumerate(a)][1:])
    return a


def u_squarefree_decomposition(a):
    """Yun's algorithm: monic ``[s1, s2, ...]`` with ``a = lc * prod s_k^k``."""
    a = u_monic(a)
    if len(a) <= 1:
        return []
    if u_is_squarefree(a):
        return [a]
    out = []
    da = u_derivative(a)
    g = u_gcd(a, da)
    w = u_divmod(a, g)[0]
    y = u_divmod(da, g)[0]
    z = u_add(y, u_scale(u_derivative(w), -1))
    while len(w) > 1:
        s = u_gcd(w, z)
        out.append(u_monic(s))
        w = u_divmod(w, s)[0]
        y = u_divmod(z, s)[0]
        z = u_add(y, u_scale(u_derivative(w), -1))
    while out and len(out[-1]) <= 1:
        out.pop()
    return out


def u_format(a, var="x"):
    a = u_trim(a)
    if not a:
        return "0"
    p = u_to_poly(a)
    return format_poly(p).replace("z1", var)
