"""Closed-form invariants: W_delta sums, phi_a derivatives, nu, Soares bounds and the global balance.

All arithmetic is exact (``Fraction``).  The sigma/tau coefficients entering
``nu_value`` are inputs: they come from a :class:`ChernCoefficientTable`, usually
loaded from a shipped preset.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Mapping, Sequence

from .errors import InconsistentBalance, MissingTableEntry
from .polycore import u_derivative, u_eval, u_mul, u_trim


@dataclass(frozen=True)
class AmbientSetup:
    n: int
    d: int
    k: int
    degW: int
    ks: tuple
    ell: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("ambient dimension must be at least 3")
        if not 2 <= self.d <= self.n:
            raise ValueError("codimension must satisfy 2 <= d <= n")
        if self.k < 0 or self.degW < 1 or self.ell < 0:
            raise ValueError("need k >= 0, deg W >= 1, ell >= 0")
        if len(self.ks) != self.d:
            raise ValueError("one degree k_i per defining equation")


@dataclass(frozen=True)
class ChernCoefficientTable:
    sigma: Mapping[int, Fraction]
    tau: Mapping[int, Fraction]
    chi: int | None = None
    name: str = ""

    def s(self, a1):
        try:
            return self.sigma[a1]
        except KeyError:
            raise MissingTableEntry(f"sigma.{a1}") from None

    def t(self, a2):
        try:
            return self.tau[a2]
        except KeyError:
            raise MissingTableEntry(f"tau.{a2}") from None


@dataclass(frozen=True)
class BalanceReport:
    sum_isolated_milnor: int
    nu_values: tuple
    N: tuple
    mu_along_W: tuple
    k: int
    n: int


def complete_symmetric_W(delta: int, ks: Sequence[int]) -> int:
    """Sum of ``k_1^i_1 ... k_d^i_d`` over exponent vectors with ``i_1 + .. + i_d = delta``."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if not ks:
        raise ValueError("need at least one degree")
    # h_delta(k_1..k_d) through the recurrence on the number of variables
    row = [1] + [0] * delta
    for k in ks:
        for j in range(1, delta + 1):
            row[j] += k * row[j - 1]
    return row[delta]


def phi_polynomial(a1: int, a2: int, setup: AmbientSetup):
    """``x^(n-d-a2) (1+x)^(d-a1)`` as a coefficient list (lowest degree first)."""
    n, d = setup.n, setup.d
    if not 0 <= a1 <= d or not 0 <= a2 <= n - d:
        raise IndexError(f"index (a1, a2) = ({a1}, {a2}) out of range")
    poly = [Fraction(0)] * (n - d - a2) + [Fraction(1)]
    for _ in range(d - a1):
        poly = u_mul(poly, [Fraction(1), Fraction(1)])
    return u_trim(poly)


def phi_derivative(a1: int, a2: int, setup: AmbientSetup, m: int):
    """``(phi_a^(m), phi_a^(m)(ell))`` with exact rational value."""
    if m < 0:
        raise ValueError("derivative order must be nonnegative")
    poly = u_derivative(phi_polynomial(a1, a2, setup), m) if m else phi_polynomial(a1, a2, setup)
    return poly, Fraction(u_eval(poly, Fraction(setup.ell)))


def nu_terms(setup: AmbientSetup, table: ChernCoefficientTable):
    """Yield ``(a1, a2, m, term)`` for every summand of nu (before the ``-deg W`` factor)."""
    n, d = setup.n, setup.d
    for a1 in range(d + 1):
        for a2 in range(n - d + 1):
            size = a1 + a2
            if size > n - d:
                continue
            for m in range(n - d - size + 1):
                delta = n - d - size - m
                assert delta >= 0
                _, val = phi_derivative(a1, a2, setup, m)
                sign = -1 if delta % 2 else 1
                term = (
                    sign
                    * val
                    / math.factorial(m)
                    * Fraction(setup.k - 1) ** m
                    * table.s(a1)
                    * table.t(a2)
                    * complete_symmetric_W(delta, setup.ks)
                )
                yield a1, a2, m, term


def nu_value(setup: AmbientSetup, table: ChernCoefficientTable) -> Fraction:
    return -setup.degW * sum((t for *_, t in nu_terms(setup, table)), Fraction(0))


def soares_bound(k: int, n: int, radial_top: bool) -> int:
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    if k == 1:
        return 1
    if radial_top:
        return sum((k - 1) ** i for i in range(1, n + 1))
    return k ** n


def projective_count(k: int, n: int) -> int:
    """``sum_{i=0}^{n} k^i``: total Milnor number of a degree-k foliation on P^n with isolated zeros."""
    return sum(k ** i for i in range(n + 1))


def global_balance(
    n: int,
    k: int,
    sum_isolated_milnor: int,
    nu_values: Sequence,
    N_known: Sequence | None = None,
) -> BalanceReport:
    """Solve ``sum mu(p_i) = sum k^i + sum nu_j - sum N_j`` for the single unknown ``N``.

    ``N_known`` lists one entry per component; exactly one may be ``None`` (the
    unknown), or all may be given, in which case the identity is only checked.
    """
    nus = [Fraction(v) for v in nu_values]
    if N_known is None:
        N_known = [None] + [0] * (len(nus) - 1) if nus else []
    if len(N_known) != len(nus):
        raise ValueError("one N entry per component")
    unknown = [i for i, x in enumerate(N_known) if x is None]
    if len(unknown) > 1:
        raise ValueError("at most one unknown N")
    total = projective_count(k, n) + sum(nus)
    Ns = [Fraction(x) if x is not None else None for x in N_known]
    if unknown:
        rest = sum(x for x in Ns if x is not None)
        Ns[unknown[0]] = total - sum_isolated_milnor - rest
    elif total - sum(Ns) != sum_isolated_milnor:
        raise InconsistentBalance(
            f"isolated sum {sum_isolated_milnor} but identity gives {total - sum(Ns)}"
        )
    for j, N in enumerate(Ns):
        if N.denominator != 1:
            raise InconsistentBalance(f"N_{j} = {N} is not an integer")
        # N_j >= 0 is the same condition as mu_j >= -nu_j
        if N < 0:
            raise InconsistentBalance(f"N_{j} = {N} is negative, so mu_{j} < -nu_{j}")
    mus = tuple(_as_int(N - nu) for N, nu in zip(Ns, nus))
    return BalanceReport(sum_isolated_milnor, tuple(nus), tuple(int(x) for x in Ns), mus, k, n)


def _as_int(x: Fraction):
    return int(x) if x.denominator == 1 else x


# -- presets ----------------------------------------------------------------


def parse_preset(text: str, name: str = "") -> ChernCoefficientTable:
    """``key = value`` records: ``sigma.<i>``, ``tau.<i>``, ``chi``; ``#`` starts a comment."""
    sigma, tau, chi = {}, {}, None
    meta = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key.startswith("sigma."):
            sigma[int(key[6:])] = Fraction(value)
        elif key.startswith("tau."):
            tau[int(key[4:])] = Fraction(value)
        elif key == "chi":
            chi = int(value)
        else:
            meta[key] = value
    return ChernCoefficientTable(sigma, tau, chi, name)


def preset_names():
    root = resources.files("milnorlab") / "presets"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".txt"))


def load_preset(name: str) -> ChernCoefficientTable:
    path = resources.files("milnorlab") / "presets" / f"{name}.txt"
    if not path.is_file():
        raise MissingTableEntry(f"no preset named {name!r}")
    return parse_preset(path.read_text(), name)


def preset_setup(name: str, m: int) -> AmbientSetup:
    """Ambient data attached to a preset for the degree parameter ``m``."""
    if name == "p3-line":
        # line in P^3 with a degree-m foliation and exceptional level m-1
        return AmbientSetup(n=3, d=2, k=m, degW=1, ks=(1, 1), ell=m - 1)
    raise MissingTableEntry(f"preset {name!r} has no ambient recipe")


def brute_force_W(delta: int, ks: Sequence[int]) -> int:
    """Enumeration oracle for :func:`complete_symmetric_W`."""
    total = 0
    for exps in itertools.product(range(delta + 1), repeat=len(ks)):
        if sum(exps) == delta:
            total += math.prod(k ** e for k, e in zip(ks, exps))
    return total
