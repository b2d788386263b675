"""Deformation families, their singular points along a t-schedule, and limit classification.

A family is ``X_t = base - t * direction``.  At each scheduled ``t`` the
singular ideal is solved exactly-then-numerically (:mod:`milnorlab.solver`);
points are split into unit copies, matched across consecutive ``t`` by greedy
nearest neighbour in the chordal metric, regrouped into trajectories and
classified as ``toW``, ``toIsolated`` or ``toInfinity``.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .errors import AmbiguousMatching, DimensionMismatch, NotTotallySimple
from .foliation import (
    CompleteIntersection,
    VectorField,
    jacobian_minors,
    singular_ideal,
    straighten,
    totally_simple,
)
from .groebner import DEFAULT_BUDGET, Ideal
from .polycore import Poly, as_rational
from .solver import DEFAULT_CLUSTER_TOL, DEFAULT_TOL, SolvedPoint, solve_points

TO_W = "toW"
TO_ISOLATED = "toIsolated"
TO_INFINITY = "toInfinity"

DEFAULT_SCHEDULE = (Fraction(1, 100), Fraction(1, 1000), Fraction(1, 10000))
DEFAULT_R_ESC = 1e6
DEFAULT_EPS_W = 1e-3


def perturb(base: VectorField, direction: VectorField, t) -> VectorField:
    """``base - t * direction`` with exact rational ``t``."""
    if base.n != direction.n:
        raise DimensionMismatch("base and direction live in different dimensions")
    t = as_rational(t)
    if not t:
        return base
    return VectorField(base.n, tuple(b - d.scale(t) for b, d in zip(base, direction)))


@dataclass(frozen=True)
class DeformationFamily:
    base: VectorField
    direction: VectorField
    description: str = ""
    W: CompleteIntersection | None = None
    region_radius: float | None = None

    def __post_init__(self):
        if self.base.n != self.direction.n:
            raise DimensionMismatch("base and direction live in different dimensions")

    @property
    def n(self):
        return self.base.n

    def at(self, t) -> VectorField:
        return perturb(self.base, self.direction, t)


@dataclass(frozen=True)
class TSchedule:
    ts: tuple = DEFAULT_SCHEDULE
    r_esc: float = DEFAULT_R_ESC
    eps_w: float = DEFAULT_EPS_W

    def __post_init__(self):
        ts = tuple(as_rational(t) for t in self.ts)
        if len(ts) < 3:
            raise ValueError("a schedule needs at least three values of t")
        if any(t <= 0 for t in ts):
            raise ValueError("scheduled t must be positive")
        if any(a <= b for a, b in zip(ts, ts[1:])):
            raise ValueError("scheduled t must be strictly decreasing")
        object.__setattr__(self, "ts", ts)

    @classmethod
    def parse(cls, text: str, **kw):
        return cls(tuple(Fraction(s.strip()) for s in text.split(",") if s.strip()), **kw)


@dataclass(frozen=True)
class Trajectory:
    points: tuple          # one point per scheduled t
    multiplicity: int
    classification: str
    limit: tuple | None
    in_region: bool = True
    diagnostics: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class BasinReport:
    family: str
    seed: int
    schedule: TSchedule
    tolerances: dict
    per_t: tuple            # ((t, (SolvedPoint, ...)), ...)
    trajectories: tuple
    mu_along_W: int
    region_radius: float | None = None
    config: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "version": __version__,
            "family": self.family,
            "seed": self.seed,
            "schedule": {
                "t": [str(t) for t in self.schedule.ts],
                "r_esc": self.schedule.r_esc,
                "eps_w": self.schedule.eps_w,
                "region_radius": self.region_radius,
            },
            "tolerances": dict(self.tolerances),
            "norm": "max_abs_coefficient",
            "config": dict(self.config),
            "per_t": [
                {
                    "t": str(t),
                    "points": [
                        {"coords": _encode_point(p.point), "multiplicity": p.multiplicity, "residual": _num(p.residual)}
                        for p in pts
                    ],
                }
                for t, pts in self.per_t
            ],
            "trajectories": [
                {
                    "classification": tr.classification,
                    "limit": _encode_point(tr.limit) if tr.limit is not None else None,
                    "multiplicity": tr.multiplicity,
                    "in_region": tr.in_region,
                }
                for tr in self.trajectories
            ],
            "mu_along_W": self.mu_along_W,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def count(self, classification: str, in_region_only=False) -> int:
        return sum(
            tr.multiplicity
            for tr in self.trajectories
            if tr.classification == classification and (tr.in_region or not in_region_only)
        )


def _num(x: float) -> float:
    return float(f"{x:.12g}")


def _encode_point(p):
    return [[_num(z.real), _num(z.imag)] for z in p]


# -- solving along the schedule ---------------------------------------------


def _solve_one(args):
    X, tol, cluster_tol, seed, budget = args
    return solve_points(singular_ideal(X), tol=tol, cluster_tol=cluster_tol, seed=seed, budget=budget)


def solve_schedule(family, sched, tol, cluster_tol, seed, budget=DEFAULT_BUDGET, workers=None):
    jobs = [(family.at(t), tol, cluster_tol, seed, budget) for t in sched.ts]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_solve_one, jobs))
    return [_solve_one(j) for j in jobs]


# -- matching ---------------------------------------------------------------


def _lift(p):
    v = np.append(np.asarray(p, dtype=complex), 1.0)
    return v / np.linalg.norm(v)


def chordal(p, q) -> float:
    """Distance after the lift ``p -> (p, 1) / |(p, 1)|``; bounded, and small for far points on a common ray."""
    return float(np.linalg.norm(_lift(p) - _lift(q)))


def _expand(points: Sequence[SolvedPoint]):
    out = []
    for idx, p in enumerate(points):
        out.extend([idx] * p.multiplicity)
    return out


def match_copies(prev: Sequence[SolvedPoint], nxt: Sequence[SolvedPoint], ambiguity: float | None = None):
    """Greedy nearest-neighbour matching of unit copies; returns ``{(i, j): copies}``.

    Raises ``AmbiguousMatching`` when total multiplicities differ.  With
    ``ambiguity`` set, also raises when the runner-up target is closer than
    ``ambiguity`` times the chosen distance.  Points collapsing onto a common
    limit routinely trip that test, so it is off by default.
    """
    a = _expand(prev)
    b = _expand(nxt)
    if len(a) != len(b):
        raise AmbiguousMatching(f"multiplicity not conserved: {len(a)} vs {len(b)}")
    lifted_prev = [_lift(p.point) for p in prev]
    lifted_next = [_lift(p.point) for p in nxt]
    dist = np.array([[np.linalg.norm(x - y) for y in lifted_next] for x in lifted_prev]).reshape(len(prev), len(nxt))
    cap_a = [p.multiplicity for p in prev]
    cap_b = [p.multiplicity for p in nxt]
    pairs = sorted(
        ((dist[i, j], i, j) for i in range(len(prev)) for j in range(len(nxt))),
        key=lambda x: (x[0], x[1], x[2]),
    )
    flow = {}
    for dij, i, j in pairs:
        if cap_a[i] == 0 or cap_b[j] == 0:
            continue
        k = min(cap_a[i], cap_b[j])
        # runner-up among still-open targets for this source
        others = [dist[i, jj] for jj in range(len(nxt)) if jj != j and cap_b[jj] > 0]
        if ambiguity and others and dij > 1e-9 and min(others) < ambiguity * dij:
            raise AmbiguousMatching(f"nearest neighbours {dij:.3g} and {min(others):.3g} are indistinct")
        flow[(i, j)] = flow.get((i, j), 0) + k
        cap_a[i] -= k
        cap_b[j] -= k
    return flow


def _trajectories(per_t, ambiguity=None):
    """Chains of unit copies through the schedule, grouped by identical paths."""
    first = per_t[0]
    chains = [[idx] for idx in _expand(first)]
    for r in range(1, len(per_t)):
        flow = match_copies(per_t[r - 1], per_t[r], ambiguity)
        budget = dict(flow)
        for ch in chains:
            i = ch[-1]
            j = next(jj for (ii, jj), k in sorted(budget.items()) if ii == i and k > 0)
            budget[(i, j)] -= 1
            ch.append(j)
    groups = {}
    for ch in chains:
        groups[tuple(ch)] = groups.get(tuple(ch), 0) + 1
    out = []
    for path, mult in sorted(groups.items()):
        pts = tuple(per_t[r][idx].point for r, idx in enumerate(path))
        out.append((pts, mult))
    return out


# -- classification ---------------------------------------------------------


def _ratio(d1, d2):
    den = np.vdot(d1, d1)
    if abs(den) == 0.0:
        return None
    return np.vdot(d1, d2) / den


def classify_path(points, sched: TSchedule, W: CompleteIntersection | None, region_radius=None):
    """Return ``(classification, limit, in_region, diagnostics)`` for one trajectory."""
    P = [np.asarray(p, dtype=complex) for p in points]
    norms = [float(np.linalg.norm(p)) for p in P]
    d1 = P[-2] - P[-3]
    d2 = P[-1] - P[-2]
    scale = 1.0 + norms[-1]
    rho = _ratio(d1, d2)
    diag = {"norms": norms, "rho": None if rho is None else abs(rho)}
    growing = all(b > a for a, b in zip(norms, norms[1:]))
    if norms[-1] > sched.r_esc or (growing and rho is not None and abs(rho) >= 1.0 and np.linalg.norm(d2) > 1e-9 * scale):
        return TO_INFINITY, None, False, diag
    if np.linalg.norm(d2) <= 1e-12 * scale or rho is None:
        limit = P[-1]
    elif abs(rho) < 1.0:
        limit = P[-1] + d2 * (rho / (1.0 - rho))
    else:
        limit = P[-1]
    limit = tuple(complex(z) for z in limit)
    in_region = region_radius is None or float(np.linalg.norm(np.asarray(limit))) <= region_radius
    if W is not None:
        res = [W.residual(p) for p in points]
        diag["w_residual"] = res
        res_limit = W.residual(limit)
        decreasing = all(b <= a * (1 + 1e-9) for a, b in zip(res, res[1:]))
        if decreasing and (res[-1] <= sched.eps_w or res_limit <= sched.eps_w):
            return TO_W, limit, in_region, diag
    return TO_ISOLATED, limit, in_region, diag


def classify_limits(
    family: DeformationFamily,
    sched: TSchedule | None = None,
    W: CompleteIntersection | None = None,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    budget: int = DEFAULT_BUDGET,
    workers: int | None = None,
    name: str = "",
    config: dict | None = None,
    ambiguity: float | None = None,
) -> BasinReport:
    sched = sched or TSchedule()
    W = W if W is not None else family.W
    solved = solve_schedule(family, sched, tol, cluster_tol, seed, budget, workers)
    per_t = tuple(zip(sched.ts, (tuple(s) for s in solved)))
    trajectories = []
    if solved and solved[0]:
        for pts, mult in _trajectories(solved, ambiguity):
            cls, limit, in_region, diag = classify_path(pts, sched, W, family.region_radius)
            trajectories.append(Trajectory(pts, mult, cls, limit, in_region, diag))
    elif any(solved):
        raise AmbiguousMatching("points appear at smaller t with none at the largest t")
    mu = sum(tr.multiplicity for tr in trajectories if tr.classification == TO_W and tr.in_region)
    return BasinReport(
        family=name or family.description,
        seed=seed,
        schedule=sched,
        tolerances={"residual": tol, "cluster": cluster_tol},
        per_t=per_t,
        trajectories=tuple(trajectories),
        mu_along_W=mu,
        region_radius=family.region_radius,
        config=dict(config or {}),
    )


def limiting_milnor(report: BasinReport) -> int:
    """Observed multiplicity converging to W at the smallest scheduled t."""
    return report.mu_along_W


def verify_lower_bound(report: BasinReport, N: int):
    if N < 0:
        raise ValueError("N must be nonnegative")
    mu = limiting_milnor(report)
    return mu >= N, mu - N


def check_stability(family, sched: TSchedule, W=None, seed=0, **kw):
    """Classify on the schedule and on its prefix; any reclassification raises ``AmbiguousMatching``."""
    if len(sched.ts) < 4:
        raise ValueError("stability check needs at least four scheduled values")
    full = classify_limits(family, sched, W, seed, **kw)
    prefix = TSchedule(sched.ts[:-1], sched.r_esc, sched.eps_w)
    short = classify_limits(family, prefix, W, seed, **kw)
    a = sorted((tr.classification, tr.multiplicity) for tr in full.trajectories)
    b = sorted((tr.classification, tr.multiplicity) for tr in short.trajectories)
    if a != b:
        raise AmbiguousMatching(f"classification changed under refinement: {b} -> {a}")
    return full


# -- totally simple construction --------------------------------------------


def totally_simple_perturbation(
    X: VectorField,
    W: CompleteIntersection,
    eps: Sequence,
    budget: int = DEFAULT_BUDGET,
) -> DeformationFamily:
    """Translation family ``Y + t (0, .., eps)`` in straightened coordinates.

    The constants go into the components complementary to a d x d block of the
    Jacobian in the normal variables whose determinant does not vanish
    identically on W.  When that determinant restricted to W is a nonzero
    constant the family has no zeros at all near W; otherwise the guarantee
    holds away from the zeros of the determinant, which the description records.
    """
    if not totally_simple(X, W, budget):
        raise NotTotallySimple("no invertible Jacobian minor along W")
    n, d = X.n, W.d
    eps = [as_rational(e) for e in eps]
    if len(eps) != n - d or any(e == 0 for e in eps):
        raise ValueError(f"need {n - d} nonzero constants")
    Y, W0 = straighten(W, X)
    normal_cols = tuple(range(d))
    on_w = [Poly.zero(n)] * d + list(Poly.gens(n)[d:])
    best = None
    for (rows, cols), det in jacobian_minors(Y, d).items():
        if cols != normal_cols:
            continue
        restricted = det.subs(on_w)
        if restricted.is_zero():
            continue
        # constant determinants first, then the normal rows themselves
        rank = (0 if restricted.is_constant() else 1, rows != normal_cols, restricted.degree, rows)
        if best is None or rank < best[0]:
            best = (rank, rows)
    if best is None:
        raise NotTotallySimple("no normal Jacobian block is generically invertible on W")
    rows = best[1]
    comp = [i for i in range(n) if i not in rows]
    direction = [Poly.zero(n)] * n
    for i, e in zip(comp, eps):
        direction[i] = Poly.constant(n, -e)
    scope = "global" if best[0][0] == 0 else "away from zeros of the block determinant on W"
    desc = f"totally simple translation on rows {[c + 1 for c in comp]} ({scope})"
    return DeformationFamily(Y, VectorField(n, tuple(direction)), desc, W0)


def restricted_family(family: DeformationFamily, chart: int) -> DeformationFamily:
    """The family induced on ``{xi_n = 0}`` in chart ``chart`` (top degree must not depend on t)."""
    from .foliation import chart_restrict

    base = chart_restrict(family.base, chart)
    one = chart_restrict(family.at(1), chart)
    if family.base.degree != family.at(1).degree:
        raise ValueError("the perturbation changes the top degree; restriction is not affine in t")
    direction = VectorField(base.n, tuple(b - o for b, o in zip(base, one)))
    return DeformationFamily(base, direction, family.description + f" restricted to infinity, chart {chart}")
