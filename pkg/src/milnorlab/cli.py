"""Command-line front end.

Human-readable summaries go to stdout; ``--out`` receives the JSON report,
which always embeds the tool version, seed, tolerances and the resolved
configuration.  Exit codes: 0 ok, 1 prediction mismatch or numerical failure,
2 input error, 3 not zero-dimensional, 4 resource limit, 5 ambiguous matching.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .catalog import (
    POINT_A,
    POINT_P,
    example41,
    example41_infinity,
    example42,
    example42_infinity,
    example42_translation,
    example43,
    example43_general,
)
from .deformlab import (
    DEFAULT_EPS_W,
    DEFAULT_R_ESC,
    TO_INFINITY,
    TO_ISOLATED,
    TO_W,
    DeformationFamily,
    TSchedule,
    check_stability,
    classify_limits,
    totally_simple_perturbation,
)
from .errors import (
    AmbiguousMatching,
    MilnorLabError,
    MissingTableEntry,
    NotZeroDimensional,
    PolySyntaxError,
    ResourceLimitExceeded,
)
from .foliation import (
    exceptional_order,
    foliation_degree,
    mult_along_W,
    parse_manifest,
    singular_ideal,
    straighten,
    totally_simple,
    uniform_minor,
)
from .groebner import DEFAULT_BUDGET, GREVLEX, LEX
from .invariants import global_balance, load_preset, nu_value, preset_setup, soares_bound
from .solver import DEFAULT_CLUSTER_TOL, DEFAULT_TOL, solve_points

EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_NOT_ZERO_DIM = 3
EXIT_RESOURCE = 4
EXIT_AMBIGUOUS = 5

FAMILIES = (
    "example41",
    "example41-infinity",
    "example42",
    "example42-translation",
    "example42-infinity",
    "example43",
    "example43-general",
)
ORDERS = {"grevlex": GREVLEX, "lex": LEX}


def _num(x):
    return float(f"{x:.12g}")


def _pt(p):
    return [[_num(z.real), _num(z.imag)] for z in p]


def _fmt_pt(p):
    def one(z):
        if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)):
            return f"{z.real:.6g}"
        return f"{z.real:.6g}{z.imag:+.6g}i"

    return "(" + ", ".join(one(z) for z in p) + ")"


def _config(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k == "func":
            continue
        out[k] = v if isinstance(v, (int, float, str, bool, type(None), list)) else str(v)
    return out


def _emit(args, payload: dict):
    if getattr(args, "out", None):
        doc = {"version": __version__, "command": args.command, "config": _config(args)}
        doc.update(payload)
        Path(args.out).write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def _manifest(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from None
    return parse_manifest(text)


def _schedule(args) -> TSchedule:
    if args.t_seq:
        return TSchedule.parse(args.t_seq, r_esc=args.r_esc, eps_w=args.eps_w)
    return TSchedule(r_esc=args.r_esc, eps_w=args.eps_w)


# -- commands -----------------------------------------------------------------


def cmd_solve(args):
    man = _manifest(args.field)
    pts = solve_points(
        singular_ideal(man.field),
        tol=args.tol,
        cluster_tol=args.cluster_tol,
        seed=args.seed,
        budget=args.budget,
        order=ORDERS[args.order],
    )
    total = sum(p.multiplicity for p in pts)
    print(f"{len(pts)} points, total multiplicity {total}")
    for p in pts:
        print(f"  {_fmt_pt(p.point)}  mult={p.multiplicity}  residual={p.residual:.2e}")
    _emit(args, {
        "seed": args.seed,
        "tolerances": {"residual": args.tol, "cluster": args.cluster_tol},
        "total_multiplicity": total,
        "points": [{"coords": _pt(p.point), "multiplicity": p.multiplicity, "residual": _num(p.residual)} for p in pts],
    })
    return 0


def build_family(args) -> DeformationFamily:
    fam = args.family
    if fam is None:
        if not args.field or not args.direction:
            raise ValueError("deform needs --family, or --field together with --direction")
        man = _manifest(args.field)
        direction = _manifest(args.direction).field
        return DeformationFamily(man.field, direction, f"manifest {args.field}", man.W)
    if fam == "example41":
        return example41(args.m, args.beta, args.seed, args.alpha3_zero)[0]
    if fam == "example41-infinity":
        return example41_infinity(args.m, args.beta, args.seed)[0]
    if fam == "example42":
        return example42()[1]
    if fam == "example42-translation":
        eps = (1, 2, 5) if args.special else (2, 3, 5)
        return example42_translation(eps)[0]
    if fam == "example42-infinity":
        return example42_infinity()[0]
    if fam == "example43":
        return example43(args.m, args.kappa, special=args.special, seed=args.seed)[0]
    if fam == "example43-general":
        return example43_general()[0]
    raise ValueError(f"unknown family {fam!r}")


def cmd_deform(args):
    family = build_family(args)
    sched = _schedule(args)
    kw = dict(seed=args.seed, tol=args.tol, cluster_tol=args.cluster_tol, budget=args.budget, workers=args.workers)
    if args.check_stability:
        # raises AmbiguousMatching when dropping the last t reclassifies anything
        check_stability(family, sched, **kw)
    report = classify_limits(family, sched, name=family.description, config=_config(args), **kw)
    print(f"family: {report.family}")
    for t, pts in report.per_t:
        print(f"  t={t}: total multiplicity {sum(p.multiplicity for p in pts)}")
    for tr in report.trajectories:
        where = "" if tr.limit is None else " -> " + _fmt_pt(tr.limit)
        region = "" if tr.in_region else " (outside region)"
        print(f"  {tr.classification} x{tr.multiplicity}{where}{region}")
    print(f"observed mu along W: {report.mu_along_W}")
    if args.out:
        Path(args.out).write_text(report.to_json())
    return 0


def cmd_nu(args):
    table = load_preset(args.preset)
    setup = preset_setup(args.preset, args.m)
    nu = nu_value(setup, table)
    print(f"nu = {nu}")
    _emit(args, {"nu": str(nu)})
    return 0


def cmd_bounds(args):
    b = soares_bound(args.k, args.n, args.radial)
    print(b)
    _emit(args, {"bound": b})
    return 0


def cmd_balance(args):
    nus = [Fraction(x) for x in args.nu]
    known = None
    if args.N is not None:
        known = [Fraction(x) if x != "?" else None for x in args.N]
    rep = global_balance(args.n, args.k, args.sum_isolated, nus, known)
    for j, (N, mu) in enumerate(zip(rep.N, rep.mu_along_W)):
        print(f"W{j}: N={N} mu_W={mu}")
    _emit(args, {"N": list(rep.N), "mu_along_W": [str(x) for x in rep.mu_along_W]})
    return 0


def _field_and_w(args):
    man = _manifest(args.field)
    if man.W is None:
        raise ValueError("manifest has no W line")
    return man.field, man.W


def cmd_mult_w(args):
    X, W = _field_and_w(args)
    prof = mult_along_W(X, W)
    print(f"orders = {list(prof.orders)}  m_W = {prof.m_W}")
    _emit(args, {"orders": list(prof.orders), "m_W": prof.m_W})
    return 0


def cmd_ell(args):
    X, W = _field_and_w(args)
    if W.coordinate_indices() is None:
        X, W = straighten(W, X)
    data = exceptional_order(X, W)
    deg = foliation_degree(X)
    print(f"m_E = {data.m_E}  dicritical = {str(data.dicritical).lower()}  ell = {data.ell}  k = {deg.k}")
    _emit(args, {"m_E": data.m_E, "dicritical": data.dicritical, "ell": data.ell, "k": deg.k})
    return 0


def cmd_totally_simple(args):
    X, W = _field_and_w(args)
    ok = totally_simple(X, W)
    uni = uniform_minor(X, W)
    print(str(ok).lower())
    if uni is not None:
        rows, cols = uni
        print(f"single invertible minor: rows {[r + 1 for r in rows]} cols {[c + 1 for c in cols]}")
    _emit(args, {"totally_simple": ok, "uniform_minor": None if uni is None else [list(uni[0]), list(uni[1])]})
    return 0


# -- reproduction checks --------------------------------------------------------


@dataclass(frozen=True)
class CheckLine:
    name: str
    ok: bool
    detail: str


def _close(p, q, tol):
    return max(abs(complex(a) - complex(b)) for a, b in zip(p, q)) <= tol


def check_41() -> list:
    out = []
    for m, beta in ((2, 0), (2, 1), (3, 0), (3, 1)):
        fam, pred = example41(m, beta, seed=7)
        rep = classify_limits(fam)
        out.append(CheckLine(f"line m={m} beta={beta}: observed mu = m^2 - beta m", rep.mu_along_W == pred.mu_along_W,
                             f"{rep.mu_along_W} vs {pred.mu_along_W}"))
    fam, _ = example41(2, alpha3_zero=True, seed=7)
    rep = classify_limits(fam)
    out.append(CheckLine("line m=2, alpha_3 = 0: no singular points", not rep.trajectories, f"{len(rep.trajectories)} trajectories"))
    nu = nu_value(preset_setup("p3-line", 2), load_preset("p3-line"))
    out.append(CheckLine("nu(p3-line, m=2) = -12", nu == -12, str(nu)))
    bal = global_balance(3, 2, 3, [nu])
    out.append(CheckLine("balance: N = 0, mu_W = 12", bal.N == (0,) and bal.mu_along_W == (12,), f"N={bal.N} mu={bal.mu_along_W}"))
    fam, _ = example41(2, seed=7)
    ts = totally_simple(fam.base, fam.W)
    out.append(CheckLine("line field is not totally simple", ts is False, str(ts)))
    ex = exceptional_order(fam.base, fam.W)
    out.append(CheckLine("ell = m - 1", ex.ell == 1, str(ex.ell)))
    k = foliation_degree(fam.base).k
    out.append(CheckLine("degree k = m", k == 2, str(k)))
    return out


def check_42() -> list:
    out = []
    _, fam, pred = example42()
    sched = TSchedule((Fraction(1, 100), Fraction(1, 1000), Fraction(1, 10000), Fraction(1, 100000)))
    rep = classify_limits(fam, sched)
    at = dict(rep.per_t)
    total = sum(p.multiplicity for p in at[Fraction(1, 1000)])
    out.append(CheckLine("Y_t at t=1/1000: total multiplicity 27", total == 27, str(total)))
    to_a = sum(tr.multiplicity for tr in rep.trajectories
               if tr.classification == TO_ISOLATED and _close(tr.limit, POINT_A, 1e-2))
    out.append(CheckLine("Y_t: one trajectory to A", to_a == 1, str(to_a)))
    to_p = sum(tr.multiplicity for tr in rep.trajectories
               if tr.limit is not None and _close(tr.limit, POINT_P, 1e-2))
    near = [tr for tr in rep.trajectories if abs(tr.points[-1][0] - 1) < 0.1]
    esc = sum(tr.multiplicity for tr in near if tr.classification == TO_INFINITY)
    out.append(CheckLine("Y_t: seven trajectories to P", to_p == 7, f"{to_p} reach P; {esc} of the z1 -> 1 points escape"))
    inf, _ = example42_infinity()
    rep2 = classify_limits(inf)
    total2 = sum(p.multiplicity for p in rep2.per_t[-1][1])
    out.append(CheckLine("hyperplane at infinity: total multiplicity 13", total2 == 13, str(total2)))
    target = (Fraction(16, 7), Fraction(12, 7))
    hit = [tr for tr in rep2.trajectories if tr.limit is not None and _close(tr.limit, target, 1e-4)]
    out.append(CheckLine("hyperplane at infinity: one trajectory to (16/7, 12/7)", len(hit) == 1, f"{len(hit)} within 1e-4"))
    fam, _ = example42_translation((2, 3, 5))
    rep3 = classify_limits(fam)
    ok = rep3.count(TO_W) == 2 and sum(tr.multiplicity for tr in rep3.trajectories
                                       if tr.classification == TO_ISOLATED and _close(tr.limit, POINT_A, 1e-3)) == 1
    out.append(CheckLine("translation, 2 eps1 != eps2: two to W, one to A", ok, f"toW={rep3.count(TO_W)}"))
    fam, _ = example42_translation((1, 2, 5))
    rep4 = classify_limits(fam)
    ok = rep4.count(TO_W) == 1 and any(_close(tr.limit, POINT_P, 1e-3) for tr in rep4.trajectories if tr.classification == TO_W)
    out.append(CheckLine("translation, 2 eps1 = eps2: minimum 1 reached at P", ok, f"toW={rep4.count(TO_W)}"))
    return out


def check_43() -> list:
    out = []
    fam, pred = example43(kappa=2, special=True)
    ts = totally_simple(fam.base, fam.W)
    out.append(CheckLine("rotation field: W totally simple", ts is True, str(ts)))
    rep = classify_limits(fam)
    inside = sum(tr.multiplicity for tr in rep.trajectories if tr.in_region)
    out.append(CheckLine("special perturbation: nothing converges inside the region", inside == 0 and rep.mu_along_W == 0,
                         f"{inside} inside radius {fam.region_radius:.3g}"))
    fam, pred = example43(kappa=2, seed=1)
    rep = classify_limits(fam)
    total = sum(p.multiplicity for p in rep.per_t[0][1])
    out.append(CheckLine("kappa=2 generic: at least 10 singular points", total >= pred.extra["min_isolated"], str(total)))
    fam, _ = example43_general()
    rep = classify_limits(fam)
    out.append(CheckLine("unimodular block in C^4: nothing converges to W", rep.count(TO_W) == 0, f"toW={rep.count(TO_W)}"))
    base, _ = example43(kappa=1, special=True)
    tsp = totally_simple_perturbation(base.base, base.W, [1])
    rep = classify_limits(tsp)
    inside = sum(tr.multiplicity for tr in rep.trajectories if tr.classification == TO_W and
                 max(abs(z) for z in tr.limit) <= base.region_radius)
    out.append(CheckLine("totally simple translation: nothing converges to W inside the region", inside == 0, str(inside)))
    return out


CHECKS = {"41": check_41, "42": check_42, "43": check_43}


def cmd_check(args):
    lines = CHECKS[args.example]()
    for ln in lines:
        print(f"{'PASS' if ln.ok else 'FAIL'}  {ln.name}  [{ln.detail}]")
    _emit(args, {"checks": [{"name": ln.name, "ok": ln.ok, "detail": ln.detail} for ln in lines]})
    return 0 if all(ln.ok for ln in lines) else EXIT_MISMATCH


# -- argument parsing -----------------------------------------------------------


def _common(p, seed=True, out=True):
    if seed:
        p.add_argument("--seed", type=int, default=0)
    if out:
        p.add_argument("--out", help="write the JSON report here")


def _tolerances(p):
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="residual tolerance")
    p.add_argument("--cluster-tol", type=float, default=DEFAULT_CLUSTER_TOL)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="cap on Groebner reduction steps")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="milnorlab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="singular points of a field with multiplicities")
    p.add_argument("--field", required=True)
    p.add_argument("--order", choices=sorted(ORDERS), default="grevlex")
    _tolerances(p)
    _common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("deform", help="classify limits of singular points along a t-schedule")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--field", help="base field manifest (with W)")
    p.add_argument("--direction", help="direction field manifest")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--beta", type=int, default=0)
    p.add_argument("--kappa", type=int, default=2)
    p.add_argument("--special", action="store_true")
    p.add_argument("--alpha3-zero", action="store_true")
    p.add_argument("--t-seq", help="comma separated decreasing t values, e.g. 1/100,1/1000,1/10000")
    p.add_argument("--eps-w", type=float, default=DEFAULT_EPS_W)
    p.add_argument("--r-esc", type=float, default=DEFAULT_R_ESC)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--check-stability", action="store_true")
    _tolerances(p)
    _common(p)
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("nu", help="nu from a shipped coefficient preset")
    p.add_argument("--preset", required=True)
    p.add_argument("--m", type=int, required=True)
    _common(p, seed=False)
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("bounds", help="Soares bound")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--radial", action="store_true")
    _common(p, seed=False)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("balance", help="solve the global balance identity for N")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--nu", action="append", required=True, help="one per component")
    p.add_argument("--sum-isolated", type=int, required=True)
    p.add_argument("--N", nargs="+", help="known N values, '?' marks the unknown")
    _common(p, seed=False)
    p.set_defaults(func=cmd_balance)

    for name, func, helptext in (
        ("mult-w", cmd_mult_w, "multiplicity of the field along W"),
        ("ell", cmd_ell, "exceptional order and ell after blowing up W"),
        ("totally-simple", cmd_totally_simple, "decide whether W is totally simple"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--field", required=True, help="manifest including a W line")
        _common(p, seed=False)
        p.set_defaults(func=func)

    p = sub.add_parser("check", help="reproduce a worked example and compare with its predictions")
    p.add_argument("example", choices=sorted(CHECKS))
    _common(p, seed=False)
    p.set_defaults(func=cmd_check)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except NotZeroDimensional as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_ZERO_DIM
    except (PolySyntaxError, MissingTableEntry, ValueError) as exc:
        # ValueError also covers malformed manifests and invalid parameters
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except AmbiguousMatching as exc:
        print(f"error: {exc}; try a finer --t-seq", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except MilnorLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
