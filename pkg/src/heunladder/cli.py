"""Command-line front end.

Subcommands emit JSON (schema "heun-ladder/1") or CSV.  Exact quantities are
written as "p/q" strings; floats only appear in numeric fields, each paired
with a "tol" sibling.

Exit codes: 0 success, 1 usage or domain error, 2 identity violation.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import acceptance
from .heun_ladder import (
    HPTIndex,
    boundary_value,
    construct,
    heun_residual,
    zero_count,
)
from .numeric_verify import (
    DEFAULT_GRID,
    RadialGrid,
    chebyshev_points,
    fd_spectrum,
    schrodinger_residual,
)
from .poly_core import (
    DegenerateScale,
    ExactPoly,
    IdentityViolation,
    InvalidIndex,
    Unsupported,
    fmt_rational,
    parse_rational,
    sturm_count,
    wronskian,
)
from .spectral_model import bound_states, potential_r, potential_value
from .susy_partner import (
    aprime_partner,
    b_partner_spec,
    heine_from_kappa1,
    partner_eigenfunction,
    partner_potential,
    partner_potential_fn,
)

SCHEMA = "heun-ladder/1"
MAX_S, MAX_T, MAX_LEVEL = 12, 40, 12
TOL_RESIDUAL = 1e-8
TOL_SPECTRUM = 1e-3


class UsageError(ValueError):
    pass


# ------------------------------------------------------------- helpers

def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _bounded(lo: int, hi: int):
    def conv(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
        if not lo <= v <= hi:
            raise argparse.ArgumentTypeError(f"{v} outside [{lo}, {hi}]")
        return v
    return conv


def _coeffs(p: ExactPoly) -> list:
    return [fmt_rational(c) for c in p.coeffs]


def _doc(command: str, params: dict, **body) -> dict:
    return {"schema": SCHEMA, "command": command, "params": params, **body}


def _params(args, *names) -> dict:
    out = {}
    for n in names:
        v = getattr(args, n, None)
        if v is None:
            continue
        out[n] = fmt_rational(v) if isinstance(v, Fraction) else v
    return out


def _emit(doc, args, text: str | None = None):
    out = text if text is not None else json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", newline="") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _grid(args) -> RadialGrid:
    return RadialGrid(args.r_min, args.r_max, args.N)


# ------------------------------------------------------------ commands

def cmd_hp(args) -> int:
    hp = construct(args.s, args.t, args.kappa)
    res_ok = heun_residual(hp).is_zero()
    doc = _doc("hp", _params(args, "s", "t", "kappa"),
               n=hp.n,
               coefficients=_coeffs(hp.poly),
               boundary_value=fmt_rational(boundary_value(hp)),
               residual_ok=res_ok,
               zero_count=zero_count(hp))
    _emit(doc, args)
    if not res_ok:
        raise IdentityViolation("Heun equation", "constructed polynomial leaves a residual")
    return 0


def _partner_b(args) -> dict:
    spec = b_partner_spec(args.s, args.t, args.kappa1)
    W = partner_potential_fn(spec)
    rs = chebyshev_points(0.1, 8.0, 50)
    levels = []
    for b in bound_states(args.s, args.t):
        pe = partner_eigenfunction(args.s, args.t, args.kappa1, b.v)
        res = schrodinger_residual(pe.phi.psi_form(), W, float(pe.energy), rs)
        levels.append({
            "v": b.v,
            "energy": fmt_rational(pe.energy),
            "numerator": _coeffs(pe.numerator),
            "heine_monic": _coeffs(pe.heine.poly),
            "scale": fmt_rational(pe.heine.scale),
            "residual": res,
            "residual_tol": TOL_RESIDUAL,
            "residual_ok": res < TOL_RESIDUAL,
        })
    ff = spec.ff
    return {"kind": "b",
            "seed": {"exponents": [fmt_rational(ff.a), fmt_rational(ff.b), fmt_rational(ff.c)],
                     "polynomial": _coeffs(ff.poly)},
            "denominator": _coeffs(spec.denom),
            "levels": levels}


def _partner_a(args) -> dict:
    ap = aprime_partner(args.s, args.t, args.type, args.m, args.kappa)
    return {"kind": args.type,
            "m": args.m,
            "determinant": _coeffs(ap.determinant),
            "heine_monic": _coeffs(ap.heine.poly),
            "heine_contract_degree": ap.heine.contract_degree,
            "scale": fmt_rational(ap.heine.scale),
            "checks": dict(sorted(ap.checks.items()))}


def cmd_partner(args) -> int:
    if args.type == "b":
        if args.kappa1 is None:
            raise UsageError("b-type partner needs --kappa1")
        body = _partner_b(args)
        names = ("s", "t", "kappa1")
    else:
        if args.m is None or args.kappa is None:
            raise UsageError(f"{args.type}-type partner needs --m and --kappa")
        body = _partner_a(args)
        names = ("s", "t", "type", "m", "kappa")
    _emit(_doc("partner", _params(args, *names), **body), args)
    if body["kind"] == "b" and not all(lv["residual_ok"] for lv in body["levels"]):
        raise IdentityViolation("partner eigenfunction", "residual above tolerance")
    if body["kind"] != "b" and not all(body["checks"].values()):
        raise IdentityViolation("partner determinant", "leading-term check failed")
    return 0


def cmd_heine(args) -> int:
    hi = heine_from_kappa1(args.s, args.t, args.kappa, args.kappa1)
    doc = _doc("heine", _params(args, "s", "t", "kappa", "kappa1"),
               coefficients=_coeffs(hi.poly),
               degree=hi.degree,
               contract_degree=hi.contract_degree,
               contract_met=hi.meets_contract,
               divisible_by_y=True)
    _emit(doc, args)
    if not hi.meets_contract:
        raise IdentityViolation("Heine polynomial order",
                                f"degree {hi.degree}, contract {hi.contract_degree}")
    return 0


def cmd_spectrum(args) -> int:
    HPTIndex(args.s, args.t)
    ref = [b.energy for b in bound_states(args.s, args.t)] if args.t >= 1 else []
    if args.kappa1 is not None:
        V = partner_potential_fn(b_partner_spec(args.s, args.t, args.kappa1))
    else:
        V = potential_r(args.s, args.t)
    k = args.k if args.k is not None else len(ref) + 1
    rep = fd_spectrum(V, _grid(args), k=k, reference=[float(e) for e in ref],
                      richardson=not args.no_richardson)
    doc = _doc("spectrum", _params(args, "s", "t", "kappa1", "k"),
               reference=[fmt_rational(e) for e in ref],
               eigenvalues=rep.eigenvalues,
               richardson=rep.richardson,
               best=rep.best,
               errors=rep.errors,
               tol=TOL_SPECTRUM,
               truncated=rep.truncated,
               grid=rep.grid,
               within_tol=len(rep.best) == len(ref) and all(e < TOL_SPECTRUM for e in rep.errors))
    _emit(doc, args)
    return 0


def cmd_potential(args) -> int:
    HPTIndex(args.s, args.t)
    spec = b_partner_spec(args.s, args.t, args.kappa1) if args.kappa1 is not None else None
    if args.y:
        ys = list(args.y)
        for y in ys:
            if not 0 < y < 1:
                raise UsageError("--y values must lie in (0, 1)")
        rs = np.arctanh([float(y) for y in ys])
    else:
        ys = None
        rs = np.linspace(args.r_max / args.points, args.r_max, args.points)
    V = potential_r(args.s, args.t)(rs)
    W = partner_potential(spec, r=rs) if spec is not None else None
    if args.format == "csv":
        buf = io.StringIO()
        buf.write("r,V,V1\n" if spec is not None else "r,V\n")
        for i, r in enumerate(rs):
            row = [repr(float(r)), repr(float(V[i]))]
            if spec is not None:
                row.append(repr(float(W[i])))
            buf.write(",".join(row) + "\n")
        _emit(None, args, buf.getvalue())
        return 0
    rows = []
    for i, r in enumerate(rs):
        row = {"r": float(r), "V": float(V[i]), "tol": 1e-12}
        if ys is not None:
            row["y"] = fmt_rational(ys[i])
            row["V_exact"] = fmt_rational(potential_value(args.s, args.t, y=ys[i]))
        if spec is not None:
            row["V1"] = float(W[i])
        rows.append(row)
    _emit(_doc("potential", _params(args, "s", "t", "kappa1"), rows=rows), args)
    return 0


# --------------------------------------------------------- verify suites

def _poly_core_groups() -> list:
    rng = np.random.default_rng(7)
    ok_div = ok_sturm = ok_w = True
    for _ in range(30):
        a = ExactPoly([Fraction(int(x), int(d)) for x, d in zip(rng.integers(-9, 10, 6), rng.integers(1, 9, 6))])
        b = ExactPoly([Fraction(int(x)) for x in rng.integers(-9, 10, 3)] + [1])
        q, r = a.divmod(b)
        ok_div &= q * b + r == a and r.degree < b.degree
        ok_w &= wronskian(a, b) == wronskian(b, a) * -1
        roots = np.roots([float(c) for c in b.coeffs[::-1]])
        real = {round(x.real, 9) for x in roots if abs(x.imag) < 1e-9 and -2 < x.real < 2}
        ok_sturm &= sturm_count(b, -2, 2) == len(real)
    return [("division identity", ok_div, "q*b + r == a"),
            ("Sturm count vs numeric roots", ok_sturm, "30 random cubics"),
            ("Wronskian antisymmetry", ok_w, "W(a,b) = -W(b,a)")]


SUITES = {
    "heun_ladder": [2, 3, 4, 5, 6],
    "lambe_ward": [1, 7],
    "spectral_model": [14, 15],
    "susy_partner": [8, 9, 10, 11],
    "numeric_verify": [12, 13],
}


def cmd_verify(args) -> int:
    suites = sorted(SUITES) + ["poly_core"] if args.suite == "all" else [args.suite]
    manifest = {}
    failed = False
    if "poly_core" in suites:
        groups = []
        for name, ok, detail in _poly_core_groups():
            groups.append({"group": name, "status": "pass" if ok else "fail", "detail": detail})
            failed |= not ok
        manifest["poly_core"] = groups
    ids = sorted({i for s in suites if s != "poly_core" for i in SUITES[s]})
    results = {r.id: r for r in acceptance.run_all(ids)}
    for s in suites:
        if s == "poly_core":
            continue
        manifest[s] = [{"group": results[i].title, "anchor": results[i].anchor,
                        "status": "pass" if results[i].passed else "fail",
                        "detail": results[i].detail} for i in SUITES[s]]
        failed |= not all(results[i].passed for i in SUITES[s])
    _emit(_doc("verify", {"suite": args.suite}, suites=dict(sorted(manifest.items()))), args)
    return 2 if failed else 0


def cmd_acceptance(args) -> int:
    results = acceptance.run_all(args.only)
    items = []
    for r in results:
        item = {"id": r.id, "title": r.title, "anchor": r.anchor,
                "status": "pass" if r.passed else "fail", "detail": r.detail}
        if args.timing:
            item["seconds"] = round(r.seconds, 3)
            item["budget_seconds"] = r.budget
        items.append(item)
    for r in results:
        print(r.line(), file=sys.stderr)
    failing = [r for r in results if not r.passed]
    _emit(_doc("acceptance", {"only": args.only}, criteria=items,
               passed=len(results) - len(failing), failed=len(failing),
               failing_anchors=[r.anchor for r in failing]), args)
    return 2 if failing else 0


# ------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heun-ladder", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, kappa=False, kappa1=False):
        sp.add_argument("--s", type=_bounded(1, MAX_S), required=True, help="origin index s >= 1")
        sp.add_argument("--t", type=_bounded(0, MAX_T), required=True, help="well index t >= 0")
        if kappa:
            sp.add_argument("--kappa", type=_rational, required=True, help='exact rational, "p/q" or integer')
        if kappa1:
            sp.add_argument("--kappa1", type=_rational, required=True, help="seed wavenumber, exact rational")
        sp.add_argument("--output", help="write to this file instead of stdout")

    def grid_opts(sp):
        sp.add_argument("--r-min", dest="r_min", type=float, default=DEFAULT_GRID.r_min)
        sp.add_argument("--r-max", dest="r_max", type=float, default=DEFAULT_GRID.r_max)
        sp.add_argument("--N", type=int, default=DEFAULT_GRID.N, help="grid points (refined grid uses 2N-1)")

    sp = sub.add_parser("hp", help="Heun polynomial Hp_n(y; kappa)")
    common(sp, kappa=True)
    sp.set_defaults(func=cmd_hp)

    sp = sub.add_parser("partner", help="Darboux partner data (b, a or a' seeds)")
    common(sp)
    sp.add_argument("--type", choices=["b", "a", "a'"], default="b")
    sp.add_argument("--kappa1", type=_rational, help="b-type seed wavenumber (> t-1)")
    sp.add_argument("--m", type=_bounded(0, MAX_LEVEL), help="a/a' seed index")
    sp.add_argument("--kappa", type=_rational, help="a/a' target wavenumber")
    sp.set_defaults(func=cmd_partner)

    sp = sub.add_parser("heine", help="Heine polynomial from two Heun polynomials (s >= 2)")
    common(sp, kappa=True, kappa1=True)
    sp.set_defaults(func=cmd_heine)

    sp = sub.add_parser("spectrum", help="finite-difference bound levels")
    common(sp)
    sp.add_argument("--kappa1", type=_rational, help="use the b-type partner potential")
    sp.add_argument("--k", type=_bounded(1, 64), help="levels requested (default: bound count + 1)")
    sp.add_argument("--no-richardson", action="store_true")
    grid_opts(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("potential", help="potential samples; CSV columns r,V[,V1]",
                        description="CSV columns: r, V (base potential) and V1 (partner, "
                                    "with --kappa1).  '.' decimal separator, Python float repr.")
    common(sp)
    sp.add_argument("--kappa1", type=_rational, help="also emit the b-type partner potential")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--r-max", dest="r_max", type=float, default=8.0)
    sp.add_argument("--points", type=_bounded(1, 10**6), default=200)
    sp.add_argument("--y", type=_rational, action="append", help="sample at y = tanh r (repeatable)")
    sp.set_defaults(func=cmd_potential)

    sp = sub.add_parser("verify", help="run invariant suites")
    sp.add_argument("--suite", choices=["all", "poly_core", *sorted(SUITES)], default="all")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("acceptance", help="run the acceptance criteria")
    sp.add_argument("--only", type=_bounded(1, len(acceptance.CRITERIA)), nargs="+")
    sp.add_argument("--timing", action="store_true", help="include wall-clock fields (not deterministic)")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_acceptance)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    try:
        return args.func(args)
    except IdentityViolation as e:
        print(f"identity violation [{e.anchor}]: {e.detail}", file=sys.stderr)
        return 2
    except Unsupported as e:
        print(f"unsupported: {e} (see README, 'Restrictions')", file=sys.stderr)
        return 1
    except (UsageError, InvalidIndex, DegenerateScale, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
