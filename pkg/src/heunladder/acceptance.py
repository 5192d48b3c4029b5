"""The fifteen end-to-end acceptance checks.

Each check returns a ``CriterionResult``; ``run_all`` collects them in id
order.  A check fails either by a false assertion or by an
``IdentityViolation`` raised inside the library, in which case the
violation's anchor is reported.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import heun_ladder as hl
from .heun_ladder import (
    HPTIndex,
    boundary_closed_form,
    boundary_rising_reading,
    boundary_value,
    construct,
    factor_at_b,
    factor_at_c,
    heun_residual,
    kappa_b,
    kappa_c,
    pi_b,
    pi_c,
)
from .lambe_ward import characteristic_polynomial, hpt_lw_construct, lw_matrix, type3_even_solution
from .numeric_verify import (
    DEFAULT_GRID,
    chebyshev_points,
    fd_spectrum,
    numeric_zero_count,
    schrodinger_residual,
    window_samples,
    zero_energy_window_scan,
)
from .poly_core import DegenerateScale, IdentityViolation, InvalidIndex, Unsupported, sturm_count
from .spectral_model import darboux_matches_ladder, heun_function_checks, potential_r
from .susy_partner import (
    aprime_partner,
    b_partner_spec,
    c_case_top_coefficient,
    cup,
    factor_at_level,
    gs_specialization_holds,
    heine_from_kappa1,
    heine_from_kappa1_s1_value_at_origin,
    nu_at_kappa_b,
    nu_scale,
    partner_eigenfunction,
    partner_potential_fn,
    qhip_generator_identity,
)

SEED = 20240611
S_RANGE = range(1, 6)
T_RANGE = range(0, 7)


@dataclass
class CriterionResult:
    id: int
    title: str
    anchor: str
    passed: bool
    detail: str
    seconds: float = 0.0
    budget: float | None = None
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.id:2d} {self.title}: {self.detail} ({self.seconds:.2f}s)"


class _Fail(Exception):
    def __init__(self, anchor: str, detail: str):
        super().__init__(detail)
        self.anchor = anchor
        self.detail = detail


def _require(cond: bool, anchor: str, detail: str):
    if not cond:
        raise _Fail(anchor, detail)


def random_kappa(rng: random.Random, lo: int = -6, hi: int = 12) -> Fraction:
    while True:
        k = Fraction(rng.randint(lo * 97, hi * 97), rng.randint(1, 97))
        if k != 0:
            return k


def _grid():
    return [(s, t) for s in S_RANGE for t in T_RANGE]


# ----------------------------------------------------------------- checks

def c1_dual_construction():
    rng = random.Random(SEED + 1)
    cells = 0
    for s, t in _grid():
        for _ in range(20):
            k = random_kappa(rng)
            a = construct(s, t, k).poly
            b = hpt_lw_construct(s, t, k, cross_check=False).poly
            _require(a == b, "recurrence vs ladder construction", f"mismatch at s={s} t={t} kappa={k}")
            cells += 1
    return f"{cells} exact matches"


def c2_ode_residual():
    rng = random.Random(SEED + 1)
    count = 0
    for s, t in _grid():
        for _ in range(20):
            hp = construct(s, t, random_kappa(rng))
            _require(heun_residual(hp).is_zero(), "Heun equation", f"nonzero residual at s={s} t={t} kappa={hp.kappa}")
            count += 1
    return f"{count} zero residual polynomials"


def c3_ladders():
    rng = random.Random(SEED + 3)
    done = {"a": 0, "b": 0, "c": 0, "d": 0, "b.a": 0, "d.c": 0}
    for s, t in _grid():
        for _ in range(4):
            k = random_kappa(rng)
            H = construct(s, t, k)
            n = H.n

            def ref(s2, t2):
                return hpt_lw_construct(s2, t2, k, cross_check=False).poly

            A = hl.ladder_a(H)
            _require(A.poly == ref(s + 1, t), "ladder_a", f"s={s} t={t} kappa={k}")
            done["a"] += 1
            if (n + 2) ** 2 != k * k:
                _require(hl.ladder_b(A).poly == H.poly, "ladder_b after ladder_a", f"s={s} t={t} kappa={k}")
                done["b.a"] += 1
            if s >= 2 and n * n != k * k:
                _require(hl.ladder_b(H).poly == ref(s - 1, t), "ladder_b", f"s={s} t={t} kappa={k}")
                done["b"] += 1
            if t >= 2 and (t - 1) ** 2 != k * k:
                C = hl.ladder_c(H)
                _require(C.poly == ref(s + 1, t - 2), "ladder_c", f"s={s} t={t} kappa={k}")
                done["c"] += 1
                _require(hl.ladder_d(C).poly == H.poly, "ladder_d after ladder_c", f"s={s} t={t} kappa={k}")
                done["d.c"] += 1
            if s >= 2:
                _require(hl.ladder_d(H).poly == ref(s - 1, t + 2), "ladder_d", f"s={s} t={t} kappa={k}")
                done["d"] += 1
    return ", ".join(f"{k}:{v}" for k, v in done.items())


def c4_factorizations():
    c_cases = b_cases = 0
    bad = []
    for s, t in _grid():
        v = 0
        while kappa_c(t, v) > 0:
            _, cz = factor_at_c(s, t, v)
            _require(cz == pi_c(s, t, v), "bound-state factorization", f"cofactor mismatch s={s} t={t} v={v}")
            _require(sturm_count(cz.compose_y2(), 0, 1) == v, "bound-state factorization",
                     f"root count s={s} t={t} v={v}")
            c_cases += 1
            v += 1
        for m in range(s):
            if kappa_b(s, t, m) <= 0:
                continue
            _, cz = factor_at_b(s, t, m)
            _require(cz == pi_b(s, t, m), "origin-type factorization", f"cofactor mismatch s={s} t={t} m={m}")
            cnt = sturm_count(cz.compose_y2(), 0, 1)
            b_cases += 1
            if cnt != m:
                bad.append((s, t, m, cnt))
    if bad:
        sample = ", ".join(f"(s={s},t={t},m={m}) has {c}" for s, t, m, c in bad[:4])
        raise _Fail("origin-type factorization root count",
                    f"divisibility exact in {c_cases}+{b_cases} cases, but {len(bad)} origin-type cofactors "
                    f"do not have m roots in (0,1): {sample}")
    return f"{c_cases} bound-state and {b_cases} origin-type factorizations"


def c5_boundary():
    rng = random.Random(SEED + 5)
    count = rising_bad = 0
    for s, t in _grid():
        for _ in range(6):
            k = random_kappa(rng)
            hp = construct(s, t, k)
            direct = boundary_value(hp)
            _require(direct == boundary_closed_form(s, t, k), "boundary value closed form",
                     f"s={s} t={t} kappa={k}")
            rising_bad += direct != boundary_rising_reading(s, t, k)
            count += 1
    return f"{count} exact matches; rising-factorial reading differs in {rising_bad} (expected)"


def c6_zero_windows():
    rows = 0
    for s, t in [(2, 5), (3, 6), (1, 4)]:
        kap = window_samples(t, 3)
        for k, cnt, exp in zero_energy_window_scan(s, t, kap):
            _require(exp is not None and cnt == exp, "zero-count windows",
                     f"s={s} t={t} kappa={k}: {cnt} zeros, expected {exp}")
            _require(numeric_zero_count(s, t, k) == cnt, "numeric zero count",
                     f"s={s} t={t} kappa={k}")
            rows += 1
    return f"{rows} window samples agree"


def c7_lambe_ward():
    rng = random.Random(SEED + 7)
    cases = 0
    for n in (2, 4, 6):
        for _ in range(4):
            r1, r2 = random_kappa(rng, -3, 3), random_kappa(rng, -3, 3)
            cp = characteristic_polynomial(lw_matrix(n, (r1, r2, r2), -1))
            _require(cp(Fraction(0)) == 0, "degenerate accessory root", f"n={n} rho=({r1},{r2},{r2})")
            try:
                p = type3_even_solution(n // 2, r1, r2)
            except DegenerateScale:
                continue
            _require(p.degree == n and all(p.coeff(j) == 0 for j in range(1, n, 2)),
                     "even solution", f"n={n}")
            cases += 1
    return f"q=0 root for n in (2,4,6); {cases} even solutions verified"


def c8_heine():
    rng = random.Random(SEED + 8)
    ok_div = 0
    wrong_degree = []
    while ok_div < 100:
        s, t = rng.randint(2, 4), rng.randint(1, 5)
        k, k1 = random_kappa(rng), random_kappa(rng)
        if k == k1 or k + k1 == 0:
            continue
        hi = heine_from_kappa1(s, t, k, k1)  # raises if y does not divide
        ok_div += 1
        if not hi.meets_contract:
            wrong_degree.append((s, t, hi.degree, hi.contract_degree))
    s1_rejected = False
    try:
        heine_from_kappa1(1, 2, Fraction(1, 2), Fraction(3))
    except Unsupported:
        s1_rejected = True
    _require(s1_rejected, "s=1 restriction", "s=1 input was not rejected")
    _require(heine_from_kappa1_s1_value_at_origin(1, Fraction(1, 2), Fraction(3)) != 0,
             "s=1 counterexample", "value at origin vanished")
    if wrong_degree:
        s, t, d, c = wrong_degree[0]
        raise _Fail("Heine polynomial order",
                    f"y divides in all {ok_div} cases and s=1 is rejected, but degree is 2n-2 "
                    f"in {len(wrong_degree)} cases (e.g. s={s} t={t}: degree {d}, required {c})")
    return f"{ok_div} cases exact; s=1 rejected"


def _levels(t):
    v = 0
    while kappa_c(t, v) > 0:
        yield v
        v += 1


def c9_generator():
    rng = random.Random(SEED + 9)
    reports = 0
    for s in (2, 3):
        for t in range(2, 6):
            k1s = [Fraction(kappa_b(s, t, m)) for m in range(s)]
            k1s += [Fraction(t - 1) + Fraction(rng.randint(1, 300), rng.randint(1, 60)) for _ in range(2)]
            for k1 in k1s:
                for v in _levels(t):
                    rep = qhip_generator_identity(s, t, k1, v)
                    bad = [k for k, ok in rep.checks.items() if not ok]
                    _require(not bad, "generator identity", f"s={s} t={t} k1={k1} v={v}: {bad}")
                    reports += 1
            for m in range(s):
                for v in _levels(t):
                    nu = nu_scale(s, t, kappa_b(s, t, m), v)
                    _require(nu == nu_at_kappa_b(s, t, m, v) == 2 * cup(s, t, m, v),
                             "scale at origin-type wavenumbers", f"s={s} t={t} m={m} v={v}")
    return f"{reports} generator reports clean"


def c10_gs():
    count = 0
    for s in (2, 3):
        for t in range(2, 6):
            for m in range(s):
                for v in _levels(t):
                    _require(gs_specialization_holds(s, t, m, v), "GS specialization",
                             f"s={s} t={t} m={m} v={v}")
                    count += 1
    return f"{count} exact equalities"


def c11_a_partners():
    rng = random.Random(SEED + 11)
    built = facts = 0
    for s in (2, 3):
        for t in range(1, 5):
            for v in _levels(t):
                _require(c_case_top_coefficient(s, t, v) == 0, "bound-state seed degeneracy", f"s={s} t={t} v={v}")
            for kind in ("a", "a'"):
                for m in range(0, 4):
                    if kind == "a'" and not m > t - 1:
                        continue
                    for _ in range(2):
                        k = Fraction(rng.randint(1, 400), rng.randint(1, 41))
                        try:
                            ap = aprime_partner(s, t, kind, m, k)
                        except (InvalidIndex, DegenerateScale):
                            continue
                        bad = [c for c, ok in ap.checks.items() if not ok]
                        _require(not bad, "partner determinant leading terms", f"{kind} s={s} t={t} m={m}: {bad}")
                        built += 1
                    for v in _levels(t):
                        lf = factor_at_level(s, t, kind, m, v)
                        want = m + v + 1 if kind == "a" else m + v
                        _require(lf.quotient.degree == want and lf.ratio == -2 and lf.upper_factor_ok,
                                 "bound-level factorization",
                                 f"{kind} s={s} t={t} m={m} v={v}: degree {lf.quotient.degree}, ratio {lf.ratio}")
                        facts += 1
    return f"{built} determinants, {facts} bound-level factorizations"


def c12_spectra():
    out = []
    for s, t, ref in [(2, 3, [-4]), (1, 4, [-9, -1]), (3, 5, [-16, -4])]:
        rep = fd_spectrum(potential_r(s, t), DEFAULT_GRID, k=len(ref), reference=ref)
        _require(len(rep.best) == len(ref) and max(rep.errors) < 1e-3, "finite-difference spectrum",
                 f"V_{s},{t}: {rep.best} vs {ref}")
        out.append(f"V_{s},{t} err {max(rep.errors):.1e}")
    return "; ".join(out)


def c13_partner():
    s, t, k1 = 2, 3, 3
    spec = b_partner_spec(s, t, k1)
    W = partner_potential_fn(spec)
    ref = [-float(kappa_c(t, v)) ** 2 for v in _levels(t)]
    rep = fd_spectrum(W, DEFAULT_GRID, k=len(ref) + 1, reference=ref)
    _require(len(rep.best) == len(ref), "partner spectrum",
             f"partner has {len(rep.best)} bound levels {rep.best}, base has {len(ref)}")
    _require(max(rep.errors) < 2e-3, "partner spectrum", f"{rep.best} vs {ref}")
    rs = chebyshev_points(0.1, 8.0, 50)
    worst = 0.0
    for v in _levels(t):
        pe = partner_eigenfunction(s, t, k1, v)
        res = schrodinger_residual(pe.phi.psi_form(), W, float(pe.energy), rs)
        _require(res < 1e-8, "partner eigenfunction", f"v={v} residual {res:.2e}")
        worst = max(worst, res)
    return f"levels {['%.6f' % e for e in rep.best]}, max residual {worst:.1e}"


def c14_bridge():
    rng = random.Random(SEED + 14)
    ys = np.linspace(0.0, 1.0, 20)
    worst_b = worst_c = 0.0
    for _ in range(10):
        s, t = rng.randint(1, 4), rng.randint(0, 5)
        k = Fraction(rng.randint(1, 300), rng.randint(1, 37))
        rep = heun_function_checks(s, t, k, ys)
        bad = [key for key, ok in rep.ladder_exact.items() if not ok]
        _require(not bad, "ladders on the Heun functions", f"s={s} t={t} kappa={k}: {bad}")
        _require(rep.bridge_max_err <= 1e-10, "hypergeometric bridge", f"s={s} t={t} kappa={k}: {rep.bridge_max_err:.1e}")
        _require(rep.contiguous_max_err <= 1e-9, "contiguous relations",
                 f"s={s} t={t} kappa={k}: {rep.contiguous_max_err:.1e}")
        worst_b, worst_c = max(worst_b, rep.bridge_max_err), max(worst_c, rep.contiguous_max_err)
    return f"bridge {worst_b:.1e}, contiguous {worst_c:.1e}"


def c15_darboux():
    rng = random.Random(SEED + 15)
    count = 0
    for s in range(1, 4):
        for t in range(0, 4):
            for _ in range(3):
                k = random_kappa(rng, 1, 8)
                _require(darboux_matches_ladder(s, t, k), "Darboux chain", f"s={s} t={t} kappa={k}")
                count += 1
    return f"{count} exact matches"


CRITERIA: list[tuple[int, str, str, Callable, float | None]] = [
    (1, "dual construction", "recurrence vs ladder construction", c1_dual_construction, 30.0),
    (2, "Heun equation residual", "Heun equation", c2_ode_residual, 30.0),
    (3, "ladder quartet", "ladder_a/b/c/d", c3_ladders, None),
    (4, "factorizations", "bound-state and origin-type factorization", c4_factorizations, None),
    (5, "boundary closed form", "boundary value closed form", c5_boundary, None),
    (6, "zero windows", "zero-count windows", c6_zero_windows, None),
    (7, "degenerate Lambe-Ward case", "degenerate accessory root", c7_lambe_ward, None),
    (8, "Heine construction", "Heine polynomial", c8_heine, None),
    (9, "generator identity", "generator identity", c9_generator, None),
    (10, "GS specialization", "GS specialization", c10_gs, None),
    (11, "a/a' partners", "partner determinant", c11_a_partners, None),
    (12, "numeric spectra", "finite-difference spectrum", c12_spectra, 60.0),
    (13, "partner isospectrality", "partner spectrum", c13_partner, None),
    (14, "hypergeometric bridge", "hypergeometric bridge", c14_bridge, None),
    (15, "Darboux chain", "Darboux chain", c15_darboux, None),
]


def run_one(cid: int) -> CriterionResult:
    _, title, anchor, fn, budget = next(c for c in CRITERIA if c[0] == cid)
    t0 = time.perf_counter()
    try:
        detail = fn()
        passed = True
    except _Fail as e:
        passed, anchor, detail = False, e.anchor, e.detail
    except IdentityViolation as e:
        passed, anchor, detail = False, e.anchor, e.detail
    dt = time.perf_counter() - t0
    if passed and budget is not None and dt > budget:
        passed, detail = False, f"{detail}; runtime {dt:.1f}s exceeds {budget:.0f}s"
    return CriterionResult(cid, title, anchor, passed, detail, dt, budget)


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("HEUN_LADDER_THREADS", "1")))
    except ValueError:
        return 1


def run_all(ids=None) -> list[CriterionResult]:
    ids = sorted(ids) if ids else [c[0] for c in CRITERIA]
    workers = thread_count()
    if workers == 1:
        return [run_one(i) for i in ids]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return sorted(ex.map(run_one, ids), key=lambda r: r.id)
