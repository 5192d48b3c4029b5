"""One-step Darboux partners of the hyperbolic Poschl-Teller potential.

Two families of nodeless seed (factorization) functions are handled:

* b-type: the decaying solution y^(1-s) (1-y)^((1+k1)/2) (1+y)^((1-k1)/2) Hp_n[y;k1;s]
  with k1 > t-1, which has no zeros in (0,1);
* a / a'-type: y^s (1-y^2)^((1+lam1)/2) Pi_m(y^2) regular at the origin,
  with Pi_m a terminating Gauss series.

All Heine polynomials come from polynomial Wronskians and are checked exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .heun_ladder import (
    HPTIndex,
    construct,
    kappa_b,
    kappa_c,
    ladder_c,
    monic_hypergeometric,
    pi_b,
    pi_c,
)
from .poly_core import (
    DegenerateScale,
    ExactPoly,
    IdentityViolation,
    InvalidIndex,
    Number,
    Unsupported,
    Y,
    poly_gcd,
    sturm_count,
    to_rational,
    wronskian,
)
from .spectral_model import AEHForm, potential_r

ONE_MINUS_Y2 = ExactPoly([1, 0, -1])
Z = ExactPoly([0, 1])
ONE_MINUS_Z = ExactPoly([1, -1])


@dataclass(frozen=True)
class HeinePoly:
    poly: ExactPoly
    contract_degree: int
    provenance: str
    scale: Fraction = Fraction(1)

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def meets_contract(self) -> bool:
        return self.poly.degree == self.contract_degree


@dataclass(frozen=True)
class PartnerSpec:
    base: HPTIndex
    kind: str  # "b", "a" or "a'"
    ff: AEHForm  # phi-form seed function
    denom: ExactPoly  # polynomial whose zeros are the partner's extra poles
    kappa1: Optional[Fraction] = None
    m: Optional[int] = None

    def psi_ff(self) -> AEHForm:
        return self.ff.psi_form()


def _require_simple(p: ExactPoly, what: str):
    # zeros at the singular points 0, 1, -1 belong to the exponents, not to poles
    for x0 in (0, 1, -1):
        p, _ = p.strip_root(x0)
    if poly_gcd(p, p.derivative()).degree > 0:
        raise Unsupported(f"{what} has a repeated zero; pole data would be wrong")


# ------------------------------------------------------------ b-type seeds

def b_partner_spec(s: int, t: int, kappa1: Number) -> PartnerSpec:
    idx = HPTIndex(s, t)
    k1 = to_rational(kappa1)
    if s < 2:
        raise Unsupported("b-type partners need s >= 2: at s = 1 the seed "
                          "polynomial does not make the Wronskian vanish at y = 0")
    if not k1 > t - 1:
        raise InvalidIndex(f"kappa1 must exceed t-1 = {t - 1} for a nodeless seed")
    H1 = construct(s, t, k1).poly
    if sturm_count(H1, 0, 1) != 0:
        raise IdentityViolation("nodeless seed", f"Hp has zeros in (0,1) at kappa1={k1}")
    _require_simple(H1, "seed polynomial")
    ff = AEHForm(1 - s, (1 + k1) / 2, (1 - k1) / 2, H1)
    return PartnerSpec(idx, "b", ff, H1, kappa1=k1)


def heine_from_kappa1(s: int, t: int, kappa: Number, kappa1: Number) -> HeinePoly:
    """Hi = [(1-y^2) W{Hp(k1), Hp(k)} + (k1-k) Hp(k1) Hp(k)] / ((k1-k) y)."""
    k, k1 = to_rational(kappa), to_rational(kappa1)
    idx = HPTIndex(s, t)
    if s < 2:
        raise Unsupported("Heine construction needs s >= 2 (division by y fails at s = 1)")
    if k == k1:
        raise DegenerateScale("kappa and kappa1 coincide")
    n = idx.n
    H, H1 = construct(s, t, k), construct(s, t, k1)
    for hp in (H, H1):
        if hp.G(1) != hp.kappa * hp.G(0):
            raise IdentityViolation("low-order coefficient relation", f"kappa={hp.kappa}")
    P = ONE_MINUS_Y2 * wronskian(H1.poly, H.poly) + H1.poly * H.poly * (k1 - k)
    if P(Fraction(0)) != 0:
        raise IdentityViolation("Wronskian vanishes at origin", f"value {P(Fraction(0))}")
    hi = P.exact_div(Y * (k1 - k), "division by y")
    # the top two orders of the Wronskian and of the product cancel
    expect_lc = (k1 + k) / (2 * n - 2 * s + 1)
    if k1 + k != 0 and (hi.degree != 2 * n - 2 or hi.lc != expect_lc):
        raise IdentityViolation("Heine polynomial order",
                                f"degree {hi.degree}, leading coefficient {hi.lc}")
    return HeinePoly(hi, 2 * n, "b-type Wronskian of two Heun polynomials")


def heine_from_kappa1_s1_value_at_origin(t: int, kappa: Number, kappa1: Number) -> Fraction:
    """Value at y = 0 of the s = 1 Wronskian combination (nonzero in general)."""
    k, k1 = to_rational(kappa), to_rational(kappa1)
    H, H1 = construct(1, t, k).poly, construct(1, t, k1).poly
    P = ONE_MINUS_Y2 * wronskian(H1, H) + H1 * H * (k1 - k)
    return P(Fraction(0))


def _bracket(s: int, n: int, v: int, k1: Fraction) -> ExactPoly:
    return ExactPoly([2 * s - 1, k1, -(n - 2 * v)])


def partner_numerator(s: int, t: int, kappa1: Number, v: int) -> ExactPoly:
    k1 = to_rational(kappa1)
    n = HPTIndex(s, t).n
    H1 = construct(s, t, k1).poly
    P2v = pi_c(s, t, v).compose_y2()
    return Y * ONE_MINUS_Y2 * wronskian(H1, P2v) + _bracket(s, n, v, k1) * H1 * P2v


def nu_scale(s: int, t: int, kappa1: Number, v: int) -> Fraction:
    """Leading coefficient of the partner numerator (closed form)."""
    k1 = to_rational(kappa1)
    n = HPTIndex(s, t).n
    d = 2 * n - 2 * s + 1
    return 2 * v + (k1 * k1 - (n - 2 * s + 1) ** 2 - 2 * v * (2 * s + 2 * v - 1)) / Fraction(d)


def nu_scale_via_mu(s: int, t: int, kappa1: Number, v: int) -> Fraction:
    """Same scale written with mu0 = t+s-1/2; the level shift enters as t-v-1."""
    idx = HPTIndex(s, t)
    return 2 * v * (t - v - 1) / (idx.mu0 - 1) + p_top(s, t, kappa1)


def p_top(s: int, t: int, kappa1: Number) -> Fraction:
    k1 = to_rational(kappa1)
    n = HPTIndex(s, t).n
    return (k1 * k1 - (n - 2 * s + 1) ** 2) / Fraction(2 * n - 2 * s + 1)


@dataclass(frozen=True)
class PartnerEigenfunction:
    v: int
    energy: Fraction
    numerator: ExactPoly
    heine: HeinePoly  # monic
    phi: AEHForm


def partner_eigenfunction(s: int, t: int, kappa1: Number, v: int) -> PartnerEigenfunction:
    spec = b_partner_spec(s, t, kappa1)
    kc = kappa_c(t, v)
    if v < 0 or kc <= 0:
        raise InvalidIndex(f"v={v} is not a bound level for t={t}")
    n = spec.base.n
    P = partner_numerator(s, t, spec.kappa1, v)
    if P.degree != n + 2 * v:
        raise IdentityViolation("partner numerator order", f"degree {P.degree}, expected {n + 2 * v}")
    nu = nu_scale(s, t, spec.kappa1, v)
    if P.lc != nu:
        raise IdentityViolation("partner numerator leading coefficient", f"{P.lc} != {nu}")
    half = Fraction(1 + kc, 2)
    phi = AEHForm(s - 1, half, half, P, spec.denom)
    return PartnerEigenfunction(v, Fraction(-kc * kc), P,
                                HeinePoly(P.monic(), n + 2 * v, "b-type partner eigenfunction", nu),
                                phi)


def partner_potential(spec: PartnerSpec, r=None, y=None):
    """V(r) - 2 d^2/dr^2 ln psi_seed(r), psi_seed = (1-y^2)^(-1/2) phi_seed."""
    if (r is None) == (y is None):
        raise ValueError("give exactly one of r or y")
    if y is not None:
        yf = np.asarray(y, dtype=float)
        if np.any((yf <= 0) | (yf >= 1)):
            raise ValueError("y must lie in (0, 1)")
        r = np.arctanh(yf)
    r = np.asarray(r, dtype=float)
    V = potential_r(spec.base.s, spec.base.t)(r)
    out = V - 2.0 * spec.psi_ff().log_second_derivative_r(r)
    return float(out) if out.ndim == 0 else out


def partner_potential_fn(spec: PartnerSpec):
    def W(r):
        return partner_potential(spec, r=r)
    return W


# --------------------------------------------------- generator identity

@dataclass
class GeneratorReport:
    s: int
    t: int
    kappa1: Fraction
    v: int
    nu: Fraction
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def generator_apply(s: int, t: int, kappa1: Number, v: int, target: ExactPoly) -> ExactPoly:
    """Pi_n [y(1-y^2) d/dy + 2s-1 + k1 y - (n-2v) y^2] f - y(1-y^2) Pi_n' f."""
    k1 = to_rational(kappa1)
    n = HPTIndex(s, t).n
    Pn = construct(s, t, k1).poly
    return (Pn * (Y * ONE_MINUS_Y2 * target.derivative() + _bracket(s, n, v, k1) * target)
            - Y * ONE_MINUS_Y2 * Pn.derivative() * target)


def generator_apply_split(s: int, t: int, kappa1: Number, v: int, target: ExactPoly) -> ExactPoly:
    """Pi_n [y(1-y^2) d/dy + 2v y^2] f + p_n f with p_n the lowering remainder."""
    k1 = to_rational(kappa1)
    n = HPTIndex(s, t).n
    Pn = construct(s, t, k1).poly
    pn = ExactPoly([2 * s - 1, k1, -n]) * Pn - Y * ONE_MINUS_Y2 * Pn.derivative()
    return Pn * (Y * ONE_MINUS_Y2 * target.derivative() + ExactPoly([0, 0, 2 * v]) * target) + pn * target


def remainder_poly(s: int, t: int, kappa1: Number) -> ExactPoly:
    k1 = to_rational(kappa1)
    n = HPTIndex(s, t).n
    Pn = construct(s, t, k1).poly
    return ExactPoly([2 * s - 1, k1, -n]) * Pn - Y * ONE_MINUS_Y2 * Pn.derivative()


def qhip_generator_identity(s: int, t: int, kappa1: Number, v: int) -> GeneratorReport:
    k1 = to_rational(kappa1)
    ef = partner_eigenfunction(s, t, k1, v)
    P2v = pi_c(s, t, v).compose_y2()
    g1 = generator_apply(s, t, k1, v, P2v)
    g2 = generator_apply_split(s, t, k1, v, P2v)
    nu = nu_scale(s, t, k1, v)
    rep = GeneratorReport(s, t, k1, v, nu)
    rep.checks["scaled heine equals generator image"] = ef.heine.poly * nu == g1
    rep.checks["split generator form agrees"] = g1 == g2
    pn = remainder_poly(s, t, k1)
    rep.checks["remainder leading coefficient"] = (pn.degree == HPTIndex(s, t).n
                                                   and pn.lc == p_top(s, t, k1))
    if t >= 2 and (t - 1) ** 2 != k1 * k1:
        rep.checks["remainder is a raised Heun polynomial"] = (
            pn == ladder_c(construct(s, t, k1)).poly * p_top(s, t, k1))
    rep.checks["two scale expressions agree"] = nu == nu_scale_via_mu(s, t, k1, v)
    return rep


def nu_at_kappa_b(s: int, t: int, m: int, v: int) -> Fraction:
    n = HPTIndex(s, t).n
    d = 2 * n - 2 * s + 1
    return Fraction((d - 2 * m) * (2 * s - 2 * m - 1) + 4 * v * (t - v - 1), d)


def cup(s: int, t: int, m: int, v: int) -> Fraction:
    idx = HPTIndex(s, t)
    l0, mu0 = idx.lam0, idx.mu0
    return (v * (mu0 - l0 - v - 1) + (l0 - m) * (mu0 - m - 1)) / (mu0 - 1)


def gs_qhip(s: int, t: int, m: int, v: int) -> HeinePoly:
    """Monic Hi_{m+v}(z) built from the two Jacobi-type cofactors."""
    idx = HPTIndex(s, t)
    if not (0 <= m and 2 * m < 2 * s - 1):
        raise InvalidIndex("m must satisfy 0 <= m < s - 1/2")
    if kappa_c(t, v) <= 0 or v < 0:
        raise InvalidIndex(f"v={v} is not a bound level for t={t}")
    U = cup(s, t, m, v)
    if U == 0:
        raise DegenerateScale("vanishing scale for the GS polynomial")
    Pm, Pv = pi_b(s, t, m), pi_c(s, t, v)
    gs = Z * ONE_MINUS_Z * wronskian(Pm, Pv) + ExactPoly([idx.lam0, -(m - v)]) * Pm * Pv
    if gs.degree != m + v or gs.lc != U:
        raise IdentityViolation("GS polynomial leading coefficient", f"{gs.lc} vs {U}")
    return HeinePoly(gs * (1 / U), m + v, "GS Wronskian of two Jacobi cofactors", U)


def gs_specialization_holds(s: int, t: int, m: int, v: int) -> bool:
    k1 = kappa_b(s, t, m)
    n = HPTIndex(s, t).n
    lhs = partner_eigenfunction(s, t, k1, v).heine.poly
    rhs = ExactPoly([1, 1]) ** (n - 2 * m) * gs_qhip(s, t, m, v).poly.compose_y2()
    return lhs == rhs


# ------------------------------------------------------ a / a' seeds

def g_hat(rho0: Number, rho1: Number, P: ExactPoly) -> ExactPoly:
    """z(1-z) P' + (rho0 (1-z) - rho1 z) P / 2."""
    r0, r1 = to_rational(rho0), to_rational(rho1)
    return Z * ONE_MINUS_Z * P.derivative() + ExactPoly([r0, -(r0 + r1)]) * P * Fraction(1, 2)


def a_lambda1(s: int, t: int, kind: str, m: int) -> Fraction:
    if kind == "a":
        return Fraction(-t - 2 * s - 2 * m)
    if kind == "a'":
        if not m > t - 1:
            raise InvalidIndex(f"a' seeds need m > t-1 (m={m}, t={t})")
        return Fraction(t - 2 * m - 1)
    raise ValueError(f"unknown seed kind {kind!r}")


def kappa_dagger0(s: int, t: int, kind: str) -> Fraction:
    return Fraction(t + 2 * s) if kind == "a" else Fraction(1 - t)


def a_cofactor(s: int, t: int, lam1: Fraction, m: int) -> ExactPoly:
    idx = HPTIndex(s, t)
    return monic_hypergeometric(m, m + idx.lam0 + lam1 + 1, Fraction(2 * s + 1, 2))


def a_seed(s: int, t: int, kind: str, m: int) -> PartnerSpec:
    lam1 = a_lambda1(s, t, kind, m)
    Pm = a_cofactor(s, t, lam1, m)
    if m > 0 and sturm_count(Pm, 0, 1) != 0:
        raise IdentityViolation("nodeless seed", f"{kind},{m} cofactor has zeros in (0,1)")
    P2m = Pm.compose_y2()
    _require_simple(P2m, "seed cofactor") if m > 0 else None
    ff = AEHForm(s, (1 + lam1) / 2, (1 + lam1) / 2, P2m)
    return PartnerSpec(HPTIndex(s, t), kind, ff, P2m, m=m)


def h_upper(s: int, t: int, kappa: Number) -> ExactPoly:
    k = to_rational(kappa)
    Hp = construct(s, t, k).poly
    return Y * ONE_MINUS_Y2 * Hp.derivative() - Y * Hp * k + ONE_MINUS_Y2 * Hp * (1 - s)


def seed_determinant(s: int, t: int, kappa: Number, lam1: Number, Pm: ExactPoly) -> ExactPoly:
    """Pi_m(y^2) H^(s) - 2 G_{m+1}(y^2) Hp for a seed regular at the origin."""
    k = to_rational(kappa)
    Hp = construct(s, t, k).poly
    G = g_hat(s, lam1, Pm)
    return Pm.compose_y2() * h_upper(s, t, k) - G.compose_y2() * Hp * 2


def formal_top_coefficient(s: int, t: int, lam1: Number, m: int) -> Fraction:
    n = HPTIndex(s, t).n
    return Fraction(s - 1 - n) + s + to_rational(lam1) + 2 * m


@dataclass
class APartner:
    kind: str
    m: int
    kappa: Fraction
    determinant: ExactPoly
    heine: HeinePoly
    phi: AEHForm
    checks: dict = field(default_factory=dict)


def aprime_partner(s: int, t: int, kind: str, m: int, kappa: Number) -> APartner:
    k = to_rational(kappa)
    if k <= 0:
        raise ValueError("kappa must be positive")
    if k == int(k) and kappa_c(t, 0) >= k and (t - 1 - int(k)) % 2 == 0:
        raise InvalidIndex("kappa must avoid the bound-state values")
    spec = a_seed(s, t, kind, m)
    lam1 = a_lambda1(s, t, kind, m)
    if kind == "a'" and k == -lam1:
        raise DegenerateScale("kappa coincides with the seed's own wavenumber")
    n = HPTIndex(s, t).n
    Pm = a_cofactor(s, t, lam1, m)
    P = seed_determinant(s, t, k, lam1, Pm)
    checks = {}
    G = g_hat(s, lam1, Pm)
    checks["G leading coefficient"] = G.degree == m + 1 and G.lc == -(s + lam1) / 2 - m
    H = h_upper(s, t, k)
    checks["H leading coefficient"] = H.degree == n + 2 and H.lc == s - 1 - n
    formal = formal_top_coefficient(s, t, lam1, m)
    expected = -(kappa_c(t, 0) + kappa_dagger0(s, t, kind))
    checks["formal top coefficient"] = P.coeff(n + 2 * m + 2) == formal == expected
    if P.degree > n + 2 * m + 2:
        raise IdentityViolation("seed determinant order", f"degree {P.degree}")
    scale = -(kappa_dagger0(s, t, kind) + t - 1)
    if scale != 0:
        if P.lc != scale or P.degree != n + 2 * m + 2:
            raise IdentityViolation("seed determinant leading coefficient", f"{P.lc} vs {scale}")
        hi = HeinePoly(P * (1 / scale), n + 2 * m + 2, f"{kind}-type seed determinant", scale)
    else:
        # top coefficient cancels identically; two orders drop
        ka = Fraction(2 * m + 1 - t)
        surviving = (ka * ka - k * k) / (2 * n - 2 * s + 1)
        if P.degree != n + 2 * m or P.lc != surviving:
            raise IdentityViolation("seed determinant leading coefficient",
                                    f"degree {P.degree}, {P.lc} vs {surviving}")
        hi = HeinePoly(P.monic(), n + 2 * m + 2, f"{kind}-type seed determinant", P.lc)
    phi = AEHForm(-s, (1 + k) / 2, (1 - k) / 2, P, Pm.compose_y2())
    if not spec.ff.same_function(AEHForm(s, (1 + lam1) / 2, (1 + lam1) / 2, Pm.compose_y2())):
        raise IdentityViolation("seed form", kind)
    return APartner(kind, m, k, P, hi, phi, checks)


def c_case_top_coefficient(s: int, t: int, v: int) -> Fraction:
    """Formal top coefficient when the seed is the v-th bound state itself."""
    kc = kappa_c(t, v)
    return formal_top_coefficient(s, t, kc, v)


@dataclass
class LevelFactorization:
    quotient: ExactPoly  # in z
    heine: ExactPoly  # monic in z
    combination: ExactPoly  # G_{m+1} Pi_v - G_{v+1} Pi_m, in z
    ratio: Fraction  # quotient / combination
    upper_factor_ok: bool


def factor_at_level(s: int, t: int, kind: str, m: int, v: int) -> LevelFactorization:
    """Determinant at kappa = t-2v-1 split as y^(2s-1) (y+1)^kappa Q(y^2)."""
    kc = kappa_c(t, v)
    if kc <= 0:
        raise InvalidIndex(f"v={v} is not a bound level for t={t}")
    lam1 = a_lambda1(s, t, kind, m)
    Pm = a_cofactor(s, t, lam1, m)
    P = seed_determinant(s, t, kc, lam1, Pm)
    pref = Y ** (2 * s - 1) * ExactPoly([1, 1]) ** kc
    Q = P.exact_div(pref, "seed determinant at a bound level").even_part_in_z()
    Pv = pi_c(s, t, v)
    comb = g_hat(s, lam1, Pm) * Pv - g_hat(s, kc, Pv) * Pm
    ratio = Q.lc / comb.lc if not comb.is_zero() else Fraction(0)
    if comb * ratio != Q:
        raise IdentityViolation("bound-level factorization", "quotient not proportional to combination")
    upper = h_upper(s, t, kc) == pref * g_hat(s, kc, Pv).compose_y2() * 2
    return LevelFactorization(Q, Q.monic(), comb, ratio, upper)


def shape_invariance_report(s: int, t: int, m_max: int = 2) -> dict:
    idx = HPTIndex(s, t)
    if s < 2 or t < 1:
        raise InvalidIndex("needs s >= 2 and t >= 1")
    rep = {"b": {}, "a": {}, "a'": {}}
    # lowering t by two at fixed order
    k = Fraction(2 * t + 1, 3)
    if t >= 2 and (t - 1) ** 2 != k * k:
        rep["b"]["c-ladder keeps order"] = ladder_c(construct(s, t, k)).n == idx.n
    levels = [v for v in range(t) if kappa_c(t, v) > 0]
    k1 = Fraction(t) + Fraction(1, 2)
    degs = [partner_eigenfunction(s, t, k1, v).heine.degree for v in levels]
    rep["b"]["level step"] = all(b - a == 2 for a, b in zip(degs, degs[1:]))
    if levels:
        for kind in ("a", "a'"):
            for m in range(m_max + 1):
                if kind == "a'" and not m > t - 1:
                    continue
                q = factor_at_level(s, t, kind, m, 0).quotient
                rep[kind][m] = {"base order": q.degree, "seed order": m,
                                "order changes": q.degree != m}
    return rep
