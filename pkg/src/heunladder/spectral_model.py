"""Potentials, bound levels, AEH wavefunctions, the Darboux chain in r, and
float evaluation of terminating/convergent Gauss series.

Conventions.  y = tanh r maps r in (0, inf) onto (0, 1).  ``AEHForm``
represents y^a (1-y)^b (1+y)^c P(y)/D(y).  Solutions of the y-form
Sturm-Liouville equation (``phi``) and of the radial equation in r
(``psi``) differ by psi = (1-y^2)^(-1/2) phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .heun_ladder import (
    HPTIndex,
    boundary_value,
    construct,
    double_factorial,
    jacobi_polynomial,
    ladder_a,
    ladder_b,
    ladder_c,
    ladder_d,
)
from .poly_core import (
    ExactPoly,
    IdentityViolation,
    InvalidIndex,
    Number,
    Y,
    is_rational_square,
    to_rational,
)

ONE_MINUS_Y = ExactPoly([1, -1])
ONE_PLUS_Y = ExactPoly([1, 1])
ONE_MINUS_Y2 = ExactPoly([1, 0, -1])


# ---------------------------------------------------------------- AEH forms

@dataclass(frozen=True)
class AEHForm:
    a: Fraction
    b: Fraction
    c: Fraction
    poly: ExactPoly
    denom: Optional[ExactPoly] = None

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, to_rational(getattr(self, name)))

    # exact manipulation -------------------------------------------------
    def normalized(self) -> "AEHForm":
        """Move every factor y, 1-y, 1+y of the numerator into the exponents."""
        p = self.poly
        a, b, c = self.a, self.b, self.c
        if p.is_zero():
            return AEHForm(0, 0, 0, p, None)
        p, k = p.strip_root(0)
        a += k
        p, k = p.strip_root(1)
        b += k
        p = p * (-1) ** k  # keep the sign of the function on (0,1)
        p, k = p.strip_root(-1)
        c += k
        d = self.denom
        if d is not None:
            d, k = d.strip_root(0)
            a -= k
            d, k = d.strip_root(1)
            b -= k
            d = d * (-1) ** k
            d, k = d.strip_root(-1)
            c -= k
            if d.degree == 0:
                p, d = p * (1 / d.lc), None
        return AEHForm(a, b, c, p, d)

    def same_function(self, other: "AEHForm") -> bool:
        u, v = self.normalized(), other.normalized()
        if (u.a, u.b, u.c) != (v.a, v.b, v.c):
            return False
        du = u.denom if u.denom is not None else ExactPoly([1])
        dv = v.denom if v.denom is not None else ExactPoly([1])
        return u.poly * dv == v.poly * du

    def scaled(self, k: Number) -> "AEHForm":
        return AEHForm(self.a, self.b, self.c, self.poly * to_rational(k), self.denom)

    def shifted(self, da=0, db=0, dc=0) -> "AEHForm":
        return AEHForm(self.a + to_rational(da), self.b + to_rational(db),
                       self.c + to_rational(dc), self.poly, self.denom)

    def psi_form(self) -> "AEHForm":
        """(1-y^2)^(-1/2) times this form."""
        return self.shifted(0, Fraction(-1, 2), Fraction(-1, 2))

    def phi_form(self) -> "AEHForm":
        return self.shifted(0, Fraction(1, 2), Fraction(1, 2))

    def apply(self, p1: ExactPoly, p0: ExactPoly) -> "AEHForm":
        """(p1(y) d/dy + p0(y)) applied exactly, result normalized."""
        P, D = self.poly, self.denom
        a, b, c = self.a, self.b, self.c
        core = (ONE_MINUS_Y2 * P * a - Y * ONE_PLUS_Y * P * b
                + Y * ONE_MINUS_Y * P * c + Y * ONE_MINUS_Y2 * P.derivative())
        if D is None:
            new = p1 * core + p0 * Y * ONE_MINUS_Y2 * P
            return AEHForm(a - 1, b - 1, c - 1, new).normalized()
        num = p1 * (core * D - Y * ONE_MINUS_Y2 * P * D.derivative()) + p0 * Y * ONE_MINUS_Y2 * P * D
        return AEHForm(a - 1, b - 1, c - 1, num, D * D).normalized()

    def derivative(self) -> "AEHForm":
        return self.apply(ExactPoly([1]), ExactPoly())

    # float evaluation ---------------------------------------------------
    def _parts_r(self, r):
        r = np.asarray(r, dtype=float)
        e = np.exp(-2.0 * r)
        y = np.tanh(r)
        omy = 2.0 * e / (1.0 + e)
        opy = 2.0 / (1.0 + e)
        return y, omy, opy

    def value_r(self, r):
        y, omy, opy = self._parts_r(r)
        return self._value(y, omy, opy)

    def value_y(self, y):
        y = np.asarray(y, dtype=float)
        return self._value(y, 1.0 - y, 1.0 + y)

    def _value(self, y, omy, opy):
        logmag = (float(self.a) * np.log(y) + float(self.b) * np.log(omy)
                  + float(self.c) * np.log(opy))
        u = self.poly(y)
        if self.denom is not None:
            u = u / self.denom(y)
        return u * np.exp(logmag)

    def r_derivatives(self, r):
        """(psi, psi_r, psi_rr) treating this form as a function of r."""
        y, omy, opy = self._parts_r(r)
        w = omy * opy  # 1 - y^2
        a, b, c = float(self.a), float(self.b), float(self.c)
        le_r = a * w / y - b * opy + c * omy
        le_rr = w * (-a / y ** 2 - a - b - c)
        P, Pp, Ppp = self.poly, self.poly.derivative(), self.poly.derivative().derivative()
        p, pp, ppp = P(y), Pp(y), Ppp(y)
        if self.denom is None:
            u, uy, uyy = p, pp, ppp
        else:
            D = self.denom
            d, dp, dpp = D(y), D.derivative()(y), D.derivative().derivative()(y)
            u = p / d
            uy = (pp * d - p * dp) / d ** 2
            uyy = (ppp * d - p * dpp) / d ** 2 - 2 * dp * (pp * d - p * dp) / d ** 3
        ur = w * uy
        urr = w * w * uyy - 2 * y * w * uy
        E = np.exp(a * np.log(y) + b * np.log(omy) + c * np.log(opy))
        psi = E * u
        psi_r = E * (le_r * u + ur)
        psi_rr = E * ((le_rr + le_r ** 2) * u + 2 * le_r * ur + urr)
        return psi, psi_r, psi_rr

    def log_second_derivative_r(self, r):
        """d^2/dr^2 ln|psi| for a nodeless form."""
        psi, d1, d2 = self.r_derivatives(r)
        return d2 / psi - (d1 / psi) ** 2


# ------------------------------------------------------------- potentials

def _check_st(s: int, t: int):
    HPTIndex(s, t)


def potential_value(s: int, t: int, r=None, y=None):
    """V = s(s-1)/sinh^2 r - (s+t)(s+t-1)/cosh^2 r (exact when y is rational)."""
    _check_st(s, t)
    A, B = s * (s - 1), (s + t) * (s + t - 1)
    if (r is None) == (y is None):
        raise ValueError("give exactly one of r or y")
    if y is not None:
        if isinstance(y, (int, Fraction)):
            y = to_rational(y)
            if not 0 < y < 1:
                raise ValueError("y must lie in (0, 1)")
            return (1 - y * y) * (Fraction(A) / (y * y) - B)
        yf = np.asarray(y, dtype=float)
        if np.any((yf <= 0) | (yf >= 1)):
            raise ValueError("y must lie in (0, 1)")
        out = (1 - yf * yf) * (A / yf ** 2 - B)
        return float(out) if out.ndim == 0 else out
    rf = np.asarray(r, dtype=float)
    if np.any(rf <= 0):
        raise ValueError("r must be positive")
    out = A / np.sinh(rf) ** 2 - B / np.cosh(rf) ** 2
    return float(out) if out.ndim == 0 else out


def potential_r(s: int, t: int) -> Callable:
    _check_st(s, t)
    A, B = s * (s - 1), (s + t) * (s + t - 1)

    def V(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            first = np.where(r > 0, A / np.sinh(np.where(r > 0, r, 1.0)) ** 2, np.inf if A else 0.0)
        return first - B / np.cosh(r) ** 2

    return V


# ------------------------------------------------------------ bound levels

@dataclass(frozen=True)
class BoundState:
    v: int
    kappa_v: int
    energy: Fraction


def bound_states(s: int, t: int) -> list:
    _check_st(s, t)
    if t < 1:
        raise InvalidIndex("bound_states needs t >= 1")
    out = []
    v = 0
    while t - 2 * v - 1 > 0:
        k = t - 2 * v - 1
        out.append(BoundState(v, k, Fraction(-k * k)))
        v += 1
    return out


def eigenfunction(s: int, t: int, v: int) -> AEHForm:
    """phi-form bound state: y^s (1-y^2)^((1+kappa)/2) Pi_v(y^2)."""
    from .heun_ladder import pi_c

    k = t - 2 * v - 1
    if k <= 0:
        raise InvalidIndex(f"no bound level v={v} for t={t}")
    half = Fraction(1 + k, 2)
    return AEHForm(s, half, half, pi_c(s, t, v).compose_y2())


# ------------------------------------------------------ factorization data

@dataclass(frozen=True)
class CatalogEntry:
    kind: str
    m: int
    kappa: Optional[Fraction]
    lam1: Optional[Fraction]
    origin_regular: bool
    exists: bool
    note: str = ""


@dataclass(frozen=True)
class FactorizationCatalog:
    s: int
    t: int
    entries: tuple

    def get(self, kind: str, m: int) -> CatalogEntry:
        for e in self.entries:
            if e.kind == kind and e.m == m:
                return e
        raise KeyError((kind, m))

    def of_kind(self, kind: str) -> list:
        return [e for e in self.entries if e.kind == kind]


def factorization_catalog(s: int, t: int, m_max: int) -> FactorizationCatalog:
    _check_st(s, t)
    F = Fraction
    out = []
    for m in range(m_max + 1):
        k = F(t + 2 * s + 2 * m)
        out.append(CatalogEntry("a", m, k, -k, True, True))
        if m > t - 1:
            k = F(2 * m + 1 - t)
            out.append(CatalogEntry("a'", m, k, -k, True, True))
        if t + 2 * (s - m - 1) > 0 and 2 * m < 2 * s - 1:
            k = F(t + 2 * (s - m - 1))
            out.append(CatalogEntry("b", m, k, k, False, True))
        if t - 2 * m - 1 > 0:
            k = F(t - 2 * m - 1)
            out.append(CatalogEntry("b'", m, k, k, False, t == 0,
                                    "absent when t is a positive integer"))
            out.append(CatalogEntry("c", m, k, k, True, True))
        k = F(t + 2 * m + 1)
        out.append(CatalogEntry("d", m, k, -k, False, True))
        lam = F(t + 2 * (s - m - 1))
        if lam < 0:
            out.append(CatalogEntry("d'", m, -lam, lam, False, True))
    out.sort(key=lambda e: (e.kind, e.m))
    return FactorizationCatalog(s, t, tuple(out))


def catalog_inequalities_hold(cat: FactorizationCatalog) -> bool:
    t = cat.t
    for e in cat.entries:
        if e.kind == "a'" and not e.lam1 < 0:
            return False
        if e.kind in ("b", "b'", "c") and not e.lam1 > 0:
            return False
        if e.kind in ("d", "d'") and not e.lam1 < 0:
            return False
        if e.kind == "c" and e.kappa != t - 2 * e.m - 1:
            return False
    return True


@dataclass(frozen=True)
class EnergyRoots:
    roots: tuple
    exact: bool


def energy_quadratic(b: Number, lam0: Number, mu0: Number, m: int, sign: int) -> EnergyRoots:
    """Roots lam1 of b lam1^2 + 2 lam1 A + A^2 - mu0^2 = 0, A = 2m+1 +- lam0."""
    b, lam0, mu0 = to_rational(b), to_rational(lam0), to_rational(mu0)
    if b == 0:
        raise ValueError("b must be nonzero")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    A = 2 * m + 1 + sign * lam0
    disc = A * A - b * (A * A - mu0 * mu0)
    root = is_rational_square(disc)
    if root is not None:
        rts = sorted({(-A + root) / b, (-A - root) / b})
        return EnergyRoots(tuple(rts), True)
    sq = complex(float(disc)) ** 0.5
    rts = [(-float(A) + sq) / float(b), (-float(A) - sq) / float(b)]
    rts = [z.real if abs(z.imag) == 0 else z for z in rts]
    return EnergyRoots(tuple(rts), False)


# --------------------------------------------------- wavefunctions in r

def r_infinity_wavefunction(s: int, t: int, kappa: Number) -> AEHForm:
    kappa = to_rational(kappa)
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    hp = construct(s, t, kappa)
    return AEHForm(1 - s, (1 + kappa) / 2, (1 - kappa) / 2, hp.poly)


@dataclass(frozen=True)
class DarbouxSeed:
    t: int
    kappa: Fraction
    poly: ExactPoly  # Q with psi = e^{-kappa x} Q(tanh x)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-float(self.kappa) * x) * self.poly(np.tanh(x))

    def as_aeh(self) -> AEHForm:
        return AEHForm(0, self.kappa / 2, -self.kappa / 2, self.poly)


def darboux_seed(t: int, kappa: Number) -> DarbouxSeed:
    """Apply -(1/ch x) d/dx t+1 times to e^{-kappa x}, then multiply by ch^{t+1}.

    Members of the family e^{-kappa x} Q(th x) / ch^j x stay closed under the
    operator: Q -> -[(1 - y^2) Q' - j y Q - kappa Q], j -> j+1.
    """
    kappa = to_rational(kappa)
    if t < 0:
        raise InvalidIndex("t must be >= 0")
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    Q = ExactPoly([1])
    for j in range(t + 1):
        Q = -(ONE_MINUS_Y2 * Q.derivative() - Y * Q * j - Q * kappa)
    expected = jacobi_polynomial(t, kappa, -kappa) * (kappa * math.factorial(t))
    if Q != expected:
        raise IdentityViolation("seed chain vs scaled Jacobi", f"{Q} != {expected}")
    return DarbouxSeed(t, kappa, Q)


def darboux_step(s_prime: int, t: int, psi: AEHForm) -> AEHForm:
    """-psi_a (1-y^2) d/dy (psi/psi_a), psi_a = y^s' (1-y^2)^(-(t+2s')/2)."""
    e = Fraction(t + 2 * s_prime, 2)
    ratio = psi.shifted(-s_prime, e, e)
    d = ratio.apply(ONE_MINUS_Y2 * (-1), ExactPoly())
    return d.shifted(s_prime, -e, -e).normalized()


def darboux_chain(s: int, t: int, kappa: Number) -> AEHForm:
    psi = darboux_seed(t, kappa).as_aeh()
    for sp in range(1, s):
        psi = darboux_step(sp, t, psi)
    return psi


def darboux_scale(s: int, t: int, kappa: Number) -> Fraction:
    """Constant relating the chain output to y^(1-s) Hp_n e^{-kappa r}."""
    n = HPTIndex(s, t).n
    return to_rational(kappa) * double_factorial(2 * n - 2 * s + 1)


def darboux_matches_ladder(s: int, t: int, kappa: Number) -> bool:
    kappa = to_rational(kappa)
    chain = darboux_chain(s, t, kappa)
    ref = AEHForm(1 - s, kappa / 2, -kappa / 2,
                  construct(s, t, kappa).poly * darboux_scale(s, t, kappa))
    return chain.same_function(ref)


# ------------------------------------------------------ Gauss series

@dataclass(frozen=True)
class SeriesValue:
    value: float
    bound: float
    terms: int


def _is_nonpos_int(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def hyp2f1_series(alpha, beta, gamma, x, tol: float = 1e-16, max_terms: int = 2_000_000) -> SeriesValue:
    alpha, beta, gamma, x = float(alpha), float(beta), float(gamma), float(x)
    term_a = _is_nonpos_int(alpha)
    term_b = _is_nonpos_int(beta)
    if _is_nonpos_int(gamma):
        stop = min([-int(v) for v, f in ((alpha, term_a), (beta, term_b)) if f], default=None)
        if stop is None or stop >= -int(gamma) + 1:
            raise ValueError("gamma is a non-positive integer")
    if term_a or term_b:
        N = min(-int(v) for v, f in ((alpha, term_a), (beta, term_b)) if f)
        total, t_k = 0.0, 1.0
        for k in range(N + 1):
            total += t_k
            t_k *= (alpha + k) * (beta + k) / ((gamma + k) * (k + 1)) * x
        return SeriesValue(total, 0.0, N + 1)
    if x == 1.0:
        if not gamma - alpha - beta > 0:
            raise ValueError("series diverges at x = 1 unless gamma - alpha - beta > 0")
        val = math.exp(math.lgamma(gamma) + math.lgamma(gamma - alpha - beta)
                       - math.lgamma(gamma - alpha) - math.lgamma(gamma - beta))
        sgn = (math.copysign(1, math.gamma(gamma)) * math.copysign(1, math.gamma(gamma - alpha - beta))
               * math.copysign(1, math.gamma(gamma - alpha)) * math.copysign(1, math.gamma(gamma - beta)))
        return SeriesValue(sgn * val, 0.0, 0)
    if not abs(x) < 1:
        raise ValueError("series needs |x| < 1")
    total, t_k = 0.0, 1.0
    for k in range(max_terms):
        if k + gamma > 0:
            rho = abs(x) * (1 + abs(alpha - gamma) / (k + gamma)) * (1 + abs(beta - 1) / (k + 1))
            if rho < 1:
                bound = abs(t_k) / (1 - rho)
                if bound <= tol:
                    return SeriesValue(total, bound, k)
        total += t_k
        t_k *= (alpha + k) * (beta + k) / ((gamma + k) * (k + 1)) * x
    raise ValueError("series did not reach the requested tail bound")


def hyp2f1(alpha, beta, gamma, x, tol: float = 1e-16) -> float:
    return hyp2f1_series(alpha, beta, gamma, x, tol).value


def hyp2f1_dx(alpha, beta, gamma, x, tol: float = 1e-16) -> float:
    """Term-by-term derivative in x, re-indexed as a shifted series."""
    a, b, g = float(alpha), float(beta), float(gamma)
    if a == 0 or b == 0:
        return 0.0
    return a * b / g * hyp2f1(a + 1, b + 1, g + 1, x, tol)


# -------------------------------------------- checks on the Heun functions

def bridge_parameters(s: int, t: int, kappa: Number):
    n = HPTIndex(s, t).n
    k = to_rational(kappa)
    return (k - n) / 2, (k + t + 1) / 2, k + 1


def bridge_rhs(s: int, t: int, kappa: Number, y: float) -> float:
    al, be, ga = bridge_parameters(s, t, kappa)
    k = float(kappa)
    return 2.0 ** (-k) * (1 + y) ** k * hyp2f1(al, be, ga, 1 - y * y)


def contiguous_checks(s: int, t: int, kappa: Number, z: float) -> dict:
    """Four first-order contiguous relations in z, with F(z) = F(alpha, beta; gamma; 1-z).

    Returns label -> (operator side, shifted-series side).
    """
    al, be, ga = (float(p) for p in bridge_parameters(s, t, kappa))
    x = 1 - z
    F = hyp2f1(al, be, ga, x)
    dF = -hyp2f1_dx(al, be, ga, x)
    out = {}
    out["a"] = (z * (1 - z) * dF + (al + be - ga - be * z) * F,
                (al - ga) * hyp2f1(al - 1, be, ga, x))
    out["b"] = ((1 - z) * dF - al * F, -al * hyp2f1(al + 1, be, ga, x))
    out["c"] = (z * (1 - z) * dF + (al + be - ga) * F - al * z * F,
                (be - ga) * hyp2f1(al, be - 1, ga, x))
    out["d"] = ((1 - z) * dF - be * F, -be * hyp2f1(al, be + 1, ga, x))
    return out


def _normalized_hp(s: int, t: int, kappa: Fraction) -> ExactPoly:
    hp = construct(s, t, kappa)
    return hp.poly * (1 / boundary_value(hp))


def ladder_function_checks(s: int, t: int, kappa: Number) -> dict:
    """Ladder relations on Hp/Hp(1) (decaying form) and on (1+y)^-kappa Hp/Hp(1).

    Each entry maps a label to True/False; relations whose target index is
    invalid are omitted.
    """
    k = to_rational(kappa)
    n = HPTIndex(s, t).n
    f = _normalized_hp(s, t, k)
    out = {}
    rel = []  # (label, p1, p0 for the decaying form, coefficient, y power, target (s,t))
    rel.append(("a", Y * ONE_MINUS_Y2, ExactPoly([1 - 2 * s, -k, -(t + 1)]), -(k + t + 2 * s), 0, (s + 1, t)))
    if s >= 2:
        rel.append(("b", ONE_MINUS_Y2, ExactPoly([-k, n]), n - k, 1, (s - 1, t)))
        rel.append(("d", ONE_MINUS_Y2, ExactPoly([-k, -(t + 1)]), -(k + t + 1), 1, (s - 1, t + 2)))
    if t >= 2:
        rel.append(("c", Y * ONE_MINUS_Y2, ExactPoly([1 - 2 * s, -k, n]), t - 1 - k, 0, (s + 1, t - 2)))
    for label, p1, p0, coef, ypow, (s2, t2) in rel:
        g = _normalized_hp(s2, t2, k)
        lhs = p1 * f.derivative() + p0 * f
        rhs = Y ** ypow * g * coef
        out["decaying:" + label] = lhs == rhs
        # conjugated form acting on (1+y)^(-kappa) times the same function
        lhs_aeh = AEHForm(0, 0, -k, f).apply(p1, p0 + _conj_shift(p1, k))
        rhs_aeh = AEHForm(0, 0, -k, Y ** ypow * g * coef)
        out["conjugated:" + label] = lhs_aeh.same_function(rhs_aeh)
    return out


def _conj_shift(p1: ExactPoly, k: Fraction) -> ExactPoly:
    # (1+y)^-k [p1 d/dy + p0] (1+y)^k = p1 d/dy + p0 + k p1 / (1+y); p1 carries (1 - y^2)
    return p1.exact_div(ONE_PLUS_Y) * k


@dataclass
class HeunFunctionReport:
    s: int
    t: int
    kappa: Fraction
    bridge_max_err: float
    contiguous_max_err: float
    ladder_exact: dict = field(default_factory=dict)
    tol_bridge: float = 1e-10
    tol_contiguous: float = 1e-9

    @property
    def passed(self) -> bool:
        return (self.bridge_max_err <= self.tol_bridge
                and self.contiguous_max_err <= self.tol_contiguous
                and all(self.ladder_exact.values()))


def heun_function_checks(s: int, t: int, kappa: Number, ys, zs=None,
                         tol_bridge: float = 1e-10, tol_contiguous: float = 1e-9) -> HeunFunctionReport:
    k = to_rational(kappa)
    if k <= 0:
        raise ValueError("kappa must be positive")
    hp = construct(s, t, k)
    h1 = float(boundary_value(hp))
    berr = 0.0
    for y in ys:
        y = float(y)
        if not 0 <= y <= 1:
            raise ValueError("sample ys must lie in [0, 1]")
        lhs = float(hp.poly(y)) / h1
        rhs = bridge_rhs(s, t, k, y)
        berr = max(berr, abs(lhs - rhs) / max(1.0, abs(lhs)))
    if zs is None:
        zs = np.linspace(0.05, 0.95, 10)
    cerr = 0.0
    for z in zs:
        for lhs, rhs in contiguous_checks(s, t, k, float(z)).values():
            cerr = max(cerr, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return HeunFunctionReport(s, t, k, berr, cerr, ladder_function_checks(s, t, k),
                              tol_bridge, tol_contiguous)
