"""Heun polynomials Hp_n[y; kappa; s] for the hyperbolic Poschl-Teller problem.

Index bookkeeping: n = t + 2s - 2 with s >= 1, t >= 0.  Every polynomial is
monic and its y**(n-1) coefficient equals kappa.  Construction starts from a
scaled Jacobi polynomial (s = 1) and climbs in s with the raising operator
``ladder_a``; the other three operators move between neighbouring indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .poly_core import (
    ExactPoly,
    Y,
    DegenerateScale,
    IdentityViolation,
    InvalidIndex,
    Number,
    double_factorial,
    gbinom,
    rising_pochhammer,
    shifted_pochhammer,
    sturm_count,
    squarefree_part,
    to_rational,
)

ONE_MINUS_Y2 = ExactPoly([1, 0, -1])


@dataclass(frozen=True)
class HPTIndex:
    s: int
    t: int

    def __post_init__(self):
        if not isinstance(self.s, int) or not isinstance(self.t, int):
            raise InvalidIndex("s and t must be integers")
        if self.s < 1:
            raise InvalidIndex(f"s must be >= 1 (got {self.s})")
        if self.t < 0:
            raise InvalidIndex(f"t must be >= 0 (got {self.t})")

    @property
    def n(self) -> int:
        return self.t + 2 * self.s - 2

    @property
    def lam0(self) -> Fraction:
        return Fraction(2 * self.s - 1, 2)

    @property
    def mu0(self) -> Fraction:
        return Fraction(2 * (self.t + self.s) - 1, 2)


@dataclass(frozen=True)
class HeunPoly:
    index: HPTIndex
    kappa: Fraction
    poly: ExactPoly

    @property
    def s(self) -> int:
        return self.index.s

    @property
    def t(self) -> int:
        return self.index.t

    @property
    def n(self) -> int:
        return self.index.n

    def G(self, j: int) -> Fraction:
        return self.poly.coeff(j)

    def check_shape(self, anchor: str = "HeunPoly shape"):
        p = self.poly
        if p.degree != self.n or p.lc != 1:
            raise IdentityViolation(anchor, f"expected monic degree {self.n}, got {p}")
        if self.n >= 1 and p.coeff(self.n - 1) != self.kappa:
            raise IdentityViolation(anchor, "subleading coefficient differs from kappa")
        return self


def _hp(s: int, t: int, kappa: Fraction, poly: ExactPoly, anchor: str) -> HeunPoly:
    return HeunPoly(HPTIndex(s, t), kappa, poly).check_shape(anchor)


def jacobi_polynomial(t: int, a: Number, b: Number) -> ExactPoly:
    """P_t^{(a,b)}(y) from the finite binomial double sum (exact for rational a, b)."""
    a, b = to_rational(a), to_rational(b)
    ym = ExactPoly([Fraction(-1, 2), Fraction(1, 2)])  # (y-1)/2
    yp = ExactPoly([Fraction(1, 2), Fraction(1, 2)])  # (y+1)/2
    out = ExactPoly()
    for j in range(t + 1):
        out = out + (ym ** j) * (yp ** (t - j)) * (gbinom(t + a, t - j) * gbinom(t + b, j))
    return out


def jacobi_seed(t: int, kappa: Number) -> HeunPoly:
    kappa = to_rational(kappa)
    HPTIndex(1, t)
    scale = Fraction(factorial(t), double_factorial(2 * t - 1))
    poly = jacobi_polynomial(t, kappa, -kappa) * scale
    return _hp(1, t, kappa, poly, "jacobi_seed")


def ladder_a(hp: HeunPoly) -> HeunPoly:
    """Raise s by one at fixed t (n -> n+2)."""
    s, n, k, H = hp.s, hp.n, hp.kappa, hp.poly
    op = (Y * ONE_MINUS_Y2 * H.derivative()
          + ExactPoly([1 - 2 * s, -k, -(n - 2 * s + 3)]) * H)
    return _hp(s + 1, hp.t, k, op * Fraction(-1, 2 * n - 2 * s + 3), "ladder_a")


def ladder_b(hp: HeunPoly) -> HeunPoly:
    """Lower s by one at fixed t (n -> n-2)."""
    s, n, k, H = hp.s, hp.n, hp.kappa, hp.poly
    if s < 2:
        raise InvalidIndex("ladder_b needs s >= 2")
    scale = Fraction(n * n - k * k) / (2 * n - 2 * s + 1)
    if scale == 0:
        raise DegenerateScale(f"ladder_b scale n^2 - kappa^2 vanishes (n={n}, kappa={k})")
    op = ONE_MINUS_Y2 * H.derivative() + ExactPoly([-k, n]) * H
    poly = op.exact_div(Y * scale, "ladder_b divisibility")
    return _hp(s - 1, hp.t, k, poly, "ladder_b")


def ladder_c(hp: HeunPoly) -> HeunPoly:
    """Raise s by one and lower t by two (order preserved)."""
    s, t, n, k, H = hp.s, hp.t, hp.n, hp.kappa, hp.poly
    if t < 2:
        raise InvalidIndex("ladder_c target needs t >= 2")
    scale = ((n - 2 * s + 1) ** 2 - k * k) / Fraction(2 * n - 2 * s + 1)
    if scale == 0:
        raise DegenerateScale(f"ladder_c scale vanishes at kappa = +-(t-1) (kappa={k})")
    op = Y * ONE_MINUS_Y2 * H.derivative() + ExactPoly([1 - 2 * s, -k, n]) * H
    return _hp(s + 1, t - 2, k, op * (1 / scale), "ladder_c")


def ladder_d(hp: HeunPoly) -> HeunPoly:
    """Lower s by one and raise t by two (order preserved)."""
    s, t, n, k, H = hp.s, hp.t, hp.n, hp.kappa, hp.poly
    if s < 2:
        raise InvalidIndex("ladder_d target needs s >= 2")
    op = ONE_MINUS_Y2 * H.derivative() + ExactPoly([-k, -(t + 1)]) * H
    poly = op.exact_div(Y * (-(n + t + 1)), "ladder_d divisibility")
    return _hp(s - 1, t + 2, k, poly, "ladder_d")


@lru_cache(maxsize=4096)
def _construct(s: int, t: int, kappa: Fraction) -> HeunPoly:
    if s == 1:
        return jacobi_seed(t, kappa)
    return ladder_a(_construct(s - 1, t, kappa))


def construct(s: int, t: int, kappa: Number) -> HeunPoly:
    HPTIndex(s, t)
    return _construct(s, t, to_rational(kappa))


def heun_coefficients(hp: HeunPoly):
    """(B2, C1) of y(y^2-1)H'' + 2 B2 H' + C1 H = 0."""
    s, t, n, k = hp.s, hp.t, hp.n, hp.kappa
    B2 = ExactPoly([s - 1, k, 2 - s])
    C1 = ExactPoly([-2 * k * (s - 1), -n * (t + 1)])
    return B2, C1


def heun_residual(hp: HeunPoly) -> ExactPoly:
    H = hp.poly
    B2, C1 = heun_coefficients(hp)
    return (ExactPoly([0, -1, 0, 1]) * H.derivative().derivative()
            + B2 * H.derivative() * 2 + C1 * H)


def boundary_value(hp: HeunPoly) -> Fraction:
    return hp.poly(Fraction(1))


def boundary_closed_form(s: int, t: int, kappa: Number) -> Fraction:
    kappa = to_rational(kappa)
    n = HPTIndex(s, t).n
    out = Fraction(1)
    for j in range(1, s):
        out *= kappa + n - 2 * j + 2
    out *= shifted_pochhammer(kappa, n - 2 * s + 2)
    return out / double_factorial(2 * n - 2 * s + 1)


def boundary_rising_reading(s: int, t: int, kappa: Number) -> Fraction:
    """Same closed form with the ordinary rising factorial (kappa)_t in place."""
    kappa = to_rational(kappa)
    n = HPTIndex(s, t).n
    out = Fraction(1)
    for j in range(1, s):
        out *= kappa + n - 2 * j + 2
    out *= rising_pochhammer(kappa, n - 2 * s + 2)
    return out / double_factorial(2 * n - 2 * s + 1)


def closed_form_check(hp: HeunPoly) -> Fraction:
    direct = boundary_value(hp)
    closed = boundary_closed_form(hp.s, hp.t, hp.kappa)
    if direct != closed:
        raise IdentityViolation("boundary value", f"direct {direct} vs closed form {closed}")
    return direct


def monic_hypergeometric(m: int, b: Number, c: Number) -> ExactPoly:
    """Monic multiple of the terminating series F(-m, b; c; z)."""
    b, c = to_rational(b), to_rational(c)
    coeffs = []
    term = Fraction(1)
    for j in range(m + 1):
        coeffs.append(term)
        if j < m:
            if c + j == 0:
                raise DegenerateScale("hypergeometric denominator parameter hits a pole")
            term = term * (j - m) * (b + j) / ((c + j) * (j + 1))
    p = ExactPoly(coeffs)
    if p.degree != m:
        raise DegenerateScale(f"series F(-{m}, {b}; {c}; z) drops degree")
    return p.monic()


def pi_c(s: int, t: int, v: int) -> ExactPoly:
    """Even cofactor (in z = y^2) of Hp_n at the v-th bound-state kappa."""
    idx = HPTIndex(s, t)
    return monic_hypergeometric(v, idx.mu0 - v, Fraction(2 * s + 1, 2))


def pi_b(s: int, t: int, m: int) -> ExactPoly:
    """Even cofactor (in z = y^2) of Hp_n at kappa = t + 2(s-m-1)."""
    idx = HPTIndex(s, t)
    return monic_hypergeometric(m, idx.mu0 - m, Fraction(3 - 2 * s, 2))


def kappa_c(t: int, v: int) -> int:
    return t - 2 * v - 1


def kappa_b(s: int, t: int, m: int) -> int:
    return t + 2 * (s - m - 1)


def _simple_root_count(p: ExactPoly, a, b) -> tuple:
    return sturm_count(p, a, b), squarefree_part(p).degree == p.degree


def factor_at_c(s: int, t: int, v: int, strict: bool = True):
    """Split Hp_n at kappa = t-2v-1 as y^(2s-1) (y+1)^kappa Pi_v(y^2).

    ``strict`` enforces kappa > 0 (a genuine bound level).  With
    ``strict=False`` the threshold value kappa = 0 is also accepted.
    """
    HPTIndex(s, t)
    if v < 0:
        raise InvalidIndex("v must be >= 0")
    k = kappa_c(t, v)
    if k < 0 or (strict and k == 0):
        raise InvalidIndex(f"kappa = t-2v-1 = {k} is not a bound-state value")
    hp = construct(s, t, k)
    divisor = Y ** (2 * s - 1) * ExactPoly([1, 1]) ** k
    cof = hp.poly.exact_div(divisor, "bound-state factorization")
    try:
        cz = cof.even_part_in_z()
    except ValueError:
        raise IdentityViolation("bound-state factorization", "cofactor is not even")
    if v > 0:
        cnt, simple = _simple_root_count(cz, 0, 1)
        if cnt != v or not simple:
            raise IdentityViolation("bound-state factorization",
                                    f"cofactor has {cnt} roots in (0,1), expected {v} simple")
    return hp, cz


def factor_at_b(s: int, t: int, m: int):
    """Split Hp_n at kappa = t+2(s-m-1) as (y+1)^(n-2m) Pi_m(y^2)."""
    idx = HPTIndex(s, t)
    if not (0 <= m and 2 * m < 2 * s - 1):
        raise InvalidIndex(f"m must satisfy 0 <= m < s - 1/2 (got m={m}, s={s})")
    k = kappa_b(s, t, m)
    if k <= 0:
        raise InvalidIndex(f"kappa = {k} must be positive")
    hp = construct(s, t, k)
    cof = hp.poly.exact_div(ExactPoly([1, 1]) ** (idx.n - 2 * m), "origin-type factorization")
    try:
        cz = cof.even_part_in_z()
    except ValueError:
        raise IdentityViolation("origin-type factorization", "cofactor is not even")
    return hp, cz


def zero_count(hp: HeunPoly) -> int:
    return sturm_count(hp.poly, 0, 1)


def zero_windows(t: int):
    """(lo, hi, expected zero count in (0,1)) for kappa strictly between levels.

    Between consecutive bound levels kappa_{v+1} < kappa < kappa_v the
    polynomial has v+1 zeros in (0,1); the lowest window starts at 0.
    Above the ground level (kappa > t-1) there are none.
    """
    out = []
    v = 0
    while kappa_c(t, v) > 0:
        out.append((max(0, kappa_c(t, v + 1)), kappa_c(t, v), v + 1))
        v += 1
    return out
