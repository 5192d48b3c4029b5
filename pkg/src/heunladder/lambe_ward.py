"""Tridiagonal accessory-parameter eigenproblem for polynomial Heun solutions.

A polynomial sum_j G_j y^j solves the Heun equation at accessory value q iff
for every row j

    h[j, j-1] G[j-1] + h[j, j] G[j] + h[j, j+1] G[j+1] = q G[j]

with G[-1] = G[n+1] = 0.  ``hpt_lw_construct`` runs these rows backwards
from the top for the hyperbolic Poschl-Teller parameters, giving a second
route to Hp_n that shares no code with the ladder construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .heun_ladder import HeunPoly, HPTIndex, construct
from .poly_core import DegenerateScale, ExactPoly, IdentityViolation, Number, to_rational


@dataclass(frozen=True)
class LWSystem:
    n: int
    rho: tuple
    z_out: Fraction
    upper: tuple  # h[j, j+1], j = 0..n
    diag: tuple  # h[j, j]
    lower: tuple  # h[j, j-1]

    @property
    def beta(self) -> Fraction:
        r1, r2, r3 = self.rho
        return 2 * r1 + 2 * r2 + 2 * r3 + self.n - 1

    def row_residuals(self, G, q) -> list:
        """Left minus right side of every row, exact."""
        q = to_rational(q)
        G = [to_rational(g) for g in G] + [Fraction(0)] * (self.n + 1 - len(G))
        out = []
        for j in range(self.n + 1):
            acc = (self.diag[j] - q) * G[j]
            if j > 0:
                acc += self.lower[j] * G[j - 1]
            if j < self.n:
                acc += self.upper[j] * G[j + 1]
            out.append(acc)
        return out


def lw_matrix(n: int, rho, z_out: Number) -> LWSystem:
    r1, r2, r3 = (to_rational(r) for r in rho)
    z = to_rational(z_out)
    beta = 2 * r1 + 2 * r2 + 2 * r3 + n - 1
    upper, diag, lower = [], [], []
    for j in range(n + 1):
        upper.append((j + 1) * (2 * r1 + j) * z)
        diag.append(-j * j * (z + 1) - j * (z * (2 * r1 + 2 * r2 - 1) + 2 * r1 + 2 * r3 - 1))
        lower.append((j - n - 1) * (beta + j - 1))
    return LWSystem(n, (r1, r2, r3), z, tuple(upper), tuple(diag), tuple(lower))


def hpt_rho(s: int, kappa: Number) -> tuple:
    """Exponent triple (origin, y = 1, y = -1) for the hyperbolic problem."""
    kappa = to_rational(kappa)
    return (Fraction(1 - s), (1 + kappa) / 2, (1 - kappa) / 2)


def hpt_system(s: int, t: int, kappa: Number) -> LWSystem:
    return lw_matrix(HPTIndex(s, t).n, hpt_rho(s, kappa), -1)


@dataclass(frozen=True)
class AccessorySpectrum:
    charpoly: ExactPoly  # det(H - q I) as a polynomial in q
    roots: tuple  # complex numeric roots

    def contains(self, q: Number) -> bool:
        return self.charpoly(to_rational(q)) == 0


def characteristic_polynomial(sys: LWSystem) -> ExactPoly:
    """det(H - q I) by the continuant recurrence, exact in q."""
    qvar = ExactPoly([0, 1])
    d_prev, d = ExactPoly([1]), ExactPoly([sys.diag[0]]) - qvar
    for j in range(1, sys.n + 1):
        d_prev, d = d, (ExactPoly([sys.diag[j]]) - qvar) * d - d_prev * (sys.lower[j] * sys.upper[j - 1])
    return d


def accessory_spectrum(sys: LWSystem) -> AccessorySpectrum:
    if sys.n < 1:
        raise ValueError("accessory_spectrum needs n >= 1")
    cp = characteristic_polynomial(sys)
    roots = np.roots(cp.float_coeffs()[::-1])
    roots = tuple(sorted((complex(r) for r in roots), key=lambda z: (z.real, z.imag)))
    return AccessorySpectrum(cp, roots)


def hpt_lw_construct(s: int, t: int, kappa: Number, cross_check: bool = True) -> HeunPoly:
    """Backward three-term recurrence with G_n = 1 for the hyperbolic case."""
    idx = HPTIndex(s, t)
    n, k = idx.n, to_rational(kappa)
    q = 2 * k * (s - 1)

    def up(j):
        return Fraction((j + 1) * (2 * s - 2 - j))

    def dg(j):
        return 2 * j * k

    def lo(j):
        return Fraction((j - n - 1) * (t + j))

    G = [Fraction(0)] * (n + 2)
    G[n] = Fraction(1)
    if n >= 1:
        G[n - 1] = k
        # the top row must reproduce G_{n-1} = kappa
        top = lo(n) * G[n - 1] + (dg(n) - q) * G[n]
        if top != 0:
            raise IdentityViolation("recurrence top row", f"residual {top}")
    for j in range(n - 1, 0, -1):
        G[j - 1] = -(up(j) * G[j + 1] + (dg(j) - q) * G[j]) / lo(j)
    row0 = (dg(0) - q) * G[0] + (up(0) * G[1] if n >= 1 else 0)
    if row0 != 0:
        raise IdentityViolation("recurrence bottom row", f"residual {row0}")
    hp = HeunPoly(idx, k, ExactPoly(G[: n + 1]))
    if cross_check:
        ref = construct(s, t, k)
        if ref.poly != hp.poly:
            raise IdentityViolation("recurrence vs ladder construction",
                                    f"s={s} t={t} kappa={k}")
    return hp


def bottom_row_terms(s: int, t: int, kappa: Number):
    """Both sides of the j = 0 row for the recurrence solution."""
    hp = hpt_lw_construct(s, t, kappa, cross_check=False)
    k = hp.kappa
    lhs = (2 * s - 2) * hp.G(1)
    rhs = 2 * k * (s - 1) * hp.G(0)
    return lhs, rhs


def type3_even_solution(m: int, rho1: Number, rho2: Number) -> ExactPoly:
    """Even polynomial of degree 2m at q = 0 for z_out = -1 and equal rho2, rho3."""
    if m < 0:
        raise ValueError("m must be >= 0")
    n = 2 * m
    sys = lw_matrix(n, (rho1, rho2, rho2), -1)
    G = [Fraction(0)] * (n + 2)
    G[n] = Fraction(1)
    for j in range(n - 1, 0, -2):
        if sys.upper[j] == 0 or sys.lower[j] == 0:
            raise DegenerateScale(f"vanishing off-diagonal entry at row {j}")
        G[j - 1] = -sys.upper[j] * G[j + 1] / sys.lower[j]
    poly = ExactPoly(G[: n + 1])
    res = sys.row_residuals(poly.coeffs, 0)
    if any(r != 0 for r in res):
        raise IdentityViolation("even solution rows", str(res))
    return poly
