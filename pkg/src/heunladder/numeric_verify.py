"""Floating-point cross-checks: finite-difference spectra, pointwise Schrodinger
residuals, zero counts over kappa, and square-integrability."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from .heun_ladder import construct, zero_windows
from .poly_core import Number, sturm_count, to_rational
from .spectral_model import AEHForm


@dataclass(frozen=True)
class RadialGrid:
    r_min: float
    r_max: float
    N: int

    def __post_init__(self):
        if self.N < 3:
            raise ValueError("need N >= 3")
        if not self.r_max > self.r_min >= 0:
            raise ValueError("need 0 <= r_min < r_max")

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.N - 1)

    def interior(self) -> np.ndarray:
        return self.r_min + self.h * np.arange(1, self.N - 1)

    def refined(self) -> "RadialGrid":
        """Same interval with exactly half the spacing."""
        return RadialGrid(self.r_min, self.r_max, 2 * self.N - 1)


DEFAULT_GRID = RadialGrid(0.0, 14.0, 8000)


def _count_below(diag: np.ndarray, off2: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Number of eigenvalues below each lam (Sturm count via LDL^T pivots)."""
    tiny = np.finfo(float).tiny
    q = diag[0] - lam
    cnt = (q < 0).astype(np.int64)
    for i in range(1, diag.size):
        q = np.where(q == 0, tiny, q)
        q = diag[i] - lam - off2[i - 1] / q
        cnt += q < 0
    return cnt


def tridiagonal_eigenvalues(diag: np.ndarray, off: np.ndarray, k: int,
                            tol: float = 1e-13, points: int = 32) -> np.ndarray:
    """k smallest eigenvalues of a symmetric tridiagonal matrix by multisection."""
    diag = np.asarray(diag, dtype=float)
    off = np.asarray(off, dtype=float)
    off2 = off * off
    rad = np.abs(np.concatenate([[0.0], off])) + np.abs(np.concatenate([off, [0.0]]))
    lo0, hi0 = float(np.min(diag - rad)), float(np.max(diag + rad))
    k = min(k, diag.size)
    lo = np.full(k, lo0)
    hi = np.full(k, hi0)
    idx = np.arange(k)
    frac = np.linspace(0.0, 1.0, points + 2)[1:-1]
    while np.max(hi - lo) > tol * max(1.0, np.max(np.abs(lo))):
        lams = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
        counts = _count_below(diag, off2, lams.ravel()).reshape(k, points)
        # eigenvalue j (0-based) lies where the count first exceeds j
        above = counts > idx[:, None]
        first = np.argmax(above, axis=1)
        has = above.any(axis=1)
        new_hi = np.where(has, lams[np.arange(k), first], hi)
        prev = np.where(first > 0, lams[np.arange(k), np.maximum(first - 1, 0)], lo)
        new_lo = np.where(has, prev, lams[:, -1])
        lo, hi = new_lo, new_hi
    return 0.5 * (lo + hi)


@dataclass
class SpectrumReport:
    eigenvalues: list
    reference: list
    errors: list
    grid: dict
    richardson: Optional[list] = None
    coarse: Optional[list] = None
    truncated: bool = False

    @property
    def best(self) -> list:
        return self.richardson if self.richardson is not None else self.eigenvalues


def _fd_lowest(potential: Callable, grid: RadialGrid, k: int) -> np.ndarray:
    r = grid.interior()
    h = grid.h
    V = np.asarray(potential(r), dtype=float)
    diag = 2.0 / h ** 2 + V
    off = np.full(r.size - 1, -1.0 / h ** 2)
    return tridiagonal_eigenvalues(diag, off, k)


def fd_spectrum(potential: Callable, grid: RadialGrid = DEFAULT_GRID, k: int = 1,
                reference: Optional[Sequence[float]] = None, richardson: bool = True,
                bound_only: bool = True) -> SpectrumReport:
    """Lowest k eigenvalues of -d^2/dr^2 + V with Dirichlet walls at both ends."""
    ev = _fd_lowest(potential, grid, k)
    truncated = False
    if bound_only:
        keep = ev < 0
        truncated = not keep.all()
        ev = ev[keep]
    rich = None
    coarse = None
    eigen = list(map(float, ev))
    if richardson and ev.size:
        fine = _fd_lowest(potential, grid.refined(), ev.size)
        coarse = eigen
        eigen = list(map(float, fine))
        rich = list(map(float, (4.0 * fine - ev) / 3.0))
    ref = list(map(float, reference)) if reference is not None else []
    best = rich if rich is not None else eigen
    errs = [abs(a - b) for a, b in zip(best, ref)]
    meta = {"r_min": grid.r_min, "r_max": grid.r_max, "N": grid.N, "h": grid.h,
            "refined_N": grid.refined().N if richardson else None}
    return SpectrumReport(eigen, ref, errs, meta, rich, coarse, truncated)


def convergence_ratio(potential: Callable, r_max: float, N: int, exact: float) -> float:
    """Error ratio between spacing h and h/2 (close to 4 for second order)."""
    g = RadialGrid(0.0, r_max, N)
    e1 = _fd_lowest(potential, g, 1)[0]
    e2 = _fd_lowest(potential, g.refined(), 1)[0]
    return abs(e1 - exact) / abs(e2 - exact)


def chebyshev_points(a: float, b: float, n: int) -> np.ndarray:
    k = np.arange(n)
    x = np.cos((2 * k + 1) * np.pi / (2 * n))
    return np.sort(0.5 * (a + b) + 0.5 * (b - a) * x)


def schrodinger_residual(psi: AEHForm, V: Callable, energy: float, rs,
                         floor: float = 1e-300) -> float:
    """max |-psi'' + (V - E) psi| / max |E psi| over the sample points.

    ``psi`` is a function of r (use ``AEHForm.psi_form`` on y-form solutions).
    """
    rs = np.asarray(rs, dtype=float)
    val, _, d2 = psi.r_derivatives(rs)
    res = -d2 + (np.asarray(V(rs)) - energy) * val
    scale = max(float(np.max(np.abs(energy * val))), floor)
    return float(np.max(np.abs(res)) / scale)


def zero_energy_window_scan(s: int, t: int, kappas: Sequence[Number]) -> list:
    """[(kappa, zero count in (0,1), expected count or None)]."""
    wins = zero_windows(t)
    out = []
    for k in kappas:
        k = to_rational(k)
        cnt = sturm_count(construct(s, t, k).poly, 0, 1)
        exp = None
        if k > t - 1:
            exp = 0
        else:
            for lo, hi, c in wins:
                if lo < k < hi:
                    exp = c
        out.append((k, cnt, exp))
    return out


def window_samples(t: int, per_window: int = 3) -> list:
    """Rational kappa values strictly inside each window, plus above t-1."""
    out = []
    for lo, hi, _ in zero_windows(t):
        for i in range(1, per_window + 1):
            out.append(Fraction(lo) + Fraction(hi - lo) * Fraction(i, per_window + 1))
    top = Fraction(max(t - 1, 0))
    for i in range(1, per_window + 1):
        out.append(top + Fraction(i, 2))
    return out


def numeric_zero_count(s: int, t: int, kappa: Number, samples: int = 20001) -> int:
    """Sign changes of Hp on a fine float grid of (0,1)."""
    p = construct(s, t, kappa).poly
    y = np.linspace(0.0, 1.0, samples)[1:-1]
    v = p(y)
    sg = np.sign(v)
    sg = sg[sg != 0]
    return int(np.sum(sg[1:] != sg[:-1]))


@dataclass
class NormReport:
    finite: bool
    origin_ok: bool
    infinity_ok: bool
    norm: float
    note: str = ""


def normalization_check(phi: AEHForm) -> NormReport:
    """Square integrability of psi = (1-y^2)^(-1/2) phi over r in (0, inf).

    Near the origin psi ~ r^a, so we need 2a > -1; at large r
    psi ~ e^{-2 (b - 1/2) r}, so we need b > 1/2.
    """
    origin_ok = 2 * phi.a > -1
    infinity_ok = phi.b > Fraction(1, 2)
    psi = phi.psi_form()

    def f(r):
        if r <= 0:
            return 0.0 if phi.a > 0 else float(psi.value_r(1e-300)) ** 2
        with np.errstate(divide="ignore", under="ignore"):
            # far tails underflow to exactly zero, which is the right value
            return float(psi.value_r(r)) ** 2

    if origin_ok and infinity_ok:
        v1, _ = integrate.quad(f, 0, 1, limit=200)
        v2, _ = integrate.quad(f, 1, np.inf, limit=200)
        return NormReport(True, True, True, float(np.sqrt(v1 + v2)))
    # show divergence numerically: the truncated integral keeps growing
    vals = []
    for cut in (1e-2, 1e-3, 1e-4):
        a = cut if not origin_ok else 0.0
        b = -np.log(cut) if not infinity_ok else np.inf
        v, _ = integrate.quad(f, a, min(b, 30.0) if np.isfinite(b) else b, limit=400)
        vals.append(v)
    growing = vals[2] > 2 * vals[0]
    return NormReport(False, origin_ok, infinity_ok, float("inf"),
                      "truncated norms grow: " + ", ".join(f"{v:.3g}" for v in vals)
                      + ("" if growing else " (slowly)"))
