import math
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from heunladder.heun_ladder import construct
from heunladder.numeric_verify import (
    DEFAULT_GRID,
    RadialGrid,
    chebyshev_points,
    convergence_ratio,
    fd_spectrum,
    normalization_check,
    numeric_zero_count,
    schrodinger_residual,
    tridiagonal_eigenvalues,
    window_samples,
    zero_energy_window_scan,
)
from heunladder.spectral_model import AEHForm, eigenfunction, potential_r, r_infinity_wavefunction
from heunladder.susy_partner import a_seed, b_partner_spec, partner_eigenfunction, partner_potential_fn

RS = chebyshev_points(0.1, 8.0, 50)


def test_grid():
    g = RadialGrid(0.0, 2.0, 5)
    assert g.h == 0.5
    assert np.allclose(g.interior(), [0.5, 1.0, 1.5])
    assert g.refined().h == 0.25
    with pytest.raises(ValueError):
        RadialGrid(0.0, 1.0, 2)
    with pytest.raises(ValueError):
        RadialGrid(1.0, 1.0, 10)


def test_multisection_against_lapack():
    rng = np.random.default_rng(3)
    d = rng.normal(size=300)
    e = rng.normal(size=299)
    ours = tridiagonal_eigenvalues(d, e, 12)
    ref = eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, 11))
    assert np.allclose(ours, ref, atol=1e-11)


def test_particle_in_a_box():
    rep = fd_spectrum(lambda r: 0 * r, RadialGrid(0.0, math.pi, 2000), k=1, bound_only=False)
    assert abs(rep.best[0] - 1) < 1e-3


@pytest.mark.parametrize("s,t,ref", [(2, 3, [-4]), (1, 4, [-9, -1])])
def test_pt_spectrum_small_grid(s, t, ref):
    rep = fd_spectrum(potential_r(s, t), RadialGrid(0.0, 14.0, 3000), k=len(ref) + 1, reference=ref)
    assert rep.truncated
    assert len(rep.best) == len(ref)
    assert max(rep.errors) < 1e-3
    assert rep.best == sorted(rep.best)


def test_second_order_convergence():
    ratio = convergence_ratio(potential_r(2, 3), 14.0, 1500, -4.0)
    assert abs(ratio - 4) < 0.8


def test_residual_examples():
    w = r_infinity_wavefunction(2, 3, F(7, 3)).psi_form()
    V = potential_r(2, 3)
    assert schrodinger_residual(w, V, -(7 / 3) ** 2, RS) < 1e-9
    e = eigenfunction(2, 3, 0).psi_form()
    assert schrodinger_residual(e, V, -4.0, RS) < 1e-9
    assert schrodinger_residual(e, V, -3.0, RS) > 0.1


@pytest.mark.parametrize("s,t", [(1, 6), (2, 7), (3, 5)])
def test_residual_every_level(s, t):
    V = potential_r(s, t)
    v = 0
    while t - 2 * v - 1 > 0:
        e = eigenfunction(s, t, v).psi_form()
        assert schrodinger_residual(e, V, -float(t - 2 * v - 1) ** 2, RS) < 1e-9
        v += 1


@pytest.mark.parametrize("s,t,k1", [(2, 3, 3), (2, 5, F(9, 2)), (3, 4, F(7, 2))])
def test_partner_residuals(s, t, k1):
    W = partner_potential_fn(b_partner_spec(s, t, k1))
    v = 0
    while t - 2 * v - 1 > 0:
        pe = partner_eigenfunction(s, t, k1, v)
        assert schrodinger_residual(pe.phi.psi_form(), W, float(pe.energy), RS) < 1e-8
        v += 1


def test_window_scan_examples():
    rows = {k: c for k, c, _ in zero_energy_window_scan(2, 5, [F(9, 2), F(7, 2), F(3, 2)])}
    assert rows == {F(9, 2): 0, F(7, 2): 1, F(3, 2): 2}


@pytest.mark.parametrize("s,t", [(2, 5), (3, 6), (1, 4)])
def test_window_scan_pattern(s, t):
    for k, cnt, exp in zero_energy_window_scan(s, t, window_samples(t, 3)):
        assert cnt == exp
        assert numeric_zero_count(s, t, k) == cnt


def test_normalization_examples():
    rep = normalization_check(eigenfunction(2, 3, 0))
    assert rep.finite and math.isfinite(rep.norm) and rep.norm > 0
    rep = normalization_check(r_infinity_wavefunction(2, 3, F(7, 3)).phi_form())
    assert not rep.finite and not rep.origin_ok
    seed = a_seed(2, 3, "a", 0).ff
    rep = normalization_check(seed)
    assert not rep.finite and rep.origin_ok and not rep.infinity_ok


def test_normalization_quadrature_value():
    # s = 1, t = 2: psi = y (1-y^2)^(1/2) up to the exponent bookkeeping, so
    # the squared norm is the integral of tanh^2 r sech^2 r = 1/3
    phi = eigenfunction(1, 2, 0)
    rep = normalization_check(phi)
    assert abs(rep.norm ** 2 - 1 / 3) < 1e-10
