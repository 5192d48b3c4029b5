import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heunladder.heun_ladder import HPTIndex, construct, kappa_b, kappa_c, ladder_c, pi_c
from heunladder.poly_core import (
    DegenerateScale,
    ExactPoly,
    InvalidIndex,
    Unsupported,
    sturm_count,
    wronskian,
)
from heunladder.spectral_model import AEHForm, potential_r
from heunladder.susy_partner import (
    PartnerSpec,
    a_cofactor,
    a_lambda1,
    a_seed,
    aprime_partner,
    b_partner_spec,
    c_case_top_coefficient,
    cup,
    factor_at_level,
    generator_apply,
    gs_qhip,
    gs_specialization_holds,
    heine_from_kappa1,
    heine_from_kappa1_s1_value_at_origin,
    nu_at_kappa_b,
    nu_scale,
    partner_eigenfunction,
    partner_numerator,
    partner_potential,
    qhip_generator_identity,
    shape_invariance_report,
)

Y = ExactPoly([0, 1])
kappas = st.builds(F, st.integers(-80, 80), st.integers(1, 13))


def levels(t):
    return [v for v in range(t) if kappa_c(t, v) > 0]


# ---------------------------------------------------------- Heine, b-type

def test_wronskian_vanishes_at_origin():
    k, k1 = F(2, 5), F(7, 3)
    H, H1 = construct(2, 1, k).poly, construct(2, 1, k1).poly
    P = ExactPoly([1, 0, -1]) * wronskian(H1, H) + H1 * H * (k1 - k)
    h0, h10 = H(F(0)), H1(F(0))
    assert P(F(0)) == h10 * k * h0 - k1 * h10 * h0 + (k1 - k) * h10 * h0 == 0


def test_heine_degree_contract_example():
    hi = heine_from_kappa1(2, 1, F(2, 5), F(7, 3))
    assert hi.contract_degree == 6
    assert hi.degree == 6


@given(st.integers(2, 4), st.integers(1, 5), kappas, kappas)
@settings(max_examples=100, deadline=None)
def test_heine_divisible_and_leading_term(s, t, k, k1):
    if k == k1 or k + k1 == 0:
        return
    hi = heine_from_kappa1(s, t, k, k1)  # raises unless y divides exactly
    n = HPTIndex(s, t).n
    assert hi.degree == 2 * n - 2
    assert hi.poly.lc == (k1 + k) / (2 * n - 2 * s + 1)


def test_heine_s1_rejected():
    with pytest.raises(Unsupported):
        heine_from_kappa1(1, 2, F(1, 2), F(3))
    for k, k1 in [(F(1, 2), F(3)), (F(-2), F(5, 7))]:
        assert heine_from_kappa1_s1_value_at_origin(1, k, k1) == (k1 - k) * (1 + k * k1) != 0


def test_heine_equal_kappas():
    with pytest.raises(DegenerateScale):
        heine_from_kappa1(2, 3, F(5, 2), F(5, 2))


# ---------------------------------------------------- seeds and potentials

def test_b_seed_requirements():
    spec = b_partner_spec(2, 3, 3)
    assert sturm_count(spec.denom, 0, 1) == 0
    with pytest.raises(InvalidIndex):
        b_partner_spec(2, 3, 2)
    with pytest.raises(Unsupported):
        b_partner_spec(1, 3, 3)


def _fd_log_second(psi, r, h=1e-3):
    f = lambda x: math.log(abs(float(psi.value_r(x))))
    return (-f(r + 2 * h) + 16 * f(r + h) - 30 * f(r) + 16 * f(r - h) - f(r - 2 * h)) / (12 * h * h)


def test_partner_potential_against_finite_difference():
    spec = b_partner_spec(2, 3, 3)
    r = math.atanh(0.5)
    W = partner_potential(spec, y=0.5)
    ref = float(potential_value_r(2, 3, r)) - 2 * _fd_log_second(spec.psi_ff(), r)
    assert math.isfinite(W)
    assert abs(W - ref) < 1e-8 * max(1.0, abs(W))
    assert abs(partner_potential(spec, r=r) - W) < 1e-12


def potential_value_r(s, t, r):
    return potential_r(s, t)(np.array([r]))[0]


def test_partner_potential_constant_seed_is_exponent_shift():
    a, b, c = F(-1), F(3, 2), F(1, 2)
    spec = PartnerSpec(HPTIndex(2, 3), "b", AEHForm(a, b, c, ExactPoly([5])), ExactPoly([5]))
    B, C = float(b) - 0.5, float(c) - 0.5
    for r in (0.4, 1.3, 3.0):
        lnpp = (float(a) * (-4 * math.cosh(2 * r) / math.sinh(2 * r) ** 2)
                + (B + C) / 2 * (-2 / math.cosh(r) ** 2))
        expect = potential_value_r(2, 3, r) - 2 * lnpp
        assert abs(partner_potential(spec, r=r) - expect) < 1e-10 * max(1, abs(expect))


def test_partner_potential_domain():
    spec = b_partner_spec(2, 3, 3)
    with pytest.raises(ValueError):
        partner_potential(spec, y=1.0)
    with pytest.raises(ValueError):
        partner_potential(spec)


# ------------------------------------------------- partner eigenfunctions

def test_partner_eigenfunction_example():
    pe = partner_eigenfunction(2, 3, 3, 0)
    assert pe.numerator.degree == 5
    assert pe.energy == -4
    assert pe.heine.poly.lc == 1 and pe.heine.meets_contract


@pytest.mark.parametrize("s,t,k1", [(2, 5, F(9, 2)), (3, 4, F(7, 2)), (2, 6, F(6))])
def test_partner_numerator_degree_drop(s, t, k1):
    n = HPTIndex(s, t).n
    for v in levels(t):
        pe = partner_eigenfunction(s, t, k1, v)
        assert pe.numerator.degree == n + 2 * v
        assert pe.numerator.lc == nu_scale(s, t, k1, v)


@pytest.mark.parametrize("s", [2, 3])
@pytest.mark.parametrize("t", [2, 3, 4, 5])
def test_generator_identity_grid(s, t):
    k1s = [F(kappa_b(s, t, m)) for m in range(s)] + [F(t - 1) + F(2, 3), F(t) + F(5, 7)]
    for k1 in k1s:
        for v in levels(t):
            rep = qhip_generator_identity(s, t, k1, v)
            assert rep.passed, rep.checks


def test_generator_v0_image():
    # with a constant target only the bracket and the Pi_n' term survive
    s, t, k1 = 2, 3, F(7, 2)
    n = HPTIndex(s, t).n
    Pn = construct(s, t, k1).poly
    img = generator_apply(s, t, k1, 0, ExactPoly([1]))
    assert img == ExactPoly([2 * s - 1, k1, -n]) * Pn - Y * ExactPoly([1, 0, -1]) * Pn.derivative()
    assert img == partner_numerator(s, t, k1, 0)


@pytest.mark.parametrize("s", [2, 3])
@pytest.mark.parametrize("t", [2, 3, 4, 5])
def test_scale_at_origin_type_wavenumbers(s, t):
    d = 2 * HPTIndex(s, t).n - 2 * s + 1
    for m in range(s):
        for v in levels(t):
            nu = nu_scale(s, t, kappa_b(s, t, m), v)
            assert nu == 2 * cup(s, t, m, v)
            assert nu == nu_at_kappa_b(s, t, m, v) == F((d - 2 * m) * (2 * s - 2 * m - 1) + 4 * v * (t - v - 1), d)


def test_lowering_remainder_is_raised_polynomial():
    s, t, k1 = 2, 4, F(9, 2)
    n = HPTIndex(s, t).n
    Pn = construct(s, t, k1).poly
    pn = ExactPoly([2 * s - 1, k1, -n]) * Pn - Y * ExactPoly([1, 0, -1]) * Pn.derivative()
    scale = (k1 * k1 - (n - 2 * s + 1) ** 2) / (2 * n - 2 * s + 1)
    assert pn == ladder_c(construct(s, t, k1)).poly * scale


# ------------------------------------------------------------------ GS

def test_cup_example():
    assert cup(2, 3, 1, 0) == F(5, 14)


def test_gs_trivial_and_specialization():
    assert gs_qhip(2, 3, 0, 0).poly == ExactPoly([1])
    assert gs_specialization_holds(2, 3, 0, 0)
    hi = partner_eigenfunction(2, 3, 5, 0).heine.poly
    assert hi == ExactPoly([1, 1]) ** 5


@pytest.mark.parametrize("s", [2, 3])
@pytest.mark.parametrize("t", [2, 3, 4, 5])
def test_gs_specialization_grid(s, t):
    for m in range(s):
        for v in levels(t):
            assert gs_specialization_holds(s, t, m, v)


def test_gs_window():
    with pytest.raises(InvalidIndex):
        gs_qhip(2, 3, 2, 0)


# --------------------------------------------------------- a / a' seeds

def test_a_lambda1_values():
    assert a_lambda1(2, 3, "a", 1) == -9
    assert a_lambda1(2, 3, "a'", 3) == -4
    with pytest.raises(InvalidIndex):
        a_lambda1(2, 3, "a'", 2)


@pytest.mark.parametrize("s,t,kind,m", [(2, 3, "a", 0), (2, 3, "a", 2), (3, 2, "a", 1), (2, 3, "a'", 3), (3, 1, "a'", 2)])
def test_seed_nodeless_and_leading_terms(s, t, kind, m):
    spec = a_seed(s, t, kind, m)
    assert sturm_count(spec.denom, 0, 1) == 0
    for k in (F(5, 2), F(13, 3)):
        ap = aprime_partner(s, t, kind, m, k)
        assert all(ap.checks.values()), ap.checks
        n = HPTIndex(s, t).n
        if kind == "a":
            assert ap.determinant.degree == n + 2 * m + 2
            assert ap.determinant.lc == -(2 * t + 2 * s - 1)
        else:
            assert ap.determinant.degree == n + 2 * m


def test_bound_state_seed_degeneracy():
    for s in (2, 3):
        for t in range(2, 7):
            for v in levels(t):
                assert c_case_top_coefficient(s, t, v) == 0


def test_aprime_own_wavenumber_degenerate():
    with pytest.raises(DegenerateScale):
        aprime_partner(2, 3, "a'", 3, 4)


@pytest.mark.parametrize("s,t", [(2, 3), (2, 5), (3, 4)])
def test_bound_level_factorization(s, t):
    for kind, ms in (("a", [0, 1, 2]), ("a'", [t, t + 1])):
        for m in ms:
            for v in levels(t):
                lf = factor_at_level(s, t, kind, m, v)
                assert lf.ratio == -2 and lf.upper_factor_ok
                assert lf.quotient.degree == (m + v + 1 if kind == "a" else m + v)


def test_a_cofactor_continues_bound_state_cofactor():
    s, t, m = 2, 3, 3
    lam1 = a_lambda1(s, t, "a'", m)
    assert a_cofactor(s, t, lam1, m) == pi_c(s, t, m)


# ------------------------------------------------------ shape invariance

@pytest.mark.parametrize("s,t", [(2, 3), (3, 2)])
def test_shape_invariance_b_and_a(s, t):
    rep = shape_invariance_report(s, t, m_max=t + 1)
    assert rep["b"]["c-ladder keeps order"] and rep["b"]["level step"]
    for m, row in rep["a"].items():
        assert row["base order"] == m + 1 and row["order changes"]


@pytest.mark.parametrize("s,t", [(2, 3), (3, 2)])
def test_shape_invariance_aprime_order_changes(s, t):
    """Expected: a' base-case order is m+1, not m."""
    rep = shape_invariance_report(s, t, m_max=t + 1)
    assert rep["a'"]
    for m, row in rep["a'"].items():
        assert row["base order"] == m + 1 and row["order changes"]
