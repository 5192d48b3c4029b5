from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import poly_coeffs, rationals
from heunladder.poly_core import (
    ExactPoly,
    IdentityViolation,
    double_factorial,
    fmt_rational,
    parse_rational,
    poly_gcd,
    shifted_pochhammer,
    sturm_count,
    wronskian,
)

Y = ExactPoly([0, 1])
k, k1 = F(2, 7), F(-5, 3)


def test_derivative_example():
    assert (ExactPoly([0, k, 1])).derivative() == ExactPoly([k, 2])


def test_difference_of_squares():
    assert ExactPoly([1, 1]) * ExactPoly([-1, 1]) == ExactPoly([-1, 0, 1])


def test_evaluate_example():
    assert ExactPoly([0, 1, 2, 1])(F(1)) == 4


def test_zero_polynomial_degree():
    assert ExactPoly().degree == -1
    assert ExactPoly([0, 0]).is_zero()
    assert ExactPoly([1, 2, 0]).coeffs == (F(1), F(2))


def test_wronskian_examples():
    assert wronskian(Y + k1, Y + k) == ExactPoly([k1 - k])
    p = ExactPoly([3, -1, 4])
    assert wronskian(p, p).is_zero()
    assert wronskian(ExactPoly([1]), Y * Y) == Y * 2


def test_sturm_examples():
    assert sturm_count(ExactPoly([0, 1, 2, 1]), 0, 1) == 0
    assert sturm_count(ExactPoly([F(-1, 4), 0, 1]), 0, 1) == 1
    assert sturm_count(ExactPoly([1, 0, 1]), -10, 10) == 0


def test_sturm_endpoint_roots_excluded():
    # roots exactly at both ends, one inside
    p = Y * (Y - 1) * (Y - F(1, 3))
    assert sturm_count(p, 0, 1) == 1
    assert sturm_count(p * p, 0, 1) == 1


def test_pochhammer_and_double_factorial():
    assert shifted_pochhammer(F(3), 1) == 4
    assert shifted_pochhammer(k, 0) == 1
    assert double_factorial(5) == 15
    assert double_factorial(-1) == 1


def test_rational_strings():
    assert fmt_rational(F(-3, 5)) == "-3/5"
    assert fmt_rational(7) == "7/1"
    assert parse_rational("-3/5") == F(-3, 5)
    assert parse_rational("7") == 7
    for bad in ("0.5", "1/0", "abc", ""):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_exact_div_raises():
    with pytest.raises(IdentityViolation):
        ExactPoly([1, 0, 1]).exact_div(Y, "test")
    assert ExactPoly([0, 0, 1]).exact_div(Y, "test") == Y


def test_compose_and_even_part():
    p = ExactPoly([1, -2, 3])
    q = p.compose_y2()
    assert q == ExactPoly([1, 0, -2, 0, 3])
    assert q.even_part_in_z() == p


@given(poly_coeffs(), poly_coeffs(), poly_coeffs())
def test_ring_laws(a, b, c):
    p, q, r = ExactPoly(a), ExactPoly(b), ExactPoly(c)
    assert (p + q) * r == p * r + q * r
    assert (p * q).derivative() == p.derivative() * q + p * q.derivative()
    if not p.is_zero() and not q.is_zero():
        assert (p * q).degree == p.degree + q.degree


@given(poly_coeffs(), poly_coeffs())
def test_wronskian_antisymmetric(a, b):
    p, q = ExactPoly(a), ExactPoly(b)
    assert wronskian(p, q) == wronskian(q, p) * -1


@given(poly_coeffs(), poly_coeffs(4).filter(lambda c: any(c)))
def test_divmod(a, b):
    p, d = ExactPoly(a), ExactPoly(b)
    q, r = p.divmod(d)
    assert q * d + r == p and r.degree < d.degree


@given(st.lists(st.builds(F, st.integers(-39, 39), st.just(20)), min_size=1, max_size=6),
       st.integers(-3, 3).filter(lambda x: x != 0))
@settings(max_examples=100, deadline=None)
def test_sturm_matches_sign_scan(roots, lead):
    """Planted roots in (-2, 2) against sign changes on a 10^4-point grid.

    The grid is offset by half a step so no sample lands on a planted root.
    """
    p = ExactPoly([lead])
    for x in roots:
        p = p * (Y - x)
    sf = p.exact_div(poly_gcd(p, p.derivative()), "squarefree")
    h = 4 / 10_000
    grid = -2 + h * (np.arange(10_000) + 0.5)
    signs = np.sign(sf(grid))
    changes = int(np.sum(signs[1:] != signs[:-1]))
    assert sturm_count(p, -2, 2) == len(set(roots)) == changes
