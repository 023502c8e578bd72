import itertools as it
from fractions import Fraction

import numpy as np
import pytest
from scipy import special

from ..gamma import (
    beta_log_integral,
    closed_form_fp,
    closed_form_leading,
    closed_form_value,
    gamma_series,
    harmonic,
    log_gamma_series,
    reciprocal_gamma_series,
    simplex_log_moment,
    zeta_function_coefficients,
)
from ..laurent import LaurentSeries, SeriesException, ls_coeff, ls_mul, ls_shift_pow
from ..zring import ZetaExpr, zx_eval, zx_gamma_degree

closed_forms = {
    2: "-9*pi^2*zeta(2)",
    3: "80*pi^3*zeta(3)",
    4: "-150*pi^4*zeta(4)",
    5: "-6300*pi^5*zeta(2)*zeta(3) + 9324*pi^5*zeta(5)",
}


def test_harmonic():
    assert harmonic(3) == Fraction(11, 6)
    assert harmonic(2, 2) == Fraction(5, 4)
    assert harmonic(0) == 0


def test_gamma_at_zero():
    series = gamma_series(0, 1).series
    assert series.min_order == -1
    assert ls_coeff(series, -1) == 1
    assert ls_coeff(series, 0) == -ZetaExpr.gamma()
    expected = ZetaExpr.gamma(2) * Fraction(1, 2) + ZetaExpr.zeta(2) * Fraction(1, 2)
    assert ls_coeff(series, 1) == expected


@pytest.mark.parametrize("anchor", [1, 2, 3])
def test_gamma_series_matches_polygamma(anchor):
    s = 1e-3
    series = gamma_series(anchor, 6).series
    value = sum(zx_eval(c) * s**j for j, c in series.items())
    assert value == pytest.approx(special.gamma(anchor + s), rel=1e-14)


@pytest.mark.parametrize("trunc", [0, 3, 6])
def test_gamma_recurrence_at_zero(trunc):
    # Gamma(1 + lambda) = lambda Gamma(lambda)
    shifted = ls_shift_pow(gamma_series(0, trunc).series, 1)
    direct = gamma_series(1, trunc + 1).series
    for j in range(trunc + 2):
        assert ls_coeff(shifted, j) == ls_coeff(direct, j)


@pytest.mark.parametrize("anchor", [1, 2, 3, 4])
def test_gamma_recurrence_between_anchors(anchor):
    # Gamma(N + 1 + s) = (N + s) Gamma(N + s)
    trunc = 5
    linear = LaurentSeries(0, [ZetaExpr.const(anchor), ZetaExpr.const(1)], trunc)
    product = ls_mul(linear, gamma_series(anchor, trunc).series)
    direct = gamma_series(anchor + 1, trunc).series
    for j in range(trunc + 1):
        assert ls_coeff(product, j) == ls_coeff(direct, j)


def test_log_gamma_series_anchor():
    with pytest.raises(SeriesException):
        log_gamma_series(0, 3)
    series = log_gamma_series(2, 2)
    # psi(2) = 1 - gamma
    assert ls_coeff(series, 1) == 1 - ZetaExpr.gamma()


def test_reciprocal_gamma():
    series = reciprocal_gamma_series(2, 5, 3)
    s = 1e-3
    value = sum(zx_eval(c) * s**j for j, c in series.items())
    assert value == pytest.approx(1 / special.gamma(2 + 3 * s), rel=1e-14)


@pytest.mark.parametrize("n, expected", list(closed_forms.items()))
def test_closed_form_strings(n, expected):
    _, fp = closed_form_fp(n)
    assert str(fp) == expected


def test_closed_form_p1_vanishes():
    _, fp = closed_form_fp(1)
    assert fp.is_zero()


@pytest.mark.parametrize("n", range(2, 9))
def test_gamma_cancels(n):
    _, fp = closed_form_fp(n)
    assert zx_gamma_degree(fp) == 0


@pytest.mark.parametrize("n", range(1, 6))
def test_closed_form_leading(n):
    assert closed_form_leading(n) == n + 1


def test_closed_form_bounds():
    with pytest.raises(SeriesException):
        closed_form_fp(13)
    with pytest.raises(SeriesException):
        closed_form_fp(3, trunc=2)


def test_zeta_function_coefficients_match_float():
    n, lam = 2, 0.01
    coeffs = zeta_function_coefficients(n, n + 8)
    value = sum(zx_eval(c) * lam**j for j, c in coeffs.items())
    assert value == pytest.approx(closed_form_value(n, lam), rel=1e-12)


def test_closed_form_value():
    assert closed_form_value(2, 0.5) == pytest.approx(2 * np.pi**3, rel=1e-14)
    assert closed_form_value(1, 1.0) == pytest.approx(np.pi, rel=1e-14)


@pytest.mark.parametrize(
    "args, expected",
    [
        ((0, 0, 0, 0), ZetaExpr.const(1)),
        ((0, 0, 1, 0), ZetaExpr.const(-1)),
        ((0, 0, 2, 0), ZetaExpr.const(2)),
        ((1, 0, 1, 0), ZetaExpr.const(Fraction(-1, 4))),
        ((0, 0, 1, 1), 2 - ZetaExpr.zeta(2)),
        ((0, 0, 0, 2), ZetaExpr.const(2)),
    ],
)
def test_beta_log_integral(args, expected):
    assert beta_log_integral(*args) == expected


def test_simplex_log_moment():
    assert simplex_log_moment(1, 0) == 1
    assert simplex_log_moment(2, 0) == 1
    assert simplex_log_moment(3, 0) == Fraction(1, 2)
    assert simplex_log_moment(2, 1) == -2
    with pytest.raises(SeriesException):
        simplex_log_moment(0, 1)


@pytest.mark.parametrize("a, b", list(it.product(range(3), repeat=2)))
@pytest.mark.parametrize("k, m", [(k, m) for k, m in it.product(range(4), repeat=2) if k + m <= 4])
def test_beta_log_integral_symmetry(a, b, k, m):
    # x -> 1 - x swaps the two endpoints
    assert beta_log_integral(a, b, k, m) == beta_log_integral(b, a, m, k)


@pytest.mark.parametrize("b", [1, 2, 3])
def test_point_simplex_log_moment_vanishes(b):
    assert simplex_log_moment(1, b).is_zero()
