"""
Series expansions of the Gamma function with exact zeta-value coefficients,
the closed-form finite part on P^n and Beta-derivative log integrals.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np
from scipy import special

from .laurent import (
    LaurentSeries,
    SeriesException,
    ls_coeff,
    ls_exp,
    ls_mul,
    ls_neg,
    ls_pow,
    ls_rescale,
    ls_scale,
    ls_shift_pow,
    ls_truncate,
    trunc_slack_default,
)
from .zring import ZetaExpr

closed_form_max_n = 12


@dataclass(frozen=True)
class GammaExpansion:
    """Gamma(lambda) at 0 (anchor 0) or Gamma(N + s) around s = 0 (anchor N)."""

    anchor: int
    series: LaurentSeries


def harmonic(N, power=1):
    """Generalized harmonic number H_N^(power) as a Fraction."""
    return sum((Fraction(1, j**power) for j in range(1, N + 1)), Fraction(0))


@lru_cache(maxsize=None)
def log_gamma_series(anchor, trunc):
    """
    Exact series of log(Gamma(N + s) / (N-1)!) around s = 0.

    The coefficients are polygamma values at N, reduced to zeta values and
    harmonic numbers:
        [s^1]  = -gamma + H_{N-1}
        [s^k]  = (-1)^k (zeta(k) - H_{N-1}^(k)) / k,   k >= 2

    Parameters
    ----------
    anchor : int
        Expansion point N >= 1.
    trunc : int
        Highest power of s kept (>= 1).

    Returns
    -------
    LaurentSeries
        Series with min_order 1 over ZetaExpr.
    """
    if anchor < 1:
        raise SeriesException(f"log_gamma_series needs anchor >= 1, got {anchor}")
    if trunc < 1:
        raise SeriesException("log_gamma_series needs trunc >= 1")
    coeffs = [-ZetaExpr.gamma() + harmonic(anchor - 1)]
    for k in range(2, trunc + 1):
        value = ZetaExpr.zeta(k) - harmonic(anchor - 1, k)
        coeffs.append(value * Fraction((-1) ** k, k))
    return LaurentSeries(1, coeffs, trunc)


@lru_cache(maxsize=None)
def gamma_series(anchor, trunc):
    """
    Exact expansion of Gamma at a non-negative integer.

    anchor 0 gives Gamma(lambda) = 1/lambda - gamma + ..., obtained as
    Gamma(1 + lambda) / lambda; anchor N >= 1 gives Gamma(N + s).
    """
    if anchor == 0:
        if trunc < -1:
            raise SeriesException("Gamma(lambda) starts at order -1")
        shifted = ls_exp(log_gamma_series(1, max(trunc + 1, 1)))
        series = ls_truncate(ls_shift_pow(shifted, -1), trunc)
        return GammaExpansion(0, series)
    if trunc < 0:
        raise SeriesException(f"Gamma({anchor} + s) starts at order 0")
    series = ls_exp(log_gamma_series(anchor, max(trunc, 1)))
    series = ls_scale(ls_truncate(series, trunc), factorial(anchor - 1))
    return GammaExpansion(anchor, series)


@lru_cache(maxsize=None)
def reciprocal_gamma_series(anchor, trunc, scale=1):
    """1 / Gamma(N + scale*s) around s = 0, as exp of the negated log series."""
    if anchor < 1:
        raise SeriesException("reciprocal_gamma_series needs anchor >= 1")
    log_series = ls_rescale(log_gamma_series(anchor, max(trunc, 1)), scale)
    series = ls_exp(ls_neg(log_series))
    return ls_scale(ls_truncate(series, trunc), Fraction(1, factorial(anchor - 1)))


def zeta_function_series(n, trunc):
    """
    F(lambda) = lambda^n Gamma(lambda)^(n+1) / Gamma((n+1) lambda) up to lambda^trunc.

    Z(lambda) = pi^n Gamma(lambda)^(n+1) / Gamma((n+1) lambda) is the zeta
    function of the P^n volume form, so pi^n F is lambda^n Z(lambda).
    """
    power = ls_pow(gamma_series(0, trunc - 1).series, n + 1)
    # 1/Gamma((n+1) lambda) = (n+1) lambda / Gamma(1 + (n+1) lambda)
    reciprocal = ls_shift_pow(
        ls_scale(reciprocal_gamma_series(1, trunc, n + 1), n + 1), 1
    )
    series = ls_shift_pow(ls_mul(power, reciprocal), n)
    return ls_truncate(series, trunc)


def closed_form_fp(n, trunc=None):
    """
    Closed-form finite part of the P^n volume form.

    Parameters
    ----------
    n : int
        Dimension, 1 <= n <= 12.
    trunc : int, optional
        Highest power of lambda in F; defaults to n + 6.

    Returns
    -------
    (LaurentSeries, ZetaExpr)
        The Taylor series F(lambda) and fp = pi^n [lambda^n] F.
    """
    if not 1 <= n <= closed_form_max_n:
        raise SeriesException(f"closed form supports 1 <= n <= {closed_form_max_n}")
    if trunc is None:
        trunc = n + trunc_slack_default
    if trunc < n:
        raise SeriesException(f"window up to lambda^{trunc} cannot reach lambda^{n}")
    series = zeta_function_series(n, trunc)
    return series, ZetaExpr.pi(n) * ls_coeff(series, n)


def closed_form_leading(n):
    """coeff_0 of F, i.e. the residue-order coefficient <mu_{-n}, 1> / pi^n."""
    series, _ = closed_form_fp(n, n)
    return ls_coeff(series, 0)


def zeta_function_coefficients(n, trunc=None):
    """
    Laurent coefficients of Z(lambda) at 0 as {order j: ZetaExpr}, j = -n ... trunc - n.
    """
    series, _ = closed_form_fp(n, trunc)
    return {j - n: ZetaExpr.pi(n) * c for j, c in series.items()}


def closed_form_value(n, lam):
    """Float Z(lambda) = pi^n Gamma(lambda)^(n+1) / Gamma((n+1) lambda)."""
    lam = np.asarray(lam, dtype=float)
    return np.pi**n * np.exp((n + 1) * special.gammaln(lam) - special.gammaln((n + 1) * lam))


def beta_log_integral(a, b, k, m):
    """
    Exact value of int_0^1 x^a (1-x)^b log^k(x) log^m(1-x) dx.

    This is d^k/ds^k d^m/dt^m B(a+1+s, b+1+t) at s = t = 0. With
    w = s + t, 1/Gamma(a+b+2+w) is expanded once and w^r split binomially.

    Parameters
    ----------
    a, b : int
        Non-negative polynomial exponents.
    k, m : int
        Non-negative log powers.

    Returns
    -------
    ZetaExpr
    """
    if min(a, b, k, m) < 0:
        raise SeriesException("beta_log_integral takes non-negative parameters")
    left = gamma_series(a + 1, max(k, 0)).series
    right = gamma_series(b + 1, max(m, 0)).series
    denominator = reciprocal_gamma_series(a + b + 2, k + m)
    total = ZetaExpr()
    for i in range(k + 1):
        for j in range(m + 1):
            ds, dt = k - i, m - j
            weight = comb(ds + dt, ds)
            term = ls_coeff(left, i) * ls_coeff(right, j) * ls_coeff(denominator, ds + dt)
            total = total + term * weight
    return total * (factorial(k) * factorial(m))


def simplex_log_moment(c, b):
    """
    Exact int over the standard (c-1)-simplex of (sum_j log y_j)^b.

    Dirichlet: int prod y_j^t dy = Gamma(1+t)^c / Gamma(c + c t), so the
    moment is b! [t^b] of that ratio. c = 1 is the point simplex.
    """
    if c < 1 or b < 0:
        raise SeriesException(f"invalid simplex log moment ({c}, {b})")
    numerator = ls_pow(gamma_series(1, b).series, c)
    ratio = ls_mul(numerator, reciprocal_gamma_series(c, b, c))
    return ls_coeff(ratio, b) * factorial(b)
