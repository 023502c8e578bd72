"""
Truncated Laurent series in one variable lambda.

Coefficients are ZetaExpr (exact pipeline), Fraction or float (quadrature
fitting). A series is known on the window min_order ... trunc_order; every
operation returns the largest window on which its result is fully determined.
"""

from fractions import Fraction

from .zring import ZetaExpr

# truncation used for problems on P^n is n + trunc_slack_default
trunc_slack_default = 6


class SeriesException(Exception):
    """
    Custom exception for invalid Laurent series operations.
    """

    def __init__(self, message):
        super().__init__(message)


def _is_zero(c):
    return c == 0


def _zero_like(c):
    if isinstance(c, ZetaExpr):
        return ZetaExpr()
    if isinstance(c, float):
        return 0.0
    return Fraction(0)


def _one_like(c):
    if isinstance(c, ZetaExpr):
        return ZetaExpr.const(1)
    if isinstance(c, float):
        return 1.0
    return Fraction(1)


class LaurentSeries:
    """
    sum_{j=min_order}^{trunc_order} coeffs[j - min_order] * lambda^j + O(lambda^(trunc_order+1))
    """

    __slots__ = ("min_order", "coeffs", "trunc_order")

    def __init__(self, min_order, coeffs, trunc_order=None):
        coeffs = list(coeffs)
        if not coeffs:
            raise SeriesException("a Laurent series needs at least one coefficient")
        if trunc_order is None:
            trunc_order = min_order + len(coeffs) - 1
        if trunc_order < min_order:
            raise SeriesException(
                f"empty window: trunc_order {trunc_order} < min_order {min_order}"
            )
        size = trunc_order - min_order + 1
        zero = _zero_like(coeffs[0])
        coeffs = coeffs[:size] + [zero] * (size - len(coeffs))
        # leading zeros are structural, raise min_order past them
        lead = 0
        while lead < len(coeffs) - 1 and _is_zero(coeffs[lead]):
            lead += 1
        if _is_zero(coeffs[lead]):
            lead = 0
        self.min_order = min_order + lead
        self.coeffs = tuple(coeffs[lead:])
        self.trunc_order = trunc_order

    def is_zero(self):
        return all(_is_zero(c) for c in self.coeffs)

    def orders(self):
        return range(self.min_order, self.trunc_order + 1)

    def items(self):
        return zip(self.orders(), self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.min_order == other.min_order
            and self.trunc_order == other.trunc_order
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        body = " + ".join(f"({c})*lam^{j}" for j, c in self.items() if not _is_zero(c))
        return f"LaurentSeries({body or '0'} + O(lam^{self.trunc_order + 1}))"


def ls_from_coeffs(min_order, coeffs, trunc_order=None):
    return LaurentSeries(min_order, coeffs, trunc_order)


def ls_coeff(a, j):
    """
    Coefficient of lambda^j.

    Raises SeriesException outside min_order <= j <= trunc_order; a truncated
    coefficient is never reported as zero.
    """
    if j > a.trunc_order:
        raise SeriesException(
            f"coefficient {j} is beyond the truncation order {a.trunc_order}"
        )
    if j < a.min_order:
        raise SeriesException(f"coefficient {j} is below the window start {a.min_order}")
    return a.coeffs[j - a.min_order]


def _coeff_or_zero(a, j):
    if j < a.min_order:
        return _zero_like(a.coeffs[0])
    return a.coeffs[j - a.min_order]


def ls_add(a, b):
    lo = min(a.min_order, b.min_order)
    hi = min(a.trunc_order, b.trunc_order)
    if hi < lo:
        raise SeriesException("sum has an empty window")
    return LaurentSeries(lo, [_coeff_or_zero(a, j) + _coeff_or_zero(b, j) for j in range(lo, hi + 1)], hi)


def ls_neg(a):
    return LaurentSeries(a.min_order, [-c for c in a.coeffs], a.trunc_order)


def ls_scale(a, factor):
    return LaurentSeries(a.min_order, [factor * c for c in a.coeffs], a.trunc_order)


def ls_mul(a, b):
    """
    Cauchy product; coeff_l(ab) = sum_{i+j=l} coeff_i(a) coeff_j(b).

    The result is valid up to min(a.trunc + b.min, b.trunc + a.min).
    """
    lo = a.min_order + b.min_order
    hi = min(a.trunc_order + b.min_order, b.trunc_order + a.min_order)
    if hi < lo:
        raise SeriesException("product has an empty window")
    out = []
    for order in range(lo, hi + 1):
        acc = _zero_like(a.coeffs[0])
        for i in range(a.min_order, order - b.min_order + 1):
            acc = acc + a.coeffs[i - a.min_order] * b.coeffs[order - i - b.min_order]
        out.append(acc)
    return LaurentSeries(lo, out, hi)


def ls_pow(a, k):
    if k < 0:
        raise SeriesException("ls_pow takes a non-negative exponent")
    result = LaurentSeries(0, [_one_like(a.coeffs[0])], a.trunc_order - a.min_order)
    for _ in range(k):
        result = ls_mul(result, a)
    return result


def ls_shift_pow(a, k):
    """Multiply by lambda^k."""
    return LaurentSeries(a.min_order + k, a.coeffs, a.trunc_order + k)


def ls_rescale(a, factor):
    """Substitute lambda -> factor * lambda (factor int or Fraction)."""
    factor = Fraction(factor)
    return LaurentSeries(
        a.min_order,
        [c * factor**j for j, c in a.items()],
        a.trunc_order,
    )


def ls_truncate(a, trunc_order):
    if trunc_order > a.trunc_order:
        raise SeriesException(
            f"cannot extend window from {a.trunc_order} to {trunc_order}"
        )
    return LaurentSeries(a.min_order, a.coeffs, trunc_order)


def ls_exp(a):
    """
    exp(a) for a series without polar part and without constant term.

    Uses e' = a' e, i.e. e_m = (1/m) sum_{k=1}^m k a_k e_{m-k}.
    """
    if not a.is_zero() and a.min_order < 1:
        raise SeriesException(
            "ls_exp needs a series without polar part or constant term"
        )
    one = _one_like(a.coeffs[0])
    trunc = a.trunc_order
    if trunc < 0:
        raise SeriesException("exp of a series truncated below order 0")
    out = [one]
    for m in range(1, trunc + 1):
        acc = _zero_like(a.coeffs[0])
        for k in range(max(1, a.min_order), m + 1):
            ak = _coeff_or_zero(a, k)
            if not _is_zero(ak):
                acc = acc + (k * ak) * out[m - k]
        out.append(acc * Fraction(1, m))
    return LaurentSeries(0, out, trunc)


def ls_exp_monomial(trunc_order, coefficient=None):
    """exp(c * lambda); the coefficients c^k/k! are the metric reweighting factors."""
    if coefficient is None:
        coefficient = Fraction(1)
    return ls_exp(LaurentSeries(1, [coefficient], max(trunc_order, 1)))


def ls_eval_coeffs(a):
    """Float coefficients {order: value}."""
    return {j: float(c) for j, c in a.items()}


def _coeff_to_json(c):
    if isinstance(c, ZetaExpr):
        return c.to_json()
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return float(c)


def _coeff_from_json(c):
    if isinstance(c, dict):
        return ZetaExpr.from_json(c)
    if isinstance(c, str):
        return Fraction(c)
    return float(c)


def ls_to_json(a):
    return {
        "min_order": a.min_order,
        "trunc_order": a.trunc_order,
        "coeffs": [_coeff_to_json(c) for c in a.coeffs],
    }


def ls_from_json(data):
    return LaurentSeries(
        data["min_order"],
        [_coeff_from_json(c) for c in data["coeffs"]],
        data["trunc_order"],
    )
