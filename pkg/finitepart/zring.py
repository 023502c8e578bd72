"""Exact arithmetic in the constant ring Q[gamma, pi, zeta(2), zeta(3), ...]."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import mpmath

# float constants are kept at this many digits
constant_digits = 30
zeta_max_arg = 32


class ZetaException(Exception):
    """
    Custom exception for invalid operations in the zeta value ring.
    """

    def __init__(self, message):
        super().__init__(message)


@lru_cache(maxsize=None)
def bernoulli_number(m):
    """Exact Bernoulli number B_m (B_1 = -1/2)."""
    numbers = [Fraction(1)]
    for k in range(1, m + 1):
        acc = sum(comb(k + 1, j) * numbers[j] for j in range(k))
        numbers.append(-acc / (k + 1))
    return numbers[m]


@lru_cache(maxsize=None)
def even_zeta_ratio(a, b):
    """
    Rational r with zeta(2a) * zeta(2b) = r * zeta(2a + 2b).

    Follows from zeta(2k) = (-1)^(k+1) B_2k (2 pi)^2k / (2 (2k)!).
    """
    ratio = (
        bernoulli_number(2 * a)
        * bernoulli_number(2 * b)
        * factorial(2 * a + 2 * b)
        / (2 * bernoulli_number(2 * a + 2 * b) * factorial(2 * a) * factorial(2 * b))
    )
    return -ratio


def _canonical_zeta_args(args):
    """
    Merge all even arguments into one and sort.

    Returns
    -------
    (Fraction, tuple)
        Rational factor picked up by the merge and the canonical argument tuple.
    """
    factor = Fraction(1)
    odd = []
    even = 0
    for k in args:
        if k < 2:
            raise ZetaException(f"zeta arguments must be >= 2, got {k}")
        if k % 2:
            odd.append(k)
        elif even == 0:
            even = k
        else:
            factor *= even_zeta_ratio(even // 2, k // 2)
            even += k
    if even:
        odd.append(even)
    return factor, tuple(sorted(odd))


@dataclass(frozen=True, order=True)
class ZetaMonomial:
    """gamma^g * pi^k * prod zeta(a) for a in zeta_args."""

    gamma_pow: int = 0
    pi_pow: int = 0
    zeta_args: tuple = ()

    def __post_init__(self):
        if self.gamma_pow < 0 or self.pi_pow < 0:
            raise ZetaException("monomial powers must be non-negative")
        if any(k < 2 for k in self.zeta_args):
            raise ZetaException(f"zeta arguments must be >= 2: {self.zeta_args}")
        object.__setattr__(self, "zeta_args", tuple(sorted(self.zeta_args)))

    def multiply(self, other):
        """Product as (rational factor, canonical monomial)."""
        factor, args = _canonical_zeta_args(self.zeta_args + other.zeta_args)
        return factor, ZetaMonomial(
            self.gamma_pow + other.gamma_pow, self.pi_pow + other.pi_pow, args
        )

    def is_one(self):
        return self.gamma_pow == 0 and self.pi_pow == 0 and not self.zeta_args

    def __str__(self):
        parts = []
        if self.gamma_pow:
            parts.append("gamma" if self.gamma_pow == 1 else f"gamma^{self.gamma_pow}")
        if self.pi_pow:
            parts.append("pi" if self.pi_pow == 1 else f"pi^{self.pi_pow}")
        parts.extend(f"zeta({k})" for k in self.zeta_args)
        return "*".join(parts)


def _coerce(value):
    if isinstance(value, ZetaExpr):
        return value
    if isinstance(value, (int, Fraction)):
        return ZetaExpr.const(value)
    raise ZetaException(f"cannot use {type(value).__name__} in the zeta value ring")


class ZetaExpr:
    """
    Sparse map ZetaMonomial -> Fraction with no stored zeros.

    Instances are immutable; all operators return new expressions.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        collected = {}
        for monomial, coef in (terms or {}).items():
            factor, args = _canonical_zeta_args(monomial.zeta_args)
            key = ZetaMonomial(monomial.gamma_pow, monomial.pi_pow, args)
            collected[key] = collected.get(key, Fraction(0)) + Fraction(coef) * factor
        self._terms = {m: c for m, c in sorted(collected.items()) if c != 0}
        self._hash = None

    @classmethod
    def const(cls, value):
        return cls({ZetaMonomial(): Fraction(value)})

    @classmethod
    def gamma(cls, power=1):
        return cls({ZetaMonomial(gamma_pow=power): 1})

    @classmethod
    def pi(cls, power=1):
        return cls({ZetaMonomial(pi_pow=power): 1})

    @classmethod
    def zeta(cls, *args):
        return cls({ZetaMonomial(zeta_args=tuple(args)): 1})

    @property
    def terms(self):
        return dict(self._terms)

    def is_zero(self):
        return not self._terms

    def __add__(self, other):
        other = _coerce(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return ZetaExpr(terms)

    __radd__ = __add__

    def __neg__(self):
        return ZetaExpr({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ZetaExpr({m: c * other for m, c in self._terms.items()})
        other = _coerce(other)
        terms = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                factor, m = m1.multiply(m2)
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2 * factor
        return ZetaExpr(terms)

    __rmul__ = __mul__

    def __pow__(self, power):
        result = ZetaExpr.const(1)
        for _ in range(power):
            result = result * self
        return result

    def __eq__(self, other):
        try:
            other = _coerce(other)
        except ZetaException:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __float__(self):
        return zx_eval(self)

    def __str__(self):
        if not self._terms:
            return "0"
        out = ""
        for i, (m, c) in enumerate(self._terms.items()):
            sign = "-" if c < 0 else "+"
            c = abs(c)
            if m.is_one():
                body = str(c)
            elif c == 1:
                body = str(m)
            else:
                body = f"{c}*{m}"
            if i == 0:
                out = body if sign == "+" else f"-{body}"
            else:
                out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"ZetaExpr({self})"

    def to_json(self):
        return {
            "terms": [
                {
                    "coef": f"{c.numerator}/{c.denominator}",
                    "gamma": m.gamma_pow,
                    "pi": m.pi_pow,
                    "zeta": list(m.zeta_args),
                }
                for m, c in self._terms.items()
            ]
        }

    @classmethod
    def from_json(cls, data):
        terms = {}
        for item in data["terms"]:
            m = ZetaMonomial(item["gamma"], item["pi"], tuple(item["zeta"]))
            terms[m] = terms.get(m, Fraction(0)) + Fraction(item["coef"])
        return cls(terms)


@lru_cache(maxsize=None)
def _constants(digits):
    with mpmath.workdps(digits + 5):
        zetas = {k: +mpmath.zeta(k) for k in range(2, zeta_max_arg + 1)}
        return +mpmath.euler, +mpmath.pi, zetas


def _zeta_value(k, digits):
    _, _, zetas = _constants(digits)
    if k in zetas:
        return zetas[k]
    with mpmath.workdps(digits + 5):
        return +mpmath.zeta(k)


def zx_add(a, b):
    return _coerce(a) + _coerce(b)


def zx_mul(a, b):
    return _coerce(a) * _coerce(b)


def zx_eval(a, precision=constant_digits):
    """
    Evaluate a ZetaExpr to a float.

    Parameters
    ----------
    a : ZetaExpr
        Expression to evaluate.
    precision : int, optional
        Working precision in decimal digits (at least 15).

    Returns
    -------
    float
    """
    a = _coerce(a)
    digits = max(int(precision), 15)
    euler, pi, _ = _constants(digits)
    with mpmath.workdps(digits + 5):
        total = mpmath.mpf(0)
        for m, c in a.terms.items():
            value = mpmath.mpf(c.numerator) / c.denominator
            value *= euler**m.gamma_pow * pi**m.pi_pow
            for k in m.zeta_args:
                value *= _zeta_value(k, digits)
            total += value
        return float(total)


def zx_gamma_degree(a):
    """Maximum power of the Euler-Mascheroni constant in a nonzero expression."""
    a = _coerce(a)
    if a.is_zero():
        raise ZetaException("gamma degree of the zero expression is undefined")
    return max(m.gamma_pow for m in a.terms)
