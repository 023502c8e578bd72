"""
Term generation and reduction for the finite part of the P^n volume form.

The volume form omega = (i/2)^n dz ^ dzbar / |z_1 ... z_n|^2 decomposes as
sum_l (l+1) omega_FS^l ^ sum_{|J|=n-l} omega_J with omega_J the wedge of the
elementary forms omega_j, j in J. Pairing mu_0(omega) with 1 expands into
terms indexed by (l, J, l', composition), where l' is the power of the metric
reweighting log(||s||^2/||s_J||^2) and the composition (l_k) records which
Laurent coefficient mu_{l_k}(omega_{j_k}) each elementary factor contributes.

Reduction works on the moment simplex x_j = ||Z_j||^2, where
omega_FS^l ^ omega_J pairs with torus-invariant functions as
pi^n l! (1 - sum_J x_j) / prod_J x_j dx.
"""

import itertools as it
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .gamma import beta_log_integral, simplex_log_moment
from .laurent import LaurentSeries, ls_coeff, ls_exp_monomial, ls_mul
from .zring import ZetaExpr

expansion_max_n = 5


class ReductionException(Exception):
    """
    Custom exception for terms that cannot be brought to integrable form.
    """

    def __init__(self, message):
        super().__init__(message)


@dataclass(frozen=True)
class Term:
    """
    One summand of the expansion on P^n.

    multiplicity carries (l+1)/l'! and, after symmetry_reduce, the class size.
    """

    subset_J: tuple
    log_power: int
    composition: tuple
    fs_power: int
    multiplicity: Fraction
    order: int = 0
    class_size: int = 1

    def __post_init__(self):
        if len(self.composition) != len(self.subset_J):
            raise ReductionException("composition length must match |J|")
        if any(l < -1 for l in self.composition):
            raise ReductionException(f"composition entries must be >= -1: {self.composition}")
        if sum(self.composition) != self.order - self.log_power:
            raise ReductionException(
                f"composition {self.composition} does not sum to {self.order - self.log_power}"
            )

    @property
    def n(self):
        return self.fs_power + len(self.subset_J)

    @property
    def id(self):
        J = ",".join(map(str, self.subset_J)) or "-"
        comp = ",".join(map(str, self.composition)) or "-"
        return f"J={J}|lp={self.log_power}|mu={comp}|fs={self.fs_power}"

    def to_json(self):
        return {
            "id": self.id,
            "subset_J": list(self.subset_J),
            "log_power": self.log_power,
            "composition": list(self.composition),
            "fs_power": self.fs_power,
            "multiplicity": f"{self.multiplicity.numerator}/{self.multiplicity.denominator}",
            "order": self.order,
            "class_size": self.class_size,
        }


@dataclass(frozen=True)
class AxisFactor:
    """int_0^1 x^a (1-x)^b log^k(x) log^m(1-x) dx along one ray coordinate."""

    a: int
    b: int
    k: int
    m: int

    def exact_value(self):
        return beta_log_integral(self.a, self.b, self.k, self.m)


@dataclass(frozen=True)
class SimplexFactor:
    """int over the standard (vertices-1)-simplex of (sum_j log y_j)^log_power."""

    vertices: int
    log_power: int = 0

    @property
    def dim(self):
        return self.vertices - 1

    def exact_value(self):
        return simplex_log_moment(self.vertices, self.log_power)


@dataclass(frozen=True)
class ReducedTerm:
    """
    Integrable piece of a Term.

    The integral runs over the divisor stratum cut out by the components in
    ambient (P^{n-|ambient|}); in moment coordinates it is a product of
    ray-coordinate factors and one face simplex factor, times
    constant_prefactor. point_axes counts ray coordinates that were
    evaluated at their base point.
    """

    n: int
    ambient: tuple
    axes: tuple
    face: SimplexFactor
    constant_prefactor: ZetaExpr
    point_axes: int = 0
    source: str = ""

    def __post_init__(self):
        if self.form_degree != 2 * (self.n - len(self.ambient)):
            raise ReductionException(
                f"integrand degree {self.form_degree} does not fill the ambient stratum of {self.source}"
            )

    @property
    def dim(self):
        """Number of coordinates that are actually integrated."""
        return len(self.axes) + self.face.dim

    @property
    def form_degree(self):
        return 2 * (len(self.axes) + self.point_axes + self.face.dim)

    @property
    def id(self):
        axes = ";".join(f"{f.a},{f.b},{f.k},{f.m}" for f in self.axes) or "-"
        amb = ",".join(map(str, self.ambient)) or "-"
        return f"{self.source}#on={amb}|ax={axes}|face={self.face.vertices},{self.face.log_power}"

    def exact_value(self):
        value = self.constant_prefactor
        for factor in self.axes:
            value = value * factor.exact_value()
        return value * self.face.exact_value()

    def to_json(self):
        return {
            "id": self.id,
            "n": self.n,
            "ambient": list(self.ambient),
            "axes": [[f.a, f.b, f.k, f.m] for f in self.axes],
            "face": [self.face.vertices, self.face.log_power],
            "constant_prefactor": self.constant_prefactor.to_json(),
            "point_axes": self.point_axes,
            "source": self.source,
        }


def compositions(total, parts, lower=-1):
    """
    All tuples of `parts` integers >= lower summing to `total` (stars and bars).
    """
    if parts == 0:
        if total == 0:
            yield ()
        return
    stars = total - lower * parts
    if stars < 0:
        return
    for bars in it.combinations(range(stars + parts - 1), parts - 1):
        bars = (-1,) + bars + (stars + parts - 1,)
        yield tuple(bars[b + 1] - bars[b] - 1 + lower for b in range(parts))


def composition_count(parts, total):
    """
    Number of compositions read off the product of `parts` series
    lambda^-1 / (1 - lambda), the Laurent product of elementary factors.
    """
    if parts == 0:
        return 1 if total == 0 else 0
    if total < -parts:
        return 0
    window = total + parts
    geometric = LaurentSeries(-1, [Fraction(1)] * (window + 1), window - 1)
    product = geometric
    for _ in range(parts - 1):
        product = ls_mul(product, geometric)
    if total < product.min_order:
        return 0
    return int(ls_coeff(product, total))


def reweighting_coefficients(max_power):
    """1/l'! for l' = 0 ... max_power, from exp(lambda * log(||s||^2/||s_J||^2))."""
    series = ls_exp_monomial(max_power)
    return [ls_coeff(series, k) for k in range(max_power + 1)]


def generate_terms(n, order=0):
    """
    Raw term list for the Laurent coefficient of the given order.

    For each l in 0..n, each subset J of {0..n} with |J| = n - l, each l' >= 0
    and each composition of order - l' into |J| parts >= -1; the
    multiplicity is (l+1)/l'!.

    Parameters
    ----------
    n : int
        Dimension, 1 <= n <= 5.
    order : int, optional
        Laurent order; 0 gives the finite part, -n the leading coefficient.

    Returns
    -------
    list of Term
    """
    if not 1 <= n <= expansion_max_n:
        raise ReductionException(f"term generation supports 1 <= n <= {expansion_max_n}")
    weights = reweighting_coefficients(n + max(order, 0))
    terms = []
    for ell in range(n + 1):
        size = n - ell
        for J in it.combinations(range(n + 1), size):
            for lp in range(0, size + order + 1):
                for comp in compositions(order - lp, size):
                    terms.append(
                        Term(J, lp, comp, ell, (ell + 1) * weights[lp], order)
                    )
    return terms


def _class_key(term):
    return (term.order, term.fs_power, term.log_power, tuple(sorted(term.composition, reverse=True)))


def symmetry_reduce(terms):
    """
    Collapse the permutation action on homogeneous coordinates.

    Representatives use J = the last |J| indices and a descending
    composition; multiplicities are summed over each class.
    """
    classes = {}
    for term in terms:
        key = _class_key(term)
        total, size = classes.get(key, (Fraction(0), 0))
        classes[key] = (total + term.multiplicity, size + term.class_size)
    reduced = []
    for key in sorted(classes, key=lambda k: (k[0], k[1], k[2], max(k[3], default=0), k[3])):
        order, ell, lp, comp = key
        n = ell + len(comp)
        J = tuple(range(n + 1 - len(comp), n + 1))
        total, size = classes[key]
        reduced.append(Term(J, lp, comp, ell, total, order, size))
    return reduced


def _poly_mul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


def _poly_pow(p, k, nvars):
    out = {(0,) * nvars: Fraction(1)}
    for _ in range(k):
        out = _poly_mul(out, p)
    return out


def _linear(coeffs):
    """sum_i coeffs[i] * var_i as a polynomial dict."""
    nvars = len(coeffs)
    out = {}
    for i, c in enumerate(coeffs):
        if c:
            e = [0] * nvars
            e[i] = 1
            out[tuple(e)] = Fraction(c)
    return out


def reduce_term(t):
    """
    Rewrite a Term as a list of integrable ReducedTerms.

    Factors with l_k = -1 restrict to the face {x_{j_k} = 0} (a factor pi
    each, the face carries its own FS normalization). The remaining factors
    j_1 ... j_r are opened along nested rays x_{j_i} = s_i prod_{h<i}(1 - s_h);
    the reweighting log becomes c * sum_h log(1 - s_h) + Y with Y the log
    sum on the face simplex of the c = n + 1 - |J| untouched coordinates.
    A ray coefficient of order p >= 0 is obtained by one integration by
    parts (Stokes transfer), which moves d/ds onto the smooth cofactor
    (1 - s)^c log^a(1 - s) and leaves the weight log^{p+1}(s)/(p+1)!.
    Order -1 along a ray evaluates the cofactor at s = 0; a cofactor log that
    vanishes there drops the piece. With c = 1 the face is a point where the
    normalized coordinate is 1; its log powers are kept and evaluate to 0.
    """
    n = t.n
    ell, lp = t.fs_power, t.log_power
    P = tuple(j for j, l in zip(t.subset_J, t.composition) if l == -1)
    K = [l for l in t.composition if l != -1]
    r = len(K)
    c = n + 1 - len(t.subset_J)
    if c < 1:
        raise ReductionException(f"no untouched coordinate left for {t.id}")
    prefactor = ZetaExpr.pi(n) * (t.multiplicity * factorial(ell))
    nvars = r + 1  # T_1 ... T_r, Y
    log_ratio = _poly_pow(_linear([c] * r + [1]), lp, nvars)

    pieces = []
    for q in it.product(*[range(m + 2) for m in K]):
        poly = log_ratio
        for i, qi in enumerate(q):
            cross = _linear([1] * i + [0] * (nvars - i))
            if qi:
                if not cross:
                    poly = {}
                    break
                poly = _poly_mul(poly, _poly_pow(cross, qi, nvars))
                poly = {e: v / factorial(qi) for e, v in poly.items()}
        for exps, coef in poly.items():
            a, b = exps[:r], exps[r]
            options = []
            points = 0
            for i in range(r):
                p = K[i] - q[i]
                if p == -1:
                    if a[i] > 0:
                        options = None
                        break
                    points += 1
                    continue
                weight = Fraction(1, factorial(p + 1))
                choice = [(c * weight, AxisFactor(0, c - 1, p + 1, a[i]))]
                if a[i] > 0:
                    choice.append((a[i] * weight, AxisFactor(0, c - 1, p + 1, a[i] - 1)))
                options.append(choice)
            if options is None:
                continue
            for combo in it.product(*options):
                weight = coef
                for w, _ in combo:
                    weight *= w
                pieces.append(
                    ReducedTerm(
                        n=n,
                        ambient=P,
                        axes=tuple(f for _, f in combo),
                        face=SimplexFactor(c, b),
                        constant_prefactor=prefactor * weight,
                        point_axes=points,
                        source=t.id,
                    )
                )
    return pieces


def reduce_terms(terms, verbose=False):
    reduced = []
    for term in terms:
        pieces = reduce_term(term)
        if verbose:
            print(f"{term.id}: {len(pieces)} reduced pieces")
        reduced.extend(pieces)
    return reduced


def leading_coefficient(n):
    """
    <mu_{-n}(omega), 1> from the expansion: every contributing term is a
    product of n Lelong restrictions and reduces to a point.
    """
    total = ZetaExpr()
    for term in generate_terms(n, order=-n):
        for piece in reduce_term(term):
            if piece.dim != 0:
                raise ReductionException(f"{piece.id} is not point supported")
            total = total + piece.exact_value()
    return total
