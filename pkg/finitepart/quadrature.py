"""
Deterministic quadrature on [0,1]^d for the integrands of this package:
reduced terms, the zeta function Z(lambda) of the P^n volume form and the
small checks built on them. Laurent coefficients are fitted from lambda
samples.
"""

import warnings
from dataclasses import asdict, dataclass, replace

import numpy as np
import xarray as xr
from scipy import special
from scipy.stats import qmc

from .grassmann import eval_form, fubini_study, log_norm_sq, top_coefficient
from .laurent import LaurentSeries
from .utils import CheckReport, rel_dev
from .zring import zx_eval

# per-dimension defaults; 3-D uses scrambled Sobol points
quadrature_defaults = {
    1: {"rule": "tanh-sinh", "max_level": 7, "target_rel_tol": 1e-10},
    2: {"rule": "tanh-sinh", "max_level": 6, "target_rel_tol": 1e-7},
    3: {"rule": "sobol", "max_level": 18, "target_rel_tol": 1e-3},
}
sobol_min_log2 = 12
sobol_replicates = 8
seed_default = 20240601
abs_tol_default = 1e-12
# tanh-sinh runs over t in [-t_max, t_max]; x underflows to ~6e-38 at the ends
t_max = 4.0

lambda_grid_default = tuple(round(0.05 * k, 2) for k in range(1, 13))
fit_cond_max = 1e12


class QuadratureException(Exception):
    """
    Custom exception for quadrature that did not reach its tolerance.
    """

    def __init__(self, message, level=None, estimate=None, tol=None):
        super().__init__(message)
        self.level = level
        self.estimate = estimate
        self.tol = tol


@dataclass(frozen=True)
class QuadratureSpec:
    """Deterministic quadrature settings; equal specs give bit-identical results."""

    dim: int = 1
    rule: str = "tanh-sinh"
    max_level: int = 7
    target_rel_tol: float = 1e-10
    abs_tol: float = abs_tol_default
    seed: int = seed_default
    replicates: int = sobol_replicates
    exact: bool = False

    @classmethod
    def default(cls, dim, **kwargs):
        if dim not in quadrature_defaults:
            raise QuadratureException(f"no quadrature rule for dimension {dim}")
        return cls(dim=dim, **{**quadrature_defaults[dim], **kwargs})

    def for_dim(self, dim):
        """Same settings applied to another dimension; rule and level follow the defaults."""
        defaults = quadrature_defaults[dim]
        return replace(
            self,
            dim=dim,
            rule=defaults["rule"],
            max_level=defaults["max_level"],
            target_rel_tol=max(self.target_rel_tol, defaults["target_rel_tol"]),
        )

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class ZetaSample:
    lam: float
    value: float
    est_error: float

    def to_json(self):
        return {"lambda": self.lam, "value": self.value, "est_error": self.est_error}


@dataclass(frozen=True)
class TermValue:
    """Value of one reduced term; exact is set when an exact path was taken."""

    value: float
    est_error: float
    exact: object = None
    path: str = "numeric"


@dataclass
class FitReport:
    degree: int
    cond: float
    residual: float
    cond_max: float
    passed: bool


def tanh_sinh_rule(level):
    """
    tanh-sinh nodes on [0, 1] with step h = 2^-(level+1).

    Nodes are written in logistic form x = 1/(1 + exp(-pi sinh t)) so that
    both x and 1 - x keep full relative accuracy near the endpoints.

    Returns
    -------
    (x, xc, w) : numpy arrays
        Nodes, complements 1 - x and weights.
    """
    h = 0.5**(level + 1)
    t = np.arange(-t_max, t_max + 0.5 * h, h)
    a = np.pi * np.sinh(t)
    x = special.expit(a)
    xc = special.expit(-a)
    w = h * np.pi * np.cosh(t) * x * xc
    return x, xc, w


def _tensor_nodes(level, dim):
    x, xc, w = tanh_sinh_rule(level)
    grids = np.meshgrid(*([np.arange(len(x))] * dim), indexing="ij")
    idx = [g.ravel() for g in grids]
    X = np.stack([x[i] for i in idx])
    XC = np.stack([xc[i] for i in idx])
    W = np.prod(np.stack([w[i] for i in idx]), axis=0)
    return X, XC, W


def _smoothstep(u):
    return u**3 * (10.0 - 15.0 * u + 6.0 * u**2)


def _smoothstep_jacobian(u):
    return 30.0 * u**2 * (1.0 - u) ** 2


def _integrate_tanh_sinh(func, dim, spec):
    previous = None
    estimate = np.inf
    for level in range(spec.max_level + 1):
        X, XC, W = _tensor_nodes(level, dim)
        with np.errstate(over="ignore", under="ignore"):
            values = func(X, XC)
        current = float(np.sum(W * values))
        if previous is not None:
            estimate = abs(current - previous)
            if estimate <= spec.target_rel_tol * abs(current) + spec.abs_tol:
                return current, estimate, level
        previous = current
    raise QuadratureException(
        f"tanh-sinh did not converge in {dim}-D: estimate {estimate:.3e} at level {spec.max_level}",
        level=spec.max_level,
        estimate=estimate,
        tol=spec.target_rel_tol,
    )


def _integrate_sobol(func, dim, spec):
    seeds = np.random.SeedSequence(spec.seed).spawn(spec.replicates)
    estimate = np.inf
    for log2_points in range(sobol_min_log2, spec.max_level + 1, 2):
        means = []
        for child in seeds:
            sampler = qmc.Sobol(d=dim, scramble=True, seed=np.random.default_rng(child))
            u = sampler.random_base2(m=log2_points).T
            u = np.clip(u, 1e-15, 1.0 - 1e-15)
            X, XC = _smoothstep(u), _smoothstep(1.0 - u)
            jac = np.prod(_smoothstep_jacobian(u), axis=0)
            with np.errstate(over="ignore", under="ignore"):
                means.append(float(np.mean(func(X, XC) * jac)))
        current = float(np.mean(means))
        estimate = 3.0 * float(np.std(means, ddof=1)) / np.sqrt(len(means))
        if estimate <= spec.target_rel_tol * abs(current) + spec.abs_tol:
            return current, estimate, log2_points
    raise QuadratureException(
        f"Sobol rule did not converge in {dim}-D: estimate {estimate:.3e} with 2^{spec.max_level} points",
        level=spec.max_level,
        estimate=estimate,
        tol=spec.target_rel_tol,
    )


def integrate_cube(func, dim, spec=None):
    """
    Integrate func over [0, 1]^dim.

    Parameters
    ----------
    func : callable
        func(X, XC) with X, XC of shape (dim, N) holding nodes and their
        complements 1 - X; returns N values.
    dim : int
        1, 2 or 3.
    spec : QuadratureSpec, optional
        Defaults to QuadratureSpec.default(dim).

    Returns
    -------
    (value, est_error, level)
    """
    if spec is None:
        spec = QuadratureSpec.default(dim)
    if spec.rule == "sobol":
        return _integrate_sobol(func, dim, spec)
    if dim > 2:
        raise QuadratureException("tensorized tanh-sinh is limited to 2-D")
    return _integrate_tanh_sinh(func, dim, spec)


def _axis_values(factor, x, xc):
    out = np.ones_like(x)
    if factor.a:
        out = out * x**factor.a
    if factor.b:
        out = out * xc**factor.b
    if factor.k:
        out = out * np.log(x) ** factor.k
    if factor.m:
        out = out * np.log(xc) ** factor.m
    return out


def _face_values(face, v, vc):
    """(sum_j log y_j)^b times the nested-ray Jacobian of the face simplex."""
    d = face.dim
    log_tail = np.zeros(v.shape[1])
    log_sum = np.zeros(v.shape[1])
    jac = np.ones(v.shape[1])
    for i in range(d):
        log_sum = log_sum + np.log(v[i]) + log_tail
        jac = jac * vc[i] ** (d - 1 - i)
        log_tail = log_tail + np.log(vc[i])
    log_sum = log_sum + log_tail
    return log_sum**face.log_power * jac


def reduced_term_integrand(t):
    """Vectorized integrand of a ReducedTerm on [0,1]^t.dim, without the prefactor."""
    r = len(t.axes)

    def func(X, XC):
        values = np.ones(X.shape[1])
        for i, factor in enumerate(t.axes):
            values = values * _axis_values(factor, X[i], XC[i])
        if t.face.dim:
            values = values * _face_values(t.face, X[r:], XC[r:])
        elif t.face.log_power:
            # log of the single normalized coordinate
            values = np.zeros_like(values)
        return values

    return func


def eval_reduced_term(t, spec=None):
    """
    Evaluate a ReducedTerm.

    Point terms and 1-D terms are exact. A 1-D ray factor x^a (1-x)^b
    log^k x log^m(1-x) goes to beta_log_integral (path "beta"); a 1-D face
    simplex goes to simplex_log_moment (path "exact").
    Higher-dimensional terms are integrated numerically unless spec.exact
    is set, in which case the product of exact factors is used.

    Returns
    -------
    TermValue
    """
    if spec is None:
        spec = QuadratureSpec.default(max(min(t.dim, 3), 1))
    if t.dim == 0 or t.dim == 1 or spec.exact:
        exact = t.exact_value()
        path = "beta" if t.dim == 1 and t.axes else "exact"
        return TermValue(zx_eval(exact), 0.0, exact, path)
    if t.dim > 3:
        raise QuadratureException(f"no numeric rule for {t.dim}-D term {t.id}")
    prefactor = zx_eval(t.constant_prefactor)
    value, estimate, _ = integrate_cube(reduced_term_integrand(t), t.dim, spec.for_dim(t.dim))
    return TermValue(prefactor * value, abs(prefactor) * estimate, None, "numeric")


def _zeta_integrand(n, lam):
    """lambda^n Z(lambda) / pi^n after t_j = v_j^(1/lambda), v_j = x_j / (1 - x_j)."""

    def func(X, XC):
        log_v = np.log(X) - np.log(XC)
        stacked = np.vstack([np.zeros(X.shape[1]), log_v / lam])
        log_base = special.logsumexp(stacked, axis=0)
        return np.exp(-(n + 1) * lam * log_base - 2.0 * np.sum(np.log(XC), axis=0))

    return func


def sample_zeta(n, lam, spec=None):
    """
    Numeric Z(lambda) = int_{P^n} ||s||^(2 lambda) omega.

    With t_j = |z_j|^2, Z = pi^n int_{R_+^n} prod t_j^(lambda-1) / (1 + sum t)^((n+1) lambda) dt;
    the substitution t_j = v_j^(1/lambda) absorbs the endpoint singularity
    and v_j = x_j/(1 - x_j) maps each axis to (0, 1).
    """
    if lam <= 0:
        raise QuadratureException(f"lambda must be positive, got {lam}")
    if not 1 <= n <= 3:
        raise QuadratureException(f"direct quadrature supports 1 <= n <= 3, got {n}")
    if spec is None:
        spec = QuadratureSpec.default(n)
    elif spec.dim != n:
        spec = spec.for_dim(n)
    value, estimate, _ = integrate_cube(_zeta_integrand(n, lam), n, spec)
    scale = np.pi**n / lam**n
    return ZetaSample(float(lam), scale * value, scale * estimate)


def sample_grid(n, lambdas=None, spec=None):
    """ZetaSamples on a lambda grid as an xarray Dataset."""
    if lambdas is None:
        lambdas = lambda_grid_default
    samples = [sample_zeta(n, lam, spec) for lam in lambdas]
    ds = xr.Dataset(
        {
            "value": ("lambda", [s.value for s in samples]),
            "est_error": ("lambda", [s.est_error for s in samples]),
        },
        coords={"lambda": [s.lam for s in samples]},
        attrs={"n": n},
    )
    return ds


def _as_arrays(samples):
    if isinstance(samples, xr.Dataset):
        return samples["lambda"].values, samples["value"].values
    lam = np.array([s.lam for s in samples], dtype=float)
    values = np.array([s.value for s in samples], dtype=float)
    return lam, values


def fit_laurent(samples, n, degree=None, cond_max=fit_cond_max, pole_order=None):
    """
    Least-squares fit of lambda^n Z(lambda) by a polynomial.

    lambda^n Z(lambda) has its nearest singularity at lambda = -1, a pole of
    order n coming from Gamma(1 + lambda)^(n+1). The polynomial is fitted to
    (1 + lambda)^pole_order lambda^n Z(lambda), which is regular out to
    lambda = -2, and the factor is divided out as a power series.

    Parameters
    ----------
    samples : list of ZetaSample or xarray.Dataset
        At least degree + 1 samples at distinct lambda.
    n : int
        Pole order at lambda = 0.
    degree : int, optional
        Polynomial degree, defaults to 2n + 4.
    cond_max : float, optional
        Largest accepted condition number of the Vandermonde matrix.
    pole_order : int, optional
        Order of the removed pole at lambda = -1, defaults to n; 0 fits
        lambda^n Z(lambda) directly.

    Returns
    -------
    (LaurentSeries, FitReport)
        Float series on the window [-n, degree - n] and the conditioning report.
    """
    if degree is None:
        degree = 2 * n + 4
    if pole_order is None:
        pole_order = n
    lam, values = _as_arrays(samples)
    if len(np.unique(lam)) < degree + 1:
        raise QuadratureException(
            f"fit of degree {degree} needs {degree + 1} distinct lambda values, got {len(np.unique(lam))}"
        )
    V = np.vander(lam, degree + 1, increasing=True)
    shift = (1.0 + lam) ** pole_order
    y = lam**n * values
    cond = float(np.linalg.cond(V))
    fitted, _, _, _ = np.linalg.lstsq(V, shift * y, rcond=None)
    residual = float(np.max(np.abs(V @ fitted / shift - y)))
    # (1 + lambda)^-p = sum_j binom(-p, j) lambda^j
    inverse = special.binom(-pole_order, np.arange(degree + 1))
    coeffs = np.convolve(fitted, inverse)[: degree + 1]
    passed = cond <= cond_max
    if not passed:
        warnings.warn(f"Laurent fit of degree {degree} is ill-conditioned (cond {cond:.2e})")
    series = LaurentSeries(-n, [float(c) for c in coeffs], degree - n)
    return series, FitReport(degree, cond, residual, cond_max, passed)


def gaussian_factor(lam, spec=None):
    """
    (i/2) int_C |Z|^(2(lambda-1)) exp(-|Z|^2) dZ ^ dZbar = pi Gamma(lambda), numerically.

    Returns
    -------
    (value, est_error)
    """

    def func(X, XC):
        log_v = np.log(X[0]) - np.log(XC[0])
        return np.exp(-np.exp(log_v / lam) - 2.0 * np.log(XC[0]))

    value, estimate, _ = integrate_cube(func, 1, spec)
    return np.pi * value / lam, np.pi * estimate / lam


def fs_pairing(g, spec=None):
    """
    int_{P^1} g(||Z_1||^2) omega_FS with g composed on the catalog form
    log_norm_sq(1) and omega_FS taken from eval_form on the chart Z_0 = 1.

    By torus invariance the chart integral runs over z = sqrt(v) > 0 with
    d^2 z = pi dv, and v = x / (1 - x) maps it to x in (0, 1).

    Returns
    -------
    (value, est_error)
    """
    norm, fs = log_norm_sq(1), fubini_study()

    def func(X, XC):
        out = np.empty(X.shape[1])
        for i, (x, xc) in enumerate(zip(X[0], XC[0])):
            z = [np.sqrt(x / xc)]
            moment = np.exp(eval_form(norm, z).components.get((), 0.0).real)
            density = top_coefficient(eval_form(fs, z)).real
            out[i] = np.pi * g(moment) * density / xc**2
        return out

    value, estimate, _ = integrate_cube(func, 1, spec)
    return value, estimate


# smooth torus-invariant test functions g(x) on P^1, x = ||Z_1||^2:
# (g, g at the divisor {Z_1 = 0}, D^2 g / (x(1-x)) with D = x(1-x) d/dx)
stokes_catalog = {
    "norm_sq": (lambda x: x, 0.0, lambda x: 1.0 - 2.0 * x),
    "norm_sq_product": (lambda x: x * (1.0 - x), 0.0, lambda x: 1.0 - 6.0 * x + 6.0 * x**2),
    "norm_sq_squared": (lambda x: x**2, 0.0, lambda x: 4.0 * x - 6.0 * x**2),
}


def check_stokes_transfer(g="norm_sq", spec=None, tol=1e-6):
    """
    On P^1 compare both sides of moving (i/2) d dbar from f = log||Z_1||^2 onto g.

    Left: (i/2) d dbar f = -omega_FS + pi [Z_1 = 0] paired with g, the
    omega_FS pairing through fs_pairing. Right: f paired with (i/2) d dbar g
    as a one-dimensional integral in the moment coordinate x.
    """
    func, at_divisor, second = stokes_catalog[g]
    pairing, _ = fs_pairing(func, spec)
    left = np.pi * at_divisor - pairing
    right, _, _ = integrate_cube(lambda X, XC: np.log(X[0]) * second(X[0]), 1, spec)
    right = np.pi * right
    deviation = rel_dev(right, left)
    return CheckReport(f"stokes transfer g={g}", deviation <= tol, deviation, tol)
