"""
Pointwise exterior algebra on C^n and the Fubini-Study form catalog.

Generators are interleaved: index 2(k-1) is dz_k and 2(k-1)+1 is dzbar_k, so
the canonical top word is dz_1 dzbar_1 ... dz_n dzbar_n. Forms are evaluated
on the chart {Z_0 != 0}, z_k = Z_k / Z_0, where
||Z_j||^2 = |Z_j|^2 / |Z|^2.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np
import pandas as pd

from .utils import CheckReport, rel_dev

form_kinds = [
    "fubini_study",
    "d_log_norm_sq",
    "dbar_log_norm_sq",
    "elementary",
    "volume",
    "log_norm_sq",
    "ddbar_log_norm_sq",
]

# sample points avoid the coordinate hyperplanes and the far region
annulus_default = (0.2, 5.0)


class FormException(Exception):
    """
    Custom exception for invalid form evaluations.
    """

    def __init__(self, message):
        super().__init__(message)


class MultiVector:
    """Sparse map from increasing generator words to complex coefficients."""

    __slots__ = ("n", "components")

    def __init__(self, n, components=None):
        self.n = n
        self.components = {}
        for word, coef in (components or {}).items():
            word = tuple(word)
            if list(word) != sorted(set(word)):
                raise FormException(f"basis word {word} is not strictly increasing")
            if any(g < 0 or g >= 2 * n for g in word):
                raise FormException(f"basis word {word} out of range for n={n}")
            if coef != 0:
                self.components[word] = self.components.get(word, 0) + complex(coef)

    def degree(self):
        degrees = {len(w) for w in self.components}
        if len(degrees) > 1:
            raise FormException(f"inhomogeneous multivector with degrees {degrees}")
        return degrees.pop() if degrees else 0

    def max_abs(self):
        return max((abs(c) for c in self.components.values()), default=0.0)

    def __repr__(self):
        return f"MultiVector(n={self.n}, {self.components})"


def _check_dims(a, b):
    if a.n != b.n:
        raise FormException(f"dimension mismatch: {a.n} != {b.n}")


def _shuffle_sign(w1, w2):
    inversions = sum(1 for i in w1 for j in w2 if i > j)
    return -1 if inversions % 2 else 1


def mv_wedge(a, b):
    """Wedge product, bilinear extension of word concatenation with shuffle sign."""
    _check_dims(a, b)
    out = {}
    for w1, c1 in a.components.items():
        for w2, c2 in b.components.items():
            if set(w1) & set(w2):
                continue
            word = tuple(sorted(w1 + w2))
            out[word] = out.get(word, 0) + _shuffle_sign(w1, w2) * c1 * c2
    return MultiVector(a.n, out)


def mv_add(a, b):
    _check_dims(a, b)
    out = dict(a.components)
    for w, c in b.components.items():
        out[w] = out.get(w, 0) + c
    return MultiVector(a.n, out)


def mv_scale(a, factor):
    return MultiVector(a.n, {w: factor * c for w, c in a.components.items()})


def mv_scalar(n, value=1.0):
    return MultiVector(n, {(): value})


def mv_power(a, k):
    result = mv_scalar(a.n)
    for _ in range(k):
        result = mv_wedge(result, a)
    return result


def dz(n, k):
    return MultiVector(n, {(2 * (k - 1),): 1})


def dzbar(n, k):
    return MultiVector(n, {(2 * (k - 1) + 1,): 1})


def top_coefficient(a):
    """Coefficient relative to prod_k (i/2) dz_k ^ dzbar_k."""
    word = tuple(range(2 * a.n))
    return a.components.get(word, 0) / (0.5j) ** a.n


@dataclass(frozen=True)
class FormField:
    """Descriptor of a catalog form; index is the section j in 0..n where needed."""

    kind: str
    index: int = None

    def __post_init__(self):
        if self.kind not in form_kinds:
            raise FormException(f"unknown form {self.kind}, expected one of {form_kinds}")


def fubini_study():
    return FormField("fubini_study")


def elementary(j):
    return FormField("elementary", j)


def log_norm_sq(j):
    return FormField("log_norm_sq", j)


def volume():
    return FormField("volume")


def _hermitian_block(n, matrix):
    """(i/2) sum_{ik} matrix[i, k] dz_i ^ dzbar_k."""
    comps = {}
    for i in range(n):
        for k in range(n):
            gi, gk = 2 * i, 2 * k + 1
            sign = 1 if gi < gk else -1
            word = tuple(sorted((gi, gk)))
            comps[word] = comps.get(word, 0) + 0.5j * sign * matrix[i, k]
    return MultiVector(n, comps)


def _fs_matrix(z):
    S = 1.0 + np.vdot(z, z).real
    return np.eye(len(z)) / S - np.outer(z.conj(), z) / S**2


def _require_nonzero(z, j, kind):
    if j < 0 or j > len(z):
        raise FormException(f"section index {j} out of range 0..{len(z)}")
    if j >= 1 and z[j - 1] == 0:
        raise FormException(f"{kind}({j}) is singular at z_{j} = 0")


def _d_log_coefficients(z, j):
    """Coefficients of d log||Z_j||^2 on dz_1 ... dz_n."""
    S = 1.0 + np.vdot(z, z).real
    coefs = -z.conj() / S
    if j >= 1:
        coefs[j - 1] += 1.0 / z[j - 1]
    return coefs


def _ddbar_log_matrix(z, j):
    """
    Matrix of d/dz_i applied to the dzbar_k coefficient of dbar log||Z_j||^2.

    That coefficient is delta_kj / conj(z_j) - z_k / S; the first part is
    antiholomorphic, so only the metric part is differentiated.
    """
    n = len(z)
    S = 1.0 + np.vdot(z, z).real
    out = np.empty((n, n), dtype=complex)
    for i in range(n):
        for k in range(n):
            d_num = 1.0 if i == k else 0.0
            out[i, k] = -(d_num * S - z[k] * np.conj(z[i])) / S**2
    return out


def eval_form(f, z):
    """
    Evaluate a catalog form at z in C^n (chart Z_0 = 1).

    Parameters
    ----------
    f : FormField
        The form descriptor.
    z : array_like
        Complex point of length n.

    Returns
    -------
    MultiVector
        Pointwise coefficients in the dz/dzbar basis; the scalar form
        log_norm_sq is returned as a degree-0 multivector.
    """
    z = np.asarray(z, dtype=complex)
    n = len(z)
    if f.kind == "fubini_study":
        return _hermitian_block(n, _fs_matrix(z))
    if f.kind == "volume":
        if np.any(z == 0):
            raise FormException("volume form is singular on the coordinate hyperplanes")
        word = tuple(range(2 * n))
        return MultiVector(n, {word: (0.5j) ** n / np.prod(np.abs(z) ** 2)})
    _require_nonzero(z, f.index, f.kind)
    if f.kind == "log_norm_sq":
        S = 1.0 + np.vdot(z, z).real
        value = -np.log(S)
        if f.index >= 1:
            value += np.log(abs(z[f.index - 1]) ** 2)
        return mv_scalar(n, value)
    coefs = _d_log_coefficients(z, f.index)
    d_form = MultiVector(n, {(2 * i,): c for i, c in enumerate(coefs)})
    dbar_form = MultiVector(n, {(2 * i + 1,): np.conj(c) for i, c in enumerate(coefs)})
    if f.kind == "d_log_norm_sq":
        return d_form
    if f.kind == "dbar_log_norm_sq":
        return dbar_form
    if f.kind == "elementary":
        return mv_scale(mv_wedge(d_form, dbar_form), 0.5j)
    # ddbar_log_norm_sq: (i/2) d dbar log||Z_j||^2 off the divisor
    return _hermitian_block(n, _ddbar_log_matrix(z, f.index))


def random_points(n, count, seed=0, annulus=None):
    """Seeded points with annulus[0] <= |z_k| <= annulus[1] for every coordinate."""
    if annulus is None:
        annulus = annulus_default
    rng = np.random.default_rng(seed)
    radii = rng.uniform(annulus[0], annulus[1], size=(count, n))
    angles = rng.uniform(0.0, 2 * np.pi, size=(count, n))
    return radii * np.exp(1j * angles)


def conjecture_sides(z):
    """
    Both sides of the P^n volume-form decomposition at z, as top coefficients.

    LHS is (i/2)^n dz ^ dzbar / |z_1 ... z_n|^2, RHS is
    sum_l (l+1)/(n-l)! omega_FS^l ^ (sum_k omega_k)^(n-l) with k = 0 ... n.
    """
    z = np.asarray(z, dtype=complex)
    n = len(z)
    lhs = top_coefficient(eval_form(volume(), z))
    fs = eval_form(fubini_study(), z)
    summed = MultiVector(n)
    for k in range(n + 1):
        summed = mv_add(summed, eval_form(elementary(k), z))
    rhs = 0.0
    for ell in range(n + 1):
        piece = mv_wedge(mv_power(fs, ell), mv_power(summed, n - ell))
        rhs += (ell + 1) / factorial(n - ell) * top_coefficient(piece)
    return lhs, rhs


def check_conjecture(n, points, tol=1e-9):
    """
    Pointwise check of the P^n volume-form decomposition.

    Parameters
    ----------
    n : int
        Dimension, 1 <= n <= 4.
    points : array_like
        Sample points of shape (count, n) off the coordinate hyperplanes.
    tol : float
        Relative tolerance.

    Returns
    -------
    CheckReport
    """
    rows = []
    for i, z in enumerate(np.asarray(points, dtype=complex).reshape(-1, n)):
        lhs, rhs = conjecture_sides(z)
        rows.append(
            {"point": i, "lhs": lhs.real, "rhs": rhs.real, "rhs_imag": rhs.imag,
             "rel_dev": rel_dev(rhs, lhs)}
        )
    table = pd.DataFrame(rows)
    worst = float(table.rel_dev.max()) if rows else 0.0
    return CheckReport(f"conjecture n={n}", worst <= tol, worst, tol, table)


def check_poincare_lelong_smooth(j, z, tol=1e-10):
    """
    Off {Z_j = 0}: (i/2) d dbar log||Z_j||^2 = -omega_FS.

    Coefficientwise comparison, relative to the largest omega_FS coefficient.
    """
    z = np.asarray(z, dtype=complex)
    lhs = eval_form(FormField("ddbar_log_norm_sq", j), z)
    rhs = mv_scale(eval_form(fubini_study(), z), -1.0)
    diff = mv_add(lhs, mv_scale(rhs, -1.0))
    worst = diff.max_abs() / rhs.max_abs()
    table = pd.DataFrame(
        [{"word": str(w), "lhs": lhs.components.get(w, 0), "rhs": c}
         for w, c in rhs.components.items()]
    )
    return CheckReport(f"poincare-lelong j={j}", worst <= tol, worst, tol, table)


def check_volume_identity(n, points, tol=1e-9):
    """(1/n!) (1/prod_j ||Z_j||^2) omega_FS^n against 1/|z_1 ... z_n|^2."""
    rows = []
    for i, z in enumerate(np.asarray(points, dtype=complex).reshape(-1, n)):
        S = 1.0 + np.vdot(z, z).real
        norms = np.concatenate([[1.0 / S], np.abs(z) ** 2 / S])
        lhs = top_coefficient(mv_power(eval_form(fubini_study(), z), n)).real
        lhs /= factorial(n) * np.prod(norms)
        rhs = 1.0 / np.prod(np.abs(z) ** 2)
        rows.append({"point": i, "lhs": lhs, "rhs": rhs, "rel_dev": rel_dev(lhs, rhs)})
    table = pd.DataFrame(rows)
    worst = float(table.rel_dev.max()) if rows else 0.0
    return CheckReport(f"volume identity n={n}", worst <= tol, worst, tol, table)
