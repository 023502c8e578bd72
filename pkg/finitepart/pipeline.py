"""
End-to-end finite part on P^n and agreement of the independent routes.
"""

import itertools as it
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd

from .expansion import generate_terms, reduce_terms, symmetry_reduce
from .gamma import zeta_function_coefficients
from .laurent import ls_coeff, trunc_slack_default
from .quadrature import (
    QuadratureException,
    QuadratureSpec,
    eval_reduced_term,
    fit_laurent,
    sample_grid,
)
from .utils import CheckReport, cache_load, cache_store, rel_dev, result_id
from .zring import ZetaExpr, zx_eval

routes = ["pipeline", "pipeline_exact", "closed_form", "quadrature_fit"]

# largest n each route accepts
route_max_n = {"pipeline": 3, "pipeline_exact": 5, "closed_form": 12, "quadrature_fit": 2}

# tolerance of each route against the closed form; "abs" applies when the
# reference is exactly zero, "abs_scale" is multiplied by pi^n (n+1)
cross_check_tolerances = {
    "pipeline": {"rel": {1: 1e-6, 2: 1e-4, 3: 1e-2}, "abs": 1e-6},
    "pipeline_exact": {"rel": 1e-12, "abs": 1e-12},
    "closed_form": {"rel": 1e-12, "abs": 1e-12},
    "quadrature_fit": {"rel": 2e-2, "abs_scale": 1e-2},
}

breakdown_columns = ["term", "class_size", "piece", "dim", "path", "value", "est_error"]


class PipelineException(Exception):
    """
    Custom exception for route preconditions and failed term evaluations.
    """

    def __init__(self, message):
        super().__init__(message)


@dataclass
class FinitePartResult:
    """
    Result of one route; exact is set for the closed form and whenever every
    pipeline piece took an exact path.
    """

    n: int
    route: str
    order: int
    float_value: float
    error_estimate: float
    exact: ZetaExpr = None
    breakdown: pd.DataFrame = None
    echo: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def id(self):
        return result_id(self.n, self.route, self.echo)

    def to_json(self):
        breakdown = None
        if self.breakdown is not None:
            breakdown = self.breakdown.to_dict(orient="records")
        return {
            "id": self.id,
            "n": self.n,
            "route": self.route,
            "order": self.order,
            "exact": None if self.exact is None else self.exact.to_json(),
            "exact_str": None if self.exact is None else str(self.exact),
            "float_value": float(self.float_value),
            "error_estimate": float(self.error_estimate),
            "breakdown": breakdown,
            "echo": dict(self.echo),
            "diagnostics": dict(self.diagnostics),
        }

    @classmethod
    def from_json(cls, data):
        exact = None if data["exact"] is None else ZetaExpr.from_json(data["exact"])
        breakdown = None
        if data["breakdown"] is not None:
            breakdown = pd.DataFrame(data["breakdown"], columns=breakdown_columns)
        return cls(
            n=data["n"],
            route=data["route"],
            order=data["order"],
            float_value=data["float_value"],
            error_estimate=data["error_estimate"],
            exact=exact,
            breakdown=breakdown,
            echo=data["echo"],
            diagnostics=data.get("diagnostics", {}),
        )


def _check_request(n, route, order):
    if route not in routes:
        raise PipelineException(f"unknown route {route}, expected one of {routes}")
    if not 1 <= n <= route_max_n[route]:
        raise PipelineException(f"route {route} supports 1 <= n <= {route_max_n[route]}, got {n}")
    if order < -n:
        raise PipelineException(f"Z(lambda) on P^{n} has no coefficient of order {order}")


def _evaluate_piece(piece, spec):
    try:
        return eval_reduced_term(piece, spec)
    except QuadratureException as e:
        raise PipelineException(f"term {piece.id}: {e}") from e


def _pipeline(n, order, spec, verbose=False, workers=None):
    terms = symmetry_reduce(generate_terms(n, order))
    pieces = reduce_terms(terms, verbose=verbose)
    sizes = {t.id: t.class_size for t in terms}
    if verbose:
        print(f"P^{n}: {len(terms)} term classes, {len(pieces)} reduced pieces")
    if not spec.exact and any(p.dim == 3 for p in pieces):
        warnings.warn(
            f"3-D pieces use the Sobol rule with relative tolerance "
            f"{spec.for_dim(3).target_rel_tol:g}"
        )
    # results come back in submission order; aggregation stays sequential
    with ThreadPoolExecutor(max_workers=workers) as executor:
        values = list(executor.map(lambda p: _evaluate_piece(p, spec), pieces))
    rows = [
        {
            "term": p.source,
            "class_size": sizes[p.source],
            "piece": p.id,
            "dim": p.dim,
            "path": v.path,
            "value": v.value,
            "est_error": v.est_error,
        }
        for p, v in zip(pieces, values)
    ]
    breakdown = pd.DataFrame(rows, columns=breakdown_columns)
    exact = None
    if all(v.exact is not None for v in values):
        exact = ZetaExpr()
        for v in values:
            exact = exact + v.exact
    total = float(breakdown["value"].sum())
    error = float(breakdown["est_error"].sum())
    return total, error, exact, breakdown, {"term_classes": len(terms), "pieces": len(pieces)}


def _closed_form(n, order):
    trunc = max(n + order, n) + trunc_slack_default
    exact = zeta_function_coefficients(n, trunc)[order]
    return zx_eval(exact), 0.0, exact


def _quadrature_fit(n, order, spec, verbose=False):
    ds = sample_grid(n, spec=spec)
    if verbose:
        print(f"sampled Z(lambda) on P^{n} at {ds.sizes['lambda']} points")
    series, report = fit_laurent(ds, n)
    if order > series.trunc_order:
        raise PipelineException(f"fit of degree {report.degree} does not reach order {order}")
    value = float(ls_coeff(series, order))
    # the sample errors scaled by lambda^n bound the data noise of the fit
    noise = float(np.max(ds["est_error"].values * ds["lambda"].values ** n))
    diagnostics = {
        "degree": report.degree,
        "cond": report.cond,
        "residual": report.residual,
        "fit_passed": bool(report.passed),
    }
    return value, max(noise, report.residual), diagnostics


def finite_part(
    n,
    route="pipeline",
    spec=None,
    order=0,
    cache_dir=None,
    use_cache=False,
    verbose=False,
    workers=None,
):
    """
    Laurent coefficient <mu_order, 1> of Z(lambda) on P^n; order 0 is the finite part.

    Parameters
    ----------
    n : int
        Dimension of the projective space.
    route : str
        One of "pipeline", "pipeline_exact", "closed_form", "quadrature_fit".
    spec : QuadratureSpec, optional
        Quadrature settings, defaults to QuadratureSpec.default(1); the
        rule for each integral follows its dimension.
    order : int, optional
        Laurent order, default 0.
    cache_dir : str or Path, optional
        Result cache location, defaults to utils.cache_dir_default.
    use_cache : bool, optional
        Read and write the result cache.
    verbose : bool, optional
        Print progress.
    workers : int, optional
        Threads evaluating pipeline pieces.

    Returns
    -------
    FinitePartResult
    """
    _check_request(n, route, order)
    if spec is None:
        spec = QuadratureSpec.default(1)
    if route == "pipeline_exact":
        spec = replace(spec, exact=True)
    echo = {"n": n, "route": route, "order": order, "spec": spec.to_dict()}
    rid = result_id(n, route, echo)

    if use_cache:
        data = cache_load(rid, cache_dir)
        if data is not None:
            try:
                cached = FinitePartResult.from_json(data)
            except (KeyError, TypeError, ValueError) as e:
                warnings.warn(f"cache entry {rid} failed to deserialize: {e}")
            else:
                if cached.echo == echo:
                    if verbose:
                        print(f"using cached result {rid}")
                    return cached
                warnings.warn(f"cache entry {rid} does not match the request, recomputing")

    breakdown, exact, diagnostics = None, None, {}
    if route in ("pipeline", "pipeline_exact"):
        value, error, exact, breakdown, diagnostics = _pipeline(
            n, order, spec, verbose=verbose, workers=workers
        )
    elif route == "closed_form":
        value, error, exact = _closed_form(n, order)
    else:
        value, error, diagnostics = _quadrature_fit(n, order, spec, verbose=verbose)

    result = FinitePartResult(
        n=n,
        route=route,
        order=order,
        float_value=value,
        error_estimate=error,
        exact=exact,
        breakdown=breakdown,
        echo=echo,
        diagnostics=diagnostics,
    )
    if use_cache:
        path = cache_store(rid, result.to_json(), cache_dir)
        if verbose:
            print(f"stored {rid} in {path}")
    return result


def route_tolerance(route, n):
    """(relative tolerance, absolute tolerance) of a route against the closed form."""
    tol = cross_check_tolerances[route]
    rel = tol["rel"][n] if isinstance(tol["rel"], dict) else tol["rel"]
    if "abs_scale" in tol:
        return rel, tol["abs_scale"] * np.pi**n * (n + 1)
    return rel, tol["abs"]


def admissible_routes(n):
    return [r for r in routes if n <= route_max_n[r]]


def cross_check(n, spec=None, routes=None, cache_dir=None, use_cache=False, verbose=False):
    """
    Run the admissible routes on P^n and compare every pair.

    A pair passes when its deviation is within the looser of the two route
    tolerances; the deviation is absolute when the closed-form value is
    exactly zero and relative otherwise. A route that fails to run is
    recorded in the table and fails the report.

    Returns
    -------
    CheckReport
    """
    if routes is None:
        routes = admissible_routes(n)
    reference = finite_part(n, "closed_form")
    zero_reference = reference.exact.is_zero()
    values, rows = {}, []
    for route in routes:
        try:
            result = finite_part(
                n, route, spec=spec, cache_dir=cache_dir, use_cache=use_cache, verbose=verbose
            )
        except (PipelineException, QuadratureException) as e:
            warnings.warn(f"route {route} failed on P^{n}: {e}")
            rows.append(
                {"route_a": route, "route_b": None, "value_a": np.nan, "value_b": np.nan,
                 "deviation": np.nan, "kind": "error", "tol": np.nan, "passed": False,
                 "message": str(e)}
            )
            continue
        values[route] = result.float_value
        if verbose:
            print(f"{route}: {result.float_value!r}")
    for a, b in it.combinations(values, 2):
        rel_a, abs_a = route_tolerance(a, n)
        rel_b, abs_b = route_tolerance(b, n)
        if zero_reference:
            kind, tol = "abs", max(abs_a, abs_b)
            deviation = abs(values[a] - values[b])
        else:
            kind, tol = "rel", max(rel_a, rel_b)
            deviation = rel_dev(values[a], values[b])
        rows.append(
            {"route_a": a, "route_b": b, "value_a": values[a], "value_b": values[b],
             "deviation": deviation, "kind": kind, "tol": tol, "passed": deviation <= tol,
             "message": ""}
        )
    table = pd.DataFrame(rows)
    passed = bool(len(table)) and bool(table.passed.all())
    worst = float(table.deviation.max()) if table.deviation.notna().any() else np.nan
    tol = float(table.tol.max()) if table.tol.notna().any() else np.nan
    return CheckReport(f"cross check n={n}", passed, worst, tol, table)
