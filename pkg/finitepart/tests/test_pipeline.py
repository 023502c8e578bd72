import json

import numpy as np
import pytest

from ..pipeline import (
    FinitePartResult,
    PipelineException,
    admissible_routes,
    cross_check,
    finite_part,
    route_tolerance,
)
from ..utils import cache_path, dumps, id_to_dict
from ..zring import ZetaExpr, zx_eval

closed_forms = {
    2: "-9*pi^2*zeta(2)",
    3: "80*pi^3*zeta(3)",
    4: "-150*pi^4*zeta(4)",
    5: "-6300*pi^5*zeta(2)*zeta(3) + 9324*pi^5*zeta(5)",
}


@pytest.mark.parametrize("n, expected", list(closed_forms.items()))
def test_closed_form_route(n, expected):
    result = finite_part(n, "closed_form")
    assert str(result.exact) == expected
    assert result.float_value == pytest.approx(zx_eval(result.exact), rel=1e-10)
    assert result.breakdown is None


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_closed_form_leading_order(n):
    result = finite_part(n, "closed_form", order=-n)
    assert result.exact == ZetaExpr.pi(n) * (n + 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exact_pipeline_matches_closed_form(n):
    result = finite_part(n, "pipeline_exact")
    assert result.exact == finite_part(n, "closed_form").exact
    assert set(result.breakdown.path) <= {"exact", "beta"}


def test_exact_pipeline_leading_order():
    result = finite_part(3, "pipeline_exact", order=-3)
    assert result.exact == ZetaExpr.pi(3) * 4


def test_pipeline_p1_vanishes():
    result = finite_part(1, "pipeline")
    assert abs(result.float_value) <= 1e-6
    assert result.exact is not None and result.exact.is_zero()


def test_quadrature_fit_p1_vanishes():
    result = finite_part(1, "quadrature_fit")
    assert abs(result.float_value) <= 1e-2
    assert result.diagnostics["fit_passed"]


def test_pipeline_p2():
    result = finite_part(2, "pipeline", workers=4)
    reference = -9 * np.pi**2 * np.pi**2 / 6
    assert result.float_value == pytest.approx(reference, rel=1e-4)
    assert result.float_value == float(result.breakdown["value"].sum())
    assert "numeric" in set(result.breakdown.path)
    worked = result.breakdown[result.breakdown.term == "J=1,2|lp=1|mu=0,-1|fs=0"]
    assert worked["value"].sum() == pytest.approx(6 * np.pi**2 * (1 - np.pi**2 / 6), rel=1e-12)


@pytest.mark.extended
def test_pipeline_p3():
    result = finite_part(3, "pipeline")
    assert result.float_value == pytest.approx(zx_eval(ZetaExpr.pi(3) * ZetaExpr.zeta(3) * 80), rel=1e-2)


def test_route_preconditions():
    with pytest.raises(PipelineException):
        finite_part(4, "pipeline")
    with pytest.raises(PipelineException):
        finite_part(3, "quadrature_fit")
    with pytest.raises(PipelineException):
        finite_part(13, "closed_form")
    with pytest.raises(PipelineException):
        finite_part(2, "monte_carlo")
    with pytest.raises(PipelineException):
        finite_part(2, "closed_form", order=-3)


def test_json_is_reproducible():
    first = dumps(finite_part(1, "pipeline").to_json())
    second = dumps(finite_part(1, "pipeline").to_json())
    assert first == second
    data = json.loads(first)
    assert id_to_dict(data["id"])["n"] == "n1"
    assert id_to_dict(data["id"])["route"] == "pipeline"


def test_result_round_trip():
    result = finite_part(2, "pipeline_exact")
    restored = FinitePartResult.from_json(json.loads(dumps(result.to_json())))
    assert restored.exact == result.exact
    assert restored.id == result.id
    assert list(restored.breakdown.columns) == list(result.breakdown.columns)
    assert restored.breakdown["value"].tolist() == result.breakdown["value"].tolist()


def test_cache(tmp_path):
    result = finite_part(3, "closed_form", cache_dir=tmp_path, use_cache=True)
    path = cache_path(result.id, tmp_path)
    assert path.exists()
    cached = finite_part(3, "closed_form", cache_dir=tmp_path, use_cache=True)
    assert cached.exact == result.exact
    path.write_text("{not json")
    with pytest.warns(UserWarning):
        again = finite_part(3, "closed_form", cache_dir=tmp_path, use_cache=True)
    assert again.exact == result.exact


def test_cache_ignores_mismatched_echo(tmp_path):
    result = finite_part(2, "closed_form", cache_dir=tmp_path, use_cache=True)
    path = cache_path(result.id, tmp_path)
    data = result.to_json()
    data["echo"] = {**data["echo"], "order": 5}
    path.write_text(dumps(data))
    with pytest.warns(UserWarning):
        again = finite_part(2, "closed_form", cache_dir=tmp_path, use_cache=True)
    assert again.exact == result.exact


def test_route_tolerance():
    assert route_tolerance("pipeline", 2) == (1e-4, 1e-6)
    rel, abs_tol = route_tolerance("quadrature_fit", 1)
    assert rel == 2e-2
    assert abs_tol == pytest.approx(1e-2 * 2 * np.pi)
    assert admissible_routes(3) == ["pipeline", "pipeline_exact", "closed_form"]


def test_cross_check_p1():
    report = cross_check(1)
    assert report.passed, report.table
    assert set(report.table.kind) == {"abs"}
    assert len(report.table) == 6


def test_cross_check_p2():
    report = cross_check(2)
    assert report.passed, report.table
    assert set(report.table.kind) == {"rel"}


def test_cross_check_reports_failing_route():
    with pytest.warns(UserWarning):
        report = cross_check(2, routes=["closed_form", "pipeline_exact", "monte_carlo"])
    assert not report.passed
    assert "error" in set(report.table.kind)
