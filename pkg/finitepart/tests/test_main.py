import json

import pytest

from ..main import build_parser, main


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_closed_form_json(capsys):
    code, out = _run(capsys, "closed-form", "--n", "2", "--json")
    assert code == 0
    data = json.loads(out.out)
    assert data["exact_str"] == "-9*pi^2*zeta(2)"


def test_closed_form_text(capsys):
    code, out = _run(capsys, "closed-form", "--n", "3")
    assert code == 0
    assert "80*pi^3*zeta(3)" in out.out


def test_closed_form_series(capsys):
    code, out = _run(capsys, "closed-form", "--n", "2", "--trunc", "10", "--json")
    assert code == 0
    data = json.loads(out.out)
    assert data["exact_str"] == "-9*pi^2*zeta(2)"
    assert data["series"]["min_order"] == 0
    assert data["series"]["trunc_order"] == 10
    assert len(data["series"]["coeffs"]) == 11
    code, out = _run(capsys, "closed-form", "--n", "2", "--trunc", "4")
    assert "F(lambda) up to lambda^4" in out.out
    assert "lambda^0: 3" in out.out


def test_closed_form_short_window(capsys):
    code, out = _run(capsys, "closed-form", "--n", "3", "--trunc", "2")
    assert code == 2
    assert "cannot reach" in out.err


def test_verify_conjecture(capsys):
    code, out = _run(capsys, "verify-conjecture", "--n", "2", "--points", "20")
    assert code == 0
    assert "passed" in out.out


def test_expand(capsys):
    code, out = _run(capsys, "expand", "--n", "2", "--json")
    assert code == 0
    data = json.loads(out.out)
    assert len(data["terms"]) == 7
    assert "reduced" not in data
    code, out = _run(capsys, "expand", "--n", "2", "--reduce", "--json")
    data = json.loads(out.out)
    assert {p["source"] for p in data["reduced"]} == {t["id"] for t in data["terms"]}


def test_sample_zeta(capsys):
    code, out = _run(capsys, "sample-zeta", "--n", "1", "--lambda", "1.0", "--json")
    assert code == 0
    data = json.loads(out.out)
    assert data["value"] == pytest.approx(data["closed_form"], rel=1e-9)
    assert data["spec"]["dim"] == 1


def test_fit(capsys):
    code, out = _run(capsys, "fit", "--n", "1", "--json")
    assert code == 0
    data = json.loads(out.out)
    assert set(data["coefficients"]) == {str(j) for j in range(-1, 6)}
    assert abs(data["coefficients"]["0"]) <= 1e-2


def test_run_route(capsys):
    code, out = _run(capsys, "run", "--n", "2", "--route", "pipeline-exact", "--json")
    assert code == 0
    assert json.loads(out.out)["exact_str"] == "-9*pi^2*zeta(2)"


def test_run_all_exit_code(capsys):
    code, out = _run(capsys, "run", "--n", "1", "--route", "all")
    assert code == 0
    assert "passed" in out.out


def test_run_cache_dir(capsys, tmp_path):
    code, _ = _run(capsys, "run", "--n", "3", "--route", "closed-form", "--cache-dir", str(tmp_path))
    assert code == 0
    assert len(list(tmp_path.glob("n3.closed_form.*.json"))) == 1


def test_domain_errors_exit_with_2(capsys):
    code, out = _run(capsys, "run", "--n", "9", "--route", "pipeline")
    assert code == 2
    assert "supports" in out.err


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
