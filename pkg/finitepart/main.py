"""Command line interface: fp <command> ..."""

import argparse
import sys

import pandas as pd

from .expansion import ReductionException, generate_terms, reduce_terms, symmetry_reduce
from .gamma import closed_form_fp, closed_form_value
from .grassmann import FormException, check_conjecture, random_points
from .laurent import SeriesException, ls_eval_coeffs, ls_to_json
from .pipeline import PipelineException, cross_check, finite_part
from .quadrature import (
    QuadratureException,
    QuadratureSpec,
    fit_laurent,
    lambda_grid_default,
    sample_grid,
    sample_zeta,
    seed_default,
)
from .utils import dumps
from .zring import ZetaException

route_names = {
    "pipeline": "pipeline",
    "pipeline-exact": "pipeline_exact",
    "closed-form": "closed_form",
    "fit": "quadrature_fit",
}

domain_exceptions = (
    ZetaException,
    SeriesException,
    FormException,
    ReductionException,
    QuadratureException,
    PipelineException,
)


def _emit(args, payload, text):
    if args.json:
        sys.stdout.write(dumps(payload))
    else:
        print(text)


def cmd_closed_form(args):
    series, _ = closed_form_fp(args.n, args.trunc)
    result = finite_part(args.n, "closed_form", order=args.order)
    payload = {**result.to_json(), "series": ls_to_json(series)}
    lines = [f"P^{args.n} order {args.order}: {result.exact} = {result.float_value!r}"]
    lines.append(f"F(lambda) up to lambda^{series.trunc_order}:")
    lines.extend(f"  lambda^{j}: {c}" for j, c in series.items())
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_verify_conjecture(args):
    points = random_points(args.n, args.points, seed=args.seed)
    report = check_conjecture(args.n, points, tol=args.tol)
    status = "passed" if report.passed else "FAILED"
    _emit(
        args,
        report.to_json(),
        f"{report.name}: {status}, max relative deviation {report.max_rel_dev:.3e} "
        f"over {args.points} points (tol {report.tol:g})",
    )
    return 0 if report.passed else 1


def cmd_expand(args):
    terms = symmetry_reduce(generate_terms(args.n, args.order))
    table = pd.DataFrame([t.to_json() for t in terms])
    payload = {"n": args.n, "order": args.order, "terms": [t.to_json() for t in terms]}
    text = f"{table.to_string(index=False)}\n{len(terms)} term classes"
    if args.reduce:
        pieces = reduce_terms(terms, verbose=args.verbose)
        payload["reduced"] = [p.to_json() for p in pieces]
        text = f"{text}, {len(pieces)} reduced pieces"
    _emit(args, payload, text)
    return 0


def _spec(args, dim):
    return QuadratureSpec.default(dim, seed=args.seed)


def cmd_sample_zeta(args):
    spec = _spec(args, args.n)
    sample = sample_zeta(args.n, args.lam, spec)
    reference = float(closed_form_value(args.n, args.lam))
    payload = {**sample.to_json(), "n": args.n, "closed_form": reference, "spec": spec.to_dict()}
    _emit(
        args,
        payload,
        f"Z({args.lam}) on P^{args.n} = {sample.value!r} +- {sample.est_error:.2e} "
        f"(closed form {reference!r})",
    )
    return 0


def cmd_fit(args):
    spec = _spec(args, args.n)
    grid = args.grid or list(lambda_grid_default)
    ds = sample_grid(args.n, grid, spec)
    series, report = fit_laurent(ds, args.n, degree=args.degree)
    coeffs = ls_eval_coeffs(series)
    payload = {
        "n": args.n,
        "coefficients": {str(j): c for j, c in coeffs.items()},
        "degree": report.degree,
        "cond": report.cond,
        "residual": report.residual,
        "passed": bool(report.passed),
        "spec": spec.to_dict(),
    }
    lines = [f"lambda^{j}: {c!r}" for j, c in coeffs.items()]
    lines.append(f"cond {report.cond:.3e}, residual {report.residual:.3e}")
    _emit(args, payload, "\n".join(lines))
    return 0 if report.passed else 1


def cmd_run(args):
    spec = QuadratureSpec.default(1, seed=args.seed)
    use_cache = args.cache_dir is not None
    if args.route == "all":
        report = cross_check(
            args.n, spec=spec, cache_dir=args.cache_dir, use_cache=use_cache, verbose=args.verbose
        )
        status = "passed" if report.passed else "FAILED"
        text = f"{report.table.to_string(index=False)}\n{report.name}: {status}"
        _emit(args, report.to_json(), text)
        return 0 if report.passed else 1
    result = finite_part(
        args.n,
        route_names[args.route],
        spec=spec,
        order=args.order,
        cache_dir=args.cache_dir,
        use_cache=use_cache,
        verbose=args.verbose,
        workers=args.workers,
    )
    exact = "" if result.exact is None else f"{result.exact} = "
    text = (
        f"P^{args.n} [{result.route}] order {args.order}: {exact}{result.float_value!r} "
        f"(est. error {result.error_estimate:.2e})"
    )
    _emit(args, result.to_json(), text)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fp", description="Finite parts of divergent integrals on P^n."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="dimension of P^n")
    common.add_argument("--json", action="store_true", help="machine readable output")
    common.add_argument("--verbose", action="store_true", help="print progress")
    common.add_argument("--seed", type=int, default=seed_default, help="quadrature / sampling seed")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("closed-form", parents=[common], help="exact closed-form coefficient")
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--trunc", type=int, default=None, help="highest power of lambda in F(lambda)")
    p.set_defaults(func=cmd_closed_form)

    p = sub.add_parser("verify-conjecture", parents=[common], help="pointwise volume-form check")
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify_conjecture, seed=0)

    p = sub.add_parser("expand", parents=[common], help="list expansion terms")
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--reduce", action="store_true", help="also emit the reduced pieces")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("sample-zeta", parents=[common], help="numeric Z(lambda)")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.set_defaults(func=cmd_sample_zeta)

    p = sub.add_parser("fit", parents=[common], help="fit Laurent coefficients of Z(lambda)")
    p.add_argument("--grid", type=float, nargs="+", help="lambda sample points")
    p.add_argument("--degree", type=int, default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("run", parents=[common], help="finite part by one route or all")
    p.add_argument("--route", choices=list(route_names) + ["all"], default="pipeline")
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--cache-dir", default=None, help="enables the result cache")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except domain_exceptions as e:
        print(f"fp {args.command}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
