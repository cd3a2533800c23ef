"""``hdg`` command line: grid sweeps of Frenet, regularity, CR and forms analyses.

Exit status is 0 on success, 2 for configuration errors and 3 when a
numerical evaluation fails (the offending grid point is named).  Output is
written atomically, so a failed run leaves no partial file behind.
"""

from __future__ import annotations

import argparse
import itertools
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from itertools import permutations

from . import calculus, constraints, forms
from .config import (
    KINDS, ConfigError, JobConfig, build_job, load_document, render_csv, render_json,
    format_number,
)
from .errors import HDGError
from .expr import EvalError, Expression, evaluate

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class NumericFailure(Exception):
    def __init__(self, point: dict, cause: Exception):
        self.point, self.cause = point, cause
        where = ", ".join(f"{k}={v!r}" for k, v in point.items())
        super().__init__(f"numeric failure at {where}: {cause}")


# per-kind columns and rows ---------------------------------------------------------------


def _frame_columns(names) -> list[str]:
    cols = list(names) + ["q0", "q1", "q2", "q3"]
    cols += [f"norm_q_{a}" for a in names]
    for a in names:
        cols += [f"kappa_{a}_{l}" for l in (1, 2, 3)] + [f"abs_kappa_{a}", f"R_{a}"]
    for a, b in permutations(names, 2):
        cols += [f"tau_{a}{b}_{l}" for l in (1, 2, 3)] + [f"abs_tau_{a}{b}", f"R_{a}{b}"]
    return cols + ["regular"]


def _frame_row(c: constraints.Constraint, point, cfg) -> list:
    names = c.names
    q = c.value(point)
    report = constraints.check_regular(c, point, cfg)
    row = list(point) + list(q.components) + list(report.tangent_norms)
    n_pairs = len(names) * (len(names) - 1)
    if not report.regular:
        return row + [None] * (5 * len(names) + 5 * n_pairs) + [False]
    data = constraints.frenet(c, point, cfg)
    for a in names:
        kappa = data.curvature[a]
        row += list(kappa.components[1:]) + [kappa.norm(), data.radius[a]]
    for a, b in permutations(names, 2):
        tau = data.torsion[(a, b)]
        row += list(tau.components[1:]) + [tau.norm(), data.torsion_radius[(a, b)]]
    return row + [True]


def _regular_columns(names) -> list[str]:
    return (list(names) + [f"norm_q_{a}" for a in names]
            + [f"eig_{n}" for n in range(1, len(names) + 1)] + ["normalized_det", "regular"])


def _regular_row(c, point, cfg) -> list:
    r = constraints.check_regular(c, point, cfg)
    return list(point) + list(r.tangent_norms) + list(r.eigenvalues) + [r.normalized_det, r.regular]


def _forms_columns(names) -> list[str]:
    cols = list(names)
    for a in names:
        cols += [f"omega_{a}_{l}" for l in (1, 2, 3)]
    return cols + ["first", "second", "second_opposite"]


def _forms_row(frame, point, cfg) -> list:
    res = forms.structural_residuals(frame, point, cfg)
    row = list(point)
    for a in range(frame.arity):
        row += list(forms.connection(frame, a, point, cfg).components[1:])
    return row + [res.first_norm, res.second_norm, res.second_opposite_norm]


def _cr_columns(names) -> list[str]:
    return list(names) + ["r0", "r1", "r2", "r3"]


def plan(job: JobConfig):
    """Column names, grid points and a row function for ``job``."""
    expression = Expression.compile(job.expr, job.params)
    axes = {a.name: a.values() for a in job.grid}
    grids = [axes[n] if n in axes else [job.fixed[n]] for n in job.params]
    points = [tuple(p) for p in itertools.product(*grids)]
    cfg = job.diff
    names = job.params
    if job.kind in ("frame", "regular"):
        c = constraints.Constraint(expr=expression, cfg=cfg)
        if job.kind == "frame":
            return _frame_columns(names), points, lambda p: _frame_row(c, p, cfg)
        return _regular_columns(names), points, lambda p: _regular_row(c, p, cfg)
    if job.kind == "forms":
        frame = constraints.Constraint(expr=expression, cfg=cfg)
        return _forms_columns(names), points, lambda p: _forms_row(frame, p, cfg)
    if job.kind == "cr-check":
        f = calculus.QuaternionField(coords="cartesian", expr=expression)
        return _cr_columns(names), points, lambda p: list(p) + list(calculus.cr_residual(f, p, cfg))
    if job.kind == "cr-check-polar":
        g = calculus.QuaternionField(coords="polar", expr=expression)
        return _cr_columns(names), points, lambda p: list(p) + list(calculus.cr_residual_polar(g, p, cfg))

    def eval_row(p):
        try:
            return list(evaluate(expression.ast, dict(zip(names, p))).components)
        except EvalError as exc:
            raise HDGError(str(exc)) from exc

    return ["x0", "x1", "x2", "x3"], points, eval_row


def compute(job: JobConfig) -> tuple[list[str], list[list]]:
    """Evaluate every grid point; rows come back in grid order."""
    columns, points, row_fn = plan(job)

    def guarded(p):
        try:
            row = row_fn(p)
        except (HDGError, ArithmeticError) as exc:
            raise NumericFailure(dict(zip(job.params, p)), exc) from exc
        bad = [x for x in row if isinstance(x, float) and math.isnan(x)]
        if bad:
            raise NumericFailure(dict(zip(job.params, p)), ArithmeticError("NaN in result row"))
        return row

    if job.threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=job.threads) as pool:
            rows = list(pool.map(guarded, points))
    else:
        rows = [guarded(p) for p in points]
    return columns, rows


def render(job: JobConfig, columns, rows) -> str:
    if job.format == "csv":
        return render_csv(columns, rows)
    if job.kind == "eval":
        return render_json({k: format_number(v) for k, v in zip(columns, rows[0])})
    return render_json({
        "kind": job.kind,
        "expr": job.expr,
        "params": list(job.params),
        "columns": columns,
        "rows": [[format_number(x) for x in row] for row in rows],
    })


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".hdg-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(job: JobConfig, stdout=None) -> int:
    """Run a job; returns the exit status."""
    stdout = stdout or sys.stdout
    try:
        columns, rows = compute(job)
    except NumericFailure as exc:
        print(f"hdg: {exc}", file=sys.stderr)
        if job.out and os.path.exists(job.out):
            # never leave a stale or partial artifact at the target path
            os.unlink(job.out)
        return EXIT_NUMERIC
    text = render(job, columns, rows)
    if job.out:
        write_atomic(job.out, text)
    else:
        stdout.write(text)
    return EXIT_OK


# argument parsing -----------------------------------------------------------------------

_HELP = {
    "frame": "curvature, torsion and radii of a constraint over a parameter grid",
    "cr-check": "Cauchy-Riemann-type residual rows of a Cartesian field",
    "cr-check-polar": "regularity residual rows of a field in polar coordinates",
    "forms": "connection and structural-equation residuals of a unit frame",
    "regular": "Gram spectrum and regularity flag of a constraint",
    "eval": "evaluate an expression at a single point",
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hdg", description="Quaternionic differential geometry sweeps.")
    sub = ap.add_subparsers(dest="kind", required=True, metavar="KIND")
    for kind in KINDS:
        p = sub.add_parser(kind, help=_HELP[kind])
        p.add_argument("--config", help="JSON job file; flags below override its fields")
        p.add_argument("--expr", help="expression text")
        p.add_argument("--grid", action="append", default=[], metavar="VAR=MIN:MAX:COUNT",
                       help="inclusive linspace for one variable; repeatable")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--threads", type=int, help="worker threads (default: $HDG_THREADS or 1)")
        p.add_argument("--step", type=float, help="first-derivative step scale")
        p.add_argument("--exact", action="store_true", help="exact forward-mode derivatives")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, line_of, source = None, None, "config"
        if args.config:
            source = args.config
            try:
                with open(args.config, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc.strerror}", source) from None
            doc, line_of = load_document(text, source)
        job = build_job(
            args.kind, doc, line_of, source=source, expr=args.expr, grid_flags=args.grid,
            out=args.out, fmt=args.format, threads=args.threads, step=args.step,
            exact=args.exact, env_threads=os.environ.get("HDG_THREADS"),
        )
    except ConfigError as exc:
        print(f"hdg: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(job)


if __name__ == "__main__":
    sys.exit(main())
