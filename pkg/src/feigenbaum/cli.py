"""Command-line front end.

Four subcommands drive the pipelines and write machine-readable files:

* ``solve``     Newton solve; writes coefficients, scaling constant,
                iteration history, and the coefficient-decay report.
* ``spectrum``  full pipeline through eigenvalue classification.
* ``verify``    residual table for the closed-form eigenfunctions and
                the internal consistency checks; exit 4 on failure.
* ``plotdata``  TSV emitters (coefficient decay, function and
                eigenfunction samples) for external plotting.

Outputs are deterministic: decimal strings carry the configured number
of digits and no timestamps enter the data sections.  Failures print a
structured JSON object {code, message, hint} on stderr.  Exit codes:
0 success, 2 configuration error, 3 solver failure, 4 verification
failure, 5 eigensolver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from mpmath import mp

from . import __version__
from .bases import BasisKind, BasisSpec, build_basis
from .chebyshev import (
    ChebSeries,
    decay_report,
    eval_series,
    series_derivative,
    series_to_monomial,
)
from .errors import (
    ConfigError,
    FeigenbaumError,
    MissingArtifact,
    NoConvergence,
    SingularJacobian,
)
from .families import default_seed, family_spectrum_check, solve_extremum_order
from .numerics import PrecisionCtx
from .operators import Linearization, OperatorSpec, Variant
from .solver import (
    JacobianMode,
    NewtonConfig,
    assemble_jacobian,
    convergence_diagnostics,
    newton_solve,
)
from .spectrum import (
    compute_spectrum,
    expected_explicit_eigenvalue,
    spectrum_at,
    verify_explicit,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4
EXIT_EIG = 5


def _error(code: int, message: str, hint: str = "") -> int:
    sys.stderr.write(json.dumps({"code": code, "message": message, "hint": hint}) + "\n")
    return code


def _write(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _parse_assign(item: str, what: str):
    if "=" not in item:
        raise ConfigError("%s expects NAME=VALUE, got %r" % (what, item))
    name, value = item.split("=", 1)
    return name.strip(), value.strip()


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="feigenbaum",
        description="Period-doubling fixed points and the spectrum of the "
                    "linearized doubling operator, at arbitrary precision.",
    )
    p.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--digits", type=int, default=64, help="decimal digits (default 64)")
        sp.add_argument("--nodes", type=int, default=32, help="Chebyshev grid size (default 32)")
        sp.add_argument("--operator", choices=[v.value for v in Variant], default="T")
        sp.add_argument("--linearization", choices=["full", "frozen"], default="full")
        sp.add_argument("--basis", choices=[k.value for k in BasisKind], default="cheb")
        sp.add_argument("--dim", type=int, default=None,
                        help="expansion order m for the coefficient bases")
        sp.add_argument("--constrain", action="append", default=[],
                        metavar="aK=V", help="pin a monomial basis coefficient (repeatable)")
        sp.add_argument("--pin", action="append", default=[],
                        metavar="g0=V", help="pin g(0) in the Newton solve (repeatable)")
        sp.add_argument("--extremum-order", type=int, default=1, dest="extremum_order",
                        help="k for an order-2k extremum (default 1, quadratic)")
        sp.add_argument("--mu", action="append", default=[],
                        help="scaling-family parameter (repeatable; spectrum command)")
        sp.add_argument("--seed-file", default=None, dest="seed_file",
                        help="coefficient file: index TAB value per line")
        sp.add_argument("--jacobian", choices=["fd", "exact"], default="fd")
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        return sp

    common(sub.add_parser("solve", help="Newton solve of the fixed-point equation"))
    sp = common(sub.add_parser("spectrum", help="spectrum of the linearized operator"))
    sp.add_argument("--include-vectors", action="store_true", dest="include_vectors",
                    help="embed eigenvector node values in the report")
    common(sub.add_parser("verify", help="closed-form eigenfunction and consistency checks"))
    pd = common(sub.add_parser("plotdata", help="emit TSV plot data"))
    pd.add_argument("--solution", default=None, help="solution artifact from `solve`")
    pd.add_argument("--spectrum", default=None, dest="spectrum_file",
                    help="spectrum artifact from `spectrum --include-vectors`")
    return p


def _operator_spec(args) -> OperatorSpec:
    lin = (Linearization.FULL_DERIVATIVE if args.linearization == "full"
           else Linearization.FROZEN_ALPHA)
    return OperatorSpec(Variant(args.operator), lin)


def _basis_spec(args) -> BasisSpec:
    kind = BasisKind(args.basis)
    if kind is BasisKind.CHEB_GRID:
        if args.constrain:
            raise ConfigError("--constrain applies to the coefficient bases only")
        return BasisSpec(kind, args.nodes)
    order = args.dim if args.dim is not None else (
        15 if kind in (BasisKind.LANFORD, BasisKind.EVEN_MONOMIAL) else 31)
    constraints = []
    for item in args.constrain:
        name, value = _parse_assign(item, "--constrain")
        if not name.startswith("a") or not name[1:].isdigit():
            raise ConfigError("--constrain pins monomial coefficients: a0=1, a1=0, ...")
        constraints.append((int(name[1:]), Fraction(value)))
    return BasisSpec(kind, order, tuple(constraints))


def _newton_config(args, ctx) -> NewtonConfig:
    pins = []
    for item in args.pin:
        name, value = _parse_assign(item, "--pin")
        if name != "g0":
            raise ConfigError("--pin supports g0=VALUE (the value of g at 0)")
        pins.append((0, ctx.mpf(value)))
    mode = JacobianMode.EXACT if args.jacobian == "exact" else JacobianMode.FINITE_DIFFERENCE
    return NewtonConfig(jacobian_mode=mode, pin=tuple(pins))


def _load_coefficients(path, ctx) -> ChebSeries:
    coeffs = {}
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                idx, val = line.split()
                coeffs[int(idx)] = ctx.mpf(val)
    except OSError as exc:
        raise MissingArtifact("cannot read coefficient file: %s" % exc) from exc
    if not coeffs:
        raise MissingArtifact("coefficient file %s is empty" % path)
    n = max(coeffs) + 1
    return ChebSeries(tuple(coeffs.get(i, ctx.mpf(0)) for i in range(n)))


def _warn_family(args):
    if args.operator in ("T3", "T4") and not args.pin:
        sys.stderr.write(
            "warning: %s keeps a one-parameter solution family; Newton will "
            "fail without --pin g0=1\n" % args.operator
        )


def _run_newton(args, ctx):
    """(NewtonResult, SpectrumReport or None) for the configured run."""
    spec = _operator_spec(args)
    config = _newton_config(args, ctx)
    seed = (_load_coefficients(args.seed_file, ctx) if args.seed_file
            else default_seed(args.extremum_order, ctx))
    if args.extremum_order != 1:
        if BasisKind(args.basis) is not BasisKind.CHEB_GRID:
            raise ConfigError("higher extremum orders run on the Chebyshev grid")
        result, report = solve_extremum_order(
            args.extremum_order, args.nodes, ctx, config=config,
            seed=_load_coefficients(args.seed_file, ctx) if args.seed_file else None,
        )
        if spec != result.spec:
            report = spectrum_at(result.solution_series, spec, ctx, basis=result.basis)
        return result, report
    basis = build_basis(_basis_spec(args), ctx)
    return newton_solve(spec, basis, seed, config, ctx), None


def _canonical_alpha(series: ChebSeries, ctx):
    with ctx.activate():
        return 1 / eval_series(series, 1, ctx)


def _solution_payload(result, ctx) -> dict:
    series = result.solution_series
    taylor = series_to_monomial(series, ctx)
    decay = decay_report(series, ctx)
    diag = convergence_diagnostics(result)
    return {
        "digits": ctx.decimal_digits,
        "operator": result.spec.variant.value,
        "basis": result.basis.describe(ctx),
        "alpha": ctx.to_str(_canonical_alpha(series, ctx)),
        "scaling": {"value": ctx.to_str(result.scaling.value),
                    "definition": result.scaling.definition},
        "converged": result.converged,
        "stopped_by": result.stopped_by,
        "iteration_history": [ctx.to_str(u) for u in result.iteration_history],
        "convergence_exponent": None if diag.exponent is None else ctx.to_str(diag.exponent),
        "cheb_coefficients": [ctx.to_str(c) for c in series.coeffs],
        "taylor_coefficients": [ctx.to_str(c) for c in taylor],
        "decay": {
            "log10_inverse_magnitudes": [ctx.to_str(v) for v in decay.log_inv_magnitudes],
            "rate": ctx.to_str(decay.rate),
            "tail_magnitude": ctx.to_str(decay.tail_magnitude),
            "healthy": decay.healthy,
        },
    }


def _emit(payload: dict, args, csv_rows=None):
    if args.format == "json":
        _write(args.out, json.dumps(payload, indent=2) + "\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf)
    for row in csv_rows or []:
        writer.writerow(row)
    _write(args.out, buf.getvalue())


def cmd_solve(args) -> int:
    ctx = PrecisionCtx(args.digits)
    _warn_family(args)
    result, _ = _run_newton(args, ctx)
    payload = _solution_payload(result, ctx)
    rows = [["index", "cheb_coefficient", "taylor_coefficient"]]
    for i in range(len(result.solution_series.coeffs)):
        rows.append([i, payload["cheb_coefficients"][i], payload["taylor_coefficients"][i]])
    _emit(payload, args, rows)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    ctx = PrecisionCtx(args.digits)
    _warn_family(args)
    if args.mu:
        spec = _operator_spec(args)
        if spec.variant not in (Variant.T3, Variant.T4):
            raise ConfigError("--mu family comparison pairs with T3/T4")
        base_args = argparse.Namespace(**{**vars(args), "operator": "T", "pin": []})
        base, _ = _run_newton(base_args, ctx)
        cmp = family_spectrum_check(
            base.solution_series, [ctx.mpf(m) for m in args.mu], spec.variant,
            ctx, n=args.nodes,
        )
        _emit(cmp.to_json_dict(ctx), args,
              [["mu", "max_pairwise_deviation"]]
              + [[ctx.to_str(m.mu), ctx.to_str(cmp.max_pairwise_deviation)]
                 for m in cmp.members])
        return EXIT_OK
    result, report = _run_newton(args, ctx)
    if report is None:
        report = compute_spectrum(result, None, ctx)
    payload = report.to_json_dict(ctx, include_vectors=getattr(args, "include_vectors", False))
    rows = [["index", "re", "im", "modulus", "residual", "tag", "k", "parity", "match_error"]]
    for i, r in enumerate(payload["eigenvalues"]):
        rows.append([i + 1, r["re"], r["im"], r["modulus"], r["residual"],
                     r["tag"], r["k"], r["parity"], r["match_error"]])
    _emit(payload, args, rows)
    return EXIT_OK


def _verify_checks(args, ctx):
    """(name, residual, bound) rows; residual None marks a skipped form."""
    spec = _operator_spec(args)
    if args.seed_file:
        # verify a stored solution exactly as provided, without repair
        g = _load_coefficients(args.seed_file, ctx)
        n = len(g.coeffs)
        result = None
        report = None
    else:
        result, report = _run_newton(args, ctx)
        g = result.solution_series
        n = result.n

    rows = []
    with ctx.activate():
        alpha = _canonical_alpha(g, ctx)
        gp = series_derivative(g, ctx)
        rows.append(("g'(1) = alpha", abs(eval_series(gp, 1, ctx) - alpha),
                     ctx.ten_pow(-20)))

        bound = ctx.ten_pow(-15)
        for k in (-1, 0, 2, 3, 4, 5):
            for lin in (Linearization.FULL_DERIVATIVE, Linearization.FROZEN_ALPHA):
                sp = OperatorSpec(spec.variant, lin)
                name = "eigenfunction k=%s (%s)" % (k, lin.value)
                try:
                    lam = expected_explicit_eigenvalue(sp, k, alpha, ctx)
                    rows.append((name, verify_explicit(g, sp, k, lam, ctx), bound))
                except FeigenbaumError as exc:
                    rows.append((name + " [skipped: %s]" % type(exc).__name__, None, None))

        if report is None:
            report = spectrum_at(g, spec, ctx,
                                 basis=result.basis if result else None, n=n)
        basis = result.basis if result else build_basis(
            BasisSpec(BasisKind.CHEB_GRID, n), ctx)
        lead = report.records[: (2 * n) // 3]
        worst = ctx.mpf(0)
        for r in lead:
            if r.tag == "alpha_power" and r.k == -1:
                continue
            h = basis.to_series([v.real for v in r.vector], ctx)
            worst = max(worst,
                        abs(eval_series(h, 0, ctx)) / max(abs(v) for v in r.vector))
        rows.append(("h(0) dichotomy (non-alpha^2)", worst, ctx.ten_pow(-10)))

        step, _ = NewtonConfig().resolved(ctx)
        full = OperatorSpec(spec.variant, Linearization.FULL_DERIVATIVE)
        fd = assemble_jacobian(full, g, n, NewtonConfig(), ctx, basis=basis)
        ex = assemble_jacobian(full, g, n,
                               NewtonConfig(jacobian_mode=JacobianMode.EXACT),
                               ctx, basis=basis)
        dmax = max(abs(fd[i][j] - ex[i][j]) for i in range(n) for j in range(n))
        rows.append(("finite-difference vs exact Jacobian", dmax, 10 * step))
    return rows


def cmd_verify(args) -> int:
    ctx = PrecisionCtx(args.digits)
    if args.seed_file is None:
        _warn_family(args)
    rows = _verify_checks(args, ctx)
    table = []
    ok_all = True
    for name, res, bound in rows:
        if res is None:
            table.append({"check": name, "residual": None, "bound": None, "ok": None})
            continue
        ok = bool(res <= bound)
        ok_all = ok_all and ok
        table.append({"check": name, "residual": ctx.to_str(res),
                      "bound": ctx.to_str(bound), "ok": ok})
    payload = {"digits": ctx.decimal_digits, "operator": args.operator,
               "all_ok": ok_all, "checks": table}
    csv_rows = [["check", "residual", "bound", "ok"]] + [
        [t["check"], t["residual"], t["bound"], t["ok"]] for t in table
    ]
    _emit(payload, args, csv_rows)
    return EXIT_OK if ok_all else EXIT_VERIFY


def _tsv(path, header, rows):
    lines = ["# " + "\t".join(header)]
    lines += ["\t".join(str(c) for c in row) for row in rows]
    _write(path, "\n".join(lines) + "\n")


def cmd_plotdata(args) -> int:
    ctx = PrecisionCtx(args.digits)
    if not args.solution:
        raise MissingArtifact("plotdata needs --solution (and optionally --spectrum)")
    try:
        with open(args.solution) as fh:
            sol = json.load(fh)
    except OSError as exc:
        raise MissingArtifact("cannot read solution artifact: %s" % exc) from exc
    if "cheb_coefficients" not in sol:
        raise MissingArtifact("solution artifact lacks cheb_coefficients")
    coeffs = ChebSeries(tuple(ctx.mpf(c) for c in sol["cheb_coefficients"]))
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    decay = decay_report(coeffs, ctx)
    _tsv(os.path.join(out, "coefficients.tsv"), ["k", "coefficient"],
         [(k, ctx.to_str(c)) for k, c in enumerate(coeffs.coeffs)])
    _tsv(os.path.join(out, "decay.tsv"), ["k", "log10_inv_coefficient"],
         [(k, ctx.to_str(v)) for k, v in enumerate(decay.log_inv_magnitudes)])
    with ctx.activate():
        pts = [mp.mpf(-1) + mp.mpf(2) * i / 200 for i in range(201)]
        _tsv(os.path.join(out, "solution.tsv"), ["x", "g(x)"],
             [(ctx.to_str(x), ctx.to_str(eval_series(coeffs, x, ctx))) for x in pts])
        if args.spectrum_file:
            try:
                with open(args.spectrum_file) as fh:
                    srep = json.load(fh)
            except OSError as exc:
                raise MissingArtifact("cannot read spectrum artifact: %s" % exc) from exc
            rows = srep.get("eigenvalues", [])
            if not rows or "vector_re" not in rows[0]:
                raise MissingArtifact(
                    "spectrum artifact lacks eigenvectors; rerun spectrum "
                    "with --include-vectors"
                )
            basis = build_basis(_basis_spec(args), ctx)
            for i, r in enumerate(rows):
                vec = [ctx.mpf(v) for v in r["vector_re"]]
                if len(vec) != basis.dim:
                    raise MissingArtifact(
                        "eigenvector length %d does not match basis dimension %d; "
                        "pass the flags the spectrum ran with" % (len(vec), basis.dim)
                    )
                h = basis.to_series(vec, ctx)
                _tsv(os.path.join(out, "eigenfunction_%02d.tsv" % (i + 1)),
                     ["x", "h(x)"],
                     [(ctx.to_str(x), ctx.to_str(eval_series(h, x, ctx))) for x in pts])
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "solve": cmd_solve,
        "spectrum": cmd_spectrum,
        "verify": cmd_verify,
        "plotdata": cmd_plotdata,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, MissingArtifact, ValueError) as exc:
        return _error(EXIT_CONFIG, str(exc), "check flag combinations; --help lists them")
    except SingularJacobian as exc:
        return _error(EXIT_SOLVER, str(exc), "use --pin g0=1 to select a family member")
    except NoConvergence as exc:
        if exc.history is not None:
            return _error(EXIT_SOLVER, str(exc), "try a different seed or more iterations")
        return _error(EXIT_EIG, str(exc), "raise --digits or lower the grid size")
    except FeigenbaumError as exc:
        return _error(EXIT_SOLVER, str(exc), "")


if __name__ == "__main__":
    sys.exit(main())
