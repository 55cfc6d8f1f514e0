"""Command-line interface: ``rtuomg <command> ...``.

Commands
--------
fit       fit one model to a dataset (JSON or CSV)
gof       fit several models by ML and rank them by AIC
simulate  bias/MSE Monte Carlo study
moments   moment summary for one parameter triple or the reference grid
curve     pdf, cdf, hazard or ecdf-overlay values on a grid
sample    draws from a fitted or given law

Exit status is 0 on success, 2 on bad input and 3 when an optimizer or
numerical routine fails to converge. Numbers are printed with 10
significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from typing import Sequence

import numpy as np

from .datasets import read_dataset
from .distributions import MODELS, RtuomgParams, make_model, rtuomg_sample
from .errors import ConvergenceError, DegenerateDataError, DomainError
from .estimation import METHODS, FitOptions, fit
from .gof import bootstrap_p_values, selection_csv, selection_json, selection_table
from .moments import TABLE1_HEADER, TABLE1_ROWS, moment_numeric, moment_set, raw_moment
from .simulation import StudyConfig, emit_study_csv, emit_study_json, run_study

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONVERGENCE = 3


def _g(v) -> str:
    return "%.10g" % v


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise DomainError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise DomainError(f"expected comma-separated integers, got {text!r}") from None


def _names(text: str, allowed: Sequence[str], what: str) -> tuple[str, ...]:
    out = tuple(t.strip().lower() for t in text.split(",") if t.strip())
    bad = [t for t in out if t not in allowed]
    if bad or not out:
        raise DomainError(f"unknown {what} {bad or text!r}; choose from {', '.join(allowed)}")
    return out


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([v if isinstance(v, str) else _g(v) for v in r])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# fit


def fit_payload(res, n: int) -> dict:
    names = res.model.param_names()
    se = None if res.std_errors is None else dict(zip(names, map(float, res.std_errors)))
    return {
        "model": res.model.name.lower(),
        "method": res.method,
        "n": n,
        "params": dict(zip(names, map(float, res.values))),
        "std_errors": se,
        "loglik": float(res.loglik),
        "objective": float(res.objective_value),
        "converged": bool(res.converged),
        "iterations": int(res.iterations),
        "optimizer": res.optimizer,
    }


def cmd_fit(args) -> int:
    data = read_dataset(args.data, args.scale).array()
    res = fit(data, args.method, FitOptions(model=args.model, std_errors=not args.no_se))
    payload = fit_payload(res, data.size)
    if args.out == "json":
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        names = list(payload["params"])
        se = payload["std_errors"] or {}
        rows = [[k, payload["params"][k], se.get(k, float("nan"))] for k in names]
        sys.stdout.write(_csv_text(("param", "estimate", "std_error"), rows))
        sys.stdout.write(_csv_text(("loglik", "objective", "converged", "iterations"),
                                   [[payload["loglik"], payload["objective"],
                                     str(payload["converged"]).lower(), str(payload["iterations"])]]))
    if not res.converged:
        print(f"error: {args.model} {args.method} fit did not converge", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


# ---------------------------------------------------------------------------
# gof


def cmd_gof(args) -> int:
    data = read_dataset(args.data, args.scale).array()
    models = _names(args.models, tuple(MODELS), "model")
    fitted = []
    for name in models:
        res = fit(data, "ml", FitOptions(model=name, std_errors=False))
        if not res.converged:
            print(f"warning: {name} fit did not converge", file=sys.stderr)
        fitted.append(res.model)
    reports = selection_table(data, fitted)
    if args.bootstrap:
        boot = {}
        for m in fitted:
            name = m.name.lower()

            def refit(sample, name=name):
                return fit(sample, "ml", FitOptions(model=name, std_errors=False, screen=5)).model

            boot[m.name] = bootstrap_p_values(data, m, refit, n_boot=args.bootstrap, seed=args.seed)
    if args.out == "json":
        payload = json.loads(selection_json(reports))
        if args.bootstrap:
            for row in payload["reports"]:
                row["bootstrap"] = dict(zip(("ks_p", "cvm_p", "ad_p"), boot[row["model"]]))
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        text = selection_csv(reports)
        if args.bootstrap:
            lines = text.rstrip("\n").split("\n")
            out = [lines[0] + ",boot_ks_p,boot_cvm_p,boot_ad_p"]
            for r, line in zip(reports, lines[1:]):
                out.append(line + "," + ",".join(_g(v) for v in boot[r.model]))
            text = "\n".join(out) + "\n"
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    config = StudyConfig(
        RtuomgParams(args.alpha, args.beta, args.p),
        sample_sizes=_ints(args.sizes),
        n_reps=args.reps,
        methods=_names(args.methods, METHODS, "method"),
        seed=args.seed,
    )
    table = run_study(config, workers=args.workers)
    sys.stdout.write(emit_study_json(table) + "\n" if args.out == "json" else emit_study_csv(table))
    return EXIT_OK


# ---------------------------------------------------------------------------
# moments


def _verify_deviation(rows) -> float:
    worst = 0.0
    for a, b, p in rows:
        prm = RtuomgParams(a, b, p)
        for r in range(1, 5):
            s = raw_moment(r, prm)
            q = moment_numeric(r, prm)
            worst = max(worst, abs(s - q) / abs(q))
    return worst


def cmd_moments(args) -> int:
    if args.table1:
        rows = TABLE1_ROWS
    else:
        if None in (args.alpha, args.beta, args.p):
            raise DomainError("give --alpha, --beta and --p, or --table1")
        rows = ((args.alpha, args.beta, args.p),)
    out = []
    for a, b, p in rows:
        ms = moment_set(RtuomgParams(a, b, p))
        out.append([a, b, p, ms.mu1p, ms.mu2p, ms.mu3p, ms.mu4p, ms.mu2, ms.cs, ms.ck])
    sys.stdout.write(_csv_text(TABLE1_HEADER, out))
    if args.verify:
        print("max series-vs-quadrature relative deviation: %.3e" % _verify_deviation(rows), file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# curve


def curve_grid(k: int) -> np.ndarray:
    """Midpoints ``(i - 1/2) / k``, i = 1..k, of k equal cells of (0, 1)."""
    return (np.arange(1, k + 1) - 0.5) / k


def _model_from_args(args, data=None):
    if args.params is not None:
        return make_model(args.model, _floats(args.params))
    if data is None:
        raise DomainError("--params is required without --data")
    res = fit(data, "ml", FitOptions(model=args.model, std_errors=False))
    if not res.converged:
        print(f"warning: {args.model} fit did not converge", file=sys.stderr)
    return res.model


def cmd_curve(args) -> int:
    if args.grid < 1:
        raise DomainError("--grid must be at least 1")
    grid = curve_grid(args.grid)
    if args.what == "ecdf-overlay":
        if args.data is None:
            raise DomainError("ecdf-overlay needs --data")
        data = np.sort(read_dataset(args.data, args.scale).array())
        model = _model_from_args(args, data)
        xs = np.concatenate([data, grid])
        kind = ["data"] * data.size + ["grid"] * grid.size
        order = np.argsort(xs, kind="stable")
        xs = xs[order]
        kind = [kind[i] for i in order]
        ecdf = np.searchsorted(data, xs, side="right") / data.size
        cdf = np.asarray(model.cdf(xs), dtype=float)
        rows = [[x, k, e, c] for x, k, e, c in zip(xs, kind, ecdf, cdf)]
        sys.stdout.write(_csv_text(("x", "kind", "ecdf", "cdf"), rows))
        return EXIT_OK
    data = read_dataset(args.data, args.scale).array() if args.data else None
    model = _model_from_args(args, data)
    fn = {"pdf": model.pdf, "cdf": model.cdf, "hazard": model.hazard}[args.what]
    y = np.asarray(fn(grid), dtype=float)
    sys.stdout.write(_csv_text(("x", args.what), zip(grid, y)))
    return EXIT_OK


# ---------------------------------------------------------------------------
# sample


def cmd_sample(args) -> int:
    if args.n < 0:
        raise DomainError("-n must be non-negative")
    model = make_model(args.model, _floats(args.params))
    if args.n == 0:
        return EXIT_OK
    if args.model == "rtuomg":
        x = rtuomg_sample(args.n, model.params, args.seed)
    else:
        x = model.sample(args.n, args.seed)
    sys.stdout.write("".join(_g(v) + "\n" for v in x))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rtuomg", description="RTUOMG distribution toolkit")
    sub = ap.add_subparsers(dest="command", required=True)
    models = tuple(MODELS)

    def data_args(p, required=True):
        p.add_argument("--data", required=required,
                       help="builtin:bladder, builtin:failure, or a file with one value per line")
        p.add_argument("--scale", type=float, default=1.0, help="multiply file values by this factor")

    p = sub.add_parser("fit", help="fit one model")
    data_args(p)
    p.add_argument("--model", choices=models, default="rtuomg")
    p.add_argument("--method", choices=METHODS, default="ml")
    p.add_argument("--out", choices=("json", "csv"), default="json")
    p.add_argument("--no-se", action="store_true", help="skip standard errors")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("gof", help="AIC ranking and goodness-of-fit tests")
    data_args(p)
    p.add_argument("--models", default=",".join(models), help="comma-separated model names")
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("--bootstrap", type=int, default=0, metavar="B",
                   help="also report parametric-bootstrap p-values from B replicates")
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_gof)

    p = sub.add_parser("simulate", help="bias/MSE study")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--sizes", default="25,50,100,150,200,250")
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--seed", type=int, default=20240101)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("moments", help="moments of one triple or of the reference grid")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--table1", action="store_true", help="all 27 triples of the reference grid")
    p.add_argument("--verify", action="store_true", help="report series-vs-quadrature deviation on stderr")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("curve", help="curve values on a grid")
    p.add_argument("--model", choices=models, default="rtuomg")
    p.add_argument("--params", help="comma-separated parameter values (fitted by ML from --data if omitted)")
    p.add_argument("--what", choices=("pdf", "cdf", "hazard", "ecdf-overlay"), default="pdf")
    p.add_argument("--grid", type=int, default=200)
    data_args(p, required=False)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("sample", help="random draws")
    p.add_argument("--model", choices=models, default="rtuomg")
    p.add_argument("--params", required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_sample)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return args.func(args)
    except (ConvergenceError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (DomainError, DegenerateDataError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
