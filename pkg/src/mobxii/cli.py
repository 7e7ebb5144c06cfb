"""Command-line front end: ``mobxii {fit,regress,simulate,eval,validate,datasets}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 fit failure.
Text reports print three decimals; the JSON twin and all CSV files carry
full precision (``repr`` floats) so they can be read back losslessly.
Outputs are written atomically and contain no timestamps, so identical
invocations give byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import tempfile

import numpy as np
from scipy import special

from . import __version__
from .exceptions import DomainError, ParameterError
from .family import MOBXII
from .baselines import make_baseline
from .fixtures import DATASET_NOTES
from .inference import fit_mle, glr_vuong
from .models import MODELS, get_model
from .moments import bowley_moors, lorenz_bonferroni
from .montecarlo import StudyConfig, run_iid_study, run_regression_study
from .numerics import RandomStream
from .regression import CensoredSample, fit_regression, kaplan_meier, quantile_residuals

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_FIT = 0, 1, 2, 3
MIN_FIT_OBS = 20
GRID_POINTS = 512
MISSING = {"", "na", "nan", "null", "none", "?"}


class CLIError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CLIError(EXIT_USAGE, message)


# --- I/O helpers -----------------------------------------------------------

def atomic_write(path, text: str):
    """Write ``text`` to ``path`` through a temporary file and rename."""
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def json_text(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def read_table(path, delimiter=","):
    """Header and raw string columns of a delimited file, plus its SHA-256."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise CLIError(EXIT_DATA, f"cannot read {path}: {exc.strerror}") from None
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError:
        raise CLIError(EXIT_DATA, f"{path} is not UTF-8 text") from None
    rows = [r for r in csv.reader(io.StringIO(text), delimiter=delimiter) if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise CLIError(EXIT_DATA, f"{path} needs a header row and at least one data row")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    cols = {h: [r[i].strip() if i < len(r) else "" for r in body] for i, h in enumerate(header)}
    return header, cols, hashlib.sha256(raw).hexdigest()


def numeric_columns(cols, names):
    """Selected columns as floats, dropping rows with a missing entry.

    Returns ``(arrays, dropped)``.
    """
    for name in names:
        if name not in cols:
            raise CLIError(EXIT_DATA, f"column {name!r} not found; available: {', '.join(cols)}")
    n = len(cols[names[0]])
    keep = [i for i in range(n) if all(cols[c][i].lower() not in MISSING for c in names)]
    out = []
    for name in names:
        vals = []
        for i in keep:
            try:
                vals.append(float(cols[name][i]))
            except ValueError:
                raise CLIError(EXIT_DATA, f"non-numeric value {cols[name][i]!r} in column {name!r}") from None
        arr = np.array(vals)
        if not np.all(np.isfinite(arr)):
            raise CLIError(EXIT_DATA, f"non-finite value in column {name!r}")
        out.append(arr)
    return out, n - len(keep)


def _list(text, cast=str):
    if text is None:
        return []
    items = [t.strip() for t in text.split(",") if t.strip()]
    try:
        return [cast(t) for t in items]
    except ValueError:
        raise CLIError(EXIT_USAGE, f"cannot parse list {text!r}") from None


def _provenance(args, digest=None):
    prov = {"program": "mobxii", "version": __version__, "seed": args.seed}
    if digest is not None:
        prov["input"] = os.path.basename(args.data)
        prov["input_sha256"] = digest
    return prov


def _f3(v):
    return "nan" if v is None or not math.isfinite(v) else f"{v:.3f}"


# --- fit ---------------------------------------------------------------------

def _iid_column(args, cols, header):
    name = args.column or ("x" if "x" in cols else header[0] if len(header) == 1 else None)
    if name is None:
        raise CLIError(EXIT_DATA, "no column 'x'; choose one with --column")
    (x,), dropped = numeric_columns(cols, [name])
    return name, x, dropped


def _grid_for(x, support):
    lo, hi = float(x.min()), float(x.max())
    pad = 0.05 * (hi - lo if hi > lo else max(abs(hi), 1.0))
    lo, hi = max(lo - pad, support[0]), min(hi + pad, support[1])
    if support[0] == 0.0 and lo <= 0.0:
        lo = hi / (10.0 * GRID_POINTS)
    return np.linspace(lo, hi, GRID_POINTS)


def _median(model, theta):
    if model.name == "MOBXIIW":
        return float(MOBXII.weibull(*theta).median())
    if model.name == "MOBXIIK":
        return float(MOBXII(theta[0], theta[1], make_baseline("kumaraswamy", theta[2:])).median())
    if model.name == "MOBXIIN":
        return float(MOBXII(theta[0], theta[1], make_baseline("normal", theta[2:])).median())
    return None


def cmd_fit(args) -> int:
    names = _list(args.models)
    if not names:
        raise CLIError(EXIT_USAGE, "--models needs at least one model name")
    try:
        models = [get_model(m) for m in names]
    except ParameterError as exc:
        raise CLIError(EXIT_USAGE, str(exc)) from None
    if len({m.name for m in models}) != len(models):
        raise CLIError(EXIT_USAGE, "duplicate model names")
    header, cols, digest = read_table(args.data, args.delimiter)
    colname, x, dropped = _iid_column(args, cols, header)
    if x.size < MIN_FIT_OBS:
        raise CLIError(EXIT_DATA, f"need at least {MIN_FIT_OBS} observations, got {x.size}")
    order = list(MODELS)
    fits = {}
    for m in models:
        lo, hi = m.support
        if np.any((x <= lo) | (x >= hi)) and not (math.isinf(lo) and math.isinf(hi)):
            raise CLIError(EXIT_DATA, f"data outside the support of {m.name}")
        starts = None
        if args.start:
            if len(models) != 1:
                raise CLIError(EXIT_USAGE, "--start applies to a single model")
            start = np.array(_list(args.start, float))
            if not m.valid(start):
                raise CLIError(EXIT_USAGE, f"--start needs {m.k} valid values for {m.name}")
            starts = [start]
        try:
            fits[m.name] = (m, fit_mle(m, x, starts=starts,
                                       rng=RandomStream(args.seed, 100 + order.index(m.name))))
        except DomainError as exc:
            raise CLIError(EXIT_DATA, str(exc)) from None

    ref = "MOBXIIW" if "MOBXIIW" in fits else models[0].name
    glr = {}
    rm, rf = fits[ref]
    for name, (m, f) in fits.items():
        if name == ref or not (rf.ok and f.ok):
            continue
        res = glr_vuong(rm.logpdf(rf.theta, x), m.logpdf(f.theta, x), rf.k, f.k)
        glr[name] = {"statistic": res.statistic,
                     "better": {"model1": ref, "model2": name}.get(res.better, res.better)}

    out = args.out
    report = {"provenance": _provenance(args, digest), "column": colname, "n": int(x.size),
              "dropped_rows": dropped, "models": {}, "glr_reference": ref, "glr": glr}
    for name, (m, f) in fits.items():
        report["models"][name] = {
            "parameters": list(m.param_names), "estimates": f.theta, "standard_errors": f.standard_errors,
            "loglik": f.loglik, "criteria": f.ics, "gof": f.gof, "converged": f.converged,
            "median": _median(m, f.theta) if f.ok else None, "diagnostics": f.diagnostics,
        }

    lines = ["MOBXII-G model fitting report", ""]
    lines.append(f"input: {report['provenance'].get('input')}  sha256 {digest}")
    lines.append(f"column: {colname}  n = {x.size}  dropped rows: {dropped}")
    lines.append(f"seed: {args.seed}  version: {__version__}")
    lines.append("")
    lines.append("Estimates (standard errors in parentheses)")
    for name, (m, f) in fits.items():
        parts = [f"{p} = {_f3(v)} ({_f3(s)})" for p, v, s in zip(m.param_names, f.theta, f.standard_errors)]
        lines.append(f"  {name:<8} " + "  ".join(parts))
        med = report["models"][name]["median"]
        if med is not None:
            lines.append(f"  {'':<8} median = {_f3(med)}")
    lines.append("")
    lines.append("Adequacy measures")
    cols_ = ["W*", "A*", "AIC", "CAIC", "BIC", "HQIC", "KS", "KS_pvalue"]
    lines.append(f"  {'model':<8} " + " ".join(f"{c:>10}" for c in cols_))
    for name, (m, f) in fits.items():
        vals = {**f.gof, **f.ics}
        lines.append(f"  {name:<8} " + " ".join(f"{_f3(vals.get(c)):>10}" for c in cols_))
    if glr:
        lines.append("")
        lines.append(f"Vuong GLR tests, {ref} versus each model (5% level)")
        for name, g in glr.items():
            lines.append(f"  {ref} vs {name:<8} statistic = {_f3(g['statistic'])}  preferred: {g['better']}")
    failed = [name for name, (_, f) in fits.items() if not f.ok]
    notes = [(name, d) for name, (_, f) in fits.items() for d in f.diagnostics]
    if notes:
        lines.append("")
        lines.append("Diagnostics")
        lines.extend(f"  {name}: {d}" for name, d in notes)
    atomic_write(os.path.join(out, "report.txt"), "\n".join(lines) + "\n")
    atomic_write(os.path.join(out, "report.json"), json_text(report))

    ok_fits = [(name, m, f) for name, (m, f) in fits.items() if f.ok]
    grid = _grid_for(x, models[0].support)
    pdf_cols = [grid] + [np.exp(m.logpdf(f.theta, grid)) for _, m, f in ok_fits]
    atomic_write(os.path.join(out, "pdf_curves.csv"),
                 csv_text(["x"] + [n for n, _, _ in ok_fits], zip(*pdf_cols)))
    edges = np.histogram_bin_edges(x, bins="fd")
    dens, _ = np.histogram(x, bins=edges, density=True)
    atomic_write(os.path.join(out, "histogram.csv"),
                 csv_text(["left", "right", "density"], zip(edges[:-1], edges[1:], dens)))
    xs = np.sort(x)
    ecdf = np.arange(1, xs.size + 1) / xs.size
    cdf_cols = [xs, ecdf] + [np.asarray(m.cdf(f.theta, xs), dtype=float) for _, m, f in ok_fits]
    atomic_write(os.path.join(out, "cdf_curves.csv"),
                 csv_text(["x", "ecdf"] + [n for n, _, _ in ok_fits], zip(*cdf_cols)))
    print("\n".join(lines))
    if failed:
        print(f"fit failed for: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FIT
    return EXIT_OK


# --- regress -----------------------------------------------------------------

def _censored_sample(args):
    header, cols, digest = read_table(args.data, args.delimiter)
    covs = _list(args.covariates)
    for c in covs + [args.time, args.status]:
        if c not in cols:
            raise CLIError(EXIT_DATA, f"column {c!r} not found; available: {', '.join(header)}")
    groups = _list(args.km_group)
    for g in groups:
        if g not in cols:
            raise CLIError(EXIT_DATA, f"grouping column {g!r} not found")
    arrays, dropped = numeric_columns(cols, [args.time, args.status] + covs + groups)
    time, status = arrays[0], arrays[1]
    if np.any(time <= 0):
        raise CLIError(EXIT_DATA, "all times must be strictly positive")
    if not np.all(np.isin(status, (0.0, 1.0))):
        raise CLIError(EXIT_DATA, "status must be 0 or 1")
    if status.sum() == 0:
        raise CLIError(EXIT_DATA, "all observations are censored")
    cov = np.column_stack(arrays[2 : 2 + len(covs)]) if covs else None
    sample = CensoredSample.from_times(time, status.astype(int), cov, names=tuple(covs))
    group_arrays = dict(zip(groups, arrays[2 + len(covs) :]))
    return sample, time, status.astype(int), group_arrays, dropped, digest


def cmd_regress(args) -> int:
    sample, time, status, group_arrays, dropped, digest = _censored_sample(args)
    starts = None
    if args.start:
        start = _list(args.start, float)
        if len(start) != 3 + sample.p:
            raise CLIError(EXIT_USAGE, f"--start needs {3 + sample.p} values (tau, lambda, sigma, coefficients)")
        if min(start[:3]) <= 0:
            raise CLIError(EXIT_USAGE, "tau, lambda and sigma in --start must be positive")
        starts = [start]
    try:
        fit = fit_regression(sample, starts=starts, rng=RandomStream(args.seed, 200))
    except DomainError as exc:
        raise CLIError(EXIT_DATA, str(exc)) from None
    out = args.out
    names = ["tau", "lambda", "sigma"] + [f"eta_{n}" for n in sample.names]
    pvals = [None, None, None] + list(fit.pvalues)
    report = {
        "provenance": _provenance(args, digest), "n": sample.n, "dropped_rows": dropped,
        "censored_fraction": 1.0 - sample.delta.mean(), "parameters": names,
        "estimates": fit.zeta, "standard_errors": fit.ses, "pvalues": pvals,
        "loglik": fit.loglik, "criteria": fit.ics, "converged": fit.converged,
        "diagnostics": fit.diagnostics,
    }
    lines = ["LMOBXIIW censored regression report", ""]
    lines.append(f"input: {report['provenance']['input']}  sha256 {digest}")
    lines.append(f"n = {sample.n}  censored = {100 * report['censored_fraction']:.2f}%  dropped rows: {dropped}")
    lines.append(f"seed: {args.seed}  version: {__version__}")
    lines.append("")
    lines.append(f"  {'parameter':<16} {'estimate':>10} {'SE':>10} {'p-value':>10}")
    for nm, v, s, p in zip(names, fit.zeta, fit.ses, pvals):
        lines.append(f"  {nm:<16} {_f3(v):>10} {_f3(s):>10} {'' if p is None else _f3(p):>10}")
    lines.append("")
    lines.append("  " + "  ".join(f"{k} = {_f3(v)}" for k, v in fit.ics.items()))
    lines.append(f"  log-likelihood = {_f3(fit.loglik)}")
    if fit.diagnostics:
        lines.append("")
        lines.append("Diagnostics")
        lines.extend(f"  {d}" for d in fit.diagnostics)
    atomic_write(os.path.join(out, "report.txt"), "\n".join(lines) + "\n")
    atomic_write(os.path.join(out, "report.json"), json_text(report))
    if not math.isfinite(fit.loglik):
        print("regression fit failed", file=sys.stderr)
        return EXIT_FIT

    res = quantile_residuals(fit, sample)
    idx = np.arange(1, sample.n + 1)
    atomic_write(os.path.join(out, "residuals.csv"),
                 csv_text(["index", "qr", "censored"], zip(idx, res.values, res.censored)))
    order = np.argsort(res.values, kind="stable")
    theo = special.ndtri((np.arange(1, sample.n + 1) - 0.375) / (sample.n + 0.25))
    atomic_write(os.path.join(out, "normal_probability.csv"),
                 csv_text(["theoretical", "qr", "censored"], zip(theo, res.values[order], res.censored[order])))
    for gname, garr in group_arrays.items():
        curves = kaplan_meier(time, status, garr)
        rows = [(label, t, s, r, e) for label, c in curves.items()
                for t, s, r, e in zip(c.times, c.survival, c.at_risk, c.events)]
        atomic_write(os.path.join(out, f"km_{gname}.csv"),
                     csv_text([gname, "time", "survival", "at_risk", "events"], rows))
    print("\n".join(lines))
    return EXIT_OK


# --- simulate ----------------------------------------------------------------

def cmd_simulate(args) -> int:
    params = _list(args.params, float)
    sizes = _list(args.n, int)
    cens = _list(args.censoring, float)
    kw = dict(replications=args.reps, seed=args.seed, n_jobs=args.jobs)
    if sizes:
        kw["sample_sizes"] = tuple(sizes)
    if cens:
        kw["censoring_targets"] = tuple(cens)
    try:
        if args.study == "iid":
            params = params or [0.8, 2.5, 0.5, 3.5]
            summary = run_iid_study(StudyConfig(tuple(params), **kw))
        else:
            params = params or [1.8, 0.5, 0.9, 1.5, 2.2]
            summary = run_regression_study(StudyConfig(tuple(params), **kw))
    except ParameterError as exc:
        raise CLIError(EXIT_USAGE, str(exc)) from None
    atomic_write(os.path.join(args.out, "summary.csv"), summary.to_csv())
    table = summary.format_table()
    atomic_write(os.path.join(args.out, "summary.txt"), table)
    print(table, end="")
    if summary.flagged:
        print("warning: at least one cell has more than 10% failed fits", file=sys.stderr)
    return EXIT_OK


# --- eval ----------------------------------------------------------------------

def _distribution(baseline, params):
    if len(params) != 4:
        raise CLIError(EXIT_USAGE, "--params needs four values: tau, lambda and two baseline parameters")
    tau, lam, p1, p2 = params
    try:
        if baseline == "weibull":
            # same order as the MOBXIIW model: beta (scale), alpha (shape)
            return MOBXII.weibull(tau, lam, p1, p2)
        return MOBXII(tau, lam, make_baseline(baseline, (p1, p2)))
    except (ParameterError, DomainError) as exc:
        raise CLIError(EXIT_USAGE, str(exc)) from None


def _grid(args, default):
    if args.points:
        g = np.array(_list(args.points, float))
    elif args.grid:
        parts = _list(args.grid, float)
        if len(parts) != 3 or parts[2] < 2 or parts[2] != int(parts[2]):
            raise CLIError(EXIT_USAGE, "--grid takes start,stop,count with count >= 2")
        g = np.linspace(parts[0], parts[1], int(parts[2]))
    else:
        g = default
    if g.size == 0 or not np.all(np.isfinite(g)):
        raise CLIError(EXIT_USAGE, "grid must contain finite values")
    return g


def cmd_eval(args) -> int:
    params = _list(args.params, float)
    d = _distribution(args.baseline, params)
    fn = args.function
    if fn in ("pdf", "cdf", "hrf"):
        lo, hi = d.support
        default = np.linspace(max(lo, -5.0) if lo > -math.inf else float(d.ppf(0.001)),
                              min(hi, float(d.ppf(0.999))), 101)
        x = _grid(args, default)
        f = {"pdf": d.pdf, "cdf": d.cdf, "hrf": d.hazard}[fn]
        header, rows = ["x", fn], zip(x, np.atleast_1d(f(x)))
    elif fn == "quantile":
        u = _grid(args, np.linspace(0.01, 0.99, 99))
        if np.any((u <= 0) | (u >= 1)):
            raise CLIError(EXIT_USAGE, "quantile grid must lie strictly inside (0, 1)")
        header, rows = ["u", "quantile"], zip(u, np.atleast_1d(d.ppf(u)))
    elif fn in ("skewness", "kurtosis"):
        vals = _grid(args, np.linspace(0.1, 5.0, 50))
        if np.any(vals <= 0):
            raise CLIError(EXIT_USAGE, f"{args.vary} grid must be positive")
        out = []
        for v in vals:
            tau, lam = (v, d.lam) if args.vary == "tau" else (d.tau, v)
            b, m = bowley_moors(MOBXII(tau, lam, d.baseline))
            out.append(b if fn == "skewness" else m)
        header, rows = [args.vary, fn], zip(vals, out)
    else:
        nu = _grid(args, np.linspace(0.01, 0.99, 99))
        if np.any((nu <= 0) | (nu >= 1)):
            raise CLIError(EXIT_USAGE, "lorenz grid must lie strictly inside (0, 1)")
        try:
            B, L = lorenz_bonferroni(d, nu)
        except DomainError as exc:
            raise CLIError(EXIT_USAGE, str(exc)) from None
        header, rows = ["nu", "lorenz", "bonferroni"], zip(nu, L, B)
    text = csv_text(header, rows)
    if args.out:
        atomic_write(os.path.join(args.out, f"{fn}.csv"), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- validate / datasets -------------------------------------------------------

def cmd_validate(args) -> int:
    if args.kind == "iid":
        header, cols, digest = read_table(args.data, args.delimiter)
        name, x, dropped = _iid_column(args, cols, header)
        sd = float(np.std(x, ddof=1)) if x.size > 1 else math.nan
        print(f"{args.data}: column {name}, n = {x.size}, dropped = {dropped}, "
              f"mean = {x.mean():.3f}, sd = {sd:.3f}, sha256 {digest}")
        if x.size < MIN_FIT_OBS:
            raise CLIError(EXIT_DATA, f"fewer than {MIN_FIT_OBS} observations")
    else:
        sample, time, status, _, dropped, digest = _censored_sample(args)
        print(f"{args.data}: n = {sample.n}, dropped = {dropped}, "
              f"censored = {100 * (1 - status.mean()):.2f}%, covariates = {list(sample.names[1:])}, "
              f"sha256 {digest}")
    return EXIT_OK


def cmd_datasets(args) -> int:
    print(DATASET_NOTES, end="")
    return EXIT_OK


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mobxii", description="MOBXII-G distributions: fitting, regression, simulation.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, data=True):
        if data:
            sp.add_argument("data", help="delimited text file with a header row")
            sp.add_argument("--delimiter", default=",", help="field separator (default ',')")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("fit", help="fit distributions to a single numeric column")
    common(sp)
    sp.add_argument("--models", default="MOBXIIW,KW,BW,WW,LW,WE",
                    help=f"comma-separated list from {','.join(MODELS)}")
    sp.add_argument("--column", help="data column (default 'x')")
    sp.add_argument("--start", help="extra start point for a single model, in its parameter order")
    sp.add_argument("--out", default="mobxii_fit")
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("regress", help="censored LMOBXIIW regression on log-times")
    common(sp)
    sp.add_argument("--covariates", default="", help="comma-separated covariate columns")
    sp.add_argument("--time", default="time")
    sp.add_argument("--status", default="status")
    sp.add_argument("--km-group", default="", help="columns to group Kaplan-Meier curves by")
    sp.add_argument("--start", help="extra start point tau,lambda,sigma,eta0,eta1,...")
    sp.add_argument("--out", default="mobxii_regress")
    sp.set_defaults(func=cmd_regress)

    sp = sub.add_parser("simulate", help="Monte Carlo parameter-recovery study")
    sp.add_argument("study", choices=["iid", "regression"])
    common(sp, data=False)
    sp.add_argument("--params", help="true parameters, comma-separated")
    sp.add_argument("--n", help="sample sizes, comma-separated")
    sp.add_argument("--reps", type=int, default=1000)
    sp.add_argument("--censoring", help="censoring targets for the regression study")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    sp.add_argument("--out", default="mobxii_simulate")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("eval", help="evaluate a function of one distribution on a grid")
    sp.add_argument("function", choices=["pdf", "cdf", "hrf", "quantile", "skewness", "kurtosis", "lorenz"])
    sp.add_argument("--params", required=True,
                    help="tau,lambda then baseline parameters (weibull: beta,alpha; kumaraswamy: a,b; normal: mu,sigma)")
    sp.add_argument("--baseline", choices=["weibull", "kumaraswamy", "normal"], default="weibull")
    sp.add_argument("--grid", help="start,stop,count")
    sp.add_argument("--points", help="explicit comma-separated evaluation points")
    sp.add_argument("--vary", choices=["tau", "lambda"], default="tau",
                    help="shape parameter swept for skewness and kurtosis")
    sp.add_argument("--out", help="output directory (default: stdout)")
    sp.set_defaults(func=cmd_eval, seed=0)

    sp = sub.add_parser("validate", help="check a data file against the input schema")
    common(sp)
    sp.add_argument("--kind", choices=["iid", "regression"], default="iid")
    sp.add_argument("--column")
    sp.add_argument("--covariates", default="")
    sp.add_argument("--time", default="time")
    sp.add_argument("--status", default="status")
    sp.add_argument("--km-group", default="")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("datasets", help="how to obtain the application data sets")
    sp.set_defaults(func=cmd_datasets)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "reps", 1) < 1:
            raise CLIError(EXIT_USAGE, "--reps must be at least 1")
        return args.func(args)
    except CLIError as exc:
        print(f"mobxii: error: {exc}", file=sys.stderr)
        return exc.code
    except SystemExit as exc:
        # --help / --version
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
