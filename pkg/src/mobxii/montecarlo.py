"""Monte Carlo parameter-recovery studies.

Two designs are covered: i.i.d. MOBXIIW samples fitted by
:func:`~mobxii.inference.fit_mle`, and censored LMOBXIIW regression samples
fitted by :func:`~mobxii.regression.fit_regression`. Every replicate owns a
random stream keyed by ``(seed, design, n, censoring, replicate)``, so a cell
gives the same draws whether it runs alone, inside a larger study or in a
worker process, and results are reduced in replicate order.

Fits start from the true parameter vector only (``random_starts`` adds
perturbed starts). Replicates whose fit fails are excluded and counted; a
cell with more than 10% failures is flagged. A fit that ends with a shape
parameter at the edge of the parameter space (see
:func:`~mobxii.inference.edge_parameters`) counts as a failure: there the
likelihood keeps rising towards a limiting sub-model, no maximum exists and
the reported point is only where the simplex stopped.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, ParameterError
from .family import MOBXII
from .inference import edge_parameters, fit_mle
from .models import MODELS
from .numerics import OptimizerConfig, RandomStream, root_bracket
from .regression import CensoredSample, fit_regression, lmobxiiw_ppf_z

__all__ = [
    "StudyConfig",
    "CellSummary",
    "StudySummary",
    "summarize",
    "simulate_regression_sample",
    "calibrate_censoring",
    "run_iid_study",
    "run_regression_study",
    "censoring_rates",
    "IID_NAMES",
    "REGRESSION_NAMES",
]

IID_NAMES = ("tau", "lambda", "beta", "alpha")
REGRESSION_NAMES = ("tau", "lambda", "sigma", "eta0", "eta1")
FAILURE_FLAG_RATE = 0.10

_TAG_IID, _TAG_REG, _TAG_PILOT = 1, 2, 3


def _censor_code(target: float) -> int:
    return int(round(target * 10000))


@dataclass(frozen=True)
class StudyConfig:
    true_params: tuple[float, ...]
    replications: int = 1000
    sample_sizes: tuple[int, ...] = (50, 100, 200, 400)
    censoring_targets: tuple[float, ...] = (0.0, 0.10, 0.30)
    seed: int = 0
    random_starts: int = 0
    optimizer: OptimizerConfig | None = None
    pilot_draws: int = 20000
    n_jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "true_params", tuple(float(v) for v in self.true_params))
        object.__setattr__(self, "sample_sizes", tuple(int(v) for v in self.sample_sizes))
        object.__setattr__(self, "censoring_targets", tuple(float(v) for v in self.censoring_targets))
        if self.replications < 1:
            raise ParameterError("replications must be at least 1")
        if not self.sample_sizes or min(self.sample_sizes) < 1:
            raise ParameterError("sample sizes must be positive")
        if any(not (0.0 <= c < 1.0) for c in self.censoring_targets):
            raise ParameterError("censoring targets must lie in [0, 1)")
        if self.pilot_draws < 100:
            raise ParameterError("pilot_draws must be at least 100")
        if self.random_starts < 0 or self.n_jobs < 1:
            raise ParameterError("random_starts must be >= 0 and n_jobs >= 1")


def summarize(estimates, truth) -> dict[str, np.ndarray]:
    """Column-wise AE, Bias and MSE of a replicates-by-parameters matrix."""
    est = np.atleast_2d(np.asarray(estimates, dtype=float))
    truth = np.asarray(truth, dtype=float)
    if est.shape[0] < 1 or est.size == 0:
        raise DomainError("need at least one successful replicate")
    if est.shape[1] != truth.size:
        raise DomainError("estimate columns must match the truth vector")
    ae = est.mean(axis=0)
    return {"AE": ae, "Bias": ae - truth, "MSE": np.mean((est - truth) ** 2, axis=0)}


@dataclass
class CellSummary:
    n: int
    censoring: float
    ae: np.ndarray
    bias: np.ndarray
    mse: np.ndarray
    failures: int
    replications: int
    realized_censoring: float
    estimates: np.ndarray = field(repr=False)
    succeeded: np.ndarray = field(repr=False)

    @property
    def flagged(self) -> bool:
        return self.failures > FAILURE_FLAG_RATE * self.replications


@dataclass
class StudySummary:
    design: str
    parameter_names: tuple[str, ...]
    truth: np.ndarray
    cells: list[CellSummary]

    @property
    def flagged(self) -> bool:
        return any(c.flagged for c in self.cells)

    def cell(self, n: int, censoring: float = 0.0) -> CellSummary:
        for c in self.cells:
            if c.n == n and math.isclose(c.censoring, censoring, abs_tol=1e-12):
                return c
        raise KeyError((n, censoring))

    def rows(self) -> list[dict]:
        out = []
        for c in self.cells:
            for j, name in enumerate(self.parameter_names):
                out.append(dict(n=c.n, censoring=c.censoring, parameter=name,
                                AE=float(c.ae[j]), Bias=float(c.bias[j]), MSE=float(c.mse[j]),
                                failures=c.failures))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "censoring", "parameter", "AE", "Bias", "MSE", "failures"])
        for r in self.rows():
            w.writerow([r["n"], repr(r["censoring"]), r["parameter"],
                        repr(r["AE"]), repr(r["Bias"]), repr(r["MSE"]), r["failures"]])
        return buf.getvalue()

    def format_table(self) -> str:
        """Plain-text table with one AE/Bias/MSE block per cell."""
        lines = []
        truth = ", ".join(f"{v:g}" for v in self.truth)
        lines.append(f"{self.design} study, truth ({truth})")
        for c in self.cells:
            head = f"n = {c.n}"
            if self.design == "regression":
                head += f", target censoring {100 * c.censoring:.0f}% (realised {100 * c.realized_censoring:.1f}%)"
            head += f", {c.replications - c.failures}/{c.replications} fits used"
            if c.flagged:
                head += "  [FLAGGED: failure rate above 10%]"
            lines.append("")
            lines.append(head)
            lines.append(f"{'parameter':>10} {'AE':>10} {'Bias':>10} {'MSE':>10}")
            for j, name in enumerate(self.parameter_names):
                lines.append(f"{name:>10} {c.ae[j]:10.4f} {c.bias[j]:10.4f} {c.mse[j]:10.4f}")
        return "\n".join(lines) + "\n"


def _check_iid_truth(truth):
    if len(truth) != 4 or not all(v > 0 for v in truth):
        raise ParameterError("i.i.d. study needs four positive MOBXIIW parameters (tau, lambda, beta, alpha)")


def _check_regression_truth(truth):
    if len(truth) != 5 or not all(v > 0 for v in truth[:3]) or not all(map(math.isfinite, truth)):
        raise ParameterError("regression study needs (tau, lambda, sigma, eta0, eta1) with positive tau, lambda, sigma")


def _iid_replicate(args):
    config, n, rep = args
    truth = np.array(config.true_params)
    stream = RandomStream(config.seed, _TAG_IID, n, rep)
    data = MOBXII.weibull(*truth).rvs(n, stream)
    fit = fit_mle(MODELS["MOBXIIW"], data, starts=[truth], rng=stream.spawn(1),
                  n_random=config.random_starts, config=config.optimizer,
                  with_se=False, with_gof=False, default_start=False)
    ok = (fit.converged and math.isfinite(fit.loglik) and np.all(np.isfinite(fit.theta))
          and not edge_parameters(IID_NAMES, fit.theta))
    return np.asarray(fit.theta, dtype=float), bool(ok), 0.0


def simulate_regression_sample(truth, n, censor_scale, stream: RandomStream) -> CensoredSample:
    """One censored sample from the regression design.

    ``v ~ U(0,1)``, ``log T = eta0 + eta1 v + sigma Z`` and ``C ~ U(0, b)``
    with ``b = censor_scale``; ``b = inf`` gives no censoring.
    """
    tau, lam, sigma, eta0, eta1 = truth
    v = stream.uniform(n)
    logt = eta0 + eta1 * v + sigma * lmobxiiw_ppf_z(tau, lam, stream.uniform(n))
    if math.isinf(censor_scale):
        y, delta = logt, np.ones(n, dtype=int)
    else:
        logc = math.log(censor_scale) + np.log(stream.uniform(n))
        delta = (logt <= logc).astype(int)
        y = np.minimum(logt, logc)
    return CensoredSample(y, delta, np.column_stack([np.ones(n), v]))


def calibrate_censoring(truth, target, stream: RandomStream, draws=20000) -> float:
    """Upper end ``b`` of ``C ~ U(0, b)`` giving expected censoring ``target``.

    On a pilot of lifetimes ``T`` the expected censored fraction is
    ``mean(min(T/b, 1))``, which decreases in ``b``; it is solved by
    bracketing on ``log b``.
    """
    if target <= 0.0:
        return math.inf
    if not target < 1.0:
        raise ParameterError("censoring target must be below 1")
    tau, lam, sigma, eta0, eta1 = truth
    v = stream.uniform(draws)
    logt = eta0 + eta1 * v + sigma * lmobxiiw_ppf_z(tau, lam, stream.uniform(draws))
    logt = logt[np.isfinite(logt)]

    def excess(logb):
        return float(np.mean(np.exp(np.minimum(logt - logb, 0.0)))) - target

    lo = float(logt.min()) - 1.0
    hi = float(logt.max()) - math.log(target) + 1.0
    return math.exp(root_bracket(excess, lo, hi))


def _regression_replicate(args):
    config, n, target, scale, rep = args
    truth = np.array(config.true_params)
    stream = RandomStream(config.seed, _TAG_REG, n, _censor_code(target), rep)
    sample = simulate_regression_sample(truth, n, scale, stream)
    realized = 1.0 - sample.delta.mean()
    try:
        fit = fit_regression(sample, starts=[truth], rng=stream.spawn(1),
                             n_random=config.random_starts, config=config.optimizer,
                             with_se=False, default_start=False)
    except DomainError:
        return np.full(truth.size, np.nan), False, realized
    ok = (fit.converged and math.isfinite(fit.loglik) and np.all(np.isfinite(fit.zeta))
          and not edge_parameters(REGRESSION_NAMES, fit.zeta))
    return fit.zeta, bool(ok), realized


def _run(func, tasks, n_jobs):
    if n_jobs == 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(func, tasks, chunksize=max(1, len(tasks) // (4 * n_jobs))))


def _cell(n, censoring, results, truth):
    est = np.array([r[0] for r in results])
    ok = np.array([r[1] for r in results])
    realized = float(np.mean([r[2] for r in results]))
    failures = int((~ok).sum())
    if ok.any():
        s = summarize(est[ok], truth)
        ae, bias, mse = s["AE"], s["Bias"], s["MSE"]
    else:
        ae = bias = mse = np.full(truth.size, np.nan)
    return CellSummary(n, censoring, ae, bias, mse, failures, len(results), realized, est, ok)


def run_iid_study(config: StudyConfig) -> StudySummary:
    """Parameter recovery for i.i.d. MOBXIIW samples, one cell per sample size."""
    _check_iid_truth(config.true_params)
    truth = np.array(config.true_params)
    cells = []
    for n in config.sample_sizes:
        tasks = [(config, n, rep) for rep in range(config.replications)]
        cells.append(_cell(n, 0.0, _run(_iid_replicate, tasks, config.n_jobs), truth))
    return StudySummary("iid", IID_NAMES, truth, cells)


def censoring_rates(config: StudyConfig, n: int, target: float) -> np.ndarray:
    """Realized censored fraction of every replicate sample of one cell.

    Uses the same pilot calibration and sample streams as
    :func:`run_regression_study` but skips the fits.
    """
    _check_regression_truth(config.true_params)
    truth = np.array(config.true_params)
    pilot = RandomStream(config.seed, _TAG_PILOT, n, _censor_code(target))
    scale = calibrate_censoring(truth, target, pilot, config.pilot_draws)
    out = np.empty(config.replications)
    for rep in range(config.replications):
        stream = RandomStream(config.seed, _TAG_REG, n, _censor_code(target), rep)
        out[rep] = 1.0 - simulate_regression_sample(truth, n, scale, stream).delta.mean()
    return out


def run_regression_study(config: StudyConfig) -> StudySummary:
    """Parameter recovery for the censored regression, per (n, censoring target)."""
    _check_regression_truth(config.true_params)
    truth = np.array(config.true_params)
    cells = []
    for n in config.sample_sizes:
        for target in config.censoring_targets:
            pilot = RandomStream(config.seed, _TAG_PILOT, n, _censor_code(target))
            scale = calibrate_censoring(truth, target, pilot, config.pilot_draws)
            tasks = [(config, n, target, scale, rep) for rep in range(config.replications)]
            cells.append(_cell(n, target, _run(_regression_replicate, tasks, config.n_jobs), truth))
    return StudySummary("regression", REGRESSION_NAMES, truth, cells)
