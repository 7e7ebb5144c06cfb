"""Maximum-likelihood fitting of complete samples and model-adequacy measures.

The log-likelihood is the exact log of the family density, i.e. it keeps the
``sum log g(x_i)`` term and the ``-(lam + 1)`` weight on the final
``log(1 + W^tau)`` sum. Dropping either leaves an objective that cannot
identify the baseline parameters.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .exceptions import DomainError, HessianError, OptimizerInitError
from .family import MOBXII
from .models import Model, get_model
from .numerics import OptimizerConfig, RandomStream, minimize, numerical_hessian, standard_errors

__all__ = [
    "FitResult",
    "GLRResult",
    "loglik_mobxii",
    "mle_point",
    "fit_mle",
    "info_criteria",
    "ks_statistic",
    "cvm_ad_statistics",
    "glr_vuong",
]


def loglik_mobxii(d: MOBXII, data) -> float:
    """Log-likelihood of a complete sample; ``-inf`` if any point has zero density."""
    terms = d.loglik_terms(np.asarray(data, dtype=float))
    total = float(np.sum(terms))
    return total if math.isfinite(total) else -math.inf


def info_criteria(loglik: float, n: int, k: int) -> dict[str, float]:
    """AIC, CAIC, BIC and HQIC.

    CAIC is the small-sample corrected AIC, ``AIC + 2k(k+1)/(n-k-1)``; it is
    ``nan`` when ``n <= k + 1``. HQIC is ``nan`` for ``n < 2``.
    """
    m2l = -2.0 * loglik
    aic = m2l + 2.0 * k
    caic = aic + 2.0 * k * (k + 1) / (n - k - 1) if n > k + 1 else math.nan
    bic = m2l + k * math.log(n)
    hqic = m2l + 2.0 * k * math.log(math.log(n)) if n > 1 else math.nan
    return {"AIC": aic, "CAIC": caic, "BIC": bic, "HQIC": hqic}


def ks_statistic(model_cdf, data):
    """One-sample Kolmogorov-Smirnov distance and asymptotic p-value."""
    x = np.sort(np.asarray(data, dtype=float))
    n = x.size
    if n < 1:
        raise DomainError("need at least one observation")
    F = np.asarray(model_cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    D = float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))
    return D, float(special.kolmogorov(math.sqrt(n) * D))


def cvm_ad_statistics(model_cdf, data):
    """Chen-Balakrishnan corrected Cramér-von Mises and Anderson-Darling statistics.

    The probability-integral values are normalised through the standard
    normal (``y = Phi^-1(v)``, ``u = Phi((y - mean)/sd)``) before the
    classical statistics are formed, and the results are scaled by the
    usual finite-sample factors. Returns ``(W*, A*, clamped)`` where
    ``clamped`` is true if any ``F(x_i)`` had to be pulled off 0 or 1.
    """
    x = np.sort(np.asarray(data, dtype=float))
    n = x.size
    if n < 2:
        raise DomainError("need at least two observations")
    v = np.asarray(model_cdf(x), dtype=float)
    clamped = bool(np.any((v < 1e-12) | (v > 1 - 1e-12)))
    v = np.clip(v, 1e-12, 1 - 1e-12)
    y = special.ndtri(v)
    u = special.ndtr((y - y.mean()) / y.std(ddof=1))
    i = np.arange(1, n + 1)
    w2 = np.sum((u - (2 * i - 1) / (2.0 * n)) ** 2) + 1.0 / (12.0 * n)
    a2 = -n - np.sum((2 * i - 1) * (np.log(u) + np.log1p(-u[::-1]))) / n
    w_star = w2 * (1.0 + 0.5 / n)
    a_star = a2 * (1.0 + 0.75 / n + 2.25 / n**2)
    return float(w_star), float(a_star), clamped


@dataclass(frozen=True)
class GLRResult:
    statistic: float
    better: str  # "model1", "model2" or "indistinguishable"
    degenerate: bool = False


def glr_vuong(logf1, logf2, k1=None, k2=None, schwarz=False, level=0.05) -> GLRResult:
    """Vuong's test for non-nested models from pointwise log-densities.

    With ``schwarz=True`` the log-likelihood-ratio sum is reduced by
    ``(k1 - k2)/2 * ln n`` before standardisation.
    """
    l1 = np.asarray(logf1, dtype=float)
    l2 = np.asarray(logf2, dtype=float)
    if l1.shape != l2.shape or l1.ndim != 1 or l1.size < 2:
        raise DomainError("need two equal-length vectors with at least two entries")
    n = l1.size
    r = l1 - l2
    omega = math.sqrt(max(float(np.mean(r * r) - np.mean(r) ** 2), 0.0))
    if omega < 1e-12:
        return GLRResult(0.0, "indistinguishable", degenerate=bool(np.any(r != 0)))
    total = float(np.sum(r))
    if schwarz:
        if k1 is None or k2 is None:
            raise ValueError("Schwarz correction needs both parameter counts")
        total -= 0.5 * (k1 - k2) * math.log(n)
    stat = total / (math.sqrt(n) * omega)
    crit = special.ndtri(1.0 - level / 2.0)
    if stat > crit:
        better = "model1"
    elif stat < -crit:
        better = "model2"
    else:
        better = "indistinguishable"
    return GLRResult(stat, better)


@dataclass
class FitResult:
    model: str
    param_names: tuple[str, ...]
    theta: np.ndarray
    standard_errors: np.ndarray
    loglik: float
    n: int
    k: int
    ics: dict[str, float]
    gof: dict[str, float]
    converged: bool
    iterations: int
    diagnostics: list[str] = field(default_factory=list)

    @property
    def estimates(self) -> dict[str, float]:
        return dict(zip(self.param_names, map(float, self.theta)))

    @property
    def ses(self) -> dict[str, float]:
        return dict(zip(self.param_names, map(float, self.standard_errors)))

    @property
    def ok(self) -> bool:
        return math.isfinite(self.loglik)


EDGE_LOW, EDGE_HIGH = 1e-3, 1e3
SHAPE_NAMES = frozenset({"tau", "lambda", "a", "b", "alpha"})


def edge_parameters(names, values, shape_names=SHAPE_NAMES):
    """Shape parameters whose estimate drifted towards 0 or infinity.

    Such fits usually sit on a limiting sub-model, where standard errors are
    meaningless; scale parameters are not checked because their size depends
    on the units of the data.
    """
    return [n for n, v in zip(names, values)
            if n in shape_names and math.isfinite(v) and not (EDGE_LOW < v < EDGE_HIGH)]


def _objective(model: Model, x):
    def nll(free):
        theta = model.from_free(free)
        if not np.all(np.isfinite(theta)) or np.any(theta[np.array(model.positive)] <= 0):
            return math.inf
        with np.errstate(all="ignore"):
            s = float(np.sum(model.logpdf(theta, x)))
        return -s if math.isfinite(s) else math.inf

    return nll


def mle_point(model: Model, data, starts, config: OptimizerConfig | None = None):
    """Best Nelder-Mead optimum over ``starts``.

    Returns ``(theta, loglik, converged, iterations)``; ``loglik`` is
    ``-inf`` when no start yields a finite objective.
    """
    x = np.asarray(data, dtype=float)
    nll = _objective(model, x)
    best = None
    for s in starts:
        try:
            res = minimize(nll, model.to_free(s), config)
        except OptimizerInitError:
            continue
        if best is None or res.fun < best.fun:
            best = res
    if best is None:
        return np.full(model.k, np.nan), -math.inf, False, 0
    return model.from_free(best.x), -best.fun, best.converged, best.iterations


def _random_starts(model: Model, base, rng: RandomStream, count):
    base_free = model.to_free(base)
    out = []
    for _ in range(count):
        z = rng.normal(model.k)
        scale = np.where(model.positive, 0.5, 0.5 * np.maximum(np.abs(base_free), 1.0))
        out.append(model.from_free(base_free + scale * z))
    return out


def fit_mle(
    model,
    data,
    starts=None,
    rng: RandomStream | None = None,
    n_random: int = 5,
    config: OptimizerConfig | None = None,
    with_se: bool = True,
    with_gof: bool = True,
    default_start: bool = True,
) -> FitResult:
    """Fit ``model`` to a complete sample by maximum likelihood.

    The search runs from every entry of ``starts`` plus ``n_random``
    perturbations of the data-driven starting point (quartile-matched Weibull,
    unit family shapes). With ``default_start=False`` only ``starts`` and
    their perturbations are used. Standard errors come from the observed information in
    log-parameter space, mapped back with ``SE(theta) = theta SE(log theta)``.

    A fit where no start gives a finite likelihood is returned with
    ``loglik = -inf`` and a diagnostic rather than raised.
    """
    if isinstance(model, str):
        model = get_model(model)
    x = np.asarray(data, dtype=float)
    n = x.size
    if n < model.k + 2:
        raise DomainError(f"{model.name} needs at least {model.k + 2} observations, got {n}")
    given = [np.asarray(s, dtype=float) for s in (starts or [])]
    if not default_start and not given:
        raise DomainError("default_start=False needs at least one supplied start")
    base = model.start(x) if default_start else given[0]
    all_starts = given + ([base] if default_start else [])
    if n_random:
        all_starts += _random_starts(model, base, rng or RandomStream(0), n_random)
    theta, ll, converged, iters = mle_point(model, x, all_starts, config)
    diagnostics = []
    if not math.isfinite(ll):
        diagnostics.append("no start point produced a finite log-likelihood")
        nan = {k: math.nan for k in ("AIC", "CAIC", "BIC", "HQIC")}
        return FitResult(model.name, model.param_names, theta, np.full(model.k, np.nan),
                         ll, n, model.k, nan, {}, False, iters, diagnostics)

    edge = edge_parameters(model.param_names, theta)
    if edge:
        diagnostics.append("estimate at the edge of the parameter space (limiting sub-model): "
                           + ", ".join(edge))
    se = np.full(model.k, np.nan)
    if with_se:
        nll = _objective(model, x)
        try:
            H = numerical_hessian(nll, model.to_free(theta))
            se_free = standard_errors(H)
            pos = np.array(model.positive)
            se = np.where(pos, theta * se_free, se_free)
        except HessianError:
            diagnostics.append("Hessian not finite at the optimum")
        if np.any(np.isnan(se)):
            diagnostics.append("some standard errors unavailable")

    gof = {}
    if with_gof:
        cdf = lambda v: model.cdf(theta, v)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            w, a, clamped = cvm_ad_statistics(cdf, x)
            ks, p = ks_statistic(cdf, x)
        gof = {"W*": w, "A*": a, "KS": ks, "KS_pvalue": p}
        if clamped:
            diagnostics.append("fitted cdf hit 0 or 1; values clamped for W*/A*")
    if not converged:
        diagnostics.append("simplex did not meet the tolerance within the iteration budget")
    return FitResult(model.name, model.param_names, theta, se, ll, n, model.k,
                     info_criteria(ll, n, model.k), gof, converged, iters, diagnostics)
