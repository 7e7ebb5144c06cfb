"""Parametric models that :func:`mobxii.inference.fit_mle` can fit.

A :class:`Model` bundles a log-density and cdf over an ordered parameter
vector, the positivity pattern used for log-reparameterisation, and a
data-driven starting point. The MOBXII-G models wrap :class:`~mobxii.family.MOBXII`;
the competitors are generator families over a Weibull baseline with shape
``alpha`` and scale ``beta``:

====  ==================  ================================================
name  parameters          cdf (G Weibull, S = 1 - G)
====  ==================  ================================================
KW    a, b, beta, alpha   1 - (1 - G^a)^b
BW    a, b, beta, alpha   I_G(a, b)  (regularised incomplete beta)
WW    tau, lam, beta, al  1 - exp(-tau (G/S)^lam)
LW    tau, lam, beta, al  1 - tau^lam (tau + G/S)^(-lam)
WE    beta, alpha         G
====  ==================  ================================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from ._util import log1mexp, scaled_softplus
from .baselines import Kumaraswamy, Normal, Weibull
from .exceptions import ParameterError
from .family import MOBXII

__all__ = ["Model", "MODELS", "get_model", "weibull_quantile_start"]


@dataclass(frozen=True)
class Model:
    name: str
    param_names: tuple[str, ...]
    positive: tuple[bool, ...]
    logpdf: Callable[[np.ndarray, np.ndarray], np.ndarray]
    cdf: Callable[[np.ndarray, np.ndarray], np.ndarray]
    start: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float] = (0.0, math.inf)

    @property
    def k(self) -> int:
        return len(self.param_names)

    def to_free(self, theta):
        theta = np.asarray(theta, dtype=float)
        pos = np.array(self.positive)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(pos, np.log(np.where(pos, theta, 1.0)), theta)

    def from_free(self, free):
        free = np.asarray(free, dtype=float)
        pos = np.array(self.positive)
        with np.errstate(over="ignore"):
            return np.where(pos, np.exp(free), free)

    def valid(self, theta) -> bool:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.k,) or not np.all(np.isfinite(theta)):
            return False
        return bool(np.all(theta[np.array(self.positive)] > 0))


def weibull_quantile_start(x):
    """Weibull (shape, scale) matched to the sample quartiles."""
    x = np.asarray(x, dtype=float)
    q1, q3 = np.quantile(x, [0.25, 0.75])
    c1, c3 = math.log(-math.log(0.75)), math.log(-math.log(0.25))
    if q1 > 0 and q3 > q1:
        shape = (c3 - c1) / (math.log(q3) - math.log(q1))
    else:
        shape = 1.0
    median = float(np.median(x))
    scale = median / math.log(2.0) ** (1.0 / shape) if median > 0 else float(np.mean(x))
    return shape, scale


def _weibull_logs(x, beta, alpha):
    """Weibull log g, log G, log S at x > 0."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        lz = alpha * (np.log(x) - math.log(beta))
        z = np.exp(lz)
        logg = math.log(alpha) - np.log(x) + lz - z
        logG = np.where(lz < -20.0, lz - 0.5 * z, log1mexp(z))
        logS = -z
    return logg, logG, logS


# --- MOBXII-G -----------------------------------------------------------

def _mobxii_model(name, build, param_names, positive, start, support):
    def logpdf(theta, x):
        return build(theta).loglik_terms(x)

    def cdf(theta, x):
        return build(theta).cdf(x)

    return Model(name, param_names, positive, logpdf, cdf, start, support)


def _start_mobxiiw(x):
    shape, scale = weibull_quantile_start(x)
    return np.array([1.0, 1.0, scale, shape])


def _mobxiiw_terms(tau, lam, logg, logG, logS):
    G = np.exp(logG)
    log2pG = np.log(2.0 + G)
    logw = math.log(2.0) + logG - logS - log2pG
    return (
        tau * math.log(2.0) + math.log(tau) + math.log(lam)
        + logg + np.log(2.0 + G * G) + (tau - 1.0) * logG
        - (tau + 1.0) * (logS + log2pG)
        - scaled_softplus(lam + 1.0, tau * logw)
    )


def _mobxiiw_logpdf(theta, x):
    # inline of MOBXII.loglik_terms for the Weibull baseline
    tau, lam, beta, alpha = theta
    logg, logG, logS = _weibull_logs(x, beta, alpha)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = _mobxiiw_terms(tau, lam, logg, logG, logS)
    return np.where(np.isfinite(out) & (x > 0), out, -np.inf)


MOBXIIW = Model(
    "MOBXIIW",
    ("tau", "lambda", "beta", "alpha"),
    (True, True, True, True),
    _mobxiiw_logpdf,
    lambda th, x: MOBXII.weibull(*th).cdf(x),
    _start_mobxiiw,
)


def _start_mobxiik(x):
    return np.array([1.0, 1.0, 1.0, 1.0])


MOBXIIK = _mobxii_model(
    "MOBXIIK",
    lambda th: MOBXII(th[0], th[1], Kumaraswamy(th[2], th[3])),
    ("tau", "lambda", "a", "b"),
    (True, True, True, True),
    _start_mobxiik,
    (0.0, 1.0),
)


def _start_mobxiin(x):
    return np.array([1.0, 1.0, float(np.median(x)), float(np.std(x))])


MOBXIIN = _mobxii_model(
    "MOBXIIN",
    lambda th: MOBXII(th[0], th[1], Normal(th[2], th[3])),
    ("tau", "lambda", "mu", "sigma"),
    (True, True, False, True),
    _start_mobxiin,
    (-math.inf, math.inf),
)


# --- Weibull-based competitors --------------------------------------------

def _start_gen(x):
    shape, scale = weibull_quantile_start(x)
    return np.array([1.0, 1.0, scale, shape])


def _kw_logpdf(theta, x):
    a, b, beta, alpha = theta
    logg, logG, logS = _weibull_logs(x, beta, alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (math.log(a * b) + logg + (a - 1.0) * logG
               + (b - 1.0) * log1mexp(-a * logG))
    return np.where(np.isfinite(out), out, -np.inf)


def _kw_cdf(theta, x):
    a, b, beta, alpha = theta
    _, logG, _ = _weibull_logs(np.asarray(x, dtype=float), beta, alpha)
    with np.errstate(divide="ignore"):
        return -np.expm1(b * log1mexp(-a * logG))


def _bw_logpdf(theta, x):
    a, b, beta, alpha = theta
    logg, logG, logS = _weibull_logs(x, beta, alpha)
    out = logg + (a - 1.0) * logG + (b - 1.0) * logS - special.betaln(a, b)
    return np.where(np.isfinite(out), out, -np.inf)


def _bw_cdf(theta, x):
    a, b, beta, alpha = theta
    x = np.asarray(x, dtype=float)
    _, logG, logS = _weibull_logs(x, beta, alpha)
    G, S = np.exp(logG), np.exp(logS)
    # upper tail through 1 - I_S(b, a); once S underflows keep the leading
    # term S^b / (b B(b, a)), which matters for small b
    with np.errstate(over="ignore", invalid="ignore"):
        lead = np.exp(b * logS - math.log(b) - special.betaln(b, a))
    upper = np.where(logS < -700.0, lead, special.betainc(b, a, S))
    out = np.where(G < 0.5, special.betainc(a, b, G), 1.0 - upper)
    return np.where(x > 0, out, 0.0)


def _ww_logpdf(theta, x):
    tau, lam, beta, alpha = theta
    logg, logG, logS = _weibull_logs(x, beta, alpha)
    with np.errstate(over="ignore", invalid="ignore"):
        out = (math.log(tau * lam) + logg + (lam - 1.0) * logG - (lam + 1.0) * logS
               - tau * np.exp(lam * (logG - logS)))
    return np.where(np.isfinite(out), out, -np.inf)


def _ww_cdf(theta, x):
    tau, lam, beta, alpha = theta
    _, logG, logS = _weibull_logs(np.asarray(x, dtype=float), beta, alpha)
    with np.errstate(over="ignore"):
        return -np.expm1(-tau * np.exp(lam * (logG - logS)))


def _lw_logpdf(theta, x):
    tau, lam, beta, alpha = theta
    logg, logG, logS = _weibull_logs(x, beta, alpha)
    with np.errstate(over="ignore", invalid="ignore"):
        out = (math.log(lam) + lam * math.log(tau) + logg - 2.0 * logS
               - (lam + 1.0) * np.logaddexp(math.log(tau), logG - logS))
    return np.where(np.isfinite(out), out, -np.inf)


def _lw_cdf(theta, x):
    tau, lam, beta, alpha = theta
    _, logG, logS = _weibull_logs(np.asarray(x, dtype=float), beta, alpha)
    with np.errstate(over="ignore"):
        return -np.expm1(-lam * (np.logaddexp(math.log(tau), logG - logS) - math.log(tau)))


def _we_logpdf(theta, x):
    beta, alpha = theta
    logg, _, _ = _weibull_logs(x, beta, alpha)
    return np.where(np.isfinite(logg), logg, -np.inf)


def _we_cdf(theta, x):
    beta, alpha = theta
    return Weibull(alpha, beta).cdf(np.asarray(x, dtype=float))


def _start_we(x):
    shape, scale = weibull_quantile_start(x)
    return np.array([scale, shape])


_POS4 = (True, True, True, True)
KW = Model("KW", ("a", "b", "beta", "alpha"), _POS4, _kw_logpdf, _kw_cdf, _start_gen)
BW = Model("BW", ("a", "b", "beta", "alpha"), _POS4, _bw_logpdf, _bw_cdf, _start_gen)
WW = Model("WW", ("tau", "lambda", "beta", "alpha"), _POS4, _ww_logpdf, _ww_cdf, _start_gen)
LW = Model("LW", ("tau", "lambda", "beta", "alpha"), _POS4, _lw_logpdf, _lw_cdf, _start_gen)
WE = Model("WE", ("beta", "alpha"), (True, True), _we_logpdf, _we_cdf, _start_we)

MODELS = {m.name: m for m in (MOBXIIW, MOBXIIK, MOBXIIN, KW, BW, WW, LW, WE)}


def get_model(name: str) -> Model:
    try:
        return MODELS[name.upper()]
    except KeyError:
        raise ParameterError(f"unknown model {name!r}; choose from {sorted(MODELS)}") from None
