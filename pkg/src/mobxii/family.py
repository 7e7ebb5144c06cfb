"""The modified odd Burr XII-G transform.

For a baseline cdf ``G`` the modified odds are

    W(G) = 2 G / (2 - G (1 + G)) = 2 G / ((1 - G) (2 + G)),

and the family cdf pushes them through a Burr XII cdf with shapes
``tau`` and ``lam``:

    F(x) = 1 - (1 + W(G(x))^tau)^(-lam).

Everything below is evaluated from ``log G``, ``log(1 - G)`` and ``log g`` so
that neither tail loses precision; the factorised denominator
``(1 - G)(2 + G)`` is what makes the upper tail exact. ``lam = 1`` gives the
modified odd log-logistic-G sub-family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._util import as_float_array, log1mexp, scaled_softplus, unwrap
from .baselines import Baseline, Weibull
from .exceptions import DomainError, ParameterError

__all__ = [
    "MOBXII",
    "odds",
    "quantile_level",
    "quantile_level_printed",
]


def odds(G):
    """Modified odds ``2G / (2 - G(1 + G))``; ``inf`` at ``G = 1``.

    >>> odds(0.5)
    0.8
    """
    g = as_float_array(G)
    if np.any(~((g >= 0) & (g <= 1))):
        raise DomainError("G must lie in [0, 1]")
    with np.errstate(divide="ignore"):
        out = np.where(g >= 1.0, np.inf, 2.0 * g / ((1.0 - g) * (2.0 + g)))
    return unwrap(out, G)


def _log_odds(logG, logS):
    """log W from ``log G`` and ``log(1 - G)``."""
    G = np.exp(logG)
    with np.errstate(invalid="ignore"):
        out = math.log(2.0) + logG - logS - np.log(2.0 + G)
    # G = 0 and G = 1 endpoints
    out = np.where(logG == -np.inf, -np.inf, out)
    return np.where(logS == -np.inf, np.inf, out)


def quantile_level(u, tau, lam):
    """Baseline probability level ``G*`` with ``F = u``, and ``1 - G*``.

    Solves ``w G^2 + (w + 2) G - 2w = 0`` for the odds ``w`` at which the Burr
    XII cdf equals ``u``. With ``s = 1/w`` the positive root is
    ``G* = -1/2 - s + sqrt((1 + 2s)^2 + 8)/2``; it is evaluated as
    ``4 / (A + B)`` with ``B = 1 + 2s`` and ``A = sqrt(B^2 + 8)``, which avoids
    the cancellation of the printed form as ``s`` grows, and ``1 - G*`` is
    assembled separately for the upper tail.
    """
    u = as_float_array(u)
    # w^tau = (1 - u)^(-1/lam) - 1
    with np.errstate(divide="ignore", over="ignore"):
        log_wtau = np.log(np.expm1(-np.log1p(-u) / lam))
        s = np.exp(-log_wtau / tau)
    B = 1.0 + 2.0 * s
    with np.errstate(over="ignore", invalid="ignore"):
        A = np.sqrt(B * B + 8.0)
        G = 4.0 / (A + B)
        # 1 - G = (A + B - 4)/(A + B) with A - 3 = (4s + 4s^2)/(A + 3)
        oneminus = (4.0 * s * (1.0 + s) / (A + 3.0) + 2.0 * s) / (A + B)
    G = np.where(np.isinf(s), 0.0, G)
    oneminus = np.where(np.isinf(s), 1.0, oneminus)
    return G, oneminus


def quantile_level_printed(u, tau, lam):
    """``G*`` evaluated literally from the closed-form root as usually printed.

    Kept as an independent cross-check of :func:`quantile_level`.
    """
    u = as_float_array(u)
    s = ((1.0 - u) ** (-1.0 / lam) - 1.0) ** (-1.0 / tau)
    return -0.5 - s + 0.5 * np.sqrt((1.0 + 2.0 * s) ** 2 + 8.0)


@dataclass(frozen=True)
class MOBXII:
    """MOBXII-G distribution over an arbitrary baseline.

    Parameters
    ----------
    tau, lam : float
        Inner and outer Burr XII shapes, both strictly positive.
    baseline : Baseline
        The parent distribution ``G(x; xi)``.

    Examples
    --------
    >>> from mobxii.baselines import Weibull
    >>> d = MOBXII(0.8, 2.5, Weibull(shape=3.5, scale=0.5))
    >>> round(float(d.cdf(d.ppf(0.3))), 12)
    0.3
    """

    tau: float
    lam: float
    baseline: Baseline

    def __post_init__(self):
        for name in ("tau", "lam"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be a finite positive number, got {v!r}")

    @classmethod
    def weibull(cls, tau, lam, beta, alpha):
        """MOBXIIW in the (tau, lambda, beta, alpha) order used in reports."""
        return cls(tau, lam, Weibull(shape=alpha, scale=beta))

    @property
    def params(self) -> tuple[float, ...]:
        return (self.tau, self.lam, *self.baseline.params)

    @property
    def support(self):
        return self.baseline.support

    # building blocks ---------------------------------------------------
    def _log_terms(self, x):
        b = self.baseline
        return b.logcdf(x), b.logsf(x)

    def _burr_arg(self, logG, logS):
        # log(W^tau); the Burr XII factor is log(1 + W^tau) = softplus of this
        return self.tau * _log_odds(logG, logS)

    # distribution functions ---------------------------------------------
    def logsf(self, x):
        logG, logS = self._log_terms(x)
        return -scaled_softplus(self.lam, self._burr_arg(logG, logS))

    def sf(self, x):
        return unwrap(np.exp(self.logsf(x)), x)

    def cdf(self, x):
        """``1 - (1 + W^tau)^(-lam)``, via ``-expm1`` of the log-survival."""
        return unwrap(-np.expm1(self.logsf(x)), x)

    def logcdf(self, x):
        return unwrap(log1mexp(-self.logsf(x)), x)

    def _log_hazard_core(self, x):
        """log of the density without the final ``(1 + W^tau)^-(lam+1)`` factor.

        Returns the core and ``log W^tau`` so callers assemble the pdf
        (``core - (lam+1) log(1 + W^tau)``) and the hazard (``core - log(1 + W^tau)``).
        """
        tau, lam = self.tau, self.lam
        x = as_float_array(x)
        logG, logS = self._log_terms(x)
        logg = self.baseline.logpdf(x)
        G = np.exp(logG)
        if tau == 1.0:
            pow_term = np.zeros_like(logG)
        else:
            pow_term = (tau - 1.0) * logG
        with np.errstate(invalid="ignore"):
            core = (
                tau * math.log(2.0)
                + math.log(tau)
                + math.log(lam)
                + logg
                + np.log(2.0 + G * G)
                + pow_term
                - (tau + 1.0) * (logS + np.log(2.0 + G))
            )
        arg = self._burr_arg(logG, logS)
        inside = self.baseline.in_support(x)
        at_lower = inside & (logG == -np.inf)
        # G = 0 on the support boundary: integrable singularity for tau < 1
        if tau < 1.0:
            core = np.where(at_lower, np.inf, core)
        elif tau > 1.0:
            core = np.where(at_lower, -np.inf, core)
        core = np.where(inside, core, -np.inf)
        core = np.where(logS == -np.inf, -np.inf, core)
        return core, arg

    def logpdf(self, x):
        core, arg = self._log_hazard_core(x)
        with np.errstate(invalid="ignore"):
            out = core - scaled_softplus(self.lam + 1.0, arg)
        out = np.where(np.isnan(out), -np.inf, out)
        return unwrap(out, x)

    def pdf(self, x):
        with np.errstate(over="ignore"):
            return unwrap(np.exp(self.logpdf(x)), x)

    def loglik_terms(self, x):
        """Per-observation log density used by the likelihood.

        Identical to :meth:`logpdf` except that any non-finite entry, such
        as ``G`` rounding to exactly 0 or 1 where the density underflows or
        a boundary singularity, becomes ``-inf`` so the optimizer rejects it.
        No clamping of ``G`` is applied: holding ``G`` at a floor while ``g``
        keeps its exact value inflates the density and creates spurious
        optima at limiting sub-models.
        """
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            core, arg = self._log_hazard_core(x)
            out = core - scaled_softplus(self.lam + 1.0, arg)
        return np.where(np.isfinite(out), out, -np.inf)

    def loghazard(self, x):
        core, arg = self._log_hazard_core(x)
        with np.errstate(invalid="ignore"):
            out = core - scaled_softplus(1.0, arg)
        # past the upper end of the support the hazard is infinite
        out = np.where(self.logsf(x) == -np.inf, np.inf, out)
        out = np.where(np.isnan(out), -np.inf, out)
        return unwrap(out, x)

    def hazard(self, x):
        with np.errstate(over="ignore"):
            return unwrap(np.exp(self.loghazard(x)), x)

    def ppf(self, u):
        u_arr = as_float_array(u)
        if np.any(~((u_arr > 0) & (u_arr < 1))):
            raise DomainError("quantile argument must lie strictly inside (0, 1)")
        G, oneminus = quantile_level(u_arr, self.tau, self.lam)
        if np.any((G < -1e-12) | (G > 1 + 1e-12)):
            raise ArithmeticError("baseline quantile level escaped [0, 1]")
        lo, hi = self.baseline.support
        out = np.empty_like(G)
        interior = (G > 0) & (oneminus > 0)
        out[~interior & (G <= 0)] = lo
        out[~interior & (oneminus <= 0)] = hi
        out[interior] = self.baseline._ppf_pair(G[interior], oneminus[interior])
        return unwrap(out, u)

    def median(self):
        return self.ppf(0.5)

    def rvs(self, n, rng):
        """Draw ``n`` variates by inverse transform from a uniform stream.

        ``rng`` is anything with a ``uniform(n)`` method returning values in
        the open unit interval (see :class:`mobxii.numerics.RandomStream`).
        """
        if n == 0:
            return np.empty(0)
        return self.ppf(rng.uniform(n))
