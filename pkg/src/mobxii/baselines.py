"""Baseline distributions G(x; xi) that the family generator transforms.

Each baseline exposes its cdf, density and quantile, plus the log-scale
quantities (``logcdf``, ``logsf``, ``logpdf``) the family transform is
assembled from. Working from ``log G`` and ``log(1 - G)`` separately keeps
both tails of the transformed distribution accurate.

Three baselines are provided:

=============  =================  ==========================  ===========
kind           parameters         cdf                         support
=============  =================  ==========================  ===========
weibull        shape, scale       1 - exp(-(x/scale)^shape)   (0, inf)
kumaraswamy    a, b               1 - (1 - x^a)^b             (0, 1)
normal         loc, scale         Phi((x - loc)/scale)        (-inf, inf)
=============  =================  ==========================  ===========
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from scipy import special

from ._util import as_float_array, log1mexp, unwrap
from .exceptions import DomainError, ParameterError

__all__ = [
    "Baseline",
    "Weibull",
    "Kumaraswamy",
    "Normal",
    "make_baseline",
    "BASELINES",
]

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _check_positive(name, value):
    if not (np.isfinite(value) and value > 0):
        raise ParameterError(f"{name} must be a finite positive number, got {value!r}")


def _check_probability_open(u):
    u = as_float_array(u)
    if np.any(~((u > 0) & (u < 1))):
        raise DomainError("quantile argument must lie strictly inside (0, 1)")
    return u


@dataclass(frozen=True)
class Baseline:
    """Common interface for a continuous baseline distribution.

    Subclasses implement the log-scale primitives; the natural-scale methods
    are derived from them.
    """

    kind: ClassVar[str] = ""
    param_names: ClassVar[tuple[str, ...]] = ()
    # True for each parameter constrained to be strictly positive.
    positive: ClassVar[tuple[bool, ...]] = ()
    support: ClassVar[tuple[float, float]] = (-math.inf, math.inf)

    @property
    def params(self) -> tuple[float, ...]:
        return tuple(getattr(self, name) for name in self.param_names)

    def with_params(self, params) -> "Baseline":
        return type(self)(*map(float, params))

    # log-scale primitives ------------------------------------------------
    def logpdf(self, x):
        raise NotImplementedError

    def logcdf(self, x):
        raise NotImplementedError

    def logsf(self, x):
        raise NotImplementedError

    def _ppf_pair(self, p, q):
        """Quantile at probability ``p`` given both ``p`` and ``q = 1 - p``.

        Callers that know ``1 - p`` more accurately than ``p`` itself (upper
        tail) pass it here so the tail is not lost to cancellation.
        """
        raise NotImplementedError

    # natural-scale API ----------------------------------------------------
    def pdf(self, x):
        with np.errstate(over="ignore"):
            return unwrap(np.exp(self.logpdf(x)), x)

    def cdf(self, x):
        return unwrap(np.exp(self.logcdf(x)), x)

    def sf(self, x):
        return unwrap(np.exp(self.logsf(x)), x)

    def ppf(self, u):
        u_arr = _check_probability_open(u)
        return unwrap(self._ppf_pair(u_arr, 1.0 - u_arr), u)

    def in_support(self, x):
        """Closed-support membership test."""
        x = as_float_array(x)
        lo, hi = self.support
        return (x >= lo) & (x <= hi)


@dataclass(frozen=True)
class Weibull(Baseline):
    """Weibull baseline, ``G(x) = 1 - exp(-(x/scale)^shape)``."""

    shape: float
    scale: float

    kind: ClassVar[str] = "weibull"
    param_names: ClassVar[tuple[str, ...]] = ("shape", "scale")
    positive: ClassVar[tuple[bool, ...]] = (True, True)
    support: ClassVar[tuple[float, float]] = (0.0, math.inf)

    def __post_init__(self):
        _check_positive("shape", self.shape)
        _check_positive("scale", self.scale)

    def _log_cumhaz(self, x):
        # log((x/scale)^shape); -inf for x <= 0
        x = as_float_array(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(
                x > 0, self.shape * np.log(np.where(x > 0, x, 1.0) / self.scale), -np.inf
            )

    def logpdf(self, x):
        x = as_float_array(x)
        lh = self._log_cumhaz(x)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            # log(shape/x) + log H - H
            val = math.log(self.shape) - np.log(np.where(x > 0, x, 1.0)) + lh - np.exp(lh)
        if self.shape < 1.0:
            at_zero = np.inf
        elif self.shape == 1.0:
            at_zero = -math.log(self.scale)
        else:
            at_zero = -np.inf
        val = np.where(x == 0, at_zero, val)
        return np.where(x < 0, -np.inf, val)

    def logcdf(self, x):
        lh = self._log_cumhaz(x)
        with np.errstate(over="ignore"):
            h = np.exp(lh)
        # log(1 - e^-H) ~ log H - H/2 once H is tiny
        return np.where(lh < -20.0, lh - 0.5 * h, log1mexp(h))

    def logsf(self, x):
        with np.errstate(over="ignore"):
            return -np.exp(self._log_cumhaz(x))

    def _ppf_pair(self, p, q):
        # cumulative hazard -log(1 - p), computed from whichever side is exact
        with np.errstate(divide="ignore"):
            cumhaz = np.where(p < 0.5, -np.log1p(-p), -np.log(q))
        return self.scale * cumhaz ** (1.0 / self.shape)


@dataclass(frozen=True)
class Kumaraswamy(Baseline):
    """Kumaraswamy baseline on (0, 1), ``G(x) = 1 - (1 - x^a)^b``."""

    a: float
    b: float

    kind: ClassVar[str] = "kumaraswamy"
    param_names: ClassVar[tuple[str, ...]] = ("a", "b")
    positive: ClassVar[tuple[bool, ...]] = (True, True)
    support: ClassVar[tuple[float, float]] = (0.0, 1.0)

    def __post_init__(self):
        _check_positive("a", self.a)
        _check_positive("b", self.b)

    def _log_xa(self, x):
        xc = np.clip(as_float_array(x), 0.0, 1.0)
        with np.errstate(divide="ignore"):
            return self.a * np.log(xc)

    def logpdf(self, x):
        x = as_float_array(x)
        inside = (x > 0) & (x < 1)
        xi = np.where(inside, x, 0.5)
        xa = xi**self.a
        val = (
            math.log(self.a * self.b)
            + (self.a - 1.0) * np.log(xi)
            + (self.b - 1.0) * np.log1p(-xa)
        )
        # endpoint limits of a x^(a-1) (1-x^a)^(b-1)
        lo = {True: np.inf, False: -np.inf}[self.a < 1] if self.a != 1 else math.log(self.b)
        hi = {True: np.inf, False: -np.inf}[self.b < 1] if self.b != 1 else math.log(self.a)
        val = np.where(x == 0, lo, np.where(x == 1, hi, val))
        return np.where((x < 0) | (x > 1), -np.inf, val)

    def logsf(self, x):
        xa = np.exp(self._log_xa(x))
        with np.errstate(divide="ignore"):
            return self.b * np.log1p(-xa)

    def logcdf(self, x):
        lsf = self.logsf(x)
        lxa = self._log_xa(x)
        # G ~ b x^a near the origin
        return np.where(lxa < -40.0, math.log(self.b) + lxa, log1mexp(-lsf))

    def _ppf_pair(self, p, q):
        with np.errstate(divide="ignore"):
            log_q = np.where(p < 0.5, np.log1p(-p), np.log(q))
        return (-np.expm1(log_q / self.b)) ** (1.0 / self.a)


@dataclass(frozen=True)
class Normal(Baseline):
    """Normal baseline with location ``loc`` and scale ``scale``."""

    loc: float
    scale: float

    kind: ClassVar[str] = "normal"
    param_names: ClassVar[tuple[str, ...]] = ("loc", "scale")
    positive: ClassVar[tuple[bool, ...]] = (False, True)
    support: ClassVar[tuple[float, float]] = (-math.inf, math.inf)

    def __post_init__(self):
        if not np.isfinite(self.loc):
            raise ParameterError(f"loc must be finite, got {self.loc!r}")
        _check_positive("scale", self.scale)

    def _z(self, x):
        return (as_float_array(x) - self.loc) / self.scale

    def logpdf(self, x):
        z = self._z(x)
        return -0.5 * z * z - _LOG_SQRT_2PI - math.log(self.scale)

    def logcdf(self, x):
        return special.log_ndtr(self._z(x))

    def logsf(self, x):
        return special.log_ndtr(-self._z(x))

    def _ppf_pair(self, p, q):
        z = np.where(p <= 0.5, special.ndtri(np.minimum(p, 0.5)), -special.ndtri(np.minimum(q, 0.5)))
        return self.loc + self.scale * z


BASELINES: dict[str, type[Baseline]] = {
    cls.kind: cls for cls in (Weibull, Kumaraswamy, Normal)
}


def make_baseline(kind: str, params) -> Baseline:
    """Build a baseline from its kind name and ordered parameter vector."""
    try:
        cls = BASELINES[kind.lower()]
    except KeyError:
        raise ParameterError(
            f"unknown baseline {kind!r}; expected one of {sorted(BASELINES)}"
        ) from None
    params = tuple(params)
    if len(params) != len(cls.param_names):
        raise ParameterError(
            f"{kind} takes {len(cls.param_names)} parameters {cls.param_names}, got {len(params)}"
        )
    return cls(*map(float, params))
