"""Moments, incomplete moments, Lorenz/Bonferroni curves and quantile shape measures.

Production values integrate the quantile function over the unit interval,
``E[X^r] = int_0^1 Q(u)^r du``, which has finite limits whatever the tail.
The exp-G series route, ``sum (m+1) phi_{m+1} int_0^1 Q_G(u)^r u^m du``, is
available as a cross-check; it only converges when the series radius
exceeds 1 (see :mod:`mobxii.series`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .exceptions import DomainError, InfiniteMomentError
from .family import MOBXII
from .numerics import integrate
from .series import DEFAULT_ORDER, series_coefficients

__all__ = [
    "MomentResult",
    "moment",
    "incomplete_moment",
    "lorenz_bonferroni",
    "bowley_moors",
    "bowley_moors_from_quantile",
]


@dataclass(frozen=True)
class MomentResult:
    order: int
    value: float
    method: Literal["quadrature", "series"]
    abs_error_estimate: float


def _check_finite_moment(d: MOBXII, r: int):
    # Q(1 - eps)^r * eps should shrink as eps -> 0 when the moment exists
    probe = []
    for k in range(4, 13):
        eps = 10.0**-k
        q = abs(float(d.ppf(1.0 - eps)))
        if not math.isfinite(q):
            raise InfiniteMomentError(f"quantile is infinite near u = 1 (order {r})")
        probe.append(q**r * eps)
    if probe[-1] >= probe[0] and probe[-1] > 0:
        raise InfiniteMomentError(f"moment of order {r} appears to diverge")


def _series_moment(d: MOBXII, r: int, upper_level: float, M: int):
    coeffs = series_coefficients(d.tau, d.lam, M)
    Q = d.baseline.ppf
    total = 0.0
    err = 0.0
    for m in range(M + 1):
        w = (m + 1) * coeffs.phi[m]
        if w == 0.0:
            continue
        val, e = integrate(lambda u, m=m: Q(u) ** r * u**m, 0.0, upper_level)
        total += w * val
        err += abs(w) * e
    return total, err


def moment(d: MOBXII, r: int = 1, method: str = "quadrature", M: int = DEFAULT_ORDER) -> MomentResult:
    """The ``r``-th ordinary moment ``E[X^r]``.

    Raises
    ------
    InfiniteMomentError
        If the tail probe indicates that the integral diverges.
    """
    if r < 1 or int(r) != r:
        raise DomainError("moment order must be a positive integer")
    r = int(r)
    _check_finite_moment(d, r)
    if method == "quadrature":
        val, err = integrate(lambda u: float(d.ppf(u)) ** r, 0.0, 1.0, points=[0.5])
    elif method == "series":
        val, err = _series_moment(d, r, 1.0, M)
    else:
        raise ValueError(f"unknown method {method!r}")
    return MomentResult(order=r, value=float(val), method=method, abs_error_estimate=float(err))


def incomplete_moment(d: MOBXII, r: int, z: float, method: str = "quadrature", M: int = DEFAULT_ORDER) -> float:
    """``m_r(z) = int_{-inf}^z x^r f(x) dx``.

    The quadrature route integrates ``Q(u)^r`` over ``(0, F(z))``.
    """
    if r < 1 or int(r) != r:
        raise DomainError("moment order must be a positive integer")
    r = int(r)
    Fz = float(d.cdf(z))
    if Fz <= 0.0:
        return 0.0
    if method == "series":
        return float(_series_moment(d, r, float(d.baseline.cdf(z)), M)[0])
    if Fz >= 1.0:
        return moment(d, r).value
    _check_finite_moment(d, r)
    val, _ = integrate(lambda u: float(d.ppf(u)) ** r, 0.0, Fz)
    return float(val)


def lorenz_bonferroni(d: MOBXII, nu):
    """Bonferroni and Lorenz curves ``(B(nu), L(nu))``.

    ``L(nu) = m_1(Q(nu)) / E[X]`` and ``B(nu) = L(nu) / nu``. Defined only for
    baselines supported on the non-negative half-line.
    """
    if d.baseline.support[0] < 0:
        raise DomainError("Lorenz/Bonferroni curves need a non-negative support")
    nu_arr = np.atleast_1d(np.asarray(nu, dtype=float))
    if np.any(~((nu_arr > 0) & (nu_arr < 1))):
        raise DomainError("nu must lie strictly inside (0, 1)")
    mu = moment(d, 1).value
    L = np.empty_like(nu_arr)
    for i, v in enumerate(nu_arr):
        L[i] = integrate(lambda u: float(d.ppf(u)), 0.0, v)[0] / mu
    B = L / nu_arr
    if np.ndim(nu) == 0:
        return float(B[0]), float(L[0])
    return B, L


def bowley_moors_from_quantile(Q):
    """Bowley skewness and Moors kurtosis from any quantile function."""
    q = {k: float(Q(k / 8.0)) for k in range(1, 8)}
    bowley = (q[6] + q[2] - 2.0 * q[4]) / (q[6] - q[2])
    moors = (q[7] - q[5] + q[3] - q[1]) / (q[6] - q[2])
    return bowley, moors


def bowley_moors(d: MOBXII):
    """Quartile skewness (Bowley) and octile kurtosis (Moors)."""
    return bowley_moors_from_quantile(d.ppf)
