"""Power-series form of the MOBXII-G cdf as a mixture of exp-G densities.

Writing ``A(G) = (1 - G(1+G)/2)^tau`` the cdf is
``F = 1 - (A / (A + G^tau))^lam``. The chain of coefficient sequences is

* ``a`` -- power series of ``A`` (double binomial expansion),
* ``b`` -- power series of ``G^tau`` (re-expanded around 1 - G),
* ``d = a + b``,
* ``omega`` -- the quotient ``a / d`` by long division,
* ``theta`` -- ``omega`` raised to the power ``lam`` (J.C.P. Miller's
  recurrence),

giving ``F = 1 - sum theta_m G^m`` and
``f = sum phi_{m+1} pi_{m+1}`` with ``phi_{m+1} = -theta_{m+1}`` and
``pi_d = d g G^(d-1)`` the exp-G density.

The truncated series is exact only for integer ``tau`` (``b`` then has a
single non-zero entry). For fractional ``tau`` the inner sum defining ``b``
does not settle, which :attr:`SeriesCoefficients.tail_estimate` exposes.
Agreement with the closed form is certified empirically; close to
``G = 1`` the truncated series drifts from the target and is not used for
fitting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import special

from ._util import as_float_array, unwrap
from .baselines import Baseline
from .exceptions import DegenerateSeriesError, DomainError

__all__ = [
    "gen_binom",
    "compute_a",
    "compute_b",
    "compute_omega",
    "compute_theta",
    "SeriesCoefficients",
    "series_coefficients",
    "series_cdf",
    "series_pdf",
    "expg_density",
]

DEFAULT_ORDER = 60
DEFAULT_INNER = 200


def _is_int(v):
    return float(v).is_integer()


def gen_binom(t, k):
    """Generalised binomial coefficient ``C(t, k)`` for real ``t`` and integer ``k >= 0``.

    Evaluated through log-gamma with explicit sign tracking, so large ``k``
    does not overflow.
    """
    k = np.asarray(k, dtype=float)
    t = float(t)
    if _is_int(t) and t < 0:
        # gamma pole at t + 1; use C(t, k) = (-1)^k C(k - t - 1, k)
        kk = np.where(k < 0, 0.0, k)
        out = np.where(k < 0, 0.0, (-1.0) ** kk * special.binom(kk - t - 1.0, kk))
        return out if out.ndim else float(out)
    if _is_int(t) and t >= 0:
        zero = (k > t) | (k < 0)
    else:
        zero = k < 0
    kk = np.where(zero, 0.0, k)
    arg = t - kk + 1.0
    sign = special.gammasgn(t + 1.0) * special.gammasgn(arg)
    with np.errstate(over="ignore", invalid="ignore"):
        mag = np.exp(special.gammaln(t + 1.0) - special.gammaln(kk + 1.0) - special.gammaln(arg))
    out = np.where(zero, 0.0, sign * mag)
    return out if out.ndim else float(out)


def compute_a(tau, M):
    """Coefficients of ``(1 - G/2 - G^2/2)^tau = sum a_m G^m``, ``m = 0..M``.

    ``a_m`` sums ``(-1)^i 2^-i C(tau, i) C(i, j)`` over ``i + j = m, j <= i``;
    the admissible ``i`` run from ``ceil(m/2)`` to ``m`` so each entry is a
    finite sum. For integer ``tau`` the entries vanish beyond ``m = 2 tau``.
    """
    a = np.zeros(M + 1)
    for m in range(M + 1):
        i = np.arange((m + 1) // 2, m + 1)
        j = m - i
        terms = (-1.0) ** i * 2.0**-i * gen_binom(tau, i) * special.comb(i, j)
        a[m] = terms.sum()
    return a


def compute_b(tau, M, L=DEFAULT_INNER):
    """Coefficients of ``G^tau`` re-expanded around ``1 - G``.

    Returns ``(b, tail)`` where ``b_m = sum_{l=m}^{L} (-1)^(l+m) C(tau, l) C(l, m)``
    and ``tail`` is the largest magnitude of a last included term (zero
    when the sums terminate, i.e. integer ``tau`` with ``L >= tau``).
    """
    if L < M:
        raise DomainError("inner cutoff L must be at least the order M")
    ell = np.arange(L + 1)
    cb = gen_binom(tau, ell)
    b = np.zeros(M + 1)
    tail = 0.0
    for m in range(M + 1):
        l = ell[m:]
        terms = (-1.0) ** (l + m) * cb[m:] * special.comb(l, m)
        b[m] = terms.sum()
        tail = max(tail, abs(terms[-1]))
    return b, tail


def compute_omega(a, d):
    """Coefficients of the quotient ``(sum a_m G^m) / (sum d_m G^m)``."""
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    if abs(d[0]) < 1e-14:
        raise DegenerateSeriesError("leading denominator coefficient d_0 is zero")
    M = a.size - 1
    w = np.zeros(M + 1)
    w[0] = a[0] / d[0]
    for m in range(1, M + 1):
        # sum_{n=1}^m d_n w_{m-n}
        w[m] = (a[m] - np.dot(d[1 : m + 1], w[m - 1 :: -1][:m])) / d[0]
    return w


def compute_theta(omega, lam):
    """Coefficients of ``(sum omega_m G^m)^lam``."""
    w = np.asarray(omega, dtype=float)
    w0 = w[0]
    if w0 == 0 or (w0 < 0 and not _is_int(lam)):
        raise DegenerateSeriesError("omega_0 must be positive for a fractional power")
    M = w.size - 1
    th = np.zeros(M + 1)
    th[0] = w0**lam
    for m in range(1, M + 1):
        q = np.arange(m)
        th[m] = np.sum((lam * m - (lam + 1.0) * q) * th[:m] * w[m - q]) / (m * w0)
    return th


@dataclass(frozen=True)
class SeriesCoefficients:
    tau: float
    lam: float
    M: int
    a: np.ndarray
    b: np.ndarray
    d: np.ndarray
    omega: np.ndarray
    theta: np.ndarray
    # phi[m] holds phi_{m+1} = -theta_{m+1}
    phi: np.ndarray
    inner_cutoff: int
    tail_estimate: float


def series_coefficients(tau, lam, M=DEFAULT_ORDER, L=DEFAULT_INNER) -> SeriesCoefficients:
    """Run the full coefficient chain to order ``M`` (inner cutoff ``L``)."""
    if not (tau > 0 and lam > 0):
        raise DomainError("tau and lam must be positive")
    L = max(L, M + 1)
    a = compute_a(tau, M + 1)
    b, tail = compute_b(tau, M + 1, L)
    d = a + b
    omega = compute_omega(a, d)
    theta = compute_theta(omega, lam)
    arrays = dict(
        a=a[: M + 1],
        b=b[: M + 1],
        d=d[: M + 1],
        omega=omega[: M + 1],
        theta=theta[: M + 1],
        phi=-theta[1 : M + 2],
    )
    for v in arrays.values():
        v.flags.writeable = False
    return SeriesCoefficients(
        tau=float(tau), lam=float(lam), M=int(M), inner_cutoff=int(L),
        tail_estimate=float(tail), **arrays,
    )


def series_cdf(coeffs: SeriesCoefficients, baseline: Baseline, x):
    """Truncated ``1 - sum_{m<=M} theta_m G(x)^m``."""
    G = baseline.cdf(as_float_array(x))
    return unwrap(1.0 - P.polyval(G, coeffs.theta), x)


def series_pdf(coeffs: SeriesCoefficients, baseline: Baseline, x):
    """Truncated exp-G mixture ``sum_{m<=M} phi_{m+1} pi_{m+1}(x)``."""
    x = as_float_array(x)
    G = baseline.cdf(x)
    g = baseline.pdf(x)
    mult = np.arange(1, coeffs.M + 2) * coeffs.phi
    return unwrap(g * P.polyval(G, mult), x)


def expg_density(delta, baseline: Baseline, x):
    """Exponentiated-G density ``delta g(x) G(x)^(delta - 1)``."""
    if not delta > 0:
        raise DomainError("delta must be positive")
    x = as_float_array(x)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.exp(math.log(delta) + baseline.logpdf(x) + (delta - 1.0) * baseline.logcdf(x))
    if delta == 1.0:
        out = baseline.pdf(x)
    return unwrap(np.where(np.isnan(out), 0.0, out), x)
