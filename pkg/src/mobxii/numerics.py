"""Numerical plumbing shared by fitting, moments and simulation.

* :class:`RandomStream` -- reproducible uniform stream on a counter-based
  generator.
* :func:`minimize` -- Nelder-Mead simplex search with restarts.
* :func:`numerical_hessian` / :func:`standard_errors` -- observed-information
  standard errors.
* :func:`integrate` -- adaptive quadrature.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _integrate
from scipy import optimize as _optimize
from scipy import special

from .exceptions import HessianError, OptimizerInitError

__all__ = [
    "RandomStream",
    "OptimizerConfig",
    "OptimizeResult",
    "minimize",
    "numerical_hessian",
    "standard_errors",
    "integrate",
    "QUAD_EPSABS",
    "QUAD_EPSREL",
]

QUAD_EPSABS = 1e-10
QUAD_EPSREL = 1e-8
_QUAD_LIMIT = 200


class RandomStream:
    """Seeded stream of uniforms strictly inside (0, 1).

    The generator is Philox4x64-10 keyed by a ``SeedSequence`` built from
    ``(seed, *stream_ids)``. Each uniform takes the top 53 bits ``k`` of one
    64-bit output and returns ``(k + 0.5) / 2**53``, so 0 and 1 never occur and
    the sequence is bit-identical across platforms.

    Independent sub-streams for parallel replicates come from :meth:`spawn`,
    which extends the key rather than advancing this stream.
    """

    def __init__(self, seed: int, *stream_ids: int):
        self.seed = int(seed)
        self.stream_ids = tuple(int(s) for s in stream_ids)
        entropy = [self.seed & 0xFFFFFFFFFFFFFFFF, *self.stream_ids]
        self._bitgen = np.random.Philox(np.random.SeedSequence(entropy))

    def spawn(self, *stream_ids: int) -> "RandomStream":
        return RandomStream(self.seed, *self.stream_ids, *stream_ids)

    def uniform(self, n: int) -> np.ndarray:
        raw = self._bitgen.random_raw(int(n)) >> np.uint64(11)
        return (raw.astype(np.float64) + 0.5) * 2.0**-53

    def normal(self, n: int) -> np.ndarray:
        """Standard normal draws by inversion of :meth:`uniform`."""
        return special.ndtri(self.uniform(n))

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, stream_ids={self.stream_ids})"


@dataclass(frozen=True)
class OptimizerConfig:
    max_iterations: int = 5000
    tolerance_f: float = 1e-10
    tolerance_x: float = 1e-8
    restarts: int = 2
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5

    def __post_init__(self):
        if not (
            self.reflection > 0
            and self.expansion > 1
            and 0 < self.contraction < 1
            and 0 < self.shrink < 1
        ):
            raise ValueError("inadmissible simplex coefficients")
        if self.max_iterations < 1 or self.restarts < 0:
            raise ValueError("max_iterations must be >= 1 and restarts >= 0")


@dataclass
class OptimizeResult:
    x: np.ndarray
    fun: float
    converged: bool
    iterations: int
    evaluations: int


def _initial_simplex(x0, scale=0.1):
    # 10% edges; absolute step for coordinates at zero
    n = x0.size
    sim = np.tile(x0, (n + 1, 1))
    for i in range(n):
        step = scale * abs(x0[i]) if x0[i] != 0 else scale
        sim[i + 1, i] += step
    return sim


def _nelder_mead(f, sim, cfg, budget):
    """One Nelder-Mead run from an explicit starting simplex."""
    rho, chi, psi, sigma = cfg.reflection, cfg.expansion, cfg.contraction, cfg.shrink
    n = sim.shape[1]
    fsim = np.array([f(v) for v in sim])
    nfev = n + 1
    it = 0
    converged = False
    order = np.argsort(fsim, kind="stable")
    sim, fsim = sim[order], fsim[order]
    while it < budget:
        if (
            np.max(np.abs(sim[1:] - sim[0])) <= cfg.tolerance_x
            and np.max(np.abs(fsim[0] - fsim[1:])) <= cfg.tolerance_f
        ):
            converged = True
            break
        it += 1
        xbar = sim[:-1].mean(axis=0)
        xr = (1 + rho) * xbar - rho * sim[-1]
        fr = f(xr)
        nfev += 1
        shrink = False
        if fr < fsim[0]:
            xe = (1 + rho * chi) * xbar - rho * chi * sim[-1]
            fe = f(xe)
            nfev += 1
            if fe < fr:
                sim[-1], fsim[-1] = xe, fe
            else:
                sim[-1], fsim[-1] = xr, fr
        elif fr < fsim[-2]:
            sim[-1], fsim[-1] = xr, fr
        elif fr < fsim[-1]:
            xc = (1 + psi * rho) * xbar - psi * rho * sim[-1]
            fc = f(xc)
            nfev += 1
            if fc <= fr:
                sim[-1], fsim[-1] = xc, fc
            else:
                shrink = True
        else:
            xcc = (1 - psi) * xbar + psi * sim[-1]
            fcc = f(xcc)
            nfev += 1
            if fcc < fsim[-1]:
                sim[-1], fsim[-1] = xcc, fcc
            else:
                shrink = True
        if shrink:
            sim[1:] = sim[0] + sigma * (sim[1:] - sim[0])
            fsim[1:] = [f(v) for v in sim[1:]]
            nfev += n
        order = np.argsort(fsim, kind="stable")
        sim, fsim = sim[order], fsim[order]
    return sim[0].copy(), float(fsim[0]), converged, it, nfev


def minimize(objective, start, config: OptimizerConfig | None = None) -> OptimizeResult:
    """Minimise ``objective`` by Nelder-Mead with restarts.

    Non-finite objective values are treated as ``+inf`` so moves into
    invalid regions are rejected. After the first run the simplex is rebuilt
    around the incumbent ``config.restarts`` times; the reported convergence
    flag is that of the final run. The returned point is never worse than
    ``start``.

    Raises
    ------
    OptimizerInitError
        If the objective is not finite at ``start``.
    """
    cfg = config or OptimizerConfig()
    x0 = np.asarray(start, dtype=float).copy()

    def f(v):
        with np.errstate(all="ignore"):
            val = float(objective(v))
        return val if math.isfinite(val) else math.inf

    f0 = f(x0)
    if not math.isfinite(f0):
        raise OptimizerInitError(f"objective is not finite at the start point {x0}")

    best_x, best_f = x0, f0
    total_it = total_fev = 0
    converged = False
    for _ in range(cfg.restarts + 1):
        budget = cfg.max_iterations - total_it
        if budget <= 0:
            converged = False
            break
        x, fx, converged, it, fev = _nelder_mead(f, _initial_simplex(best_x), cfg, budget)
        total_it += it
        total_fev += fev
        if fx <= best_f:
            best_x, best_f = x, fx
    return OptimizeResult(best_x, best_f, converged, total_it, total_fev)


def numerical_hessian(objective, point, step=None) -> np.ndarray:
    """Central-difference Hessian, symmetrised.

    Default steps are ``h_i = max(1e-5, 1e-5 |x_i|)``.
    """
    x = np.asarray(point, dtype=float)
    n = x.size
    h = np.maximum(1e-5, 1e-5 * np.abs(x)) if step is None else np.broadcast_to(
        np.asarray(step, dtype=float), (n,)
    )

    def f(v):
        with np.errstate(all="ignore"):
            return float(objective(v))

    f0 = f(x)
    H = np.empty((n, n))
    E = np.diag(h)
    for i in range(n):
        H[i, i] = (f(x + E[i]) - 2.0 * f0 + f(x - E[i])) / (h[i] * h[i])
        for j in range(i + 1, n):
            H[i, j] = (
                f(x + E[i] + E[j])
                - f(x + E[i] - E[j])
                - f(x - E[i] + E[j])
                + f(x - E[i] - E[j])
            ) / (4.0 * h[i] * h[j])
            H[j, i] = H[i, j]
    if not np.all(np.isfinite(H)):
        raise HessianError("non-finite entries in the finite-difference Hessian")
    return 0.5 * (H + H.T)


def standard_errors(hessian, max_condition=1e12) -> np.ndarray:
    """Square roots of the diagonal of ``hessian^-1``.

    ``hessian`` is the second-derivative matrix of the negative
    log-likelihood at the optimum. Coordinates whose variance cannot be
    obtained (singular or ill-conditioned matrix, non-positive variance)
    come back as ``nan`` instead of raising.
    """
    H = np.asarray(hessian, dtype=float)
    n = H.shape[0]
    out = np.full(n, np.nan)
    if n == 0 or not np.all(np.isfinite(H)):
        return out
    if np.linalg.cond(H) > max_condition:
        return out
    try:
        cov = np.linalg.solve(H, np.eye(n))
    except np.linalg.LinAlgError:
        return out
    var = np.diag(cov)
    ok = var > 0
    out[ok] = np.sqrt(var[ok])
    return out


def integrate(func, a, b, points=None, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL):
    """Adaptive Gauss-Kronrod quadrature of ``func`` over ``[a, b]``.

    Returns ``(value, abs_error_estimate)``. Infinite limits are allowed.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _integrate.IntegrationWarning)
        if points is not None and np.isfinite(a) and np.isfinite(b):
            val, err = _integrate.quad(
                func, a, b, points=points, epsabs=epsabs, epsrel=epsrel, limit=_QUAD_LIMIT
            )
        else:
            val, err = _integrate.quad(func, a, b, epsabs=epsabs, epsrel=epsrel, limit=_QUAD_LIMIT)
    return val, err


def root_bracket(func, lo, hi, xtol=1e-12):
    """Root of a sign-changing scalar function on ``[lo, hi]`` (Brent)."""
    return _optimize.brentq(func, lo, hi, xtol=xtol)
