import numpy as np


def log1mexp(a):
    """Return ``log(1 - exp(-a))`` for ``a >= 0`` without cancellation."""
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        small = a < np.log(2.0)
        out = np.where(
            small,
            np.log(-np.expm1(-np.where(small, a, 1.0))),
            np.log1p(-np.exp(-np.where(small, 1.0, a))),
        )
    return out


def softplus(x):
    """``log(1 + exp(x))`` that stays finite for large ``x``."""
    return np.logaddexp(0.0, x)


def scaled_softplus(c, x):
    """``c * log(1 + exp(x))`` for ``c > 0``.

    Far in the left tail this is ``exp(log c + x)``, which stays accurate
    when ``exp(x)`` underflows but ``c`` is huge.
    """
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        left = x < -30.0
        return np.where(left, np.exp(np.log(c) + np.where(left, x, 0.0)), c * softplus(x))


def as_float_array(x):
    return np.asarray(x, dtype=float)


def unwrap(out, like):
    """Return a Python float when the caller passed a scalar."""
    if np.ndim(like) == 0:
        return float(out)
    return out
