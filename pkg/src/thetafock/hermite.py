"""Multidimensional Hermite polynomials (physicists' convention).

``H_n`` is fixed by the Rodrigues formula
``H_n(x) = (-1)^n exp(x^2) d^n/dx^n exp(-x^2)``; evaluation uses the
three-term recurrence ``H_{n+1}(x) = 2 x H_n(x) - 2 n H_{n-1}(x)`` for
stability.  A multi-index ``k`` selects the product ``prod_j H_{k_j}``.
"""

from __future__ import annotations

import math

import numpy as np

MultiIndex = tuple[int, ...]

# Factorials are exact integers up to this total order, log-space beyond,
# so large orders degrade gracefully instead of overflowing silently.
EXACT_FACTORIAL_MAX_ORDER = 20


def index_order(k: MultiIndex) -> int:
    """Total order |k| = sum of the entries."""
    return int(sum(int(v) for v in k))


def index_factorial(k: MultiIndex) -> float:
    """k! = prod k_j! as a float; exact for |k| <= 20, via lgamma beyond."""
    if any(int(v) < 0 for v in k):
        raise ValueError(f"multi-index entries must be non-negative, got {k}")
    if index_order(k) <= EXACT_FACTORIAL_MAX_ORDER:
        out = 1
        for v in k:
            out *= math.factorial(int(v))
        return float(out)
    return math.exp(sum(math.lgamma(int(v) + 1) for v in k))


def _hermite_1d(n: int, x: np.ndarray) -> np.ndarray:
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev
    h = 2.0 * x
    with np.errstate(over="ignore", invalid="ignore"):
        for m in range(1, n):
            h_prev, h = h, 2.0 * x * h - 2.0 * m * h_prev
    return h


def hermite_eval(k: MultiIndex, xi) -> float | np.ndarray:
    """Product of 1-D Hermite polynomials: prod_j H_{k_j}(xi[..., j]).

    ``xi`` has shape (..., len(k)); the result drops the last axis.  Raises
    ``OverflowError`` when the value leaves the representable range.
    """
    xi = np.asarray(xi, dtype=float)
    m = len(k)
    if xi.shape[-1:] != (m,):
        if m == 0 and xi.shape[-1:] == (0,):
            pass
        else:
            raise ValueError(f"expected points with last axis {m}, got shape {xi.shape}")
    out = np.ones(xi.shape[:-1])
    for j, n in enumerate(k):
        out = out * _hermite_1d(int(n), xi[..., j])
    if not np.all(np.isfinite(out)):
        raise OverflowError("Hermite product exceeded the representable range")
    return out if out.shape else float(out)


def hermite_nu_eval(nu: float, k: MultiIndex, x2) -> float | np.ndarray:
    """Scaled variant: the plain product evaluated at sqrt(nu) * x2."""
    if nu <= 0:
        raise ValueError(f"nu must be positive, got {nu}")
    return hermite_eval(k, np.sqrt(nu) * np.asarray(x2, dtype=float))


def hermite_norm_sq(nu: float, k: MultiIndex) -> float:
    """Squared norm of the scaled product against the weight exp(-nu |x2|^2).

    Equals (pi/nu)^(m/2) * 2^|k| * k! with m = len(k); the empty index gives 1.
    """
    if nu <= 0:
        raise ValueError(f"nu must be positive, got {nu}")
    m = len(k)
    return (np.pi / nu) ** (m / 2.0) * 2.0 ** index_order(k) * index_factorial(k)


def hermite_generating_kernel(nu: float, z2, x2) -> complex | np.ndarray:
    """Exponential generating kernel exp(-(nu/2) <z2, z2> + sqrt(2) nu <x2, z2>).

    The pairing is bilinear (no conjugation).  Summing
    ``(sqrt(nu/2) z2)^k H_k(sqrt(nu) x2) / k!`` over all multi-indices
    reproduces this closed form.
    """
    if nu <= 0:
        raise ValueError(f"nu must be positive, got {nu}")
    z2 = np.asarray(z2, dtype=complex)
    x2 = np.asarray(x2, dtype=float)
    zz = np.sum(z2 * z2, axis=-1)
    xz = np.sum(x2 * z2, axis=-1)
    out = np.exp(-(nu / 2.0) * zz + np.sqrt(2.0) * nu * xz)
    return out if np.ndim(out) else complex(out)
