"""Multidimensional Riemann theta function with characteristics.

    theta_{alpha,beta}(z | Omega)
        = sum over n in Z^r of
          exp(2 pi i [ (1/2)(alpha+n) Omega (alpha+n) + (alpha+n)(z+beta) ])

with ``Omega`` complex symmetric and ``Im(Omega)`` positive definite, which
guarantees convergence.  Evaluation reduces the argument by the two lattice
quasi-periodicities first (keeping the truncation radius small), then sums
over an axis-aligned integer box whose radius is certified by a Gaussian
tail bound.  Terms are accumulated in lexicographic order with compensated
(Kahan) summation for cross-platform reproducibility.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import NotConvergent, TruncationFailure
from .quadrature import principal_sqrt_det

# Hard cap on the box radius; radii beyond this indicate a badly conditioned
# Omega rather than a legitimate truncation need.
RADIUS_CAP = 200


@dataclass(frozen=True)
class ThetaParams:
    """Characteristics, argument, period matrix and truncation tolerance."""

    alpha: np.ndarray
    beta: np.ndarray
    z: np.ndarray
    omega: np.ndarray
    tolerance: float = 1e-12

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float).reshape(-1)
        r = alpha.shape[0]
        beta = np.asarray(self.beta, dtype=float).reshape(r)
        z = np.asarray(self.z, dtype=complex).reshape(r)
        omega = np.asarray(self.omega, dtype=complex).reshape(r, r)
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        _check_omega(omega)
        for name, val in (("alpha", alpha), ("beta", beta), ("z", z), ("omega", omega)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def rank(self) -> int:
        return self.alpha.shape[0]


def _check_omega(omega: np.ndarray) -> None:
    if omega.shape[0] == 0:
        return
    if not np.allclose(omega, omega.T, rtol=0, atol=1e-12 * (1.0 + np.max(np.abs(omega)))):
        raise NotConvergent("period matrix must be symmetric")
    try:
        np.linalg.cholesky(omega.imag)
    except np.linalg.LinAlgError as exc:
        raise NotConvergent("imaginary part of the period matrix is not positive definite") from exc


def theta_truncation_radius(omega, tolerance: float, linear_bound: float | None = None, cap: int = RADIUS_CAP) -> int:
    """Smallest box radius R whose discarded tail is provably below tolerance.

    For summation indices m with sup-norm s the term magnitude is bounded by
    ``exp(-pi lam s^2 + 2 pi sqrt(r) b s)`` where ``lam`` is the smallest
    eigenvalue of Im(Omega) and ``b`` bounds the Euclidean norm of Im(z).
    Multiplying by the shell count ``(2s+1)^r - (2s-1)^r`` and summing the
    shells beyond R gives the certified tail bound.  When ``linear_bound`` is
    omitted the worst case after argument reduction is used
    (|Im z| <= sigma_max(Im Omega) sqrt(r) / 2).
    """
    omega = np.atleast_2d(np.asarray(omega, dtype=complex))
    r = omega.shape[0]
    if r == 0:
        return 0
    _check_omega(omega)
    im_eigs = np.linalg.eigvalsh(0.5 * (omega.imag + omega.imag.T))
    lam = float(im_eigs[0])
    if linear_bound is None:
        linear_bound = 0.5 * float(im_eigs[-1]) * np.sqrt(r)
    b = float(linear_bound)

    def shell(s: int) -> float:
        count = float((2 * s + 1) ** r - (2 * s - 1) ** r)
        exponent = -np.pi * lam * s * s + 2.0 * np.pi * np.sqrt(r) * b * s
        return count * float(np.exp(min(exponent, 700.0)))

    # Scan outward past the peak of the shell bound until the shells are both
    # negligible and geometrically decaying; the remainder is then bounded by
    # the last shell and can be ignored against the tolerance.
    peak = np.sqrt(r) * b / lam
    shells: list[float] = []
    s = 1
    while True:
        val = shell(s)
        shells.append(val)
        if s > peak and val < tolerance * 1e-6 and (len(shells) < 2 or val < 0.5 * shells[-2]):
            break
        if s > 100 * cap:
            raise TruncationFailure("tail bound requires an unreasonable radius")
        s += 1
    suffix = np.concatenate([np.cumsum(shells[::-1])[::-1][1:], [0.0]])
    for radius in range(1, min(cap, len(shells)) + 1):
        if suffix[radius - 1] < tolerance:
            return radius
    raise TruncationFailure(f"no radius below the cap {cap} meets tolerance {tolerance:.1e}")


def _reduce_arguments(alpha, beta, z_rows: np.ndarray, omega: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Shift each argument into a small cell of the period lattice.

    Returns reduced arguments and per-row multiplicative factors F with
    ``theta(z) = F * theta(z_reduced)``, using
    ``theta(z + Omega p) = exp(-2 pi i (p Omega p / 2 + p (z + beta))) theta(z)``
    and ``theta(z + m) = exp(2 pi i alpha . m) theta(z)`` for integer p, m.
    """
    im = omega.imag
    p = np.rint(np.linalg.solve(im, z_rows.imag.T).T)
    z1 = z_rows - p @ omega
    m = np.rint(z1.real)
    z0 = z1 - m
    quad = np.einsum("ij,jk,ik->i", p, omega, p)
    log_factor = -2j * np.pi * (0.5 * quad + np.sum(p * (z1 + beta), axis=1)) + 2j * np.pi * (m @ alpha)
    return z0, np.exp(log_factor)


def _index_box(alpha: np.ndarray, radius: int) -> np.ndarray:
    """All integer rows n with |n + alpha|_inf <= radius, lexicographic."""
    ranges = [
        range(int(np.ceil(-a - radius)), int(np.floor(-a + radius)) + 1)
        for a in alpha
    ]
    return np.array(list(itertools.product(*ranges)), dtype=float).reshape(-1, len(alpha))


def _kahan_sum(terms: np.ndarray) -> np.ndarray:
    """Compensated sum along the last axis, in stored order."""
    total = np.zeros(terms.shape[:-1], dtype=complex)
    comp = np.zeros_like(total)
    for i in range(terms.shape[-1]):
        y = terms[..., i] - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def theta_eval_many(alpha, beta, z_rows, omega, tolerance: float = 1e-12) -> np.ndarray:
    """Evaluate the series at several arguments sharing one period matrix."""
    omega = np.atleast_2d(np.asarray(omega, dtype=complex))
    r = omega.shape[0]
    z_arr = np.asarray(z_rows, dtype=complex)
    if r == 0:
        n_rows = z_arr.shape[0] if z_arr.ndim >= 2 else 1
        return np.ones(n_rows, dtype=complex)
    z_rows = z_arr.reshape(-1, r)
    _check_omega(omega)
    alpha = np.asarray(alpha, dtype=float).reshape(r)
    beta = np.asarray(beta, dtype=float).reshape(r)

    z0, factors = _reduce_arguments(alpha, beta, z_rows, omega)
    linear_bound = float(np.max(np.linalg.norm(z0.imag, axis=1))) if z0.size else 0.0
    radius = theta_truncation_radius(omega, tolerance, linear_bound=linear_bound)
    box = _index_box(alpha, radius) + alpha  # rows m = alpha + n
    quad = np.einsum("ij,jk,ik->i", box, omega, box)
    # terms[p, t] for argument p and lattice row t
    exponent = 2j * np.pi * (0.5 * quad[None, :] + (z0 + beta) @ box.T)
    terms = np.exp(exponent)
    return factors * _kahan_sum(terms)


def theta_eval(params: ThetaParams) -> complex:
    """Value of the series for one argument; see ``ThetaParams``.

    Raises ``NotConvergent`` for an inadmissible period matrix and
    ``TruncationFailure`` when no certified radius exists below the cap.
    """
    out = theta_eval_many(params.alpha, params.beta, params.z[None, :], params.omega, params.tolerance)
    return complex(out[0])


def theta_modular_lhs_rhs(z, omega, tolerance: float = 1e-12) -> tuple[complex, complex]:
    """Both sides of the inversion identity, evaluated independently.

        theta_{0,0}(Omega^{-1} z | -Omega^{-1})
            = sqrt(det(-i Omega)) exp(i pi z Omega^{-1} z) theta_{0,0}(z | Omega)

    Serves as a cross-validation oracle: the two sides come from different
    truncated sums.
    """
    omega = np.atleast_2d(np.asarray(omega, dtype=complex))
    r = omega.shape[0]
    z = np.asarray(z, dtype=complex).reshape(r)
    zeros = np.zeros(r)
    omega_inv = np.linalg.inv(omega)
    lhs = theta_eval(ThetaParams(zeros, zeros, omega_inv @ z, -omega_inv, tolerance))
    scale = principal_sqrt_det(-1j * omega) * np.exp(1j * np.pi * (z @ omega_inv @ z))
    rhs = scale * theta_eval(ThetaParams(zeros, zeros, z, omega, tolerance))
    return lhs, complex(rhs)
