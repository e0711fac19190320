"""Quadrature engines and the closed-form Gaussian integral.

Two node families cover every integral in the library:

* Gauss-Legendre on the compact fundamental cell (coordinates of the
  generated subspace),
* Gauss-Hermite on the unbounded directions, matched to the Gaussian weight
  by the substitution ``xi = sqrt(nu) * x``.

Rules come from the eigenvalue (Golub-Welsch style) constructions in
``numpy.polynomial`` and are memoized per node count.  Every engine reports
an error estimate obtained by doubling the node counts and returns the finer
value.

The closed-form Gaussian integral

    integral over R^s of exp(-a y A y + b y) dy
        = det(A)^(-1/2) (pi/a)^(s/2) exp(b A^(-1) b / (4a))

serves both as a computational primitive and as an independent test oracle.
The square root of det(A) uses the principal branch per eigenvalue, which is
the analytic continuation from real positive definite matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .errors import QuadratureNotConverged, SingularMatrix

_CHUNK = 1 << 16


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts per dimension and the convergence tolerance for doubling."""

    cell_nodes_per_dim: int = 24
    hermite_nodes_per_dim: int = 24
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.cell_nodes_per_dim < 2 or self.hermite_nodes_per_dim < 2:
            raise ValueError("node counts must be at least 2")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


class QuadResult(NamedTuple):
    """Quadrature value together with a node-doubling error estimate."""

    value: complex
    error: float


@lru_cache(maxsize=None)
def gauss_hermite_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for the weight exp(-xi^2) on R.

    Exact for polynomials of degree <= 2n - 1; the weights sum to sqrt(pi).
    """
    if n < 1:
        raise ValueError(f"need at least one node, got {n}")
    nodes, weights = np.polynomial.hermite.hermgauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@lru_cache(maxsize=None)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre_rule(n: int, a: float = 0.0, b: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to the interval [a, b]."""
    nodes, weights = _leggauss(n)
    half = 0.5 * (b - a)
    return half * nodes + 0.5 * (b + a), half * weights


def principal_sqrt_det(matrix: np.ndarray) -> complex:
    """sqrt(det M) as the product of principal square roots of eigenvalues.

    Well defined and continuous whenever every eigenvalue stays off the
    closed negative real axis; matrices with positive definite real part
    qualify.  Taking the principal square root of det M directly can pick the
    wrong sign once the determinant's argument winds past pi.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
    if matrix.shape[0] == 0:
        return 1.0 + 0.0j
    eigs = np.linalg.eigvals(matrix)
    if np.any(np.abs(eigs) < 1e-300):
        raise SingularMatrix("matrix is singular")
    if np.any((eigs.real <= 0) & (np.abs(eigs.imag) < 1e-300 * np.abs(eigs.real))):
        raise SingularMatrix("eigenvalue on the negative real axis; branch undefined")
    return complex(np.prod(np.sqrt(eigs)))


def gaussian_integral_exact(a: float, A, b) -> complex:
    """Closed form of the Gaussian integral over R^s, s = len(b).

    ``A`` must be complex symmetric with positive definite real part and
    ``a > 0``.  Raises ``SingularMatrix`` otherwise.
    """
    if a <= 0:
        raise ValueError(f"a must be positive, got {a}")
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    b = np.asarray(b, dtype=complex).reshape(A.shape[0])
    s = A.shape[0]
    if s == 0:
        return 1.0 + 0.0j
    if not np.allclose(A, A.T, rtol=0, atol=1e-12 * (1.0 + np.max(np.abs(A)))):
        raise SingularMatrix("matrix must be symmetric")
    re_eigs = np.linalg.eigvalsh(0.5 * (A.real + A.real.T))
    if re_eigs[0] <= 0:
        raise SingularMatrix("real part of the matrix is not positive definite")
    sqrt_det = principal_sqrt_det(A)
    solved = np.linalg.solve(A, b)
    return complex((np.pi / a) ** (s / 2.0) / sqrt_det * np.exp(b @ solved / (4.0 * a)))


def tensor_grid(rules: list[tuple[np.ndarray, np.ndarray]]) -> tuple[np.ndarray, np.ndarray]:
    """Tensor product of 1-D rules: points (N, m) and combined weights (N,)."""
    if not rules:
        return np.zeros((1, 0)), np.ones(1)
    node_mesh = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    weight_mesh = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    pts = np.stack([m.ravel() for m in node_mesh], axis=-1)
    w = np.ones(pts.shape[0])
    for m in weight_mesh:
        w = w * m.ravel()
    return pts, w


def eval_chunked(f: Callable[[np.ndarray], np.ndarray], pts: np.ndarray, chunk: int = _CHUNK) -> np.ndarray:
    """Evaluate an integrand over stacked points in memory-bounded blocks."""
    n = pts.shape[0]
    if n <= chunk:
        return np.asarray(f(pts), dtype=complex).reshape(n)
    out = np.empty(n, dtype=complex)
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        out[start:stop] = np.asarray(f(pts[start:stop]), dtype=complex).reshape(stop - start)
    return out


def _cell_hermite_value(params, integrand, n_cell: int, n_herm: int, cell_offset) -> complex:
    lattice, frame, nu = params.lattice, params.frame, params.nu
    r, d = lattice.rank, lattice.dimension
    m = d - r
    vol = params.domain.volume_lambda1

    offsets = np.zeros(r) if cell_offset is None else np.asarray(cell_offset, dtype=float).reshape(r)
    cell_rules = [gauss_legendre_rule(n_cell, off, off + 1.0) for off in offsets]
    t_pts, t_w = tensor_grid(cell_rules)

    xi, wh = gauss_hermite_rule(n_herm)
    herm_rules = [(xi / np.sqrt(nu), wh)] * m
    c_pts, c_w = tensor_grid(herm_rules)

    x_cell = t_pts @ lattice.basis if r else np.zeros((1, d))
    x_comp = c_pts @ frame.complement_frame.T if m else np.zeros((1, d))

    total = 0.0 + 0.0j
    # Keep the point set as an explicit (cell x complement) product so large
    # Hermite grids can stream through in blocks.
    for i in range(x_cell.shape[0]):
        pts = x_cell[i] + x_comp
        vals = eval_chunked(integrand, pts)
        total += t_w[i] * np.sum(c_w * vals)
    return complex(vol * nu ** (-m / 2.0) * total)


def tensor_cell_hermite(params, integrand, spec: QuadratureSpec, cell_offset=None, check: bool = True) -> QuadResult:
    """Integrate over (fundamental cell) x (orthogonal complement).

    Computes ``integral integrand(x) * exp(-nu |x2|^2) dx`` where x ranges
    over the cell in the generated subspace crossed with the complement; the
    Gaussian complement weight is applied internally via the Hermite rule.
    ``params`` must expose ``lattice``, ``frame``, ``domain`` and ``nu``.
    ``cell_offset`` shifts the cell coordinates to [o_j, o_j + 1).

    Returns the doubled-node value plus the doubling error; raises
    ``QuadratureNotConverged`` when that error exceeds
    ``spec.tolerance * (1 + |value|)`` and ``check`` is set.
    """
    coarse = _cell_hermite_value(params, integrand, spec.cell_nodes_per_dim, spec.hermite_nodes_per_dim, cell_offset)
    fine = _cell_hermite_value(params, integrand, 2 * spec.cell_nodes_per_dim, 2 * spec.hermite_nodes_per_dim, cell_offset)
    err = abs(fine - coarse)
    if check and err > spec.tolerance * (1.0 + abs(fine)):
        raise QuadratureNotConverged(
            f"node doubling moved the result by {err:.3e} (tolerance {spec.tolerance:.1e})"
        )
    return QuadResult(fine, err)
