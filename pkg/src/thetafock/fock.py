"""Holomorphic theta-Fock space on C^d attached to a rank-r subgroup of R^d.

Members are holomorphic, satisfy

    f(z + g) = chi(g) exp(nu H(z + g/2, g)) f(z)

for subgroup elements g (H the hermitian pairing), and are square integrable
over a fundamental domain of the subgroup acting on C^d = R^{2d} against
``exp(-nu H(z, z))``.  The orthogonal basis pairs a dual-lattice phase with a
complement monomial:

    phi_{gs,k}(z) = exp((nu/2) <z1, z1> + 2 pi i <z1, gs + v_chi>) z2^k

where ``< , >`` is the bilinear (unconjugated) extension of the real pairing
and z1, z2 are the complexified split coordinates.

The space is self-contained for any subgroup; ``FockParams.from_real_space``
builds the instance "subgroup / sqrt(2) with unchanged generator phases"
that arises as the range of the Segal-Bargmann transform.  All analytic
formulas (norms in particular) refer to this space's own subgroup: its cell
volume, its dual lattice, its character vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hermite
from .errors import QuadratureNotConverged
from .lattice import (
    Character,
    FundamentalDomain,
    LatticeSpec,
    SplitFrame,
    character_eval,
    character_from_alpha,
    fundamental_domain,
    split_frame,
)
from .quadrature import QuadratureSpec, QuadResult, gauss_hermite_rule, gauss_legendre_rule, tensor_grid
from .space import DualIndex, SpaceParams


def bilinear_c(z, w) -> complex | np.ndarray:
    """Bilinear pairing sum z_j w_j with no conjugation (holomorphic in both)."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    out = np.sum(z * w, axis=-1)
    return out if np.ndim(out) else complex(out)


def hermitian_h(z, w) -> complex | np.ndarray:
    """Hermitian pairing sum z_j conj(w_j); H(z, z) = |Re z|^2 + |Im z|^2 >= 0."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    out = np.sum(z * np.conj(w), axis=-1)
    return out if np.ndim(out) else complex(out)


@dataclass(frozen=True)
class FockParams:
    """Weight nu bound to the subgroup, character and split used on C^d."""

    nu: float
    lattice: LatticeSpec
    chi: Character
    frame: SplitFrame
    domain: FundamentalDomain

    def __post_init__(self):
        if self.nu <= 0:
            raise ValueError(f"nu must be positive, got {self.nu}")

    @classmethod
    def build(cls, lattice: LatticeSpec, alpha=None, nu: float = 2.0 * np.pi) -> "FockParams":
        if alpha is None:
            alpha = np.zeros(lattice.rank)
        chi = alpha if isinstance(alpha, Character) else character_from_alpha(lattice, alpha)
        return cls(nu=float(nu), lattice=lattice, chi=chi, frame=split_frame(lattice), domain=fundamental_domain(lattice))

    @classmethod
    def from_real_space(cls, space: SpaceParams) -> "FockParams":
        """Scaled instance arising as the transform range: generators divided
        by sqrt(2), generator phases unchanged (so the character vector is
        sqrt(2) times the original)."""
        scaled = LatticeSpec(
            dimension=space.lattice.dimension,
            rank=space.lattice.rank,
            basis=space.lattice.basis / np.sqrt(2.0),
        )
        return cls.build(scaled, alpha=space.chi.alpha, nu=space.nu)

    @property
    def complement_dim(self) -> int:
        return self.lattice.dimension - self.lattice.rank


def fock_dual_vector(params: FockParams, gamma_star_coords) -> np.ndarray:
    coords = np.asarray(gamma_star_coords, dtype=float).reshape(params.lattice.rank)
    return params.frame.dual_matrix @ coords


def _z1_quadratic(params: FockParams, z: np.ndarray) -> np.ndarray:
    """Bilinear <z1, z1> for the complexified projection onto the subspace."""
    if params.lattice.rank == 0:
        return np.zeros(z.shape[:-1], dtype=complex)
    zb = z @ params.frame.lattice_frame
    return np.sum((zb @ params.frame.gram_inv) * zb, axis=-1)


def basis_phi_eval(params: FockParams, idx: DualIndex, z) -> complex | np.ndarray:
    """Basis element at complex points of shape (..., d)."""
    z = np.asarray(z, dtype=complex)
    w = params.chi.v_chi + fock_dual_vector(params, idx.gamma_star_coords)
    z2 = z @ params.frame.complement_frame
    mono = np.ones(z.shape[:-1], dtype=complex)
    for j, n in enumerate(idx.k):
        mono = mono * z2[..., j] ** int(n)
    out = np.exp((params.nu / 2.0) * _z1_quadratic(params, z) + 2j * np.pi * (z @ w)) * mono
    return out if np.ndim(out) else complex(out)


def basis_phi_norm_sq(params: FockParams, idx: DualIndex) -> float:
    """Analytic squared norm of a basis element.

        (pi/nu)^(d - r/2) * vol / 2^(r/2) * k! / nu^|k|
            * exp((2 pi^2 / nu) <gs + v_chi, gs + v_chi>)

    with vol the cell volume of this space's own subgroup and gs, v_chi its
    own dual element and character vector.
    """
    d, r = params.lattice.dimension, params.lattice.rank
    w = params.chi.v_chi + fock_dual_vector(params, idx.gamma_star_coords)
    return float(
        (np.pi / params.nu) ** (d - r / 2.0)
        * params.domain.volume_lambda1
        / 2.0 ** (r / 2.0)
        * hermite.index_factorial(idx.k)
        / params.nu ** hermite.index_order(idx.k)
        * np.exp(2.0 * np.pi**2 / params.nu * float(w @ w))
    )


def fock_functional_eq_residual(params: FockParams, f, z, gamma_coords) -> float:
    """Normalized defect of the holomorphic quasi-periodicity law."""
    z = np.asarray(z, dtype=complex)
    coords = np.asarray(gamma_coords, dtype=int).reshape(params.lattice.rank)
    gamma = coords @ params.lattice.basis if params.lattice.rank else np.zeros(params.lattice.dimension)
    fz = complex(np.asarray(f(z[None, :]))[0])
    shifted = complex(np.asarray(f((z + gamma)[None, :]))[0])
    predicted = (
        complex(character_eval(params.chi, coords))
        * np.exp(params.nu * complex(hermitian_h(z + gamma / 2.0, gamma)))
        * fz
    )
    return abs(shifted - predicted) / (1.0 + abs(fz))


def _fock_quad_value(params: FockParams, integrand, n_cell: int, n_herm: int) -> complex:
    """Integral over (cell x subspace x complement-plane) with the Gaussian
    weight handled by completing the square with the Gram matrix.

    Coordinates: x1 = B t over the cell, y1 = B u over the whole subspace
    (Gauss-Hermite in w = sqrt(2 nu) L' u with G = L L'), z2 from complement
    coordinates a + i b (Gauss-Hermite each, matched to exp(-nu .)).
    """
    lattice, frame, nu = params.lattice, params.frame, params.nu
    d, r = lattice.dimension, lattice.rank
    m = d - r
    vol = params.domain.volume_lambda1

    if r:
        t_pts, t_w = tensor_grid([gauss_legendre_rule(n_cell, 0.0, 1.0)] * r)
        xi, wh = gauss_hermite_rule(n_herm)
        w_pts, w_w = tensor_grid([(xi, wh)] * r)
        chol = np.linalg.cholesky(frame.gram)
        u_pts = w_pts @ np.linalg.inv(chol) / np.sqrt(2.0 * nu)
    else:
        t_pts, t_w = np.zeros((1, 0)), np.ones(1)
        u_pts, w_w = np.zeros((1, 0)), np.ones(1)

    if m:
        xi, wh = gauss_hermite_rule(n_herm)
        ab_pts, ab_w = tensor_grid([(xi / np.sqrt(nu), wh)] * (2 * m))
        z2 = (ab_pts[:, :m] + 1j * ab_pts[:, m:]) @ frame.complement_frame.T
    else:
        z2, ab_w = np.zeros((1, d), dtype=complex), np.ones(1)

    x1 = t_pts @ lattice.basis if r else np.zeros((1, d))
    y1 = u_pts @ lattice.basis if r else np.zeros((1, d))
    q_x1 = np.sum((t_pts @ frame.gram) * t_pts, axis=-1) if r else np.zeros(1)
    q_y1 = np.sum((u_pts @ frame.gram) * u_pts, axis=-1) if r else np.zeros(1)

    total = 0.0 + 0.0j
    # Residual weight after pulling the Gauss-Hermite envelopes out of
    # exp(-nu H(z, z)): exp(-nu |x1|^2 + nu |y1|^2).
    for i in range(x1.shape[0]):
        for j in range(y1.shape[0]):
            z1 = x1[i] + 1j * y1[j]
            pts = z1[None, :] + z2
            vals = np.asarray(integrand(pts), dtype=complex).reshape(pts.shape[0])
            total += t_w[i] * w_w[j] * np.exp(-nu * q_x1[i] + nu * q_y1[j]) * np.sum(ab_w * vals)
    return complex(vol * (2.0 * nu) ** (-r / 2.0) * nu ** (-float(m)) * total)


def fock_inner_product_quadrature(
    params: FockParams, f, g, quad: QuadratureSpec, check: bool = True
) -> QuadResult:
    """Hermitian inner product over a fundamental domain of the subgroup on C^d.

    Approximates ``integral f(z) conj(g(z)) exp(-nu H(z, z)) dlambda(z)`` over
    (cell in the subspace) x (imaginary subspace directions) x (complement
    plane); for members of the space the result does not depend on the cell
    choice.  Returns the doubled-node value and the doubling error.
    """

    def integrand(pts):
        return np.asarray(f(pts), dtype=complex) * np.conj(np.asarray(g(pts), dtype=complex))

    coarse = _fock_quad_value(params, integrand, quad.cell_nodes_per_dim, quad.hermite_nodes_per_dim)
    fine = _fock_quad_value(params, integrand, 2 * quad.cell_nodes_per_dim, 2 * quad.hermite_nodes_per_dim)
    err = abs(fine - coarse)
    if check and err > quad.tolerance * (1.0 + abs(fine)):
        raise QuadratureNotConverged(
            f"node doubling moved the result by {err:.3e} (tolerance {quad.tolerance:.1e})"
        )
    return QuadResult(fine, err)
