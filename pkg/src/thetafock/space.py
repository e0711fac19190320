"""Gaussian-weighted Hilbert space of quasi-periodic functions on R^d.

Members satisfy, for every subgroup element g,

    f(x + g) = chi(g) exp(nu <x + g/2, g>) f(x)

and are square integrable over one fundamental cell against the weight
``exp(-nu |x|^2)``.  The orthogonal basis is indexed by a dual-lattice
element and a Hermite multi-index:

    e_{gs,k}(x) = exp((nu/2) <x1, x1> + 2 pi i <v_chi + gs, x1>) H_k(sqrt(nu) x2)

with x1 the projection onto the generated subspace and x2 the complement
coordinates.  Quadrature inner products use Gauss-Legendre on the cell and
weight-matched Gauss-Hermite on the complement.
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
from .quadrature import QuadratureSpec, QuadResult, gauss_hermite_rule, gauss_legendre_rule, tensor_cell_hermite, tensor_grid

FUNCTIONAL_EQ_SPOT_TOL = 1e-6


@dataclass(frozen=True)
class SpaceParams:
    """Weight parameter nu > 0 bound to a subgroup, character and split."""

    nu: float
    lattice: LatticeSpec
    chi: Character
    frame: SplitFrame
    domain: FundamentalDomain

    def __post_init__(self):
        if self.nu <= 0:
            raise ValueError(f"nu must be positive, got {self.nu}")

    @classmethod
    def build(cls, lattice: LatticeSpec, alpha=None, nu: float = 2.0 * np.pi) -> "SpaceParams":
        if alpha is None:
            alpha = np.zeros(lattice.rank)
        chi = alpha if isinstance(alpha, Character) else character_from_alpha(lattice, alpha)
        return cls(
            nu=float(nu),
            lattice=lattice,
            chi=chi,
            frame=split_frame(lattice),
            domain=fundamental_domain(lattice),
        )

    @property
    def complement_dim(self) -> int:
        return self.lattice.dimension - self.lattice.rank


@dataclass(frozen=True)
class DualIndex:
    """Index (dual-lattice coordinates, Hermite multi-index) of one basis element."""

    gamma_star_coords: tuple[int, ...]
    k: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "gamma_star_coords", tuple(int(c) for c in self.gamma_star_coords))
        object.__setattr__(self, "k", tuple(int(v) for v in self.k))
        if any(v < 0 for v in self.k):
            raise ValueError(f"Hermite multi-index must be non-negative, got {self.k}")


def dual_vector(params: SpaceParams, gamma_star_coords) -> np.ndarray:
    """Dual-lattice element with the given integer coordinates, as a vector in R^d."""
    coords = np.asarray(gamma_star_coords, dtype=float).reshape(params.lattice.rank)
    return params.frame.dual_matrix @ coords


def _x1_quadratic(params: SpaceParams, x: np.ndarray) -> np.ndarray:
    """<x1, x1> for the projection x1 of each point onto the generated subspace."""
    if params.lattice.rank == 0:
        return np.zeros(np.asarray(x).shape[:-1])
    xb = x @ params.frame.lattice_frame
    return np.sum((xb @ params.frame.gram_inv) * xb, axis=-1)


def ground_psi_eval(params: SpaceParams, x) -> complex | np.ndarray:
    """Distinguished nonzero member exp((nu/2) <x1,x1> + 2 pi i <x1, v_chi>)."""
    x = np.asarray(x, dtype=float)
    out = np.exp((params.nu / 2.0) * _x1_quadratic(params, x) + 2j * np.pi * (x @ params.chi.v_chi))
    return out if out.shape else complex(out)


def basis_e_eval(params: SpaceParams, idx: DualIndex, x) -> complex | np.ndarray:
    """Basis element at points of shape (..., d)."""
    x = np.asarray(x, dtype=float)
    w = params.chi.v_chi + dual_vector(params, idx.gamma_star_coords)
    x2 = x @ params.frame.complement_frame
    out = (
        np.exp((params.nu / 2.0) * _x1_quadratic(params, x) + 2j * np.pi * (x @ w))
        * hermite.hermite_nu_eval(params.nu, idx.k, x2)
    )
    return out if np.ndim(out) else complex(out)


def basis_e_norm_sq(params: SpaceParams, idx: DualIndex) -> float:
    """Analytic squared norm: cell volume x (pi/nu)^((d-r)/2) 2^|k| k!."""
    return params.domain.volume_lambda1 * hermite.hermite_norm_sq(params.nu, idx.k)


def inner_product_quadrature(
    params: SpaceParams, f, g, quad: QuadratureSpec, cell_offset=None, check: bool = True
) -> QuadResult:
    """Weighted inner product over one fundamental cell.

    Approximates ``integral over cell of f(x) conj(g(x)) exp(-nu |x|^2) dx``;
    for members of the space the value is independent of ``cell_offset``.
    """
    nu = params.nu

    def integrand(pts):
        return (
            np.asarray(f(pts), dtype=complex)
            * np.conj(np.asarray(g(pts), dtype=complex))
            * np.exp(-nu * _x1_quadratic(params, pts))
        )

    return tensor_cell_hermite(params, integrand, quad, cell_offset=cell_offset, check=check)


def functional_eq_residual(params: SpaceParams, f, x, gamma_coords) -> float:
    """Normalized defect of the quasi-periodicity law at one point and shift."""
    x = np.asarray(x, dtype=float)
    coords = np.asarray(gamma_coords, dtype=int).reshape(params.lattice.rank)
    gamma = coords @ params.lattice.basis if params.lattice.rank else np.zeros(params.lattice.dimension)
    fx = complex(np.asarray(f(x[None, :]))[0])
    shifted = complex(np.asarray(f((x + gamma)[None, :]))[0])
    predicted = complex(character_eval(params.chi, coords)) * np.exp(params.nu * np.dot(x + gamma / 2.0, gamma)) * fx
    return abs(shifted - predicted) / (1.0 + abs(fx))


def poincare_series(params: SpaceParams, psi, x, truncation_radius: int, check_support: bool = True) -> complex | np.ndarray:
    """Subgroup average turning a cell-supported seed into a space member.

        sum over |m|_inf <= radius of
            conj(chi(g_m)) exp(-nu <x + g_m/2, g_m>) psi(x + g_m)

    For a seed supported strictly inside the open cell and x in that cell, at
    most one term is nonzero and the value equals psi(x).  The seed's support
    is the caller's responsibility; a handful of points outside the cell are
    sampled as a guard.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = x[None, :] if single else x
    r = params.lattice.rank
    if r == 0:
        vals = np.asarray(psi(pts), dtype=complex)
        return complex(vals[0]) if single else vals
    if check_support:
        outside_coords = np.concatenate([np.eye(r) * 1.25, -np.eye(r) * 0.25], axis=0)
        probes = outside_coords @ params.lattice.basis
        if np.max(np.abs(np.asarray(psi(probes), dtype=complex))) > 1e-12:
            raise ValueError("seed function is not supported inside the open cell")
    grid = np.stack(
        np.meshgrid(*[np.arange(-truncation_radius, truncation_radius + 1)] * r, indexing="ij"),
        axis=-1,
    ).reshape(-1, r)
    total = np.zeros(pts.shape[0], dtype=complex)
    for coords in grid:
        gamma = coords @ params.lattice.basis
        shifted = pts + gamma
        weight = np.conj(character_eval(params.chi, coords)) * np.exp(
            -params.nu * np.sum((pts + gamma / 2.0) * gamma, axis=-1)
        )
        total = total + weight * np.asarray(psi(shifted), dtype=complex)
    return complex(total[0]) if single else total


def cell_bump(params: SpaceParams):
    """Smooth seed supported (in cell coordinates) strictly inside (0, 1)^r,
    with a Gaussian profile along the complement directions."""

    def psi(pts):
        pts = np.asarray(pts, dtype=float)
        if params.lattice.rank:
            t = (pts @ params.frame.lattice_frame) @ params.frame.gram_inv
            inside = np.all((t > 0.0) & (t < 1.0), axis=-1)
            with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                prof = np.where(inside, np.exp(-np.sum(1.0 / np.clip(t * (1.0 - t), 1e-300, None), axis=-1)), 0.0)
        else:
            prof = np.ones(pts.shape[:-1])
        x2 = pts @ params.frame.complement_frame
        return prof * np.exp(-np.sum(x2 * x2, axis=-1))

    return psi


def fourier_coefficient(
    params: SpaceParams,
    f,
    gamma_star_coords,
    x2_coords,
    quad: QuadratureSpec,
    check_member: bool = True,
) -> complex | np.ndarray:
    """Cell-average Fourier coefficient of a space member at fixed complement point.

        a_gs(x2) = (1/vol) integral over cell of
            exp(-(nu/2) <x1,x1> - 2 pi i <v_chi, x1>) f(x1 + x2) exp(-2 pi i <x1, gs>) dx1

    ``x2_coords`` may be a single complement-coordinate vector or an array of
    shape (..., d-r); the coefficient is computed for each row.  A spot check
    of the quasi-periodicity law guards against integrating a non-member.
    """
    r = params.lattice.rank
    m = params.complement_dim
    x2_coords = np.asarray(x2_coords, dtype=float)
    single = x2_coords.ndim <= 1
    rows = x2_coords.reshape(-1, m)
    coords = np.asarray(gamma_star_coords, dtype=float).reshape(r)

    if check_member and r:
        probe = 0.25 * np.ones(params.lattice.dimension) + (rows[0] @ params.frame.complement_frame.T if m else 0.0)
        res = functional_eq_residual(params, f, probe, np.eye(r, dtype=int)[0])
        if res > FUNCTIONAL_EQ_SPOT_TOL:
            raise ValueError(f"function violates the quasi-periodicity law (spot residual {res:.3e})")

    if r == 0:
        vals = np.asarray(f(rows @ params.frame.complement_frame.T), dtype=complex)
        return complex(vals[0]) if single else vals.reshape(x2_coords.shape[:-1])

    def value(n_cell: int) -> np.ndarray:
        rules = [gauss_legendre_rule(n_cell, 0.0, 1.0)] * r
        t_pts, t_w = tensor_grid(rules)
        x1 = t_pts @ params.lattice.basis  # (Nt, d)
        quadr = np.sum((t_pts @ params.frame.gram) * t_pts, axis=-1)
        # <v_chi, x1> = alpha . t and <gs, x1> = coords . t in cell coordinates
        phase = (params.chi.alpha + coords) @ t_pts.T
        weight = t_w * np.exp(-(params.nu / 2.0) * quadr - 2j * np.pi * phase)
        x2_vecs = rows @ params.frame.complement_frame.T
        pts = x1[None, :, :] + x2_vecs[:, None, :]
        vals = np.asarray(f(pts.reshape(-1, params.lattice.dimension)), dtype=complex).reshape(len(rows), -1)
        return vals @ weight

    coarse = value(quad.cell_nodes_per_dim)
    fine = value(2 * quad.cell_nodes_per_dim)
    err = float(np.max(np.abs(fine - coarse)))
    if err > quad.tolerance * (1.0 + float(np.max(np.abs(fine)))):
        raise QuadratureNotConverged(f"cell-node doubling moved the coefficient by {err:.3e}")
    return complex(fine[0]) if single else fine.reshape(x2_coords.shape[:-1])


def expansion_coefficient(params: SpaceParams, f, idx: DualIndex, quad: QuadratureSpec) -> complex:
    """Coefficient of one basis element: Fourier step then Hermite projection."""
    m = params.complement_dim
    if m == 0:
        return complex(fourier_coefficient(params, f, idx.gamma_star_coords, np.zeros((1, 0)), quad)[0])
    nodes, weights = gauss_hermite_rule(quad.hermite_nodes_per_dim)
    pts, w = tensor_grid([(nodes / np.sqrt(params.nu), weights)] * m)
    a_vals = fourier_coefficient(params, f, idx.gamma_star_coords, pts, quad)
    h_vals = hermite.hermite_nu_eval(params.nu, idx.k, pts)
    integral = params.nu ** (-m / 2.0) * np.sum(w * a_vals * h_vals)
    return complex(integral / hermite.hermite_norm_sq(params.nu, idx.k))


@dataclass(frozen=True)
class FiniteExpansion:
    """Finite linear combination of basis elements with known coefficients."""

    params: SpaceParams
    terms: tuple[tuple[DualIndex, complex], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((idx, complex(a)) for idx, a in self.terms))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1], dtype=complex)
        for idx, a in self.terms:
            out = out + a * basis_e_eval(self.params, idx, x)
        return out if out.shape else complex(out)

    def norm_sq_analytic(self) -> float:
        """Weighted Parseval sum: sum over terms of |a|^2 |e_idx|^2."""
        return float(sum(abs(a) ** 2 * basis_e_norm_sq(self.params, idx) for idx, a in self.terms))
