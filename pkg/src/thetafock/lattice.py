"""Geometry of a rank-r discrete subgroup of R^d.

A subgroup is described by r linearly independent generators ``omega_1..omega_r``
in R^d.  Everything downstream derives from the generator matrix: the Gram
matrix, the dual basis inside the generated subspace, the orthogonal split of
R^d into that subspace and its complement, and the fundamental cell.

Conventions
-----------
* ``LatticeSpec.basis`` stores the generators as rows, shape ``(r, d)``.
* Coordinates "in the lattice frame" are coefficients with respect to the
  generators; coordinates "in the complement frame" are coefficients with
  respect to the orthonormal complement columns.
* Character phases are stored reduced mod 1 so the character law can be
  checked exactly in phase arithmetic.

All objects are frozen dataclasses holding read-only arrays; operations are
pure functions, safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotACharacter, RankDeficient

# Smallest singular value must exceed this fraction of the largest one.
RANK_RTOL = 1e-10

CHARACTER_TOL = 1e-9


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LatticeSpec:
    """Rank-r discrete subgroup of R^d given by generator rows."""

    dimension: int
    rank: int
    basis: np.ndarray  # shape (rank, dimension); row j is generator omega_j

    def __post_init__(self):
        d, r = int(self.dimension), int(self.rank)
        if d < 1:
            raise RankDeficient(f"dimension must be positive, got {d}")
        if not 0 <= r <= d:
            raise RankDeficient(f"rank must satisfy 0 <= r <= d, got r={r}, d={d}")
        b = np.asarray(self.basis, dtype=float).reshape(r, d)
        if r:
            s = np.linalg.svd(b, compute_uv=False)
            if s[-1] <= RANK_RTOL * s[0]:
                raise RankDeficient(
                    f"generators are numerically dependent (sigma_min/sigma_max = {s[-1] / s[0]:.3e})"
                )
        object.__setattr__(self, "dimension", d)
        object.__setattr__(self, "rank", r)
        object.__setattr__(self, "basis", _readonly(b))

    @classmethod
    def from_vectors(cls, vectors, dimension: int | None = None) -> "LatticeSpec":
        vecs = [np.asarray(v, dtype=float) for v in vectors]
        if dimension is None:
            if not vecs:
                raise RankDeficient("dimension required for a rank-0 subgroup")
            dimension = len(vecs[0])
        b = np.array(vecs, dtype=float).reshape(len(vecs), dimension)
        return cls(dimension=dimension, rank=len(vecs), basis=b)

    @property
    def matrix(self) -> np.ndarray:
        """Generator matrix with shape (d, r); column j is omega_j."""
        return self.basis.T


def gram_matrix(lattice: LatticeSpec) -> np.ndarray:
    """Pairwise inner products G[i, j] = <omega_i, omega_j>, shape (r, r).

    Raises ``RankDeficient`` when the generators are dependent (the matrix
    would not be positive definite).
    """
    g = lattice.basis @ lattice.basis.T
    g = 0.5 * (g + g.T)
    if lattice.rank:
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError as exc:
            raise RankDeficient("Gram matrix is not positive definite") from exc
    return g


def dual_basis(lattice: LatticeSpec) -> np.ndarray:
    """Dual generators inside the generated subspace, as rows (r, d).

    The duals satisfy <dual_i, omega_j> = delta_ij and span the same subspace
    as the generators.
    """
    g = gram_matrix(lattice)
    if lattice.rank == 0:
        return np.zeros((0, lattice.dimension))
    return np.linalg.solve(g, lattice.basis)


@dataclass(frozen=True)
class Character:
    """Unit-modulus homomorphism on the subgroup.

    ``alpha[j]`` is the phase of the j-th generator (value is exp(2*pi*i*alpha[j])),
    stored reduced to [0, 1).  ``beta`` solves G beta = alpha and ``v_chi`` is
    the vector in the generated subspace with chi(g) = exp(2*pi*i*<v_chi, g>).
    """

    alpha: np.ndarray
    beta: np.ndarray
    v_chi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", _readonly(np.asarray(self.alpha, dtype=float)))
        object.__setattr__(self, "beta", _readonly(np.asarray(self.beta, dtype=float)))
        object.__setattr__(self, "v_chi", _readonly(np.asarray(self.v_chi, dtype=float)))

    @property
    def rank(self) -> int:
        return self.alpha.shape[0]


def character_from_alpha(lattice: LatticeSpec, alpha) -> Character:
    """Build the character with given generator phases.

    Phases are reduced mod 1 first; this shifts ``v_chi`` by a dual vector and
    leaves the character values unchanged.
    """
    alpha = np.mod(np.asarray(alpha, dtype=float).reshape(lattice.rank), 1.0)
    g = gram_matrix(lattice)
    beta = np.linalg.solve(g, alpha) if lattice.rank else np.zeros(0)
    v_chi = beta @ lattice.basis if lattice.rank else np.zeros(lattice.dimension)
    pairing = lattice.basis @ v_chi if lattice.rank else np.zeros(0)
    if lattice.rank and np.max(np.abs(pairing - alpha)) > CHARACTER_TOL:
        raise NotACharacter("phase vector inconsistent with generator pairings")
    return Character(alpha=alpha, beta=beta, v_chi=v_chi)


def character_from_phase_table(lattice: LatticeSpec, table, tol: float = CHARACTER_TOL) -> Character:
    """Build a character from raw (integer coordinates, phase) pairs.

    The table must contain one entry per generator (unit coordinate vector);
    all remaining entries are validated against additivity, i.e. the phase of
    ``coords`` must equal ``alpha . coords`` mod 1.  Violations raise
    ``NotACharacter``: only genuine characters produce a nontrivial space.
    """
    r = lattice.rank
    entries = [(np.asarray(c, dtype=int).reshape(r), float(p)) for c, p in table]
    alpha = np.full(r, np.nan)
    for coords, phase in entries:
        j = _unit_index(coords)
        if j is not None:
            alpha[j] = phase
    if np.any(np.isnan(alpha)):
        raise NotACharacter("phase table must contain every generator (unit coordinate rows)")
    chi = character_from_alpha(lattice, alpha)
    for coords, phase in entries:
        gap = (chi.alpha @ coords - phase) % 1.0
        if min(gap, 1.0 - gap) > tol:
            raise NotACharacter(
                f"phase table violates additivity at coords {coords.tolist()}: "
                f"expected {float(chi.alpha @ coords) % 1.0:.12g} mod 1, got {phase:.12g}"
            )
    return chi


def _unit_index(coords: np.ndarray) -> int | None:
    nz = np.nonzero(coords)[0]
    if len(nz) == 1 and coords[nz[0]] == 1:
        return int(nz[0])
    return None


def character_eval(chi: Character, gamma_coords) -> complex | np.ndarray:
    """Value of the character at integer coordinates, |value| = 1.

    Accepts a single coordinate vector or an array of shape (..., r).  The
    phase is reduced mod 1 before exponentiating so the character law holds
    exactly in phase arithmetic.
    """
    m = np.asarray(gamma_coords, dtype=float)
    phase = np.mod(m @ chi.alpha if chi.rank else np.zeros(m.shape[:-1]), 1.0)
    return np.exp(2j * np.pi * phase)


@dataclass(frozen=True)
class SplitFrame:
    """Orthogonal split of R^d into the generated subspace and its complement.

    ``lattice_frame`` has the generators as columns (d, r); ``complement_frame``
    holds an orthonormal basis of the orthogonal complement as columns
    (d, d-r); ``projector_V`` projects onto the generated subspace.  ``gram``,
    ``gram_inv`` and ``dual_matrix`` are derived and kept for reuse.
    """

    lattice_frame: np.ndarray
    complement_frame: np.ndarray
    projector_V: np.ndarray
    gram: np.ndarray
    gram_inv: np.ndarray
    dual_matrix: np.ndarray  # (d, r), column i is the i-th dual generator

    def __post_init__(self):
        for name in ("lattice_frame", "complement_frame", "projector_V", "gram", "gram_inv", "dual_matrix"):
            object.__setattr__(self, name, _readonly(np.asarray(getattr(self, name), dtype=float)))


def split_frame(lattice: LatticeSpec) -> SplitFrame:
    """Construct the orthogonal split for a subgroup.

    The complement frame comes from the SVD of the generator matrix (the left
    singular vectors of the null space of its transpose) with a deterministic
    sign convention: the first entry of each column larger than 1e-12 in
    magnitude is made positive, so coordinates are reproducible across runs.
    """
    d, r = lattice.dimension, lattice.rank
    b = lattice.matrix  # (d, r)
    g = gram_matrix(lattice)
    if r:
        g_inv = np.linalg.inv(g)
        u, _, _ = np.linalg.svd(b, full_matrices=True)
        comp = u[:, r:]
        projector = b @ g_inv @ b.T
        dual = b @ g_inv
    else:
        g_inv = np.zeros((0, 0))
        comp = np.eye(d)
        projector = np.zeros((d, d))
        dual = np.zeros((d, 0))
    comp = comp.copy()
    for j in range(comp.shape[1]):
        col = comp[:, j]
        nz = np.nonzero(np.abs(col) > 1e-12)[0]
        if len(nz) and col[nz[0]] < 0:
            comp[:, j] = -col
    return SplitFrame(
        lattice_frame=b,
        complement_frame=comp,
        projector_V=projector,
        gram=g,
        gram_inv=g_inv,
        dual_matrix=dual,
    )


def split_point(frame: SplitFrame, x) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates of a point in the two frames.

    Returns ``(x1_coords, x2_coords)`` with shapes (..., r) and (..., d-r):
    ``x = lattice_frame @ x1_coords + complement_frame @ x2_coords`` and the
    quadratic form splits as <x, x> = x1' G x1 + |x2|^2.
    """
    x = np.asarray(x, dtype=float)
    x1 = (x @ frame.lattice_frame) @ frame.gram_inv
    x2 = x @ frame.complement_frame
    return x1, x2


def fold_to_fundamental(lattice: LatticeSpec, frame: SplitFrame, x) -> tuple[np.ndarray, np.ndarray]:
    """Unique representative in the fundamental cell plus the subtracted element.

    Returns ``(x_folded, gamma_coords)`` with ``x = x_folded + gamma_coords @ basis``
    and the lattice-frame coordinates of ``x_folded`` in [0, 1).
    """
    x = np.asarray(x, dtype=float)
    t, _ = split_point(frame, x)
    gamma = np.floor(t).astype(int)
    folded = x - gamma @ lattice.basis if lattice.rank else x.copy()
    return folded, gamma


@dataclass(frozen=True)
class FundamentalDomain:
    """Half-open basis parallelepiped in the generated subspace, crossed with
    the orthogonal complement; ``volume_lambda1`` is the cell volume
    sqrt(det G)."""

    owner: LatticeSpec
    volume_lambda1: float
    description: str = "basis parallelepiped {sum t_j omega_j : t_j in [0,1)} x orthogonal complement"


def fundamental_domain(lattice: LatticeSpec) -> FundamentalDomain:
    g = gram_matrix(lattice)
    vol = float(np.sqrt(np.linalg.det(g))) if lattice.rank else 1.0
    return FundamentalDomain(owner=lattice, volume_lambda1=vol)
