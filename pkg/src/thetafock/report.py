"""Verification suite, report serialization, and report figures.

``run_verification`` executes the full invariant suite against a loaded
input document and returns one :class:`CheckResult` per check.  Each check
carries its own pinned tolerance.  Randomized checks draw from a seeded
generator, so a given (document, seed) pair reproduces the report byte for
byte.  The report path also renders matplotlib figures next to the
delimited output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bargmann as bg
from . import fock as fk
from . import space as sps
from .lattice import character_eval, dual_basis, fold_to_fundamental, gram_matrix, split_point
from .quadrature import QuadratureSpec, gauss_hermite_rule, gaussian_integral_exact, tensor_grid
from .space import DualIndex, FiniteExpansion, SpaceParams
from .theta import ThetaParams, theta_eval, theta_modular_lhs_rhs

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CheckResult:
    check_name: str
    passed: bool
    max_residual: float
    tolerance: float

    def as_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "status": "pass" if self.passed else "fail",
            "max_residual": float(self.max_residual),
            "tolerance": float(self.tolerance),
        }


def _result(name: str, residual: float, tolerance: float) -> CheckResult:
    residual = float(residual)
    return CheckResult(name, residual <= tolerance, residual, tolerance)


def _index_grid(space: SpaceParams, gamma_cut: int, k_cut: int) -> list[DualIndex]:
    import itertools

    r, m = space.lattice.rank, space.complement_dim
    gammas = itertools.product(*[range(-gamma_cut, gamma_cut + 1)] * r) if r else [()]
    out = []
    for g in gammas:
        for k in bg._multi_indices(m, k_cut):
            out.append(DualIndex(tuple(g), k))
    return out


def check_character_law(space: SpaceParams, rng: np.random.Generator, n_pairs: int = 100) -> CheckResult:
    r = space.lattice.rank
    worst = 0.0
    for _ in range(n_pairs):
        a = rng.integers(-6, 7, size=r)
        b = rng.integers(-6, 7, size=r)
        lhs = character_eval(space.chi, a + b)
        rhs = character_eval(space.chi, a) * character_eval(space.chi, b)
        worst = max(worst, abs(lhs - rhs), abs(abs(lhs) - 1.0))
    return _result("character_law", worst, 1e-12)


def check_lattice_geometry(space: SpaceParams, rng: np.random.Generator) -> CheckResult:
    lat, frame = space.lattice, space.frame
    worst = 0.0
    if lat.rank:
        duals = dual_basis(lat)
        dual_lat = type(lat)(dimension=lat.dimension, rank=lat.rank, basis=duals)
        worst = max(worst, float(np.max(np.abs(dual_basis(dual_lat) - lat.basis))))
    for _ in range(25):
        x = rng.normal(size=lat.dimension) * 2.0
        x1, x2 = split_point(frame, x)
        q = x1 @ frame.gram @ x1 if lat.rank else 0.0
        worst = max(worst, abs(x @ x - q - x2 @ x2) / (1.0 + x @ x))
        folded, _ = fold_to_fundamental(lat, frame, x)
        _, gamma2 = fold_to_fundamental(lat, frame, folded)
        worst = max(worst, float(np.max(np.abs(gamma2))) if lat.rank else 0.0)
    vol = space.domain.volume_lambda1
    det = float(np.linalg.det(gram_matrix(lat))) if lat.rank else 1.0
    worst = max(worst, abs(vol * vol - det) / abs(det))
    return _result("lattice_geometry", worst, 1e-10)


def check_gram(space: SpaceParams, gamma_cut: int = 2, k_cut: int = 3, tol: float = 1e-7) -> CheckResult:
    quad = QuadratureSpec(24, 24, 1e-8)
    indices = _index_grid(space, gamma_cut, k_cut)
    worst = 0.0
    for i, a in enumerate(indices):
        fa = lambda pts, a=a: sps.basis_e_eval(space, a, pts)
        na = sps.basis_e_norm_sq(space, a)
        for b in indices[i:]:
            fb = lambda pts, b=b: sps.basis_e_eval(space, b, pts)
            val = sps.inner_product_quadrature(space, fa, fb, quad).value
            if a == b:
                worst = max(worst, abs(val - na) / na)
            else:
                nb = sps.basis_e_norm_sq(space, b)
                worst = max(worst, abs(val) / np.sqrt(na * nb))
    return _result("gram_orthogonality", worst, tol)


def check_functional_equation_real(space: SpaceParams, rng: np.random.Generator, n_draws: int = 100) -> CheckResult:
    # Draw ranges keep nu <x + g/2, g> moderate so the exponential prefactor
    # stays well conditioned in double precision.
    lat = space.lattice
    indices = _index_grid(space, min(2, 2), min(2, 3))[:12]
    funcs = [lambda pts: sps.ground_psi_eval(space, pts)]
    funcs += [lambda pts, i=i: sps.basis_e_eval(space, i, pts) for i in indices]
    bump = sps.cell_bump(space)
    funcs.append(lambda pts: sps.poincare_series(space, bump, pts, truncation_radius=2))
    worst = 0.0
    for _ in range(n_draws):
        f = funcs[rng.integers(0, len(funcs))]
        x = rng.uniform(-0.5, 0.5, size=lat.dimension)
        g = rng.integers(-1, 2, size=lat.rank)
        worst = max(worst, sps.functional_eq_residual(space, f, x, g))
    return _result("functional_equation_real", worst, 1e-10)


def check_functional_equation_fock(space: SpaceParams, rng: np.random.Generator, n_draws: int = 50) -> CheckResult:
    fock = fk.FockParams.from_real_space(space)
    indices = _index_grid(space, 1, 2)[:9]
    worst = 0.0
    for _ in range(n_draws):
        idx = indices[rng.integers(0, len(indices))]
        f = lambda z, idx=idx: fk.basis_phi_eval(fock, idx, z)
        z = rng.uniform(-0.5, 0.5, size=space.lattice.dimension) + 1j * rng.uniform(-0.5, 0.5, size=space.lattice.dimension)
        g = rng.integers(-1, 2, size=space.lattice.rank)
        worst = max(worst, fk.fock_functional_eq_residual(fock, f, z, g))
    return _result("functional_equation_fock", worst, 1e-10)


def check_theta_reference() -> CheckResult:
    oracle = float(sum(np.exp(-np.pi * n * n) for n in range(-10, 11)))
    val = theta_eval(ThetaParams([0.0], [0.0], [0.0], [[1j]]))
    worst = abs(val - oracle)
    shifted = theta_eval(ThetaParams([0.0], [0.0], [1.0], [[1j]]))
    worst = max(worst, abs(shifted - val))
    two = theta_eval(ThetaParams([0.0] * 2, [0.0] * 2, [0.0] * 2, 1j * np.eye(2)))
    worst = max(worst, abs(two - val * val))
    return _result("theta_reference_value", worst, 1e-9)


def check_theta_modular(rng: np.random.Generator, n_draws: int = 50) -> CheckResult:
    worst = 0.0
    for _ in range(n_draws):
        r = int(rng.integers(1, 4))
        a = rng.normal(size=(r, r))
        m = a @ a.T + 0.5 * np.eye(r)
        z = rng.uniform(-0.5, 0.5, size=r) + 1j * rng.uniform(-0.3, 0.3, size=r)
        lhs, rhs = theta_modular_lhs_rhs(z, 1j * m, tolerance=1e-13)
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(lhs) + abs(rhs)))
    return _result("theta_modular_identity", worst, 1e-9)


def check_theta_self_consistency(rng: np.random.Generator, n_draws: int = 10) -> CheckResult:
    worst = 0.0
    for _ in range(n_draws):
        r = int(rng.integers(1, 3))
        a = rng.normal(size=(r, r))
        m = a @ a.T + 0.5 * np.eye(r)
        z = rng.uniform(-0.5, 0.5, size=r) + 1j * rng.uniform(-0.3, 0.3, size=r)
        tol = 1e-8
        v1 = theta_eval(ThetaParams(np.zeros(r), np.zeros(r), z, 1j * m, tolerance=tol))
        v2 = theta_eval(ThetaParams(np.zeros(r), np.zeros(r), z, 1j * m, tolerance=tol / 2.0))
        worst = max(worst, abs(v1 - v2) / tol)
    return _result("theta_truncation_self_consistency", worst, 1.0)


def check_gaussian_integral(rng: np.random.Generator, n_draws: int = 50) -> CheckResult:
    worst = 0.0
    for _ in range(n_draws):
        s = int(rng.integers(1, 4))
        q = rng.normal(size=(s, s))
        re = q @ q.T + np.eye(s)
        sym = rng.normal(size=(s, s)) * 0.3
        A = re + 1j * (sym + sym.T)
        b = rng.normal(size=s) + 1j * rng.normal(size=s)
        a = float(rng.uniform(0.5, 2.0))
        exact = gaussian_integral_exact(a, A, b)
        quad = _gauss_quad_oracle(a, A, b, n_nodes=48)
        worst = max(worst, abs(exact - quad) / abs(exact))
    return _result("gaussian_integral_closed_form", worst, 1e-8)


def _gauss_quad_oracle(a: float, A: np.ndarray, b: np.ndarray, n_nodes: int = 48) -> complex:
    """Tensor Gauss-Hermite value of the Gaussian integral, completing the
    square with the real part of the matrix."""
    s = A.shape[0]
    chol = np.linalg.cholesky(A.real)
    nodes, weights = gauss_hermite_rule(n_nodes)
    w_pts, w_w = tensor_grid([(nodes, weights)] * s)
    y = w_pts @ np.linalg.inv(chol) / np.sqrt(a)
    rest = np.exp(-a * np.einsum("ij,jk,ik->i", y, 1j * A.imag, y) + y @ b)
    jac = a ** (-s / 2.0) / np.prod(np.diag(chol))
    return complex(jac * np.sum(w_w * rest))


def check_transform_correspondence(space: SpaceParams, rng: np.random.Generator, gamma_cut: int = 2, k_cut: int = 3, n_points: int = 10) -> CheckResult:
    cfg = bg.TransformConfig.build(space, tolerance=1e-9)
    worst = 0.0
    for idx in _index_grid(space, gamma_cut, k_cut):
        f = lambda pts, idx=idx: sps.basis_e_eval(space, idx, pts)
        for _ in range(n_points):
            z = rng.uniform(-0.5, 0.5, size=space.lattice.dimension) + 1j * rng.uniform(-0.5, 0.5, size=space.lattice.dimension)
            lhs = bg.bargmann_direct(cfg, f, z).value
            rhs = bg.basis_image_eval(cfg, idx, z)
            worst = max(worst, abs(lhs - rhs) / (1.0 + abs(rhs)))
    return _result("transform_correspondence", worst, 1e-6)


def check_transform_representations(space: SpaceParams, rng: np.random.Generator, n_funcs: int = 10, n_points: int = 10) -> CheckResult:
    cfg = bg.TransformConfig.build(space, tolerance=1e-9)
    indices = _index_grid(space, 1, 2)
    worst = 0.0
    for _ in range(n_funcs):
        chosen = rng.choice(len(indices), size=min(3, len(indices)), replace=False)
        coeffs = rng.normal(size=len(chosen)) + 1j * rng.normal(size=len(chosen))
        f = FiniteExpansion(space, tuple((indices[i], c) for i, c in zip(chosen, coeffs)))
        for _ in range(n_points):
            z = rng.uniform(-0.5, 0.5, size=space.lattice.dimension) + 1j * rng.uniform(-0.5, 0.5, size=space.lattice.dimension)
            v1 = bg.bargmann_theta(cfg, f, z).value
            v2 = bg.bargmann_direct(cfg, f, z).value
            worst = max(worst, abs(v1 - v2) / (1.0 + abs(v2)))
    return _result("transform_representations", worst, 1e-6)


def check_bilateral_kernel(space: SpaceParams, rng: np.random.Generator, n_draws: int = 10) -> CheckResult:
    cfg = bg.TransformConfig.build(space, tolerance=1e-9)
    worst = 0.0
    for _ in range(n_draws):
        z = rng.uniform(-0.5, 0.5, size=space.lattice.dimension) * (1.0 + 0j)
        z += 1j * rng.uniform(-0.5, 0.5, size=space.lattice.dimension)
        z *= 0.7
        x = rng.uniform(-0.5, 0.5, size=space.lattice.dimension)
        ka = bg.kernel_a(cfg, z, x)
        bs = bg.bilateral_sum(cfg, z, x, (4, 20))
        worst = max(worst, abs(ka - bs) / abs(ka))
        worst = max(worst, abs(ka - bg.kernel_gamma_sum(cfg, z, x)) / abs(ka))
    return _result("bilateral_generating_function", worst, 1e-6)


def _random_expansion(space: SpaceParams, rng: np.random.Generator, indices: list[DualIndex], n_terms: int) -> FiniteExpansion:
    chosen = rng.choice(len(indices), size=min(n_terms, len(indices)), replace=False)
    coeffs = rng.normal(size=len(chosen)) + 1j * rng.normal(size=len(chosen))
    return FiniteExpansion(space, tuple((indices[i], c) for i, c in zip(chosen, coeffs)))


def check_expansion_roundtrip(space: SpaceParams, rng: np.random.Generator, n_draws: int = 3) -> CheckResult:
    quad = QuadratureSpec(24, 24, 1e-8)
    indices = _index_grid(space, 1, 2)
    worst = 0.0
    for _ in range(n_draws):
        f = _random_expansion(space, rng, indices, 4)
        table = dict(f.terms)
        for idx in indices:
            rec = sps.expansion_coefficient(space, f, idx, quad)
            worst = max(worst, abs(rec - table.get(idx, 0.0)))
    return _result("expansion_roundtrip", worst, 1e-7)


def check_parseval(space: SpaceParams, rng: np.random.Generator, n_draws: int = 3) -> CheckResult:
    quad = QuadratureSpec(24, 24, 1e-8)
    indices = _index_grid(space, 1, 2)
    worst = 0.0
    for _ in range(n_draws):
        f = _random_expansion(space, rng, indices, 4)
        norm_quad = sps.inner_product_quadrature(space, f, f, quad).value
        worst = max(worst, abs(norm_quad - f.norm_sq_analytic()) / f.norm_sq_analytic())
    return _result("parseval_identity", worst, 1e-6)


def check_domain_independence(space: SpaceParams, rng: np.random.Generator) -> CheckResult:
    quad = QuadratureSpec(24, 24, 1e-8)
    indices = _index_grid(space, 1, 2)[:6]
    offset = 0.3 * np.ones(space.lattice.rank)
    worst = 0.0
    for idx in indices:
        f = lambda pts, idx=idx: sps.basis_e_eval(space, idx, pts)
        v0 = sps.inner_product_quadrature(space, f, f, quad).value
        v1 = sps.inner_product_quadrature(space, f, f, quad, cell_offset=offset).value
        worst = max(worst, abs(v0 - v1) / abs(v0))
    return _result("domain_independence", worst, 1e-7)


def run_verification(space: SpaceParams, seed: int = 0) -> list[CheckResult]:
    """Full invariant suite; deterministic for a given (document, seed)."""
    rng = np.random.default_rng(seed)
    checks = [
        check_character_law(space, rng),
        check_lattice_geometry(space, rng),
        check_gram(space),
        check_functional_equation_real(space, rng),
        check_functional_equation_fock(space, rng),
        check_theta_reference(),
        check_theta_modular(rng),
        check_theta_self_consistency(rng),
        check_gaussian_integral(rng),
        check_transform_correspondence(space, rng, gamma_cut=1, k_cut=2, n_points=3),
        check_transform_representations(space, rng, n_funcs=4, n_points=4),
        check_bilateral_kernel(space, rng, n_draws=5),
        check_expansion_roundtrip(space, rng),
        check_parseval(space, rng),
        check_domain_independence(space, rng),
    ]
    return checks


def report_dict(checks: list[CheckResult], seed: int, command: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "seed": int(seed),
        "all_pass": bool(all(c.passed for c in checks)),
        "checks": [c.as_dict() for c in checks],
    }


def render_residual_figure(checks: list[CheckResult], path: str) -> None:
    """Horizontal log-scale bar chart of residuals against their tolerances."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = [c.check_name for c in checks]
    residuals = [max(c.max_residual, 1e-18) for c in checks]
    tols = [c.tolerance for c in checks]
    colors = ["#2b7a2b" if c.passed else "#b03030" for c in checks]

    fig, ax = plt.subplots(figsize=(8.0, 0.42 * len(checks) + 1.2))
    ypos = np.arange(len(checks))
    ax.barh(ypos, residuals, color=colors, height=0.6)
    ax.scatter(tols, ypos, marker="|", s=220, color="black", label="tolerance", zorder=3)
    ax.set_xscale("log")
    ax.set_yticks(ypos)
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("max residual")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={})
    plt.close(fig)


def gram_table(space: SpaceParams, gamma_cut: int = 2, k_cut: int = 3) -> tuple[list[DualIndex], np.ndarray, np.ndarray]:
    """Numeric Gram matrix of the basis grid and its analytic counterpart."""
    quad = QuadratureSpec(24, 24, 1e-8)
    indices = _index_grid(space, gamma_cut, k_cut)
    n = len(indices)
    numeric = np.zeros((n, n), dtype=complex)
    analytic = np.zeros((n, n))
    for i, a in enumerate(indices):
        analytic[i, i] = sps.basis_e_norm_sq(space, a)
        fa = lambda pts, a=a: sps.basis_e_eval(space, a, pts)
        for j in range(i, n):
            b = indices[j]
            fb = lambda pts, b=b: sps.basis_e_eval(space, b, pts)
            val = sps.inner_product_quadrature(space, fa, fb, quad).value
            numeric[i, j] = val
            numeric[j, i] = np.conj(val)
    return indices, numeric, analytic


def render_gram_figure(indices: list[DualIndex], numeric: np.ndarray, path: str) -> None:
    """Log-magnitude heatmap of the numeric Gram matrix."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    mag = np.log10(np.clip(np.abs(numeric), 1e-18, None))
    fig, ax = plt.subplots(figsize=(7.2, 6.0))
    im = ax.imshow(mag, cmap="viridis")
    fig.colorbar(im, ax=ax, label="log10 |<e_a, e_b>|")
    labels = ["g" + "".join(str(c) for c in ix.gamma_star_coords) + "k" + "".join(str(v) for v in ix.k) for ix in indices]
    step = max(1, len(labels) // 20)
    ax.set_xticks(range(0, len(labels), step))
    ax.set_xticklabels(labels[::step], rotation=90, fontsize=6)
    ax.set_yticks(range(0, len(labels), step))
    ax.set_yticklabels(labels[::step], fontsize=6)
    ax.set_title("basis Gram matrix (quadrature)")
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={})
    plt.close(fig)
