"""Quasi-periodic Gaussian-weighted Hilbert spaces, theta-Fock spaces, and the
Segal-Bargmann transform between them."""

from .errors import (
    DecayViolation,
    NotACharacter,
    NotConvergent,
    QuadratureNotConverged,
    RankDeficient,
    SingularMatrix,
    SpecError,
    ThetaFockError,
    TruncationFailure,
)
from .lattice import (
    Character,
    FundamentalDomain,
    LatticeSpec,
    SplitFrame,
    character_eval,
    character_from_alpha,
    character_from_phase_table,
    dual_basis,
    fold_to_fundamental,
    fundamental_domain,
    gram_matrix,
    split_frame,
    split_point,
)
from .hermite import (
    MultiIndex,
    hermite_eval,
    hermite_generating_kernel,
    hermite_norm_sq,
    hermite_nu_eval,
    index_factorial,
    index_order,
)
from .theta import ThetaParams, theta_eval, theta_eval_many, theta_modular_lhs_rhs, theta_truncation_radius
from .quadrature import (
    QuadResult,
    QuadratureSpec,
    gauss_hermite_rule,
    gauss_legendre_rule,
    gaussian_integral_exact,
    principal_sqrt_det,
    tensor_cell_hermite,
)
from .space import (
    DualIndex,
    FiniteExpansion,
    SpaceParams,
    basis_e_eval,
    basis_e_norm_sq,
    cell_bump,
    dual_vector,
    expansion_coefficient,
    fourier_coefficient,
    functional_eq_residual,
    ground_psi_eval,
    inner_product_quadrature,
    poincare_series,
)
from .fock import (
    FockParams,
    basis_phi_eval,
    basis_phi_norm_sq,
    bilinear_c,
    fock_functional_eq_residual,
    fock_inner_product_quadrature,
    hermitian_h,
)
from .bargmann import (
    TransformConfig,
    bargmann_direct,
    bargmann_theta,
    basis_image_eval,
    bilateral_sum,
    image_norm_ratio,
    kernel_a,
    kernel_gamma_sum,
)
from .specio import InputDocument, expansion_from_json, expansion_to_json, load_document

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
