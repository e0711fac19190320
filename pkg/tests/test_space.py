import numpy as np
import pytest

import thetafock as tf

QUAD = tf.QuadratureSpec(24, 24, 1e-8)


def make_space(rows, alpha=None, nu=1.0, d=2):
    if rows:
        lattice = tf.LatticeSpec.from_vectors(rows, dimension=d)
    else:
        lattice = tf.LatticeSpec(dimension=d, rank=0, basis=np.zeros((0, d)))
    return tf.SpaceParams.build(lattice, alpha=alpha, nu=nu)


class TestDualVector:
    def test_pairs_integrally_with_generators(self):
        rng = np.random.default_rng(30)
        lattice = tf.LatticeSpec(dimension=3, rank=2, basis=rng.normal(size=(2, 3)))
        sp = tf.SpaceParams.build(lattice, alpha=[0.1, 0.9], nu=1.0)
        for coords in ([1, 0], [2, -3], [-1, -1]):
            gs = tf.dual_vector(sp, coords)
            pairings = lattice.basis @ gs
            assert np.max(np.abs(pairings - np.round(pairings))) < 1e-10
            # stays inside the generated subspace
            np.testing.assert_allclose(sp.frame.projector_V @ gs, gs, atol=1e-12)


class TestGroundFunction:
    def test_complement_point_is_one(self):
        sp = make_space([[1.0, 0.0]], [0.3])
        assert tf.ground_psi_eval(sp, np.array([0.0, 2.7])) == pytest.approx(1.0)

    def test_trivial_character_real_positive(self):
        sp = make_space([[1.0, 0.0]], [0.0])
        val = tf.ground_psi_eval(sp, np.array([0.8, -0.1]))
        assert val.imag == pytest.approx(0.0, abs=1e-15)
        assert val.real == pytest.approx(np.exp(0.5 * 0.64))

    def test_quarter_phase(self):
        sp = make_space([[1.0, 0.0]], [0.25])
        val = tf.ground_psi_eval(sp, np.array([1.0, 0.0]))
        assert val == pytest.approx(1j * np.exp(0.5))


class TestBasisElements:
    def test_ground_case(self):
        sp = make_space([[1.0, 0.0]], [0.0], nu=2.0)
        idx = tf.DualIndex((0,), (0,))
        x = np.array([0.4, 1.1])
        assert tf.basis_e_eval(sp, idx, x) == pytest.approx(np.exp(0.16))

    def test_origin_gives_hermite_value(self):
        sp = make_space([[1.0, 0.0]], [0.0])
        idx = tf.DualIndex((1,), (2,))
        # H_2(0) = -2
        assert tf.basis_e_eval(sp, idx, np.zeros(2)) == pytest.approx(-2.0)

    def test_substitution_example(self):
        sp = make_space([[1.0, 0.0]], [0.0])
        idx = tf.DualIndex((1,), (1,))
        val = tf.basis_e_eval(sp, idx, np.array([0.5, 0.3]))
        assert val == pytest.approx(-0.6 * np.exp(0.125))

    def test_norm_examples(self):
        sp1 = make_space([[1.0, 0.0]], [0.0])
        assert tf.basis_e_norm_sq(sp1, tf.DualIndex((0,), (0,))) == pytest.approx(np.sqrt(np.pi))
        sp2 = make_space([[2.0, 0.0]], [0.0])
        assert tf.basis_e_norm_sq(sp2, tf.DualIndex((0,), (1,))) == pytest.approx(4.0 * np.sqrt(np.pi))

    def test_norm_full_rank(self):
        sp = make_space([[1.0, 1.0], [1.0, -1.0]], [0.0, 0.0])
        assert tf.basis_e_norm_sq(sp, tf.DualIndex((2, -1), ())) == pytest.approx(2.0)


class TestInnerProduct:
    def test_ground_norm(self):
        sp = make_space([[1.0, 0.0]], [0.0])
        idx = tf.DualIndex((0,), (0,))
        f = lambda pts: tf.basis_e_eval(sp, idx, pts)
        val, _ = tf.inner_product_quadrature(sp, f, f, QUAD)
        assert val == pytest.approx(np.sqrt(np.pi), rel=1e-8)

    def test_distinct_elements_orthogonal(self):
        sp = make_space([[1.0, 0.0]], [0.2], nu=2.0)
        fa = lambda pts: tf.basis_e_eval(sp, tf.DualIndex((1,), (0,)), pts)
        fb = lambda pts: tf.basis_e_eval(sp, tf.DualIndex((-1,), (2,)), pts)
        val, _ = tf.inner_product_quadrature(sp, fa, fb, QUAD)
        assert abs(val) < 1e-8

    def test_zero_function(self):
        sp = make_space([[1.0, 0.0]], [0.0])
        zero = lambda pts: np.zeros(pts.shape[0], dtype=complex)
        val, _ = tf.inner_product_quadrature(sp, zero, zero, QUAD)
        assert val == 0.0

    def test_gram_diagonal(self):
        sp = make_space([[1.0, 0.0]], [0.5], nu=2.0 * np.pi)
        indices = [tf.DualIndex((g,), (k,)) for g in (-2, -1, 0, 1, 2) for k in (0, 1, 2, 3)]
        for i, a in enumerate(indices):
            fa = lambda pts, a=a: tf.basis_e_eval(sp, a, pts)
            na = tf.basis_e_norm_sq(sp, a)
            val, _ = tf.inner_product_quadrature(sp, fa, fa, QUAD)
            assert abs(val - na) <= 1e-7 * na
            for b in indices[i + 1 :]:
                fb = lambda pts, b=b: tf.basis_e_eval(sp, b, pts)
                cross, _ = tf.inner_product_quadrature(sp, fa, fb, QUAD)
                assert abs(cross) <= 1e-7 * np.sqrt(na * tf.basis_e_norm_sq(sp, b))


class TestFunctionalEquation:
    def test_zero_shift_exact(self):
        sp = make_space([[1.0, 0.0]], [0.3])
        f = lambda pts: tf.ground_psi_eval(sp, pts)
        assert tf.functional_eq_residual(sp, f, np.array([0.3, -0.2]), [0]) == 0.0

    def test_ground_function(self):
        rng = np.random.default_rng(31)
        sp = make_space([[1.0, 0.0]], [0.37])
        f = lambda pts: tf.ground_psi_eval(sp, pts)
        for _ in range(50):
            x = rng.uniform(-1, 1, size=2)
            g = rng.integers(-2, 3, size=1)
            assert tf.functional_eq_residual(sp, f, x, g) <= 1e-10

    def test_basis_elements(self):
        rng = np.random.default_rng(32)
        sp = make_space([[2.0, 0.0]], [0.5])
        for g_star in (-2, 0, 1):
            for k in (0, 2):
                f = lambda pts: tf.basis_e_eval(sp, tf.DualIndex((g_star,), (k,)), pts)
                for _ in range(25):
                    x = rng.uniform(-0.8, 0.8, size=2)
                    g = rng.integers(-1, 2, size=1)
                    assert tf.functional_eq_residual(sp, f, x, g) <= 1e-10


class TestPoincareSeries:
    def test_reproduces_seed_inside_cell(self):
        sp = make_space([[1.0, 0.0]], [0.3], nu=1.5)
        bump = tf.cell_bump(sp)
        x = np.array([0.4, 0.7])
        val = tf.poincare_series(sp, bump, x, truncation_radius=3)
        assert val == pytest.approx(bump(x[None, :])[0], rel=1e-14)

    def test_zero_seed(self):
        sp = make_space([[1.0, 0.0]], [0.0])
        zero = lambda pts: np.zeros(pts.shape[0])
        assert tf.poincare_series(sp, zero, np.array([0.2, 0.0]), 2) == 0.0

    def test_satisfies_functional_equation(self):
        rng = np.random.default_rng(33)
        sp = make_space([[1.0, 0.0]], [0.25], nu=1.0)
        bump = tf.cell_bump(sp)
        series = lambda pts: tf.poincare_series(sp, bump, pts, truncation_radius=3)
        for _ in range(25):
            # interior points with margin so the truncated sum is exact
            x = np.array([rng.uniform(0.15, 0.85), rng.uniform(-1.0, 1.0)])
            g = rng.integers(-2, 3, size=1)
            assert tf.functional_eq_residual(sp, series, x, g) <= 1e-10


class TestFourierCoefficients:
    def test_basis_element_recovers_hermite_factor(self):
        sp = make_space([[1.0, 0.0]], [0.3], nu=2.0)
        idx = tf.DualIndex((1,), (2,))
        f = lambda pts: tf.basis_e_eval(sp, idx, pts)
        x2 = np.array([[0.6], [-0.4]])
        vals = tf.fourier_coefficient(sp, f, (1,), x2, QUAD)
        np.testing.assert_allclose(vals, tf.hermite_nu_eval(2.0, (2,), x2), rtol=1e-10)
        other = tf.fourier_coefficient(sp, f, (0,), x2, QUAD)
        np.testing.assert_allclose(other, 0.0, atol=1e-12)

    def test_ground_function_is_delta(self):
        sp = make_space([[1.0, 0.0]], [0.3])
        f = lambda pts: tf.ground_psi_eval(sp, pts)
        a0 = tf.fourier_coefficient(sp, f, (0,), np.array([0.2]), QUAD)
        assert a0 == pytest.approx(1.0, rel=1e-12)
        a1 = tf.fourier_coefficient(sp, f, (1,), np.array([0.2]), QUAD)
        assert abs(a1) < 1e-12

    def test_zero_function(self):
        sp = make_space([[1.0, 0.0]], [0.0])
        zero = lambda pts: np.zeros(pts.shape[0], dtype=complex)
        assert tf.fourier_coefficient(sp, zero, (0,), np.array([0.1]), QUAD) == 0.0

    def test_non_member_rejected(self):
        sp = make_space([[1.0, 0.0]], [0.0])
        not_member = lambda pts: np.asarray(pts[:, 0], dtype=complex)
        with pytest.raises(ValueError):
            tf.fourier_coefficient(sp, not_member, (0,), np.array([0.0]), QUAD)


class TestExpansionRoundTrip:
    def test_coefficients_recovered(self):
        rng = np.random.default_rng(34)
        sp = make_space([[1.0, 0.0]], [0.2], nu=1.0)
        indices = [tf.DualIndex((g,), (k,)) for g in (-1, 0, 1) for k in (0, 1, 2)]
        for _ in range(3):
            chosen = rng.choice(len(indices), size=4, replace=False)
            coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)
            f = tf.FiniteExpansion(sp, tuple((indices[i], c) for i, c in zip(chosen, coeffs)))
            table = dict(f.terms)
            for idx in indices:
                rec = tf.expansion_coefficient(sp, f, idx, QUAD)
                assert abs(rec - table.get(idx, 0.0)) <= 1e-7

    def test_parseval(self):
        rng = np.random.default_rng(35)
        sp = make_space([[1.0, 0.0]], [0.4], nu=2.0)
        indices = [tf.DualIndex((g,), (k,)) for g in (-1, 0, 1) for k in (0, 1, 2)]
        for _ in range(5):
            chosen = rng.choice(len(indices), size=4, replace=False)
            coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)
            f = tf.FiniteExpansion(sp, tuple((indices[i], c) for i, c in zip(chosen, coeffs)))
            quad_norm, _ = tf.inner_product_quadrature(sp, f, f, QUAD)
            assert quad_norm.real == pytest.approx(f.norm_sq_analytic(), rel=1e-6)
            assert abs(quad_norm.imag) < 1e-9 * f.norm_sq_analytic()

    def test_serialization_round_trip(self):
        sp = make_space([[1.0, 0.0]], [0.1])
        f = tf.FiniteExpansion(sp, ((tf.DualIndex((1,), (0,)), 1.5 - 0.5j), (tf.DualIndex((0,), (2,)), 2.0j)))
        back = tf.expansion_from_json(sp, tf.expansion_to_json(f))
        assert back.terms == f.terms


class TestDomainIndependence:
    def test_shifted_cell(self):
        sp = make_space([[1.0, 0.0]], [0.5], nu=2.0)
        idx = tf.DualIndex((1,), (1,))
        f = lambda pts: tf.basis_e_eval(sp, idx, pts)
        v0, _ = tf.inner_product_quadrature(sp, f, f, QUAD)
        v1, _ = tf.inner_product_quadrature(sp, f, f, QUAD, cell_offset=[0.3])
        assert abs(v0 - v1) <= 1e-7 * abs(v0)

    def test_sheared_basis_same_subgroup(self):
        # same subgroup Z^2 via a sheared generator pair: inner products over
        # the sheared cell agree with the canonical ones
        sp_a = make_space([[1.0, 0.0], [0.0, 1.0]], [0.25, 0.5], nu=1.0)
        lattice_b = tf.LatticeSpec.from_vectors([[1.0, 0.0], [1.0, 1.0]])
        chi_b = tf.character_from_alpha(lattice_b, [0.25, 0.75])  # same character on Z^2
        sp_b = tf.SpaceParams.build(lattice_b, alpha=chi_b, nu=1.0)
        # identical character as functions on the subgroup
        for coords_a, coords_b in [((1, 0), (1, 0)), ((0, 1), (-1, 1)), ((2, 3), (-1, 3))]:
            assert tf.character_eval(sp_a.chi, coords_a) == pytest.approx(tf.character_eval(sp_b.chi, coords_b))
        idx = tf.DualIndex((1, 0), ())
        f = lambda pts: tf.basis_e_eval(sp_a, idx, pts)
        va, _ = tf.inner_product_quadrature(sp_a, f, f, QUAD)
        vb, _ = tf.inner_product_quadrature(sp_b, f, f, QUAD)
        assert va == pytest.approx(vb, rel=1e-9)


class TestEdgeRanks:
    def test_rank_zero_reduces_to_hermite_space(self):
        sp = make_space([], nu=1.0, d=2)
        idx = tf.DualIndex((), (1, 2))
        f = lambda pts: tf.basis_e_eval(sp, idx, pts)
        val, _ = tf.inner_product_quadrature(sp, f, f, QUAD)
        assert val == pytest.approx(tf.basis_e_norm_sq(sp, idx), rel=1e-10)
        assert tf.basis_e_norm_sq(sp, idx) == pytest.approx(np.pi * 2.0 * 8.0)

    def test_full_rank_no_complement(self):
        sp = make_space([[1.0, 1.0], [1.0, -1.0]], [0.3, 0.6], nu=1.0)
        idx = tf.DualIndex((1, -1), ())
        f = lambda pts: tf.basis_e_eval(sp, idx, pts)
        val, _ = tf.inner_product_quadrature(sp, f, f, QUAD)
        assert val == pytest.approx(2.0, rel=1e-10)
