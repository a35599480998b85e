#!/usr/bin/env python3
"""
Unit tests for the truncated spectral triples, their commutators and seminorms
"""

import unittest
import sys
import os
from fractions import Fraction

import numpy as np
from scipy import sparse
from scipy.linalg import expm

# Add project root to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from group_geometry import LengthFunction, SolenoidGroup, enumerate_ball
from helpers.exceptions import SpectralLabError, TruncationError
from spectral_triple import (
    BlockOperator, CliffordPair, commutator, comparison_norms, connes_commutator_norm,
    coset_block_seminorm, dirac, dn_norm, dynamics_lipschitz_check, eigenvalue_counting,
    function_preset, functional_calculus, generator_norm, leibniz_check, op_norm, op_norm_estimate,
    seminorm_bracket, spectrum, spectrum_rows, symmetric_generator, unitary_dynamics,
)
from twisted_algebra import AlgebraElement, Cocycle
from tests.oracles import dense_commutator, dense_dirac, dense_spectrum, spectral_norm

THETA = [[0, Fraction(1, 3)], [Fraction(-1, 3), 0]]


def build_triple(radius=2, d=2, dim_e=2, cocycle="skew"):
    group = SolenoidGroup(2, d)
    length = LengthFunction.standard(group)
    sigma = Cocycle.skew(group, THETA) if cocycle == "skew" else Cocycle.trivial(group)
    ball = enumerate_ball(length, radius, 10 ** 5)
    return group, length, sigma, dirac(ball, length.h_part, length.f_part, sigma, dim_e)


class TestClifford(unittest.TestCase):
    """Weyl matrices and the grading"""

    def test_anticommutation(self):
        for dim in (2, 4):
            self.assertEqual(CliffordPair(dim).anticommutator_residual(), 0.0)

    def test_grading_is_an_involution(self):
        pair = CliffordPair(2)
        np.testing.assert_allclose(pair.grading @ pair.grading, pair.identity, atol=1e-15)

    def test_odd_dimension_rejected(self):
        with self.assertRaises(ValueError):
            CliffordPair(3)


class TestBlockOperator(unittest.TestCase):
    """Blockwise storage of diagonal-in-B operators"""

    def test_apply_matches_sparse(self):
        rng = np.random.default_rng(3)
        blocks = rng.normal(size=(5, 2, 2)) + 1j * rng.normal(size=(5, 2, 2))
        op = BlockOperator(blocks)
        xi = rng.normal(size=10) + 1j * rng.normal(size=10)
        np.testing.assert_allclose(op.apply(xi), op.to_sparse() @ xi, atol=1e-12)
        self.assertAlmostEqual(op.norm(), spectral_norm(op.to_sparse()), places=10)

    def test_rejects_bad_shape(self):
        with self.assertRaises(ValueError):
            BlockOperator(np.zeros((3, 2, 3)))

    def test_empty_operator(self):
        op = BlockOperator.from_function(0, lambda i: np.eye(2), 2)
        self.assertEqual(op.norm(), 0.0)
        self.assertEqual(op.to_sparse().shape, (0, 0))

    def test_empty_operator_keeps_fibre(self):
        op = BlockOperator.from_function(0, lambda i: np.eye(4), 4)
        self.assertEqual(op.fibre, 4)
        self.assertEqual(op.blocks.shape, (0, 4, 4))

    def test_builder_must_match_fibre(self):
        with self.assertRaises(ValueError):
            BlockOperator.from_function(3, lambda i: np.eye(2), 4)


class TestTruncatedTriple(unittest.TestCase):
    """Dirac spectrum, commutators and functional calculus"""

    def setUp(self):
        self.group, self.length, self.sigma, self.t = build_triple()
        self.rng = np.random.default_rng(5)

    def test_spectrum_matches_dense(self):
        np.testing.assert_allclose(spectrum(self.t), dense_spectrum(self.t), atol=1e-10)
        self.assertEqual(len(spectrum(self.t)), self.t.size * self.t.fibre)

    def test_spectrum_multiplicity_grows_with_fibre(self):
        _, _, _, t4 = build_triple(dim_e=4)
        np.testing.assert_allclose(spectrum(t4), dense_spectrum(t4), atol=1e-10)
        self.assertEqual(len(spectrum(t4)), 2 * len(spectrum(self.t)))

    def test_spectrum_rows_are_sorted(self):
        rows = spectrum_rows(self.t)
        values = [row["eigenvalue"] for row in rows]
        self.assertEqual(values, sorted(values))
        self.assertEqual(sum(row["multiplicity"] for row in rows), self.t.size * self.t.fibre)

    def test_identity_block_is_kernel(self):
        zero_rows = [row for row in spectrum_rows(self.t) if row["eigenvalue"] == 0.0]
        self.assertEqual(len(zero_rows), 1)
        self.assertEqual(zero_rows[0]["multiplicity"], 2)

    def test_eigenvalue_counting(self):
        expected = int(np.count_nonzero(np.abs(dense_spectrum(self.t)) <= 2.3))
        self.assertEqual(eigenvalue_counting(self.t, 2.3), expected)
        with self.assertRaises(ValueError):
            eigenvalue_counting(self.t, -1)

    def test_commutator_matches_dense(self):
        f = AlgebraElement.random(self.group, self.rng, 4, 1, 2.0)
        np.testing.assert_allclose(commutator(self.t, f).toarray(), dense_commutator(self.t, f), atol=1e-12)

    def test_generator_commutator_is_bounded(self):
        for coords in (('1/2', 0), (1, 1), (0, '-3/2')):
            g = self.group.element(*coords)
            norm = spectral_norm(commutator(self.t, AlgebraElement.delta(g)))
            self.assertLessEqual(norm, generator_norm(self.t, g) + 1e-12)

    def test_seminorm_bracket_ordering(self):
        f = AlgebraElement.random(self.group, self.rng, 5, 1, 2.0)
        bracket = seminorm_bracket(self.t, f)
        self.assertLessEqual(bracket.lower, bracket.sharp_upper + 1e-12)
        self.assertLessEqual(bracket.sharp_upper, bracket.upper + 1e-12)
        self.assertEqual(bracket.size, self.t.size)

    def test_symmetric_generator_is_self_adjoint(self):
        f = symmetric_generator(self.group.element('1/2', 1), self.sigma)
        self.assertTrue(f.is_self_adjoint(self.sigma))
        C = commutator(self.t, f).toarray()
        np.testing.assert_allclose(C, -C.conj().T, atol=1e-12)

    def test_unitary_dynamics_matches_expm(self):
        U = unitary_dynamics(self.t, 0.7)
        np.testing.assert_allclose(U.to_sparse().toarray(), expm(0.7j * dense_dirac(self.t)), atol=1e-10)
        identity = U.compose(U.adjoint())
        np.testing.assert_allclose(identity.to_sparse().toarray(), np.eye(self.t.size * 2), atol=1e-12)

    def test_functional_calculus_matches_eigendecomposition(self):
        fn = function_preset("resolvent")
        values, vectors = np.linalg.eigh(dense_dirac(self.t))
        expected = vectors @ np.diag(fn(values)) @ vectors.conj().T
        np.testing.assert_allclose(functional_calculus(self.t, fn).to_sparse().toarray(), expected, atol=1e-10)

    def test_function_presets(self):
        self.assertEqual(functional_calculus(self.t, function_preset("zero")).norm(), 0.0)
        self.assertAlmostEqual(float(function_preset("gaussian")(np.array([0.0]))[0]), 1.0)
        with self.assertRaises(ValueError):
            function_preset("cubic")

    def test_dn_norm(self):
        xi = np.zeros(self.t.size * 2, dtype=complex)
        xi[0] = 1.0
        self.assertAlmostEqual(dn_norm(self.t, xi), 1.0 + self.t.block_norms[0])

    def test_dynamics_are_lipschitz_in_time(self):
        report = dynamics_lipschitz_check(self.t, self.rng, 1000)
        self.assertEqual(report.samples, 1000)
        self.assertEqual(report.violations, 0)
        self.assertTrue(report.to_dict()["passed"])


class TestEvenTriple(unittest.TestCase):
    """Grading, Clifford relations and D² on level truncations"""

    def test_clifford_relations_are_exact(self):
        pair = CliffordPair(2)
        np.testing.assert_array_equal(pair.gamma1 @ pair.gamma1, pair.identity)
        np.testing.assert_array_equal(pair.gamma2 @ pair.gamma2, pair.identity)
        np.testing.assert_array_equal(pair.gamma1 @ pair.gamma2 + pair.gamma2 @ pair.gamma1, np.zeros((2, 2)))

    def test_grading_and_square_on_levels(self):
        group = SolenoidGroup(2, 2)
        length = LengthFunction.standard(group)
        sigma = Cocycle.skew(group, THETA)
        rng = np.random.default_rng(17)
        for n in range(3):
            ball = enumerate_ball(length, 4, 10 ** 5, max_level=n)
            t = dirac(ball, length.h_part, length.f_part, sigma, level=n)
            D = t.dirac_operator().to_sparse()
            gamma = t.grading().to_sparse()
            self.assertLessEqual(abs(gamma @ D + D @ gamma).max(), 1e-12)
            squares = sparse.diags(np.repeat(t.h_values ** 2 + t.f_values ** 2, t.fibre))
            self.assertLessEqual(abs(D @ D - squares).max(), 1e-12)
            for _ in range(5):
                L = t.lambda_E(AlgebraElement.random(group, rng, 4, n, 2.0))
                self.assertLessEqual(abs(gamma @ L - L @ gamma).max(), 1e-12)


class TestSeminormDiagnostics(unittest.TestCase):
    """Comparison norms, Connes diagnostic, coset blocks and Leibniz"""

    def test_comparison_norms_are_dominated_by_dirac(self):
        group, _, _, t = build_triple()
        f = AlgebraElement.random(group, np.random.default_rng(9), 4, 1, 2.0).symmetrized(t.cocycle)
        norms = comparison_norms(t, f)
        self.assertLessEqual(norms["h"], norms["dirac"] * (1 + 1e-9) + 1e-12)
        self.assertLessEqual(norms["f"], norms["dirac"] * (1 + 1e-9) + 1e-12)

    def test_connes_norm_of_generator(self):
        group = SolenoidGroup(2)
        length = LengthFunction.standard(group)
        for coords, expected in (('3/2', 2.0), ('1/4', 4.0), (5, 5.0), ('-3/8', 8.0)):
            g = group.element(coords)
            self.assertEqual(length(g), expected)
            value = connes_commutator_norm(AlgebraElement.delta(g), length, 8, budget=10 ** 4)
            self.assertAlmostEqual(value, expected, places=10)

    def test_comparison_bracket_on_random_elements(self):
        group = SolenoidGroup(2)
        length = LengthFunction.standard(group)
        sigma = Cocycle.trivial(group)
        rng = np.random.default_rng(23)
        for n in range(3):
            t = dirac(enumerate_ball(length, 4, 10 ** 4, max_level=n), length.h_part, length.f_part, sigma, level=n)
            for _ in range(100):
                f = AlgebraElement.random(group, rng, 3, n, 4.0).symmetrized(sigma)
                norms = comparison_norms(t, f)
                bound = norms["dirac"] * (1 + 1e-9) + 1e-12
                self.assertLessEqual(max(norms["h"], norms["f"]), bound)
                self.assertLessEqual(norms["dirac"], (norms["h"] + norms["f"]) * (1 + 1e-9) + 1e-12)
                self.assertLessEqual(norms["sum"], (norms["h"] + norms["f"]) * (1 + 1e-9) + 1e-12)
                self.assertLessEqual(norms["sum"], 2 * bound)

    def test_coset_block(self):
        group = SolenoidGroup(2)
        length = LengthFunction.standard(group)
        window = enumerate_ball(length, 4, 10 ** 4)
        sigma = Cocycle.trivial(group)
        t_n = dirac(window.restricted_to_level(0), length.h_part, length.f_part, sigma, level=0)
        f = AlgebraElement.delta(group.element(1))
        inside = coset_block_seminorm(t_n, f, group.element(2))
        self.assertTrue(inside.in_subgroup)
        outside = coset_block_seminorm(t_n, f, group.element('1/2'))
        self.assertFalse(outside.in_subgroup)
        self.assertLessEqual(outside.value, outside.bound + 1e-12)

    def test_leibniz_inequality(self):
        group, length, sigma, t = build_triple(radius=1)
        _, _, _, t_pad = build_triple(radius=2)
        pairs = [
            (AlgebraElement.delta(group.element(1, 0)), AlgebraElement.delta(group.element(0, '1/2'))),
            (AlgebraElement.delta(group.element(1, 1)), AlgebraElement.delta(group.element(-1, 0), 2.0)),
        ]
        report = leibniz_check(t, t_pad, pairs)
        self.assertEqual(report.samples, 2)
        self.assertTrue(report.passed)

    def test_leibniz_rejects_small_padding(self):
        group, _, _, t = build_triple(radius=2)
        _, _, _, t_small = build_triple(radius=1)
        pairs = [(AlgebraElement.delta(group.element(1, 0)), AlgebraElement.delta(group.element(0, 1)))]
        with self.assertRaises(TruncationError) as ctx:
            leibniz_check(t, t_small, pairs)
        self.assertIsInstance(ctx.exception, SpectralLabError)


class TestNormEstimate(unittest.TestCase):
    """Certified operator norms"""

    def test_zero_matrix(self):
        estimate = op_norm_estimate(sparse.csr_matrix((4, 4)))
        self.assertEqual(estimate.method, "zero")
        self.assertEqual(estimate.upper, 0.0)

    def test_dense_path_is_exact(self):
        m = np.diag([1.0, -3.0, 2.0])
        estimate = op_norm_estimate(m)
        self.assertEqual(estimate.method, "dense-svd")
        self.assertAlmostEqual(estimate.value, 3.0)
        self.assertAlmostEqual(op_norm(sparse.csr_matrix(m)), 3.0)

    def test_iterative_path_brackets_true_norm(self):
        m = sparse.random(200, 200, density=0.05, random_state=3, format="csr")
        true = spectral_norm(m)
        estimate = op_norm_estimate(m, tol=1e-10, dense_cutoff=50)
        self.assertIn(estimate.method, ("arpack", "power"))
        self.assertLessEqual(estimate.lower, true * (1 + 1e-9))
        self.assertGreaterEqual(estimate.upper, true * (1 - 1e-9))


if __name__ == '__main__':
    unittest.main()
