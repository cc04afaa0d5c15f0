import numpy as np
from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings
from hypothesis import strategies as st

from lab import normkit
from lab.exceptions import EigensolverFailure, NotSkewHermitian, NotUnitary
from lab.normkit import NormKind

seeds = st.integers(0, 2 ** 32 - 1)
dimensions = st.sampled_from([2, 4, 8])


class NormTestCase(SimpleTestCase):
    def test_identity_norms(self):
        self.assertAlmostEqual(normkit.norm(np.eye(4), NormKind.FROBENIUS), 2.0)
        self.assertAlmostEqual(normkit.norm(np.eye(4), NormKind.OPERATOR), 1.0)
        self.assertAlmostEqual(normkit.norm(np.eye(4), NormKind.NORMALIZED_HS), 1.0)

    def test_pythagorean_diagonal(self):
        self.assertAlmostEqual(normkit.norm(np.diag([3, 4]), 'frob'), 5.0)
        self.assertAlmostEqual(normkit.norm(np.diag([3, 4]), 'op'), 4.0)

    def test_norm_kind_names(self):
        self.assertEqual(NormKind.values, ['op', 'frob', 'hs'])
        with self.assertRaises(ValueError):
            normkit.norm(np.eye(2), 'nuclear')

    @override_settings(ASYMLAB_OP_NORM_DENSE_LIMIT=2)
    def test_iterative_operator_norm_matches_svd(self):
        a = normkit.random_matrix(6, seed=3)
        dense = normkit.operator_norm(a, dense_limit=10)
        self.assertAlmostEqual(normkit.operator_norm(a), dense, delta=1e-6 * dense)

    def test_hs_witness_breaks_submultiplicativity(self):
        a = np.diag([1.0, 0.0])
        self.assertAlmostEqual(normkit.norm(a @ a, 'hs'), 1 / np.sqrt(2))
        self.assertAlmostEqual(normkit.norm(a, 'hs') ** 2, 0.5)

    @settings(deadline=None, max_examples=50)
    @given(seeds, dimensions)
    def test_unitary_invariance(self, seed, k):
        rng = np.random.default_rng(seed)
        a = normkit.random_matrix(k, rng)
        u, v = normkit.haar_unitary(k, rng), normkit.haar_unitary(k, rng)
        for kind in NormKind:
            reference = normkit.norm(a, kind)
            self.assertLessEqual(abs(normkit.norm(u @ a @ v, kind) - reference), 1e-10 * reference)

    @settings(deadline=None, max_examples=50)
    @given(seeds, dimensions)
    def test_adjoint_and_absolute_value_norms(self, seed, k):
        a = normkit.random_matrix(k, seed)
        absolute = normkit.absolute_value(a)
        for kind in NormKind:
            reference = normkit.norm(a, kind)
            self.assertLessEqual(abs(normkit.norm(normkit.adjoint(a), kind) - reference), 1e-10 * reference)
            self.assertLessEqual(abs(normkit.norm(absolute, kind) - reference), 1e-10 * reference)

    @settings(deadline=None, max_examples=50)
    @given(seeds, dimensions)
    def test_submultiplicative_norms(self, seed, k):
        rng = np.random.default_rng(seed)
        a, b = normkit.random_matrix(k, rng), normkit.random_matrix(k, rng)
        for kind in (NormKind.OPERATOR, NormKind.FROBENIUS):
            bound = normkit.norm(a, kind) * normkit.norm(b, kind)
            self.assertLessEqual(normkit.norm(a @ b, kind), bound * (1 + 1e-10))


class UnitaryTestCase(SimpleTestCase):
    def test_certify_unitary(self):
        u = normkit.haar_unitary(5, seed=1)
        self.assertIs(normkit.certify_unitary(u), u)
        self.assertTrue(normkit.is_unitary(u))
        with self.assertRaises(NotUnitary) as context:
            normkit.certify_unitary(2 * u)
        self.assertGreater(context.exception.deviation, 1)
        with self.assertRaises(NotUnitary):
            normkit.certify_unitary(np.ones((2, 3)))
        self.assertFalse(normkit.is_unitary(np.ones((2, 2))))

    def test_haar_unitary_is_deterministic(self):
        np.testing.assert_array_equal(normkit.haar_unitary(4, seed=7), normkit.haar_unitary(4, seed=7))

    def test_haar_unitary_one_dimensional(self):
        self.assertAlmostEqual(abs(normkit.haar_unitary(1, seed=2)[0, 0]), 1.0, delta=1e-12)
        with self.assertRaises(ValueError):
            normkit.haar_unitary(0)

    def test_absolute_value(self):
        np.testing.assert_allclose(normkit.absolute_value(normkit.haar_unitary(3, seed=0)), np.eye(3), atol=1e-12)
        np.testing.assert_allclose(normkit.absolute_value(np.diag([-2, 3j])), np.diag([2, 3]), atol=1e-12)


class InvolutionTestCase(SimpleTestCase):
    def test_fixed_point(self):
        np.testing.assert_allclose(normkit.nearest_involution(np.eye(3)), np.eye(3), atol=1e-12)

    def test_tie_goes_to_plus_one(self):
        b = normkit.nearest_involution(np.array([[1j]]))
        np.testing.assert_allclose(b, [[1]], atol=1e-12)
        self.assertLessEqual(abs(b[0, 0] - 1j), abs(1 - (1j) ** 2))

    def test_third_root_goes_to_minus_one(self):
        a = np.array([[np.exp(2j * np.pi / 3)]])
        b = normkit.nearest_involution(a)
        np.testing.assert_allclose(b, [[-1]], atol=1e-12)
        self.assertAlmostEqual(abs(b[0, 0] - a[0, 0]), 1.0)

    def test_non_normal_input_fails(self):
        with self.assertRaises(EigensolverFailure):
            normkit.nearest_involution(np.array([[1.0, 1.0], [0.0, 1.0]]))

    @settings(deadline=None, max_examples=50)
    @given(seeds, dimensions)
    def test_quadclose_bound(self, seed, k):
        a = normkit.haar_unitary(k, seed)
        b = normkit.nearest_involution(a)
        identity = np.eye(k)
        np.testing.assert_array_equal(b, b.conj().T)
        self.assertLessEqual(np.linalg.norm(b @ b - identity), 1e-10)
        for kind in NormKind:
            self.assertLessEqual(normkit.norm(b - a, kind), normkit.norm(identity - a @ a, kind) + 1e-10)


class ExponentialTestCase(SimpleTestCase):
    def test_exp_of_zero(self):
        np.testing.assert_allclose(normkit.exp_skew(np.zeros((3, 3))), np.eye(3), atol=1e-14)

    def test_exp_of_i_pi(self):
        np.testing.assert_allclose(normkit.exp_skew(np.diag([1j * np.pi])), [[-1]], atol=1e-14)

    def test_rejects_non_skew(self):
        with self.assertRaises(NotSkewHermitian):
            normkit.exp_skew(np.eye(2))

    def test_skew_and_hermitian_parts(self):
        a = normkit.random_matrix(4, seed=5)
        h = normkit.hermitian_part(a)
        x = normkit.skew_part(a)
        np.testing.assert_array_equal(x.conj().T, -x)
        np.testing.assert_allclose(x + h, a, atol=1e-15)
        np.testing.assert_allclose(normkit.skew_part(h), 0, atol=1e-15)
        np.testing.assert_allclose(normkit.skew_part(x), x, atol=1e-15)

    def test_random_skew_has_requested_norm(self):
        x = normkit.random_skew(6, seed=1, frobenius=0.25)
        self.assertAlmostEqual(np.linalg.norm(x), 0.25)
        np.testing.assert_array_equal(x.conj().T, -x)

    @settings(deadline=None, max_examples=50)
    @given(seeds, dimensions, st.floats(0.0, 2.0))
    def test_exponential_bounds(self, seed, k, size):
        x = normkit.random_skew(k, seed)
        x *= size / normkit.norm(x, NormKind.OPERATOR)
        e = normkit.exp_skew(x)
        identity = np.eye(k)
        for kind in NormKind:
            length = normkit.norm(x, kind)
            self.assertLessEqual(normkit.norm(identity - e, kind), length * np.exp(length) + 1e-12)
        for kind in (NormKind.OPERATOR, NormKind.FROBENIUS):
            length = normkit.norm(x, kind)
            self.assertLessEqual(normkit.norm(e - identity - x, kind), length ** 2 * np.exp(length) + 1e-12)


class MatrixJsonTestCase(SimpleTestCase):
    def test_round_trip(self):
        u = normkit.haar_unitary(3, seed=4)
        data = normkit.matrix_to_json(u)
        self.assertEqual(data['dim'], 3)
        self.assertEqual(len(data['entries']), 9)
        np.testing.assert_array_equal(normkit.matrix_from_json(data), u)

    def test_rejects_wrong_entry_count(self):
        with self.assertRaises(ValueError):
            normkit.matrix_from_json({'dim': 2, 'entries': [[1, 0]]})
