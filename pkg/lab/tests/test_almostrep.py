import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from lab import normkit, words
from lab.almostrep import (AlmostRep, conjugate, defect, dist, dist_to_hom,
                           homdist_lower_bound_voiculescu, lift,
                           lift_bound_check, multiplication_defect,
                           relator_bound_check)
from lab.examples import perturbed_rep, voiculescu_pair, voiculescu_rep
from lab.exceptions import (DimensionMismatch, MissingGenerator,
                            NotAHomomorphism, NotUnitary,
                            PresentationMismatch, WitnessMismatch)
from lab.groups import ball, cyclic, free_abelian
from lab.normkit import NormKind


class AlmostRepTestCase(SimpleTestCase):
    def setUp(self):
        self.presentation = free_abelian(2).presentation

    def test_images_are_frozen(self):
        phi = voiculescu_rep(4)
        self.assertEqual(phi.dim, 4)
        with self.assertRaises(ValueError):
            phi.images[0][0, 0] = 2

    def test_rejects_wrong_generator_count(self):
        with self.assertRaises(MissingGenerator):
            AlmostRep(self.presentation, (np.eye(2),))

    def test_rejects_mixed_dimensions(self):
        with self.assertRaises(DimensionMismatch):
            AlmostRep(self.presentation, (np.eye(2), np.eye(3)))

    def test_rejects_non_unitary_image(self):
        with self.assertRaises(NotUnitary):
            AlmostRep(self.presentation, (np.eye(2), 2 * np.eye(2)))


class DefectTestCase(SimpleTestCase):
    def test_genuine_representation_has_zero_defect(self):
        phi = perturbed_rep(free_abelian(2), 5, 0.0, seed=1)
        self.assertLessEqual(defect(phi), 1e-12)

    def test_voiculescu_defects(self):
        self.assertAlmostEqual(defect(voiculescu_rep(4), NormKind.OPERATOR), np.sqrt(2), delta=1e-12)
        for n in (4, 16, 64):
            gap = abs(1 - np.exp(2j * np.pi / n))
            self.assertAlmostEqual(defect(voiculescu_rep(n), 'frob'), np.sqrt(n) * gap, delta=1e-10)
            self.assertAlmostEqual(defect(voiculescu_rep(n), 'hs'), gap, delta=1e-10)

    def test_defect_of_presentation_without_relators(self):
        phi = AlmostRep(free_abelian(1).presentation, (normkit.haar_unitary(3, seed=0),))
        self.assertEqual(defect(phi), 0.0)

    @settings(deadline=None, max_examples=25)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_defect_is_conjugation_invariant(self, seed):
        phi = perturbed_rep(free_abelian(2), 4, 0.1, seed)
        u = normkit.haar_unitary(4, seed)
        for kind in NormKind:
            self.assertAlmostEqual(defect(conjugate(phi, u), kind), defect(phi, kind), delta=1e-10)


class DistanceTestCase(SimpleTestCase):
    def setUp(self):
        self.group = free_abelian(2)
        self.phi = perturbed_rep(self.group, 4, 0.1, seed=1)
        self.psi = perturbed_rep(self.group, 4, 0.1, seed=2)
        self.chi = perturbed_rep(self.group, 4, 0.1, seed=3)

    def test_metric_properties(self):
        self.assertEqual(dist(self.phi, self.phi), 0.0)
        self.assertEqual(dist(self.phi, self.psi), dist(self.psi, self.phi))
        self.assertLessEqual(dist(self.phi, self.chi),
                             dist(self.phi, self.psi) + dist(self.psi, self.chi) + 1e-12)

    def test_mismatches(self):
        with self.assertRaises(DimensionMismatch):
            dist(self.phi, perturbed_rep(self.group, 3, 0.1, seed=1))
        with self.assertRaises(PresentationMismatch):
            dist(self.phi, perturbed_rep(free_abelian(3), 4, 0.1, seed=1))

    def test_voiculescu_against_trivial_representation(self):
        phi = voiculescu_rep(8)
        trivial = AlmostRep(phi.presentation, (np.eye(8), np.eye(8)))
        a, b = voiculescu_pair(8)
        expected = max(np.linalg.norm(a - np.eye(8)), np.linalg.norm(b - np.eye(8)))
        self.assertAlmostEqual(dist_to_hom(phi, trivial), expected, delta=1e-12)
        self.assertEqual(dist_to_hom(trivial, trivial), 0.0)

    def test_perturbation_distance_bound(self):
        eps = 0.05
        phi = perturbed_rep(self.group, 4, eps, seed=9)
        pi = perturbed_rep(self.group, 4, 0.0, seed=9)
        self.assertLessEqual(dist_to_hom(phi, pi), eps * np.exp(eps) + 1e-12)

    def test_rejects_non_homomorphism(self):
        with self.assertRaises(NotAHomomorphism):
            dist_to_hom(self.phi, voiculescu_rep(4))

    def test_voiculescu_lower_bound(self):
        self.assertAlmostEqual(homdist_lower_bound_voiculescu(4), np.sqrt(2 - np.sqrt(2)) - 1, delta=1e-12)
        self.assertGreaterEqual(homdist_lower_bound_voiculescu(512), 0.40)
        self.assertLess(homdist_lower_bound_voiculescu(10 ** 6), np.sqrt(2) - 1)
        values = [homdist_lower_bound_voiculescu(n) for n in range(3, 64)]
        self.assertEqual(values, sorted(values))
        with self.assertRaises(ValueError):
            homdist_lower_bound_voiculescu(1)


class LiftTestCase(SimpleTestCase):
    def test_lift_invariants_hold_exactly(self):
        group = free_abelian(2)
        window = ball(group, 2)
        lifted = lift(voiculescu_rep(8), group, window)
        np.testing.assert_array_equal(lifted.values[window.identity_index], np.eye(8))
        for i in range(len(window)):
            np.testing.assert_array_equal(lifted.values[window.inverse[i]], lifted.values[i].conj().T)
        self.assertEqual(lifted.repairs, {})

    def test_lift_follows_the_section(self):
        group = free_abelian(2)
        lifted = lift(voiculescu_rep(8), group, ball(group, 2))
        a, b = voiculescu_pair(8)
        np.testing.assert_allclose(lifted.value((1, 1)), a @ b, atol=1e-14)
        np.testing.assert_allclose(lifted.value((0, -2)), b.conj().T @ b.conj().T, atol=1e-14)

    def test_genuine_representation_lifts_to_itself(self):
        group = cyclic(5)
        phi = perturbed_rep(group, 3, 0.0, seed=4)
        lifted = lift(phi, group, ball(group, 2))
        for element in ball(group, 2).elements:
            expected = np.linalg.matrix_power(phi.images[0], element % 5)
            np.testing.assert_allclose(lifted.value(element), expected, atol=1e-12)

    def test_involution_is_repaired(self):
        group = cyclic(2)
        phi = perturbed_rep(group, 4, 0.01, seed=5)
        lifted = lift(phi, group, ball(group, 1))
        value = lifted.value(1)
        np.testing.assert_array_equal(value, value.conj().T)
        np.testing.assert_allclose(value @ value, np.eye(4), atol=1e-10)
        cost, bound = lifted.repairs[ball(group, 1).index[1]]
        self.assertLessEqual(cost, bound + 1e-12)
        self.assertGreater(cost, 0)

    def test_lift_rejects_foreign_map(self):
        group = cyclic(5)
        with self.assertRaises(PresentationMismatch):
            lift(voiculescu_rep(4), group, ball(group, 2))

    def test_multiplication_defect_of_genuine_lift(self):
        group = cyclic(6)
        window = ball(group, 3)
        lifted = lift(perturbed_rep(group, 4, 0.0, seed=2), group, window)
        self.assertLessEqual(multiplication_defect(lifted.values, window), 1e-12)


class RelatorBoundTestCase(SimpleTestCase):
    def setUp(self):
        self.group = free_abelian(2)
        self.word = words.parse_word("a a b a' a' b'", ('a', 'b'))

    def test_defining_relator(self):
        phi = voiculescu_rep(16)
        (relator,) = phi.presentation.relators
        result = relator_bound_check(phi, relator, [(words.EMPTY, relator, 1)])
        self.assertTrue(result.ok)
        self.assertAlmostEqual(result.lhs, result.bound, delta=1e-12)

    def test_conjugated_commutator_on_voiculescu_pair(self):
        phi = voiculescu_rep(16)
        result = relator_bound_check(phi, self.word, self.group.relator_witness(self.word))
        self.assertTrue(result.ok)
        self.assertAlmostEqual(result.bound, 2 * defect(phi), delta=1e-12)

    def test_defect_free_input(self):
        phi = perturbed_rep(self.group, 3, 0.0, seed=0)
        result = relator_bound_check(phi, self.word, self.group.relator_witness(self.word))
        self.assertLessEqual(result.lhs, 1e-10)

    def test_wrong_witness(self):
        (relator,) = self.group.presentation.relators
        with self.assertRaises(WitnessMismatch):
            relator_bound_check(voiculescu_rep(4), self.word, [(words.EMPTY, relator, 1)])

    def test_lift_bound_on_windows(self):
        window = ball(self.group, 2)
        for phi in (voiculescu_rep(8), perturbed_rep(self.group, 4, 0.05, seed=3)):
            result = lift_bound_check(phi, self.group, window)
            self.assertTrue(result.ok)
            self.assertGreater(result.checked, 0)
            self.assertGreaterEqual(result.max_constant, 1)
