import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from lab import words
from lab.exceptions import NoNormalFormBackend, WitnessMismatch, WordSyntaxError
from lab.groups import (Presentation, ball, bs_presentation, cyclic,
                        free_abelian, group_by_name, presentation_by_name)
from lab.words import EMPTY, Word


class PresentationTestCase(SimpleTestCase):
    def test_baumslag_solitar_relator(self):
        presentation = bs_presentation(2, 3)
        (relator,) = presentation.relators
        self.assertEqual(len(relator), 7)
        self.assertEqual(presentation.format(relator), "b' a a b a' a' a'")
        self.assertEqual(presentation.name, 'bs:2:3')

    def test_bs11_is_a_commutator(self):
        (relator,) = bs_presentation(1, 1).relators
        self.assertEqual(bs_presentation(1, 1).format(relator), "b' a b a'")

    def test_bs_rejects_zero_exponent(self):
        with self.assertRaises(ValueError):
            bs_presentation(0, 3)

    def test_from_text(self):
        presentation = Presentation.from_text('z^2', ['a', 'b'], ["a b a' b'"])
        self.assertEqual(presentation, free_abelian(2).presentation)

    def test_invalid_presentations(self):
        with self.assertRaises(ValueError):
            Presentation.from_text('dup', ['a', 'a'], [])
        with self.assertRaises(ValueError):
            Presentation('empty', ('a',), (EMPTY,))
        with self.assertRaises(ValueError):
            Presentation('Upper', ('A',), ())

    def test_named_groups(self):
        self.assertEqual(group_by_name('z^3').rank, 3)
        self.assertEqual(group_by_name('cyclic:6').m, 6)
        self.assertEqual(presentation_by_name('bs:2:3'), bs_presentation(2, 3))
        with self.assertRaises(NoNormalFormBackend):
            group_by_name('bs:2:3')
        with self.assertRaises(WordSyntaxError):
            group_by_name('heisenberg')
        with self.assertRaises(WordSyntaxError):
            group_by_name('cyclic:0')


class FreeAbelianTestCase(SimpleTestCase):
    def setUp(self):
        self.group = free_abelian(2)

    def test_multiply_adds_exponents(self):
        self.assertEqual(self.group.multiply((1, 2), (-1, 1)), (0, 3))

    def test_section(self):
        self.assertEqual(self.group.section((-2, 0)).letters, ((0, -1), (0, -1)))
        self.assertEqual(self.group.section((0, 0)), EMPTY)
        self.assertEqual(self.group.element_of(self.group.section((3, -1))), (3, -1))

    def test_section_of_inverse_is_inverse_word(self):
        for element in ball(self.group, 3).elements:
            inverse = self.group.invert(element)
            self.assertEqual(self.group.section(inverse), words.invert(self.group.section(element)))

    def test_relator_trivial_on_commuting_pair(self):
        assignment = {0: np.diag([1j, -1]), 1: np.diag([np.exp(0.3j), 1j])}
        (relator,) = self.group.presentation.relators
        np.testing.assert_allclose(words.evaluate(relator, assignment), np.eye(2), atol=1e-15)

    def test_section_evaluates_to_diagonal_representation(self):
        theta = np.array([0.3, 1.1, 2.5])
        phi = np.array([0.7, -0.4, 1.9])
        assignment = {0: np.diag(np.exp(1j * theta)), 1: np.diag(np.exp(1j * phi))}
        for x, y in ball(self.group, 3).elements:
            value = words.evaluate(self.group.section((x, y)), assignment)
            np.testing.assert_allclose(value, np.diag(np.exp(1j * (x * theta + y * phi))), atol=1e-12)

    def test_relator_witness_for_conjugated_commutator(self):
        word = words.parse_word("a a b a' a' b'", ('a', 'b'))
        witness = self.group.relator_witness(word)
        self.assertEqual(len(witness), 2)
        self.assertEqual(words.conjugation_product(witness), word)

    def test_relator_witness_rejects_nontrivial_word(self):
        with self.assertRaises(WitnessMismatch):
            self.group.relator_witness(words.parse_word('a b', ('a', 'b')))

    @given(st.lists(st.tuples(st.integers(0, 2), st.sampled_from([1, -1])), max_size=16))
    def test_relator_witness_multiplies_out(self, raw):
        group = free_abelian(3)
        word = words.reduce(raw)
        trivial = word * ~group.normal_form(group.element_of(word))
        self.assertEqual(words.conjugation_product(group.relator_witness(trivial)), trivial)


class CyclicTestCase(SimpleTestCase):
    def test_involution(self):
        group = cyclic(2)
        self.assertTrue(group.is_involution(group.generator(0)))
        self.assertFalse(group.is_involution(group.identity()))

    def test_symmetric_normal_form(self):
        group = cyclic(4)
        element = group.element_of(words.power(0, 3))
        self.assertEqual(element, -1)
        self.assertEqual(group.section(element), words.letter(0, -1))

    def test_multiply_wraps(self):
        group = cyclic(5)
        self.assertEqual(group.multiply(group.element_of(words.power(0, 4)), 1), 0)

    def test_section_of_inverse(self):
        group = cyclic(6)
        for element in ball(group, 3).elements:
            if not group.is_involution(element):
                self.assertEqual(group.section(group.invert(element)), words.invert(group.section(element)))

    def test_relator_witness(self):
        group = cyclic(6)
        witness = group.relator_witness(words.power(0, -12))
        self.assertEqual(len(witness), 2)
        self.assertEqual(words.conjugation_product(witness), words.power(0, -12))
        with self.assertRaises(WitnessMismatch):
            group.relator_witness(words.power(0, 4))

    def test_diameter_ball_is_whole_group(self):
        for m in (1, 5, 6):
            group = cyclic(m)
            self.assertEqual(len(ball(group, group.diameter)), m)
        self.assertIsNone(free_abelian(2).diameter)

    def test_section_evaluates_to_roots_of_unity(self):
        group = cyclic(6)
        roots = np.exp(2j * np.pi * np.array([1, 2, 5]) / 6)
        for element in ball(group, 3).elements:
            value = words.evaluate(group.section(element), {0: np.diag(roots)})
            np.testing.assert_allclose(value, np.diag(roots ** element), atol=1e-12)


class WindowTestCase(SimpleTestCase):
    def test_ball_sizes(self):
        self.assertEqual(len(ball(free_abelian(2), 0)), 1)
        self.assertEqual(set(ball(free_abelian(2), 1).elements), {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)})
        self.assertEqual(len(ball(free_abelian(2), 2)), 13)
        self.assertEqual(len(ball(cyclic(3), 2)), 3)
        self.assertEqual(len(ball(cyclic(6), 3)), 6)

    def test_window_closure_and_table(self):
        group = free_abelian(2)
        window = ball(group, 2)
        self.assertEqual(window.elements[window.identity_index], (0, 0))
        for i, g in enumerate(window.elements):
            self.assertEqual(window.elements[window.inverse[i]], group.invert(g))
            for j, h in enumerate(window.elements):
                product = group.multiply(g, h)
                if product in window:
                    self.assertEqual(window.elements[window.product[i, j]], product)
                else:
                    self.assertEqual(window.product[i, j], -1)

    def test_pairs_and_triples(self):
        window = ball(cyclic(6), 3)
        self.assertEqual(len(window.pairs), 36)
        self.assertEqual(len(window.triples()), 216)
        for g, h, gh in window.pairs:
            self.assertEqual(window.pairs[window.pair_position[g, h]].tolist(), [g, h, gh])

    def test_involutions_and_generators(self):
        window = ball(cyclic(6), 3)
        self.assertEqual({window.elements[i] for i in window.involutions}, {3})
        self.assertEqual(window.generator_indices, (window.index[1],))

    def test_window_requires_identity_and_inverses(self):
        from lab.groups import Window
        with self.assertRaises(ValueError):
            Window(cyclic(5), [1, -1])
        with self.assertRaises(ValueError):
            Window(cyclic(5), [0, 1])

    @settings(deadline=None)
    @given(st.integers(0, 3))
    def test_ball_is_inversion_closed(self, radius):
        group = free_abelian(2)
        window = ball(group, radius)
        for element in window.elements:
            self.assertIn(group.invert(element), window)
            self.assertLessEqual(sum(abs(x) for x in element), radius)
