from concurrent.futures import ThreadPoolExecutor
import random
from unittest.case import TestCase

from incoherent import cm, numerics
from incoherent.exceptions import DomainError, InvalidDiscriminantError, InvalidFieldError, PrecisionError
from incoherent.numerics import LogCombination
from incoherent.quadfield import ReducedForm
from incoherent.test.testutils import field, assert_close

__author__ = 'maintainers@incoherent-eisenstein.org'

KNOWN_PRODUCTS = {(7, 8): -11375, (7, 11): 29393, (11, 8): -40768, (19, 8): -892736}
# pairs whose plain quarter sum misses log J by log of the value
PLAIN_SUM_DEFECTS = {(7, 19): 9, (7, 20): 5, (11, 19): 4, (43, 8): 2}


class JInvariantTests(TestCase):

    def setUp(self):
        self.mp = numerics.context(128)

    def test_known_values(self):
        mp = self.mp
        assert_close(self, cm.j_invariant(mp.mpc(0, 1)), 1728, 1e-25)
        assert_close(self, cm.j_invariant(mp.mpc(-0.5, mp.sqrt(3) / 2)), 0, 1e-25)
        assert_close(self, cm.j_invariant(cm.CMPoint(ReducedForm(1, 1, 2)).tau), -3375, 1e-25)
        assert_close(self, cm.j_invariant(cm.CMPoint(ReducedForm(1, 0, 2)).tau), 8000, 1e-25)
        assert_close(self, cm.j_invariant(cm.CMPoint(ReducedForm(1, 1, 3)).tau), -32768, 1e-25)

    def test_modular_invariance(self):
        mp = self.mp
        tau = mp.mpc('0.1', '1.2')
        value = cm.j_invariant(tau, reduce=False)
        assert_close(self, cm.j_invariant(tau + 1, reduce=False), value, 1e-30, relative=True)
        assert_close(self, cm.j_invariant(-1 / tau), value, 1e-30, relative=True)
        assert_close(self, cm.j_invariant(tau / (2 * tau + 1)), value, 1e-30, relative=True)

    def test_modular_invariance_at_random_points(self):
        mp = self.mp
        generator = random.Random(7)
        tolerance = mp.mpf(2) ** (-128 + 16)
        checked = 0
        while checked < 20:
            tau = mp.mpc(generator.uniform(-0.5, 0.5), generator.uniform(0.9, 3))
            # j has its zero at the corner of the fundamental domain, where relative errors blow up
            if abs(tau) < 1.05:
                continue
            value = cm.j_invariant(tau, reduce=False)
            self.assertLess(abs(cm.j_invariant(tau + 1, reduce=False) / value - 1), tolerance, tau)
            self.assertLess(abs(cm.j_invariant(-1 / tau) / value - 1), tolerance, tau)
            checked += 1

    def test_reduction(self):
        mp = self.mp
        reduced = cm.reduce_to_fundamental_domain(mp.mpc('3.7', '0.05'))
        self.assertGreaterEqual(abs(reduced), 1)
        self.assertTrue(-0.5 <= mp.re(reduced) < 0.5)
        self.assertRaises(DomainError, cm.reduce_to_fundamental_domain, mp.mpc(0, -1))

    def test_domain(self):
        mp = self.mp
        self.assertRaises(DomainError, cm.j_invariant, mp.mpc('0.1', '0.5'), reduce=False)
        self.assertRaises(DomainError, cm.j_invariant, mp.mpc(0, -2))
        self.assertRaises(PrecisionError, cm.expansion_terms, mp.mpf('1e-4'), 128)


class SingularModuliTests(TestCase):

    def test_known_products(self):
        for (q, d), expected in sorted(KNOWN_PRODUCTS.items()):
            product = cm.singular_moduli_product(q, d)
            self.assertEqual(product.J, expected)
            self.assertLess(product.integrality_gap, 1e-20)

    def test_low_precision_is_still_integral(self):
        product = cm.singular_moduli_product(7, 8, 64)
        self.assertEqual(product.J, -11375)
        self.assertLess(product.integrality_gap, cm.INTEGRALITY_TOLERANCE)

    def test_class_number_three(self):
        product = cm.singular_moduli_product(23, 8, 256)
        self.assertLess(product.integrality_gap, 1e-20)

    def test_executor(self):
        with ThreadPoolExecutor(max_workers=2) as executor:
            product = cm.singular_moduli_product(11, 8, executor=executor)
        self.assertEqual(product.J, -40768)

    def test_validation(self):
        self.assertRaises(InvalidDiscriminantError, cm.singular_moduli_product, 7, 3)
        self.assertRaises(InvalidDiscriminantError, cm.singular_moduli_product, 7, 4)
        self.assertRaises(InvalidDiscriminantError, cm.singular_moduli_product, 7, 12)
        self.assertRaises(InvalidDiscriminantError, cm.singular_moduli_product, 7, 7)
        self.assertRaises(InvalidFieldError, cm.singular_moduli_product, 13, 8)

    def test_factorisation(self):
        factors, all_non_split = cm.factor_singular_modulus(-11375, 7, 8)
        self.assertEqual(factors, {5: 3, 7: 1, 13: 1})
        self.assertTrue(all_non_split)
        for (q, d), value in KNOWN_PRODUCTS.items():
            self.assertTrue(cm.factor_singular_modulus(value, q, d)[1], (q, d))
        self.assertRaises(DomainError, cm.factor_singular_modulus, 0, 7, 8)

    def test_split_factor_is_reported(self):
        with self.assertLogs('incoherent.cm', level='WARNING'):
            _, all_non_split = cm.factor_singular_modulus(11, 7, 8)
        self.assertFalse(all_non_split)

    def test_splits(self):
        self.assertTrue(cm.splits(-7, 2))
        self.assertFalse(cm.splits(-8, 2))
        self.assertFalse(cm.splits(-7, 7))
        self.assertTrue(cm.splits(-8, 11))
        self.assertFalse(cm.splits(-7, 3))


class GrossZagierTests(TestCase):

    def test_corrected_identity_holds(self):
        for q, d in sorted(KNOWN_PRODUCTS):
            check = cm.gross_zagier_check(field(q), d)
            self.assertLess(check.gap_corrected, 1e-12, (q, d))

    def test_plain_sum(self):
        mp = numerics.context(cm.GROSS_ZAGIER_BITS)
        for q, d in ((7, 8), (7, 11)):
            self.assertLess(cm.gross_zagier_check(field(q), d).gap, 1e-12)
        for q in (11, 19):
            check = cm.gross_zagier_check(field(q), 8)
            assert_close(self, check.gap, mp.log(2), 1e-12)

    def test_correction_repairs_the_plain_sum(self):
        mp = numerics.context(cm.GROSS_ZAGIER_BITS)
        for (q, d), defect in sorted(PLAIN_SUM_DEFECTS.items()):
            check = cm.gross_zagier_check(field(q), d)
            self.assertLess(check.gap_corrected, 1e-12, (q, d))
            assert_close(self, check.gap, mp.log(defect), 1e-12)

    def test_more_pairs(self):
        for q, d in ((7, 15), (7, 23), (11, 7), (11, 15), (19, 11), (23, 8), (23, 7), (31, 8), (19, 7), (31, 11)):
            self.assertLess(cm.gross_zagier_check(field(q), d).gap_corrected, 1e-12, (q, d))

    def test_terms(self):
        terms = cm.gross_zagier_terms(field(7), 8)
        self.assertEqual([term.n for term in terms], [-6, -4, -2, 0, 2, 4, 6])
        self.assertEqual([term.m for term in terms], [5, 10, 13, 14, 13, 10, 5])
        self.assertFalse(any(term.corrected for term in terms))
        check = cm.gross_zagier_check(field(7), 8)
        self.assertEqual(check.rhs_symbolic, LogCombination({5: 6, 7: 2, 13: 2}))
        corrected = [term for term in cm.gross_zagier_terms(field(11), 8) if term.corrected]
        self.assertEqual([(term.n, term.m) for term in corrected], [(0, 22)])
        self.assertEqual(corrected[0].coefficient, LogCombination({2: 4}))

    def test_conventions(self):
        check = cm.gross_zagier_check(field(7), 11)
        self.assertEqual(check.rhs_nonnegative_symbolic, check.rhs_symbolic)
        self.assertEqual(check.convention, cm.CONVENTION)
        check = cm.gross_zagier_check(field(7), 8)
        self.assertNotEqual(check.rhs_nonnegative_symbolic, check.rhs_symbolic)
