from unittest.case import TestCase

from incoherent import whittaker
from incoherent.exceptions import DomainError, SplitPrimeError
from incoherent.test.testutils import field, assert_close
from incoherent.whittaker import INFINITY

__author__ = 'maintainers@incoherent-eisenstein.org'


class LocalSignTests(TestCase):

    def test_product_formula(self):
        for q in (7, 11, 23):
            ctx = field(q)
            for t in range(-300, 301):
                if t == 0:
                    continue
                signs = whittaker.local_signs(ctx, t)
                product = 1
                for sign in signs.values():
                    product *= sign
                self.assertEqual(product, 1, (q, t))

    def test_odd_number_of_vanishing_places(self):
        for q in (7, 11, 23):
            ctx = field(q)
            for t in range(-300, 301):
                if t:
                    self.assertEqual(len(whittaker.vanishing_places(ctx, t)) % 2, 1, (q, t))

    def test_examples(self):
        ctx = field(7)
        self.assertEqual(whittaker.vanishing_places(ctx, 1), [7])
        self.assertEqual(whittaker.vanishing_places(ctx, 3), [3])
        self.assertEqual(whittaker.vanishing_places(ctx, -1), [INFINITY])
        self.assertEqual(whittaker.vanishing_places(ctx, 15), [7, 3, 5])
        self.assertEqual(whittaker.chi_q(ctx, 14), 1)
        self.assertEqual(whittaker.chi_q(ctx, -7), -1)
        self.assertRaises(DomainError, whittaker.chi_q, ctx, 0)

    def test_vanishing_factors(self):
        for q in (7, 11):
            ctx = field(q)
            tau = ctx.mp.mpc('0.2', '1.3')
            for t in range(-40, 41):
                if t == 0:
                    continue
                places = whittaker.vanishing_places(ctx, t)
                for factor in whittaker.local_factors(ctx, tau, t):
                    self.assertEqual(factor.vanishes_at_0(), factor.place in places, (q, t, factor.place))


class FiniteFactorTests(TestCase):

    def setUp(self):
        self.ctx = field(7)
        self.mp = self.ctx.mp

    def test_values_at_zero(self):
        self.assertEqual(whittaker.finite_factor(self.ctx, 2, 8, 0), 4)
        self.assertEqual(whittaker.finite_factor(self.ctx, 3, 9, 0), 1)
        self.assertEqual(whittaker.finite_factor(self.ctx, 3, 27, 0), 0)
        self.assertEqual(whittaker.finite_factor(self.ctx, 5, 10, 0), 0)

    def test_polynomial(self):
        s = self.mp.mpf('0.7')
        x = 2 ** -s
        assert_close(self, whittaker.finite_factor(self.ctx, 2, 12, s), 1 + x + x * x, 1e-35)
        x = -(3 ** -s)
        assert_close(self, whittaker.finite_factor(self.ctx, 3, 6, s), 1 + x, 1e-35)

    def test_derivative(self):
        epsilon = self.mp.mpf(10) ** -12
        for p, t in ((3, 3), (3, 54), (5, 125), (3, 3 ** 5 * 2)):
            quotient = (whittaker.finite_factor(self.ctx, p, t, epsilon)
                        - whittaker.finite_factor(self.ctx, p, t, -epsilon)) / (2 * epsilon)
            assert_close(self, whittaker.finite_factor_deriv0(self.ctx, p, t), quotient, 1e-18)
            assert_close(self, whittaker.finite_local_factor(self.ctx, p, t).deriv_at_0, quotient, 1e-18)

    def test_derivative_domain(self):
        self.assertRaises(SplitPrimeError, whittaker.finite_factor_deriv0, self.ctx, 2, 2)
        self.assertRaises(DomainError, whittaker.finite_factor_deriv0, self.ctx, 3, 9)
        self.assertRaises(DomainError, whittaker.finite_factor, self.ctx, 7, 7, 1)
        self.assertRaises(DomainError, whittaker.finite_factor, self.ctx, 4, 8, 1)
        self.assertRaises(DomainError, whittaker.finite_factor, self.ctx, 3, 0, 1)

    def test_raw_factor(self):
        factor = whittaker.finite_local_factor(self.ctx, 2, 4)
        s = self.mp.mpf('1.25')
        assert_close(self, factor.raw(s) * factor.local_l_factor(s), factor.value(s), 1e-35)
        assert_close(self, factor.local_l_factor(s), 1 / (1 - 2 ** (-s - 1)), 1e-35)


class RamifiedFactorTests(TestCase):

    def setUp(self):
        self.ctx = field(11)
        self.mp = self.ctx.mp

    def test_constant(self):
        assert_close(self, whittaker.c_q(self.ctx), 1j / self.mp.sqrt(11), 1e-35)
        assert_close(self, whittaker.q_factor(self.ctx, 0, 2), whittaker.c_q(self.ctx), 1e-35)

    def test_values(self):
        # chi_q(3) = 1 and chi_q(2) = -1 for q = 11
        self.assertEqual(whittaker.q_factor(self.ctx, 3, 0), 0)
        assert_close(self, whittaker.q_factor(self.ctx, 2, 0), 2 * whittaker.c_q(self.ctx), 1e-35)
        s = self.mp.mpf(2)
        assert_close(self, whittaker.q_factor(self.ctx, 33, s), (1 - self.mp.mpf(11) ** -4) * whittaker.c_q(self.ctx),
                     1e-35)

    def test_derivative(self):
        epsilon = self.mp.mpf(10) ** -12
        for t in (1, 3, 2, 11, -11, 363):
            quotient = (whittaker.q_factor(self.ctx, t, epsilon) - whittaker.q_factor(self.ctx, t, -epsilon)) / (
                2 * epsilon)
            assert_close(self, whittaker.q_factor_deriv0(self.ctx, t), quotient, 1e-18)
        self.assertRaises(DomainError, whittaker.q_factor_deriv0, self.ctx, 0)

    def test_bounded_by_twice_the_constant(self):
        for t in range(-200, 201):
            for s in (0, '0.25', 1, 3, 10):
                ratio = abs(whittaker.q_factor(self.ctx, t, self.mp.mpf(s)) / whittaker.c_q(self.ctx))
                self.assertLessEqual(ratio, 2, (t, s))

    def test_tends_to_the_constant_for_high_q_order(self):
        # chi_q(11^20) = 1 and chi_q(2 * 11^20) = -1
        bound = 2 * self.mp.mpf(11) ** -20
        for t in (11 ** 20, 2 * 11 ** 20, -11 ** 20):
            gap = abs(whittaker.q_factor(self.ctx, t, 1) - whittaker.c_q(self.ctx))
            self.assertLessEqual(gap, bound, t)
            assert_close(self, gap, self.mp.mpf(11) ** -21 / self.mp.sqrt(11), 1e-35)


class ArchimedeanFactorTests(TestCase):

    def setUp(self):
        self.mp = field(7).mp
        self.tau = self.mp.mpc('0.3', '0.9')

    def test_closed_form_against_quadrature(self):
        for s in ('0.5', '1', '2'):
            for t in (-3, -1, 1, 2, 5):
                s_value = self.mp.mpf(s)
                closed = whittaker.arch_factor(self.tau, t, s_value)
                oracle = whittaker.arch_factor_quadrature(self.tau, t, s_value)
                assert_close(self, closed, oracle, 1e-10, relative=True)

    def test_constant_index_against_quadrature(self):
        for s in ('0.5', '2.5'):
            s_value = self.mp.mpf(s)
            assert_close(self, whittaker.arch_factor(self.tau, 0, s_value),
                         whittaker.arch_factor_quadrature(self.tau, 0, s_value), 1e-10, relative=True)

    def test_values_at_zero(self):
        v = self.mp.im(self.tau)
        assert_close(self, whittaker.arch_factor(self.tau, 2, 0),
                     2j * self.mp.sqrt(v) * self.mp.expjpi(4 * self.tau), 1e-35)
        assert_close(self, whittaker.arch_factor(self.tau, 0, 0), 1j * self.mp.sqrt(v), 1e-35)
        self.assertEqual(whittaker.arch_factor(self.tau, -2, 0), 0)

    def test_continuous_at_zero(self):
        tiny = self.mp.mpf(10) ** -25
        assert_close(self, whittaker.arch_factor(self.tau, 3, tiny), whittaker.arch_factor(self.tau, 3, 0), 1e-20)

    def test_derivative_against_quadrature(self):
        s = self.mp.mpf(10) ** -4
        for t in (-1, -3):
            quotient = whittaker.arch_factor_quadrature(self.tau, t, s) / s
            assert_close(self, whittaker.arch_factor_deriv0(self.tau, t), quotient, 1e-3, relative=True)

    def test_derivative_against_closed_form(self):
        epsilon = self.mp.mpf(10) ** -12
        for t in (-1, -4):
            quotient = (whittaker.arch_factor(self.tau, t, epsilon)
                        - whittaker.arch_factor(self.tau, t, -epsilon)) / (2 * epsilon)
            assert_close(self, whittaker.arch_local_factor(self.tau, t).deriv_at_0, quotient, 1e-15, relative=True)

    def test_domain(self):
        self.assertRaises(DomainError, whittaker.arch_factor_deriv0, self.tau, 1)
        self.assertRaises(DomainError, whittaker.arch_factor_quadrature, self.tau, 1, 0)
        self.assertRaises(DomainError, whittaker.arch_factor, self.mp.mpc(0, -1), 1, 1)


class LocalFactorListTests(TestCase):

    def test_order(self):
        ctx = field(7)
        factors = whittaker.local_factors(ctx, ctx.mp.mpc(0, 1), 2 * 3 * 5 * 7)
        self.assertEqual([factor.place for factor in factors], [INFINITY, 7, 2, 3, 5])
        self.assertRaises(DomainError, whittaker.local_factors, ctx, ctx.mp.mpc(0, 1), 0)
