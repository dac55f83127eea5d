from concurrent.futures import ThreadPoolExecutor
from unittest.case import TestCase

from incoherent import eisenstein, whittaker
from incoherent.eisenstein import HalfPlanePoint, MULTIPLE
from incoherent.exceptions import DomainError
from incoherent.test.testutils import field, assert_close

__author__ = 'maintainers@incoherent-eisenstein.org'


class HalfPlanePointTests(TestCase):

    def test_point(self):
        mp = field(7).mp
        point = HalfPlanePoint('0.25', 2)
        self.assertEqual(complex(point), complex(0.25, 2))
        assert_close(self, mp.mpmathify(point), mp.mpc('0.25', 2), 1e-35)
        self.assertEqual(point, HalfPlanePoint(0.25, 2))
        self.assertRaises(DomainError, HalfPlanePoint, 0, 0)
        self.assertRaises(DomainError, HalfPlanePoint, 0, -1)


class CentralValueTests(TestCase):

    def test_coefficients_vanish_at_zero(self):
        for q in (7, 11):
            ctx = field(q)
            tau = ctx.mp.mpc('0.1', '0.8')
            for t in range(-50, 51):
                if t:
                    self.assertEqual(eisenstein.coefficient_product(ctx, tau, t, 0), 0, (q, t))
            self.assertEqual(eisenstein.constant_term(ctx, tau, 0), 0)

    def test_antisymmetry(self):
        for q in (7, 11):
            ctx = field(q)
            tau = ctx.mp.mpc('-0.2', '1.1')
            for s in ('0.4', '0.9'):
                s = ctx.mp.mpf(s)
                for t in range(-12, 13):
                    if t == 0:
                        total = eisenstein.constant_term(ctx, tau, s) + eisenstein.constant_term(ctx, tau, -s)
                    else:
                        total = (eisenstein.coefficient_product(ctx, tau, t, s)
                                 + eisenstein.coefficient_product(ctx, tau, t, -s))
                    self.assertLess(abs(total), 1e-8, (q, float(s), t))

    def test_derivative_against_difference_quotient(self):
        ctx = field(7)
        mp = ctx.mp
        tau = mp.mpc('0.3', '0.9')
        epsilon = mp.mpf(10) ** -12
        for t in (1, 2, 3, 7, -1, -4, 15):
            quotient = (eisenstein.coefficient_product(ctx, tau, t, epsilon)
                        - eisenstein.coefficient_product(ctx, tau, t, -epsilon)) / (2 * epsilon)
            assert_close(self, eisenstein.central_deriv_coefficient(ctx, tau, t).value, quotient, 1e-18)
        quotient = (eisenstein.constant_term(ctx, tau, epsilon) - eisenstein.constant_term(ctx, tau, -epsilon)) / (
            2 * epsilon)
        assert_close(self, eisenstein.constant_term_deriv0(ctx, tau), quotient, 1e-18)

    def test_vanishing_places(self):
        ctx = field(7)
        tau = ctx.mp.mpc(0, 1)
        for t in (1, 3, -2, 15, 45):
            coefficient = eisenstein.central_deriv_coefficient(ctx, tau, t)
            self.assertEqual(list(coefficient.vanishing_places), whittaker.vanishing_places(ctx, t))
            self.assertTrue(coefficient.is_derivative)
        self.assertEqual(eisenstein.central_deriv_coefficient(ctx, tau, 3).vanishing_place, 3)
        self.assertEqual(eisenstein.central_deriv_coefficient(ctx, tau, -2).vanishing_place, whittaker.INFINITY)
        self.assertTrue(eisenstein.central_deriv_coefficient(ctx, tau, -2).v_dependent)
        multiple = eisenstein.central_deriv_coefficient(ctx, tau, 15)
        self.assertEqual(multiple.vanishing_place, MULTIPLE)
        self.assertEqual(multiple.value, 0)

    def test_domain(self):
        ctx = field(7)
        tau = ctx.mp.mpc(0, 1)
        self.assertRaises(DomainError, eisenstein.coefficient_product, ctx, tau, 0, 1)
        self.assertRaises(DomainError, eisenstein.central_deriv_coefficient, ctx, tau, 0)
        self.assertFalse(eisenstein.eisenstein_coefficient(ctx, tau, 2, 1).is_derivative)


class DirectSumTests(TestCase):

    def test_convergence_region(self):
        ctx = field(7)
        self.assertRaises(DomainError, eisenstein.eisenstein_direct, ctx, 1j, 1, 50)
        self.assertRaises(DomainError, eisenstein.fourier_coefficients, ctx, 1, '0.5', [1])
        self.assertRaises(DomainError, eisenstein.coefficient_cutoff, 1)
        self.assertRaises(DomainError, eisenstein.eisenstein_direct, ctx, -1j, 2, 50)

    def test_cutoff(self):
        self.assertEqual(eisenstein.coefficient_cutoff(20), eisenstein.MIN_CUTOFF)
        self.assertGreater(eisenstein.coefficient_cutoff(2.5, 1e-6), eisenstein.coefficient_cutoff(3, 1e-6))
        self.assertGreater(eisenstein.coefficient_cutoff(3, 1e-8), eisenstein.coefficient_cutoff(3, 1e-6))

    def test_value_against_fourier_series(self):
        ctx = field(7)
        mp = ctx.mp
        u, v, s = mp.mpf('0.3'), mp.mpf(1), mp.mpf(3)
        series = mp.fsum(eisenstein.classical_coefficient(ctx, v, t, s) * mp.expjpi(2 * t * u) for t in range(-10, 11))
        value, bound = eisenstein.eisenstein_direct(ctx, mp.mpc(u, v), s, 300)
        self.assertLess(abs(value - series), bound)

    def test_coefficients_against_closed_forms(self):
        for q in (7, 11):
            ctx = field(q)
            for s in (2.5, 3):
                for v in (0.7, 1.3):
                    ts = [t for t in range(-4, 9) if t]
                    direct = eisenstein.fourier_coefficients(ctx, v, s, ts,
                                                             cutoff=eisenstein.coefficient_cutoff(s, 1e-7))
                    for t in ts:
                        closed = eisenstein.classical_coefficient(ctx, v, t, s)
                        self.assertLess(abs(direct[t] - closed), 1e-6, (q, s, v, t))

    def test_constant_coefficient(self):
        ctx = field(7)
        direct = eisenstein.fourier_extract(ctx, 1, 3, 0, cutoff=eisenstein.coefficient_cutoff(3, 1e-8), panels=16)
        self.assertLess(abs(direct - eisenstein.classical_coefficient(ctx, 1, 0, 3)), 1e-7)

    def test_executor_gives_same_samples(self):
        ctx = field(11)
        serial = eisenstein.fourier_coefficients(ctx, 1, 3, [1, 2, -1], cutoff=40, panels=8)
        with ThreadPoolExecutor(max_workers=4) as executor:
            parallel = eisenstein.fourier_coefficients(ctx, 1, 3, [1, 2, -1], cutoff=40, panels=8, executor=executor)
        self.assertEqual(serial, parallel)

    def test_aliasing_warning(self):
        ctx = field(7)
        with self.assertLogs('incoherent.eisenstein', level='WARNING'):
            eisenstein.fourier_extract(ctx, 1, 3, 20, cutoff=10, panels=16)
