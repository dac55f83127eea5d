"""
The invariant suite behind ``incoherent selftest``. Each check returns ``(passed, detail)``; ``quick`` shrinks
the ranges so the whole suite finishes in seconds.
"""
from math import gcd
import logging
import math
import random

from sympy import factorint

from incoherent import numerics, whittaker
from incoherent.cm import gross_zagier_check, j_invariant
from incoherent.cycles import deg_z_closed_symbolic, deg_z_lattice_symbolic, arakelov_finite, arakelov_archimedean
from incoherent.eisenstein import (coefficient_product, constant_term, classical_coefficient, fourier_coefficients,
                                   coefficient_cutoff)
from incoherent.exceptions import ConvergenceError, PrecisionError, DomainError
from incoherent.phi import (PhiExpansion, coeff_positive_symbolic, mellin_closed, inert_dirichlet_sum,
                            inert_dirichlet_closed, ramified_dirichlet_sum, ramified_dirichlet_closed,
                            dirichlet_tail_bound)
from incoherent.quadfield import FieldContext, rho_table, rho_brute, dedekind_zeta

__author__ = 'maintainers@incoherent-eisenstein.org'

log = logging.getLogger(__name__)

FIELDS = (7, 11, 19, 31)
QUICK_FIELDS = (7, 11)
GROSS_ZAGIER_PAIRS = ((7, 8), (7, 11), (11, 8), (19, 8))
ORACLE_CUTOFF_TOLERANCE = 1e-7
BETA1_MELLIN_GRID = (1.2, 1.5, 2, 2.5, 3)
DEDEKIND_TAIL_CONSTANT = 3
DEGENERATION_ORDER = 20
J_INVARIANCE_SEED = 20
ARCHIMEDEAN_STEP = '1e-4'


def _random_fundamental_point(mp, generator):
    """A point of the fundamental domain with |tau| >= 1.05 and Im(tau) <= 3, away from the zero of j"""
    while True:
        tau = mp.mpc(generator.uniform(-0.5, 0.5), generator.uniform(0.9, 3))
        if abs(tau) >= 1.05:
            return tau


class Checks(object):
    """
    Runs the invariants for fields built at ``precision_bits``. Field contexts are shared between checks.
    """

    def __init__(self, quick=False, precision_bits=numerics.DEFAULT_PRECISION_BITS, executor=None):
        self.quick = quick
        self.precision_bits = precision_bits
        self.executor = executor
        self._fields = {}

    def field(self, q):
        if q not in self._fields:
            self._fields[q] = FieldContext(q, self.precision_bits)
        return self._fields[q]

    @property
    def qs(self):
        return QUICK_FIELDS if self.quick else FIELDS

    def rho_oracle(self):
        nmax = 300 if self.quick else 5000
        for q in self.qs:
            ctx = self.field(q)
            table = rho_table(ctx, nmax)
            for n in range(1, nmax + 1):
                if table[n] != rho_brute(ctx, n):
                    return False, "rho({}) differs from the form count for q = {}".format(n, q)
        return True, "rho = form count for n <= {}".format(nmax)

    def duplication(self):
        worst = max(numerics.duplication_gap(s, self.precision_bits) for s in (0.3, 1.7, 4.25, 11))
        return worst < 2.0 ** (-self.precision_bits + numerics.GUARD_BITS), "worst gap {:.3g}".format(float(worst))

    def beta1_mellin(self):
        mp = numerics.context(self.precision_bits)
        worst = max(abs(numerics.mellin_beta1_identity_lhs(s, self.precision_bits)
                        / numerics.mellin_beta1_identity_rhs(s, self.precision_bits) - 1) for s in BETA1_MELLIN_GRID)
        return worst < mp.mpf(10) ** -20, "worst relative gap {}".format(mp.nstr(worst, 5))

    def central_vanishing(self):
        tmax = 10 if self.quick else 50
        for q in self.qs:
            ctx = self.field(q)
            tau = ctx.mp.mpc(0.25, 1.1)
            if constant_term(ctx, tau, 0) != 0:
                return False, "constant term does not vanish at s = 0 for q = {}".format(q)
            for t in range(-tmax, tmax + 1):
                if t and coefficient_product(ctx, tau, t, 0) != 0:
                    return False, "coefficient {} does not vanish at s = 0 for q = {}".format(t, q)
        return True, "all coefficients vanish for |t| <= {}".format(tmax)

    def antisymmetry(self):
        worst = 0
        for q in self.qs:
            ctx = self.field(q)
            mp = ctx.mp
            tau = mp.mpc(-0.1, 0.8)
            for s in (0.4, 0.9):
                for t in (-3, -1, 1, 2, 6):
                    plus = coefficient_product(ctx, tau, t, s)
                    minus = coefficient_product(ctx, tau, t, -s)
                    worst = max(worst, abs(plus + minus))
        return worst < 1e-8, "worst |E_t(s) + E_t(-s)| {:.3g}".format(float(worst))

    def archimedean_quadrature(self):
        mp = numerics.context(self.precision_bits)
        tau = mp.mpc(0.3, 0.9)
        ts = (-1, 2) if self.quick else (-3, -1, 1, 2, 5)
        worst = 0
        for s in (0.5, 1, 2):
            for t in ts:
                closed = whittaker.arch_factor(tau, t, s, self.precision_bits)
                oracle = whittaker.arch_factor_quadrature(tau, t, s, self.precision_bits)
                worst = max(worst, abs(closed - oracle) / abs(closed))
        return worst < 1e-10, "worst relative gap {}".format(mp.nstr(worst, 5))

    def whittaker_oracle(self):
        worst = 0
        ts = [-2, -1, 1, 2, 3] if self.quick else [t for t in range(-4, 9) if t]
        grid = [(7, 3, 1)] if self.quick else [(q, s, v) for q in (7, 11) for s in (2.5, 3) for v in (0.7, 1.3)]
        for q, s, v in grid:
            ctx = self.field(q)
            cutoff = coefficient_cutoff(s, ORACLE_CUTOFF_TOLERANCE)
            direct = fourier_coefficients(ctx, v, s, ts, cutoff=cutoff, executor=self.executor)
            for t in ts:
                worst = max(worst, abs(direct[t] - classical_coefficient(ctx, v, t, s)))
        return worst < 1e-6, "worst gap {:.3g}".format(float(worst))

    def mellin(self):
        worst = 0
        ss = (2,) if self.quick else (1.5, 2, 2.5, 3)
        for q in ((7,) if self.quick else (7, 11)):
            ctx = FieldContext(q, 64)
            expansion = PhiExpansion(ctx, 200, self.executor)
            for s in ss:
                closed = mellin_closed(ctx, s)
                worst = max(worst, abs(expansion.mellin_quadrature(s) / closed - 1))
        return worst < 1e-5, "worst relative gap {:.3g}".format(float(worst))

    def dirichlet_identities(self):
        nmax = 2000 if self.quick else 10 ** 5
        ctx = self.field(7)
        bound = dirichlet_tail_bound(3, nmax)
        ramified = abs(ramified_dirichlet_sum(ctx, 3, nmax) - ramified_dirichlet_closed(ctx, 3))
        inert = abs(inert_dirichlet_sum(ctx, 3, 3, nmax) - inert_dirichlet_closed(ctx, 3, 3))
        return max(ramified, inert) < 2 * bound, "gaps {:.3g}, {:.3g} against {:.3g}".format(
            float(ramified), float(inert), bound)

    def degrees(self):
        tmax = 200 if self.quick else 2000
        for q in self.qs:
            ctx = self.field(q)
            table = rho_table(ctx, tmax)
            for t in range(1, tmax + 1):
                closed = deg_z_closed_symbolic(ctx, t)
                coefficient = coeff_positive_symbolic(ctx, t, table.__getitem__)
                if closed != deg_z_lattice_symbolic(ctx, t) or closed != coefficient:
                    return False, "the degree routes differ at t = {} for q = {}".format(t, q)
                if len(arakelov_finite(ctx, t).primes()) > 1:
                    return False, "Z({}) is not supported in a single fiber for q = {}".format(t, q)
        return True, "deg Z(t) agree for t <= {}".format(tmax)

    def expansion_identity(self):
        tmax = 50 if self.quick else 500
        ctx = self.field(7)
        v = ctx.mp.mpf(1)
        expansion = PhiExpansion(ctx, tmax, self.executor)
        for t in range(1, tmax + 1):
            if expansion.symbolic[t] != deg_z_closed_symbolic(ctx, t):
                return False, "a_{} differs from deg Z({})".format(t, t)
            if abs(expansion.coefficient(-t, v) - arakelov_archimedean(ctx, -t, v).degree()) > 1e-30:
                return False, "a_-{}(v) differs from deg Z(-{}, v)".format(t, t)
        return True, "coefficients match degrees for |t| <= {}".format(tmax)

    def j_values(self):
        bits = max(self.precision_bits, 256)
        mp = numerics.context(bits)
        expected = ((mp.mpc(0, 1), 1728), ((1 + mp.sqrt(-7)) / 2, -3375), (mp.sqrt(-2), 8000))
        worst = max(abs(j_invariant(tau, bits) - value) for tau, value in expected)
        return worst < mp.mpf(10) ** -30, "worst gap {}".format(mp.nstr(worst, 5))

    def gross_zagier(self):
        pairs = GROSS_ZAGIER_PAIRS[:1] if self.quick else GROSS_ZAGIER_PAIRS
        worst = 0
        for q, d in pairs:
            check = gross_zagier_check(FieldContext(q, 512), d, 512, self.executor)
            worst = max(worst, check.gap_corrected)
        return worst < 1e-12, "worst corrected gap {:.3g}".format(float(worst))

    def beta1_derivative(self):
        mp = numerics.context(self.precision_bits)
        grid = [mp.mpf(10) ** (mp.mpf(k) / 2) for k in range(-6, 5)]
        worst = max(numerics.beta1_difference_gap(t, precision_bits=self.precision_bits) for t in grid)
        return worst < 1e-6, "worst relative gap {} for 1e-3 <= t <= 1e2".format(mp.nstr(worst, 5))

    def hurwitz_residues(self):
        mp = numerics.context(self.precision_bits)
        worst = max(numerics.hurwitz_residue_gap(s, q, self.precision_bits) for q in self.qs for s in (0.5, 2, 3.5))
        return worst < mp.mpf(2) ** (-self.precision_bits + 10), "worst relative gap {}".format(mp.nstr(worst, 5))

    def rho_multiplicative(self):
        bound = 60 if self.quick else 500
        for q in self.qs:
            table = rho_table(self.field(q), bound * bound)
            for m in range(1, bound + 1):
                for n in range(m, bound + 1):
                    if gcd(m, n) == 1 and table[m * n] != table[m] * table[n]:
                        return False, "rho({} * {}) is not rho({}) rho({}) for q = {}".format(m, n, m, n, q)
        return True, "rho(mn) = rho(m) rho(n) for coprime m, n <= {}".format(bound)

    def field_parity(self):
        for q in self.qs:
            ctx = self.field(q)
            if ctx.chi(-1) != -1:
                return False, "chi(-1) = {} for q = {}".format(ctx.chi(-1), q)
            if ctx.class_number % 2 != 1:
                return False, "class number {} is even for q = {}".format(ctx.class_number, q)
        return True, "chi(-1) = -1 and h is odd"

    def dedekind_partial_sum(self):
        nmax = 10 ** 4 if self.quick else 10 ** 5
        bound = (math.log(nmax) + DEDEKIND_TAIL_CONSTANT) / nmax
        worst = 0
        for q in self.qs:
            ctx = self.field(q)
            mp = ctx.mp
            table = rho_table(ctx, nmax)
            partial = mp.fsum(mp.mpf(table[n]) / n ** 2 for n in range(1, nmax + 1) if table[n])
            tail = dedekind_zeta(ctx, 2) - partial
            if not 0 <= tail <= bound:
                return False, "tail {} outside [0, {:.3g}] for q = {}".format(mp.nstr(tail, 5), bound, q)
            worst = max(worst, tail)
        return True, "worst tail {:.3g} against {:.3g} at N = {}".format(float(worst), bound, nmax)

    def q_factor_bound(self):
        tmax = 50 if self.quick else 200
        for q in self.qs:
            ctx = self.field(q)
            for t in range(-tmax, tmax + 1):
                for s in (0, 0.5, 1, 2, 5):
                    if abs(whittaker.q_factor(ctx, t, s) / whittaker.c_q(ctx)) > 2:
                        return False, "|W_q / c_q| > 2 at t = {}, s = {} for q = {}".format(t, s, q)
        return True, "|W_q / c_q| <= 2 for |t| <= {}".format(tmax)

    def q_factor_degeneration(self):
        worst = 0
        for q in self.qs:
            ctx = self.field(q)
            bound = 2 * ctx.mp.mpf(q) ** -DEGENERATION_ORDER
            for cofactor in (1, 2, 3, -1):
                t = cofactor * q ** DEGENERATION_ORDER
                gap = abs(whittaker.q_factor(ctx, t, 1) - whittaker.c_q(ctx))
                if gap > bound:
                    return False, "|W_q - c_q| = {} at ord_q = {} for q = {}".format(ctx.mp.nstr(gap, 5),
                                                                                   DEGENERATION_ORDER, q)
                worst = max(worst, gap / bound)
        return True, "|W_q - c_q| at most {:.3g} of 2 q^-{}".format(float(worst), DEGENERATION_ORDER)

    def vanishing_parity(self):
        tmax = 200
        for q in self.qs:
            ctx = self.field(q)
            for t in range(-tmax, tmax + 1):
                if t and len(whittaker.vanishing_places(ctx, t)) % 2 != 1:
                    return False, "an even number of vanishing places at t = {} for q = {}".format(t, q)
        return True, "odd number of vanishing places for |t| <= {}".format(tmax)

    def j_modular_invariance(self):
        mp = numerics.context(self.precision_bits)
        generator = random.Random(J_INVARIANCE_SEED)
        tolerance = mp.mpf(2) ** (-self.precision_bits + 16)
        worst = 0
        for _ in range(5 if self.quick else 25):
            tau = _random_fundamental_point(mp, generator)
            value = j_invariant(tau, self.precision_bits)
            for image in (tau + 1, -1 / tau):
                worst = max(worst, abs(j_invariant(image, self.precision_bits) / value - 1))
        return worst < tolerance, "worst relative gap {}".format(mp.nstr(worst, 5))

    def mellin_pole(self):
        ratios = []
        for q in self.qs:
            ctx = self.field(q)
            mp = ctx.mp
            limit = ctx.class_number / mp.sqrt(q)
            for epsilon in ('1e-3', '3e-3', '1e-2'):
                epsilon = mp.mpf(epsilon)
                ratios.append(abs(mellin_closed(ctx, 1 + epsilon)) * epsilon ** 2 / limit)
        low, high = float(min(ratios)), float(max(ratios))
        return 0.5 <= low and high <= 2, "(s - 1)^2 |Lambda(s, phi)| within [{:.3g}, {:.3g}] of h / sqrt(q)".format(
            low, high)

    def degree_support(self):
        tmax = 300 if self.quick else 2000
        for q in self.qs:
            ctx = self.field(q)
            table = rho_table(ctx, tmax)
            for t in range(1, tmax + 1):
                supported = bool(table[t]) or any(table[t // p] for p in factorint(t) if ctx.is_inert(p))
                if bool(deg_z_closed_symbolic(ctx, t)) != supported:
                    return False, "deg Z({}) > 0 disagrees with the norm criterion for q = {}".format(t, q)
        return True, "deg Z(t) > 0 exactly on the norm criterion for t <= {}".format(tmax)

    def archimedean_derivative(self):
        mp = numerics.context(self.precision_bits)
        tau = mp.mpc(0.3, 0.9)
        step = mp.mpf(ARCHIMEDEAN_STEP)
        worst = 0
        for t in ((-1,) if self.quick else (-3, -2, -1)):
            # W*(0) = 0 for t < 0, so one Richardson step on W*(h) / h cancels the O(h) term
            near = whittaker.arch_factor_quadrature(tau, t, step, self.precision_bits)
            far = whittaker.arch_factor_quadrature(tau, t, 2 * step, self.precision_bits)
            difference = (4 * near - far) / (2 * step)
            exact = whittaker.arch_factor_deriv0(tau, t, self.precision_bits)
            worst = max(worst, abs(difference / exact - 1))
        return worst < 1e-3, "worst relative gap {} at s = {}".format(mp.nstr(worst, 5), ARCHIMEDEAN_STEP)

    def names(self):
        return ['rho_oracle', 'duplication', 'beta1_mellin', 'central_vanishing', 'antisymmetry',
                'archimedean_quadrature', 'whittaker_oracle', 'mellin', 'dirichlet_identities', 'degrees',
                'expansion_identity', 'j_values', 'gross_zagier', 'beta1_derivative', 'hurwitz_residues',
                'rho_multiplicative', 'field_parity', 'dedekind_partial_sum', 'q_factor_bound',
                'q_factor_degeneration', 'vanishing_parity', 'j_modular_invariance', 'mellin_pole',
                'degree_support', 'archimedean_derivative']

    def run(self, name):
        try:
            passed, detail = getattr(self, name)()
        except (ConvergenceError, PrecisionError, DomainError) as e:
            log.error("Check {} raised {}".format(name, e))
            return name, False, "{}: {}".format(type(e).__name__, e)
        log.info("Check {} {}: {}".format(name, 'passed' if passed else 'FAILED', detail))
        return name, bool(passed), detail

    def run_all(self):
        return [self.run(name) for name in self.names()]
