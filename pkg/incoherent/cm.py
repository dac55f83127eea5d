"""
Singular moduli: j at CM points, the product J(-q, -d) of differences of singular moduli over all pairs of classes,
and the identity 2 log|J(-q, -d)| = 1/4 sum_{n in Z, n^2 < dq, n^2 = dq mod 4} a_m(phi), m = (dq - n^2) / 4.
"""
from concurrent.futures import Executor
from fractions import Fraction
from math import gcd
import logging

from sympy import divisor_sigma, factorint, legendre_symbol

from incoherent import numerics
from incoherent.exceptions import DomainError, InvalidDiscriminantError, PrecisionError
from incoherent.phi import coeff_positive_symbolic
from incoherent.quadfield import reduced_forms, is_fundamental_discriminant, validate_q, rho_table
from incoherent.whittaker import chi_q

__author__ = 'maintainers@incoherent-eisenstein.org'

log = logging.getLogger(__name__)

GROSS_ZAGIER_BITS = 512
TRUNCATION_EXTRA_BITS = 32
MAX_EXPANSION_TERMS = 20000
MAX_REDUCTION_STEPS = 10000
INTEGRALITY_TOLERANCE = 1e-5
FACTOR_LIMIT = 10 ** 5
E4_WEIGHT = 240
CONVENTION = 'all'


class CMPoint(object):
    """The root tau = (-b + i sqrt(D)) / (2a) of a reduced form (a, b, c) of discriminant -D"""

    def __init__(self, form, precision_bits=numerics.DEFAULT_PRECISION_BITS):
        mp = numerics.context(precision_bits)
        self.form = form
        self.discriminant = form.discriminant()
        self.precision_bits = precision_bits
        self.tau = mp.mpc(mp.mpf(-form.b) / (2 * form.a), mp.sqrt(-self.discriminant) / (2 * form.a))

    def __repr__(self):
        return 'CMPoint({}, tau={})'.format(self.form, self.tau)


def reduce_to_fundamental_domain(tau, precision_bits=numerics.DEFAULT_PRECISION_BITS):
    """The SL2(Z)-translate of tau with -1/2 <= Re < 1/2 and |tau| >= 1"""
    mp = numerics.context(precision_bits)
    tau = mp.mpmathify(tau)
    if mp.im(tau) <= 0:
        raise DomainError("tau must lie in the upper half plane, got {}".format(tau))
    for _ in range(MAX_REDUCTION_STEPS):
        tau -= mp.floor(mp.re(tau) + mp.mpf(1) / 2)
        if abs(tau) >= 1:
            return tau
        tau = -1 / tau
    raise PrecisionError("{} did not reduce in {} steps".format(tau, MAX_REDUCTION_STEPS))


def expansion_terms(v, precision_bits):
    """The number of q-expansion terms after which |e(n tau)| < 2^-(precision_bits + 32)"""
    mp = numerics.context(precision_bits)
    terms = int(mp.ceil((precision_bits + TRUNCATION_EXTRA_BITS) * mp.log(2) / (2 * mp.pi * v))) + 1
    if terms > MAX_EXPANSION_TERMS:
        log.error("j at Im(tau) = {} needs {} terms".format(mp.nstr(v, 5), terms))
        raise PrecisionError("Im(tau) = {} is too small for {} bits".format(mp.nstr(v, 5), precision_bits))
    return terms


def j_invariant(tau, precision_bits=numerics.DEFAULT_PRECISION_BITS, reduce=True):
    """
    j(tau) = E_4(tau)^3 / Delta(tau), with Delta = x prod (1 - x^n)^24 and E_4 = 1 + 240 sum sigma_3(n) x^n,
    x = e(tau).
    :param reduce: Move tau into the fundamental domain first; without it Im(tau) >= sqrt(3)/2 is required
    """
    mp = numerics.context(precision_bits)
    tau = mp.mpmathify(tau)
    if reduce:
        tau = reduce_to_fundamental_domain(tau, precision_bits)
    elif mp.im(tau) < mp.sqrt(3) / 2:
        raise DomainError("j_invariant without reduction needs Im(tau) >= sqrt(3)/2, got {}".format(tau))
    terms = expansion_terms(mp.im(tau), precision_bits)
    x = mp.expjpi(2 * tau)
    power = mp.one
    eta_product = mp.one
    e4_sum = []
    for n in range(1, terms + 1):
        power *= x
        eta_product *= 1 - power
        e4_sum.append(int(divisor_sigma(n, 3)) * power)
    e4 = 1 + E4_WEIGHT * mp.fsum(e4_sum)
    delta = x * eta_product ** 24
    return e4 ** 3 / delta


def validate_d(q, d):
    if d <= 4 or not is_fundamental_discriminant(-d):
        raise InvalidDiscriminantError("-{} is not a fundamental discriminant with d > 4".format(d))
    if gcd(d, q) != 1:
        raise InvalidDiscriminantError("d = {} and q = {} are not coprime".format(d, q))
    return d


def cm_points(disc, precision_bits):
    return [CMPoint(form, precision_bits) for form in reduced_forms(disc)]


class SingularModuliProduct(object):
    """J(-q, -d) = prod over classes of (j(tau_1) - j(tau_2)), with its distance to the nearest integer"""

    def __init__(self, q, d, value, precision_bits):
        mp = numerics.context(precision_bits)
        self.q = q
        self.d = d
        self.value = value
        self.precision_bits = precision_bits
        self.nearest_integer = int(mp.nint(mp.re(value)))
        self.integrality_gap = abs(value - self.nearest_integer)

    @property
    def J(self):
        return self.nearest_integer

    def __repr__(self):
        return 'SingularModuliProduct(q={}, d={}, J={}, gap={})'.format(
            self.q, self.d, self.nearest_integer, numerics.context(self.precision_bits).nstr(self.integrality_gap, 5))


def singular_moduli_product(q, d, precision_bits=GROSS_ZAGIER_BITS, executor: Executor=None):
    """
    :param q: A prime congruent to 3 mod 4, larger than 3
    :param d: -d a fundamental discriminant, d > 4, coprime to q
    :param executor: Optional executor for the j-values; the product is always taken in class order
    """
    validate_q(q)
    validate_d(q, d)
    mp = numerics.context(precision_bits)
    points = cm_points(-q, precision_bits) + cm_points(-d, precision_bits)
    evaluate = lambda point: j_invariant(point.tau, precision_bits)
    if executor is not None:
        values = list(executor.map(evaluate, points))
    else:
        values = [evaluate(point) for point in points]
    h_q = len(reduced_forms(-q))
    value = mp.one
    for j_1 in values[:h_q]:
        for j_2 in values[h_q:]:
            value *= mp.mpc(j_1) - mp.mpc(j_2)
    product = SingularModuliProduct(q, d, value, precision_bits)
    if product.integrality_gap > INTEGRALITY_TOLERANCE:
        log.error("J(-{}, -{}) = {} is {} away from an integer".format(
            q, d, mp.nstr(value, 20), mp.nstr(product.integrality_gap, 5)))
        raise PrecisionError("J(-{}, -{}) is not integral at {} bits".format(q, d, precision_bits))
    log.info("J(-{}, -{}) = {} (gap {})".format(q, d, product.nearest_integer, mp.nstr(product.integrality_gap, 5)))
    return product


def splits(disc, p):
    """Whether the prime p splits in the quadratic field of discriminant ``disc``"""
    if disc % p == 0:
        return False
    if p == 2:
        return disc % 8 == 1
    return legendre_symbol(disc % p, p) == 1


def factor_singular_modulus(value, q, d):
    """
    Factors |J| by trial division up to 10^5 and checks that each prime factor is non-split in Q(sqrt(-q)) or
    Q(sqrt(-d)). The check is observational: a failure is logged, not raised.
    :return: ({p: exponent}, all_non_split)
    """
    if value == 0:
        raise DomainError("J = 0 has no factorisation")
    factors = factorint(abs(int(value)), limit=FACTOR_LIMIT)
    all_non_split = True
    for p in sorted(factors):
        if p > FACTOR_LIMIT:
            continue
        if splits(-q, p) and splits(-d, p):
            log.warning("{} divides J(-{}, -{}) but splits in both fields".format(p, q, d))
            all_non_split = False
    return factors, all_non_split


class GrossZagierTerm(object):

    def __init__(self, n, m, coefficient, corrected):
        self.n = n
        self.m = m
        self.coefficient = coefficient
        self.corrected = corrected

    def __repr__(self):
        return 'GrossZagierTerm(n={}, m={}, a_m={})'.format(self.n, self.m, self.coefficient)


class GrossZagierCheck(object):
    """
    Both sides of the identity. ``rhs`` uses every n in Z with weight 1/4; ``rhs_nonnegative`` the n >= 0 with weight
    1/2. ``rhs_corrected`` doubles the terms with q | m and chi_q(m) = -1 in the 1/4 sum.
    """
    convention = CONVENTION

    def __init__(self, product, lhs, terms, precision_bits):
        self.q = product.q
        self.d = product.d
        self.product = product
        self.lhs = lhs
        self.terms = terms
        self.precision_bits = precision_bits
        self.rhs_symbolic = _weighted(terms, 4, lambda term: 1)
        self.rhs_nonnegative_symbolic = _weighted([term for term in terms if term.n >= 0], 2, lambda term: 1)
        self.rhs_corrected_symbolic = _weighted(terms, 4, lambda term: 2 if term.corrected else 1)
        self.rhs = self.rhs_symbolic.evaluate(precision_bits)
        self.rhs_nonnegative = self.rhs_nonnegative_symbolic.evaluate(precision_bits)
        self.rhs_corrected = self.rhs_corrected_symbolic.evaluate(precision_bits)
        self.gap = abs(lhs - self.rhs)
        self.gap_nonnegative = abs(lhs - self.rhs_nonnegative)
        self.gap_corrected = abs(lhs - self.rhs_corrected)

    def __repr__(self):
        mp = numerics.context(self.precision_bits)
        return 'GrossZagierCheck(q={}, d={}, gap={}, corrected gap={})'.format(
            self.q, self.d, mp.nstr(self.gap, 5), mp.nstr(self.gap_corrected, 5))


def _weighted(terms, denominator, multiplier):
    total = numerics.LogCombination()
    for term in terms:
        total = total + term.coefficient * Fraction(multiplier(term), denominator)
    return total


def gross_zagier_terms(ctx, d):
    """The terms n in Z, n^2 < dq, n^2 = dq mod 4, in increasing n"""
    dq = d * ctx.q
    table = rho_table(ctx, dq // 4)
    terms = []
    n = 0
    while (n + 1) ** 2 < dq:
        n += 1
    for k in range(-n, n + 1):
        if (dq - k * k) % 4:
            continue
        m = (dq - k * k) // 4
        coefficient = coeff_positive_symbolic(ctx, m, table.__getitem__)
        corrected = m % ctx.q == 0 and chi_q(ctx, m) == -1
        terms.append(GrossZagierTerm(k, m, coefficient, corrected))
    return terms


def gross_zagier_check(ctx, d, precision_bits=GROSS_ZAGIER_BITS, executor: Executor=None):
    """
    2 log|J(-q, -d)| against 1/4 sum_{n in Z} a_m(phi), m = (dq - n^2) / 4.
    """
    product = singular_moduli_product(ctx.q, d, precision_bits, executor)
    mp = numerics.context(precision_bits)
    lhs = 2 * mp.log(abs(product.value))
    check = GrossZagierCheck(product, lhs, gross_zagier_terms(ctx, d), precision_bits)
    log.info("Gross-Zagier q={} d={}: lhs {} rhs {} corrected {}".format(
        ctx.q, d, mp.nstr(lhs, 20), mp.nstr(check.rhs, 20), mp.nstr(check.rhs_corrected, 20)))
    return check
