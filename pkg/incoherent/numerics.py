"""
Arbitrary precision arithmetic and the special functions the other modules are built on.

Real and complex values are ``mpmath`` ``mpf`` / ``mpc`` numbers. Every function takes the working precision in bits
(``precision_bits``) and evaluates in an ``mpmath`` context private to the calling thread, so evaluation never touches
the global ``mpmath.mp`` precision and is safe from any number of threads. Internally ``GUARD_BITS`` extra bits are
carried to absorb rounding in long sums, so elementary results are good to about ``2 ** -precision_bits``.
"""
from fractions import Fraction
import logging
import threading

import mpmath

from incoherent.exceptions import PoleError, DomainError, ConvergenceError

__author__ = 'maintainers@incoherent-eisenstein.org'

log = logging.getLogger(__name__)

DEFAULT_PRECISION_BITS = 128
GUARD_BITS = 10
QUADRATURE_EXTRA_DEGREE = 2
BETA1_DIFFERENCE_STEP = '1e-8'

_contexts = threading.local()


def context(precision_bits=DEFAULT_PRECISION_BITS):
    """
    Returns the calling thread's ``mpmath`` context for ``precision_bits``, creating it on first use.
    :param precision_bits: The requested precision; the context works with ``GUARD_BITS`` more.
    """
    if precision_bits < 8:
        raise DomainError("precision_bits must be at least 8, got {}".format(precision_bits))
    cache = getattr(_contexts, 'by_precision', None)
    if cache is None:
        cache = _contexts.by_precision = {}
    mp = cache.get(precision_bits)
    if mp is None:
        mp = mpmath.MPContext()
        mp.prec = precision_bits + GUARD_BITS
        cache[precision_bits] = mp
    return mp


def tolerance(precision_bits):
    """Target relative error for quadratures at the given precision"""
    return mpmath.mpf(2) ** (-precision_bits // 2)


def e(x, precision_bits=DEFAULT_PRECISION_BITS):
    """e(x) = exp(2 pi i x)"""
    mp = context(precision_bits)
    return mp.expjpi(2 * mp.mpmathify(x))


def _is_nonpositive_integer(mp, s):
    s = mp.mpmathify(s)
    return mp.im(s) == 0 and mp.isint(mp.re(s)) and mp.re(s) <= 0


def gamma(s, precision_bits=DEFAULT_PRECISION_BITS):
    """Gamma(s) at real or complex s; a PoleError at the nonpositive integers"""
    mp = context(precision_bits)
    if _is_nonpositive_integer(mp, s):
        raise PoleError("gamma has a pole at {}".format(s))
    return mp.gamma(s)


def digamma(s, precision_bits=DEFAULT_PRECISION_BITS):
    mp = context(precision_bits)
    s = mp.mpf(s)
    if s <= 0:
        raise DomainError("digamma is evaluated for s > 0 only, got {}".format(s))
    return mp.digamma(s)


def beta1(t, precision_bits=DEFAULT_PRECISION_BITS):
    """
    beta_1(t) = integral over u >= 1 of exp(-u t) / u, the exponential integral E_1(t).
    ``mpmath.e1`` switches between the power series (small t) and the asymptotic / continued fraction side (large t).
    """
    mp = context(precision_bits)
    t = mp.mpf(t)
    if t <= 0:
        raise DomainError("beta1 is evaluated for t > 0 only, got {}".format(t))
    return mp.e1(t)


def beta1_derivative(t, precision_bits=DEFAULT_PRECISION_BITS):
    """beta_1'(t) = -exp(-t) / t"""
    mp = context(precision_bits)
    t = mp.mpf(t)
    if t <= 0:
        raise DomainError("beta1 is evaluated for t > 0 only, got {}".format(t))
    return -mp.exp(-t) / t


def beta1_difference_gap(t, step=BETA1_DIFFERENCE_STEP, precision_bits=DEFAULT_PRECISION_BITS):
    """Relative gap between the central difference of beta_1 at t and beta_1'(t)"""
    mp = context(precision_bits)
    t, step = mp.mpf(t), mp.mpf(step)
    if step >= t:
        raise DomainError("the difference step {} must stay below t = {}".format(step, t))
    difference = (beta1(t + step, precision_bits) - beta1(t - step, precision_bits)) / (2 * step)
    exact = beta1_derivative(t, precision_bits)
    return abs(difference / exact - 1)


def riemann_zeta(s, precision_bits=DEFAULT_PRECISION_BITS):
    mp = context(precision_bits)
    if mp.mpf(s) == 1:
        raise PoleError("zeta has a pole at s = 1")
    return mp.zeta(s)


def zeta_logderiv(s, precision_bits=DEFAULT_PRECISION_BITS):
    """zeta'(s) / zeta(s)"""
    mp = context(precision_bits)
    if mp.mpf(s) == 1:
        raise PoleError("zeta has a pole at s = 1")
    return mp.zeta(s, 1, 1) / mp.zeta(s)


def hurwitz_zeta(s, a, precision_bits=DEFAULT_PRECISION_BITS, derivative=0):
    """
    zeta(s, a) = sum over n >= 0 of (n + a) ** -s, or its ``derivative``-th derivative in s.
    ``mpmath`` sums it by Euler-Maclaurin with the number of terms chosen to keep the remainder below the working
    precision.
    """
    mp = context(precision_bits)
    s, a = mp.mpf(s), mp.mpf(a)
    if s == 1:
        raise PoleError("the Hurwitz zeta function has a pole at s = 1")
    if not 0 < a <= 1:
        raise DomainError("Hurwitz zeta needs 0 < a <= 1, got {}".format(a))
    return mp.zeta(s, a, derivative)


def lambda_riemann(s, precision_bits=DEFAULT_PRECISION_BITS):
    """The completed zeta function pi^(-s/2) Gamma(s/2) zeta(s)"""
    mp = context(precision_bits)
    s = mp.mpf(s)
    return mp.pi ** (-s / 2) * gamma(s / 2, precision_bits) * riemann_zeta(s, precision_bits)


def lambda_riemann_logderiv(s, precision_bits=DEFAULT_PRECISION_BITS):
    mp = context(precision_bits)
    s = mp.mpf(s)
    return -mp.log(mp.pi) / 2 + mp.digamma(s / 2) / 2 + zeta_logderiv(s, precision_bits)


def integrate(f, points, precision_bits=DEFAULT_PRECISION_BITS, relative_tolerance=None):
    """
    Tanh-sinh quadrature of ``f`` over the intervals given by ``points`` (``mpmath.inf`` allowed).
    :param f: The integrand, a function of one ``mpf``
    :param points: Interval end points, including interior split points
    :param precision_bits: Working precision
    :param relative_tolerance: Accepted error estimate relative to ``max(1, |value|)``, defaults to
     ``2 ** (-precision_bits / 2)``
    :return: The integral
    """
    mp = context(precision_bits)
    tol = relative_tolerance if relative_tolerance is not None else tolerance(precision_bits)
    degree = 6 + max(0, int(mpmath.log(mp.prec / 30.0, 2))) + QUADRATURE_EXTRA_DEGREE
    value, error = mp.quad(f, points, method='tanh-sinh', error=True, maxdegree=degree)
    scale = max(mp.one, abs(value))
    if error > tol * scale:
        log.error("Quadrature over {} stopped with error estimate {} > {}".format(
            points, mp.nstr(error, 5), mp.nstr(tol * scale, 5)))
        raise ConvergenceError("quadrature error estimate {} above tolerance".format(mp.nstr(error, 5)))
    log.debug("Quadrature over {} converged, error estimate {}".format(points, mp.nstr(error, 5)))
    return value


def mellin_beta1_identity_lhs(s, precision_bits=DEFAULT_PRECISION_BITS):
    """integral over v > 0 of beta_1(2v) exp(v) v^(s-1), by quadrature"""
    mp = context(precision_bits)
    s = mp.mpf(s)
    if s <= 1:
        raise DomainError("the beta_1 Mellin integral converges for s > 1 only, got {}".format(s))

    def integrand(v):
        if v == 0:
            return mp.zero
        return mp.e1(2 * v) * mp.exp(v) * v ** (s - 1)

    return integrate(integrand, [0, 1, mp.inf], precision_bits)


def mellin_beta1_identity_rhs(s, precision_bits=DEFAULT_PRECISION_BITS):
    """1/2 Gamma(s) (psi((s+1)/2) - psi(s/2))"""
    mp = context(precision_bits)
    s = mp.mpf(s)
    return gamma(s, precision_bits) * (digamma((s + 1) / 2, precision_bits) - digamma(s / 2, precision_bits)) / 2


def duplication_gap(s, precision_bits=DEFAULT_PRECISION_BITS):
    """Relative gap of Legendre's duplication formula Gamma(s)Gamma(s+1/2) = 2^(1-2s) sqrt(pi) Gamma(2s)"""
    mp = context(precision_bits)
    s = mp.mpf(s)
    left = gamma(s, precision_bits) * gamma(s + mp.mpf(1) / 2, precision_bits)
    right = mp.mpf(2) ** (1 - 2 * s) * mp.sqrt(mp.pi) * gamma(2 * s, precision_bits)
    return abs(left - right) / abs(right)


def hurwitz_residue_gap(s, q, precision_bits=DEFAULT_PRECISION_BITS):
    """Relative gap of zeta(s) = q^-s sum over 1 <= k <= q of zeta(s, k/q), for s != 1"""
    mp = context(precision_bits)
    s = mp.mpf(s)
    if q < 1:
        raise DomainError("the residue classes are taken modulo q >= 1, got {}".format(q))
    classes = mp.fsum(hurwitz_zeta(s, mp.mpf(k) / q, precision_bits) for k in range(1, q + 1))
    whole = riemann_zeta(s, precision_bits)
    return abs(classes * mp.mpf(q) ** -s - whole) / abs(whole)


def fsum(terms, precision_bits=DEFAULT_PRECISION_BITS):
    """Sums in the given order at the working precision"""
    return context(precision_bits).fsum(terms)


class LogCombination(object):
    """
    An exact linear combination ``sum c_p log(p)`` with rational coefficients, keyed by prime.
    Zero coefficients are never stored, so two combinations are equal exactly when they have the same terms.
    """

    def __init__(self, terms=None):
        self.terms = {}
        for prime, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff != 0:
                self.terms[int(prime)] = coeff

    @classmethod
    def of(cls, prime, coeff):
        return cls({prime: coeff})

    def __add__(self, other):
        terms = dict(self.terms)
        for prime, coeff in other.terms.items():
            terms[prime] = terms.get(prime, 0) + coeff
        return LogCombination(terms)

    def __mul__(self, scalar):
        return LogCombination({p: c * Fraction(scalar) for p, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LogCombination) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return 'LogCombination(0)'
        return 'LogCombination(' + ' + '.join('{}*log({})'.format(c, p) for p, c in sorted(self.terms.items())) + ')'

    def primes(self):
        return sorted(self.terms)

    def evaluate(self, precision_bits=DEFAULT_PRECISION_BITS):
        mp = context(precision_bits)
        return mp.fsum(mp.mpf(c.numerator) / c.denominator * mp.log(p) for p, c in sorted(self.terms.items()))

    def to_json(self):
        return [{'coeff': str(c), 'prime': p} for p, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, raw):
        return cls({item['prime']: Fraction(item['coeff']) for item in raw})
