"""
The weight-one nonholomorphic form phi(tau) = -d/ds E*(tau, s) at s = 0, its Fourier expansion

    phi(tau) = a_0(v) + sum_{n>0} a_n e(n tau) + sum_{n>0} 2 rho(n) beta_1(4 pi n v) e(-n tau),

its Mellin transform and the quadrature that checks it. The coefficients a_n are exact combinations of logarithms of
primes and are kept as ``LogCombination`` where that matters.

phi transforms under tau -> -1/(q tau) as

    phi(-1/(q tau)) = i sqrt(q) tau (phi(tau) - log(q) Theta(tau)),   Theta(tau) = h + 2 sum_{n>0} rho(n) e(n tau),

which ``eval_phi_fricke`` and ``mellin_quadrature`` use to stay where the expansion converges quickly.
"""
from concurrent.futures import Executor
import logging
import math

from sympy import factorint

from incoherent import numerics
from incoherent.exceptions import DomainError, PoleError
from incoherent.numerics import LogCombination
from incoherent.quadfield import (rho, rho_table, ord_p, lambda_chi, lambda_chi_logderiv, l_logderiv,
                                  dedekind_zeta)

__author__ = 'maintainers@incoherent-eisenstein.org'

log = logging.getLogger(__name__)

DEFAULT_NMAX = 1000
MELLIN_NMAX = 200
COEFFICIENT_GROWTH = 12


def coeff_positive_symbolic(ctx, n, rho_of=None):
    """
    a_n = 2 log(q) (ord_q(n) + 1) rho(n) + 2 sum_{p inert} log(p) (ord_p(n) + 1) rho(n/p), exactly.
    :param rho_of: Optional rho lookup (e.g. a table's ``__getitem__``)
    """
    if n < 1:
        raise DomainError("a_n is taken for n >= 1, got {}".format(n))
    rho_of = rho_of or (lambda m: rho(ctx, m))
    terms = {}
    rho_n = rho_of(n)
    if rho_n:
        terms[ctx.q] = 2 * (ord_p(n, ctx.q) + 1) * rho_n
    for p, exponent in factorint(n).items():
        if ctx.is_inert(p):
            rho_rest = rho_of(n // p)
            if rho_rest:
                terms[p] = 2 * (exponent + 1) * rho_rest
    return LogCombination(terms)


def coeff_positive(ctx, n):
    return coeff_positive_symbolic(ctx, n).evaluate(ctx.precision_bits)


def coeff_negative(ctx, n, v):
    """2 beta_1(4 pi n v) rho(n), the coefficient of e(-n tau)"""
    if n < 1:
        raise DomainError("coeff_negative is taken for n >= 1, got {}".format(n))
    mp = ctx.mp
    v = mp.mpf(v)
    if v <= 0:
        raise DomainError("v must be positive, got {}".format(v))
    count = rho(ctx, n)
    if count == 0:
        return mp.zero
    return 2 * numerics.beta1(4 * mp.pi * n * v, ctx.precision_bits) * count


def coeff_constant(ctx, v):
    """a_0(v) = -h (log q + log v + 2 Lambda'(1, chi) / Lambda(1, chi))"""
    mp = ctx.mp
    v = mp.mpf(v)
    if v <= 0:
        raise DomainError("v must be positive, got {}".format(v))
    return -ctx.class_number * (mp.log(ctx.q) + mp.log(v) + 2 * lambda_chi_logderiv(ctx, 1))


class PhiExpansion(object):
    """
    The truncated Fourier expansion of phi: a_1..a_nmax (exact and evaluated) and rho(1..nmax).
    Coefficients may be computed on an executor; they are always stored in index order.
    """

    def __init__(self, ctx, nmax=DEFAULT_NMAX, executor: Executor=None):
        if nmax < 1:
            raise DomainError("nmax must be positive, got {}".format(nmax))
        self.ctx = ctx
        self.nmax = nmax
        self.rho = rho_table(ctx, nmax)
        indices = range(1, nmax + 1)
        symbolic = lambda n: coeff_positive_symbolic(ctx, n, self.rho.__getitem__)
        if executor is not None:
            self.symbolic = [None] + list(executor.map(symbolic, indices))
        else:
            self.symbolic = [None] + [symbolic(n) for n in indices]
        self.positive = [None] + [a.evaluate(ctx.precision_bits) for a in self.symbolic[1:]]
        log.debug("PhiExpansion for q={} with {} terms".format(ctx.q, nmax))

    @property
    def mp(self):
        return self.ctx.mp

    def coefficient(self, t, v=None):
        """The coefficient of e(t tau): a_t for t > 0, 2 beta_1(4 pi |t| v) rho(|t|) for t < 0, a_0(v) for t = 0"""
        if t > 0:
            if t > self.nmax:
                return coeff_positive(self.ctx, t)
            return self.positive[t]
        if v is None:
            raise DomainError("the coefficient of index {} depends on v".format(t))
        if t == 0:
            return coeff_constant(self.ctx, v)
        return coeff_negative(self.ctx, -t, v)

    def terms_needed(self, v):
        """Number of terms after which e^(-2 pi n v) drops below the working precision"""
        mp = self.mp
        bits = self.ctx.precision_bits + numerics.GUARD_BITS
        return min(self.nmax, int(mp.ceil(bits * mp.log(2) / (2 * mp.pi * v))) + 1)

    def holomorphic_part(self, tau, nterms=None):
        mp = self.mp
        tau = mp.mpmathify(tau)
        nterms = nterms or self.nmax
        return mp.fsum(self.positive[n] * mp.expjpi(2 * n * tau) for n in range(1, nterms + 1) if self.positive[n])

    def nonholomorphic_part(self, tau, nterms=None):
        mp = self.mp
        tau = mp.mpmathify(tau)
        v = mp.im(tau)
        nterms = nterms or self.nmax
        return mp.fsum(2 * self.rho[n] * mp.e1(4 * mp.pi * n * v) * mp.expjpi(-2 * n * tau)
                       for n in range(1, nterms + 1) if self.rho[n])

    def theta(self, tau, nterms=None):
        """Theta(tau) = h + 2 sum rho(n) e(n tau), the genus theta series of discriminant -q"""
        mp = self.mp
        tau = mp.mpmathify(tau)
        nterms = nterms or self.nmax
        return self.ctx.class_number + 2 * mp.fsum(self.rho[n] * mp.expjpi(2 * n * tau)
                                                   for n in range(1, nterms + 1) if self.rho[n])

    def tail_bound(self, v):
        """
        Bound for the terms beyond nmax, from a_n <= 12 n log(q n) and 2 rho(n) beta_1(4 pi n v) e^(2 pi n v) <=
        e^(-2 pi n v) / (pi v).
        """
        mp = self.mp
        v = mp.mpf(v)
        r = mp.exp(-2 * mp.pi * v)
        n = self.nmax + 1
        holomorphic = COEFFICIENT_GROWTH * n * mp.log(self.ctx.q * n) * r ** n / (1 - r) ** 2
        nonholomorphic = r ** n / (mp.pi * v * (1 - r))
        return holomorphic + nonholomorphic

    def theta_tail_bound(self, v):
        mp = self.mp
        r = mp.exp(-2 * mp.pi * mp.mpf(v))
        n = self.nmax + 1
        return 2 * n * r ** n / (1 - r) ** 2

    def evaluate(self, tau):
        """
        phi(tau) from the truncated expansion.
        :return: (value, tail bound)
        """
        mp = self.mp
        tau = mp.mpmathify(tau)
        v = mp.im(tau)
        if v <= 0:
            raise DomainError("tau must lie in the upper half plane, got {}".format(tau))
        value = coeff_constant(self.ctx, v) + self.holomorphic_part(tau) + self.nonholomorphic_part(tau)
        return value, self.tail_bound(v)

    def evaluate_fricke(self, tau):
        """
        phi(tau) through phi(tau) = i sqrt(q) tau' (phi(tau') - log(q) Theta(tau')), tau' = -1/(q tau).
        :return: (value, tail bound)
        """
        mp = self.mp
        tau = mp.mpmathify(tau)
        image = -1 / (self.ctx.q * tau)
        value, bound = self.evaluate(image)
        factor = mp.mpc(0, 1) * mp.sqrt(self.ctx.q) * image
        log_q = mp.log(self.ctx.q)
        result = factor * (value - log_q * self.theta(image))
        return result, abs(factor) * (bound + log_q * self.theta_tail_bound(mp.im(image)))

    def _real_axis_terms(self, v, with_theta):
        # f(v) = phi(iv) - a_0(v), optionally minus log(q) (Theta(iv) - h)
        mp = self.mp
        nterms = self.terms_needed(v)
        x = mp.exp(-2 * mp.pi * v)
        log_q = mp.log(self.ctx.q)
        terms = []
        power = mp.one
        for n in range(1, nterms + 1):
            power *= x
            a_n, rho_n = self.positive[n], self.rho[n]
            if not a_n and not rho_n:
                continue
            term = a_n * power
            if rho_n:
                term += 2 * rho_n * mp.e1(4 * mp.pi * n * v) / power
                if with_theta:
                    term -= 2 * log_q * rho_n * power
            terms.append(term)
        return mp.fsum(terms)

    def mellin_quadrature(self, s, v_split=None):
        """
        Lambda(s, phi) = integral over v > 0 of (phi(iv) - a_0(v)) v^(s-1), for s > 1.

        The range (0, a) is mapped onto (1/(q a), inf) by the transformation under tau -> -1/(q tau); the constant-term
        pieces it produces integrate in closed form. Both remaining integrals are done by tanh-sinh quadrature on the
        truncated expansion. ``a`` defaults to the fixed point 1/sqrt(q).
        """
        ctx = self.ctx
        mp = self.mp
        s = mp.mpf(s)
        if s <= 1:
            log.warning("The Mellin integral of phi diverges at small v for s = {}".format(s))
            raise DomainError("mellin_quadrature needs s > 1, got {}".format(s))
        q = mp.mpf(ctx.q)
        a = mp.mpf(v_split) if v_split is not None else 1 / mp.sqrt(q)
        b = 1 / (q * a)
        upper = numerics.integrate(lambda v: self._real_axis_terms(v, False) * v ** (s - 1),
                                   [a, 2 * a, mp.inf], ctx.precision_bits)
        lower = numerics.integrate(lambda w: self._real_axis_terms(w, True) * w ** (-s),
                                   [b, 2 * b, mp.inf], ctx.precision_bits)
        log_a = mp.log(a)
        shift = mp.log(q) + 2 * lambda_chi_logderiv(ctx, 1)
        elementary = ctx.class_number * (
            (shift * a ** (s - 1) / (s - 1) - a ** (s - 1) * (log_a / (s - 1) - 1 / (s - 1) ** 2)) / mp.sqrt(q)
            + shift * a ** s / s + a ** s * (log_a / s - 1 / s ** 2))
        log.debug("Mellin pieces at s={}: upper {} lower {} elementary {}".format(
            s, mp.nstr(upper, 10), mp.nstr(lower, 10), mp.nstr(elementary, 10)))
        return upper - q ** (mp.mpf(1) / 2 - s) * lower + elementary


def eval_phi(ctx, tau, nmax=DEFAULT_NMAX):
    """
    phi(tau) summed to nmax.
    :return: (value, tail bound)
    """
    return PhiExpansion(ctx, nmax).evaluate(tau)


def eval_phi_fricke(ctx, tau, nmax=DEFAULT_NMAX):
    """phi(tau) evaluated at -1/(q tau) and transformed back; preferable when Im(tau) < 1/sqrt(q)"""
    return PhiExpansion(ctx, nmax).evaluate_fricke(tau)


def genus_theta(ctx, tau, nmax=DEFAULT_NMAX):
    return PhiExpansion(ctx, nmax).theta(tau)


def mellin_quadrature(ctx, s, nmax=MELLIN_NMAX, v_split=None, executor: Executor=None):
    """Lambda(s, phi) by quadrature over the expansion truncated at ``nmax``; see ``PhiExpansion.mellin_quadrature``"""
    return PhiExpansion(ctx, nmax, executor).mellin_quadrature(s, v_split)


def lambda_k(ctx, s):
    """Lambda_k(s) = Lambda(s) Lambda(s, chi)"""
    return numerics.lambda_riemann(s, ctx.precision_bits) * lambda_chi(ctx, s)


def _check_mellin_region(mp, s):
    if s == 1:
        raise PoleError("the Mellin transform of phi has a pole at s = 1")
    if s < 1:
        raise DomainError("the Mellin transform of phi is evaluated for s > 1, got {}".format(s))


def mellin_closed(ctx, s):
    """Lambda(s, phi) = Lambda_k(s) (log q + Lambda'(s, chi)/Lambda(s, chi) - Lambda'(s)/Lambda(s))"""
    mp = ctx.mp
    s = mp.mpf(s)
    _check_mellin_region(mp, s)
    return lambda_k(ctx, s) * (mp.log(ctx.q) + lambda_chi_logderiv(ctx, s)
                               - numerics.lambda_riemann_logderiv(s, ctx.precision_bits))


def mellin_holomorphic_closed(ctx, s):
    """The Mellin transform of the holomorphic part: Lambda_k(s) (log q + L'(s, chi)/L(s, chi) - zeta'(s)/zeta(s))"""
    mp = ctx.mp
    s = mp.mpf(s)
    _check_mellin_region(mp, s)
    return lambda_k(ctx, s) * (mp.log(ctx.q) + l_logderiv(ctx, s) - numerics.zeta_logderiv(s, ctx.precision_bits))


def mellin_nonholomorphic_closed(ctx, s):
    """The Mellin transform of the nonholomorphic part: Lambda_k(s) (psi((s+1)/2) - psi(s/2)) / 2"""
    mp = ctx.mp
    s = mp.mpf(s)
    _check_mellin_region(mp, s)
    bits = ctx.precision_bits
    return lambda_k(ctx, s) * (numerics.digamma((s + 1) / 2, bits) - numerics.digamma(s / 2, bits)) / 2


def mellin_nonholomorphic_via_beta1(ctx, s):
    """2 (2 pi)^-s zeta_k(s) times the beta_1 Mellin integral, computed by quadrature"""
    mp = ctx.mp
    s = mp.mpf(s)
    _check_mellin_region(mp, s)
    return (2 * (2 * mp.pi) ** (-s) * dedekind_zeta(ctx, s)
            * numerics.mellin_beta1_identity_lhs(s, ctx.precision_bits))


def holomorphic_dirichlet_sum(ctx, s, nmax):
    """
    (2 pi)^-s Gamma(s) sum_{n <= nmax} a_n n^-s, the Mellin transform of the holomorphic part summed directly.
    :return: (value, tail estimate from a_n <= 6 d(n) log(q n))
    """
    mp = ctx.mp
    s = mp.mpf(s)
    _check_mellin_region(mp, s)
    expansion = PhiExpansion(ctx, nmax)
    total = mp.fsum(expansion.positive[n] * mp.mpf(n) ** (-s) for n in range(1, nmax + 1) if expansion.positive[n])
    scale = (2 * mp.pi) ** (-s) * mp.gamma(s)
    n = mp.mpf(nmax)
    tail = 6 * mp.log(ctx.q * n) * n ** (1 - s) * (mp.log(n) / (s - 1) + 1 / (s - 1) ** 2)
    return scale * total, scale * tail


def inert_dirichlet_sum(ctx, p, s, nmax):
    """sum_{t <= nmax} (ord_p(t) + 1) rho(t/p) t^-s for an inert prime p"""
    if not ctx.is_inert(p):
        raise DomainError("{} is not inert in Q(sqrt(-{}))".format(p, ctx.q))
    mp = ctx.mp
    s = mp.mpf(s)
    table = rho_table(ctx, nmax // p)
    terms = []
    for m in range(1, nmax // p + 1):
        if table[m]:
            t = m * p
            terms.append((ord_p(t, p) + 1) * table[m] * mp.mpf(t) ** (-s))
    return mp.fsum(terms)


def inert_dirichlet_closed(ctx, p, s):
    """2 p^-s / (1 - p^-2s) zeta_k(s)"""
    mp = ctx.mp
    s = mp.mpf(s)
    x = mp.mpf(p) ** (-s)
    return 2 * x / (1 - x * x) * dedekind_zeta(ctx, s)


def ramified_dirichlet_sum(ctx, s, nmax):
    """sum_{t <= nmax} (ord_q(t) + 1) rho(t) t^-s"""
    mp = ctx.mp
    s = mp.mpf(s)
    table = rho_table(ctx, nmax)
    return mp.fsum((ord_p(t, ctx.q) + 1) * table[t] * mp.mpf(t) ** (-s) for t in range(1, nmax + 1) if table[t])


def ramified_dirichlet_closed(ctx, s):
    """(1 - q^-s)^-1 zeta_k(s)"""
    mp = ctx.mp
    s = mp.mpf(s)
    return dedekind_zeta(ctx, s) / (1 - mp.mpf(ctx.q) ** (-s))


def dirichlet_tail_bound(s, nmax):
    """Estimate of sum_{t > nmax} 2 d(t) t^-s"""
    s = float(s)
    return 2 * nmax ** (1 - s) * (math.log(nmax) / (s - 1) + 1 / (s - 1) ** 2)
