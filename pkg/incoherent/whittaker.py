"""
Local Whittaker factors of the Fourier coefficients of the incoherent Eisenstein series.

All factors are the *normalized* ones, with the local L-factor L_v(s + 1) folded in; ``LocalFactor.raw`` divides it back
out. The finite factors are polynomials in p^-s, the factor at q carries the constant c_q = i q^(-1/2), and the
archimedean factor is given in closed form through Tricomi's confluent hypergeometric function U(a, b, z) for every real
s, with the Siegel integral kept as an independent quadrature oracle.

Places are the string ``INFINITY`` or a rational prime. ``e(x) = exp(2 pi i x)`` throughout.
"""
import logging

from sympy import isprime, factorint

from incoherent import numerics
from incoherent.exceptions import DomainError, SplitPrimeError
from incoherent.quadfield import ord_p

__author__ = 'maintainers@incoherent-eisenstein.org'

log = logging.getLogger(__name__)

INFINITY = 'infinity'


def _as_tau(mp, tau):
    tau = mp.mpmathify(tau)
    if mp.im(tau) <= 0:
        raise DomainError("tau must lie in the upper half plane, got {}".format(tau))
    return mp.mpc(tau)


def _check_finite_prime(ctx, p, t):
    if t == 0:
        raise DomainError("finite Whittaker factors are taken for t != 0")
    if p == ctx.q or not isprime(p):
        raise DomainError("{} is not a prime different from q = {}".format(p, ctx.q))


def chi_infinity(t):
    return 1 if t > 0 else -1


def chi_q(ctx, t):
    """The local character at q: the Legendre symbol of the q-free part of t"""
    if t == 0:
        raise DomainError("chi_q is taken for t != 0")
    rest = t
    while rest % ctx.q == 0:
        rest //= ctx.q
    return ctx.chi(rest)


def local_signs(ctx, t):
    """
    The local signs of t: ``{INFINITY: chi_inf(t), q: chi_q(t), p: chi(p)^ord_p(t) for p | t, p != q}``.
    Their product is 1 for every t != 0.
    """
    signs = {INFINITY: chi_infinity(t), ctx.q: chi_q(ctx, t)}
    for p, exponent in sorted(factorint(abs(t)).items()):
        if p != ctx.q:
            signs[p] = ctx.chi(p) ** exponent
    return signs


def vanishing_places(ctx, t):
    """
    The places whose normalized factor vanishes at s = 0: infinity if t < 0, q if chi_q(t) = +1, and each inert p with
    odd ord_p(t). The count is always odd.
    """
    signs = local_signs(ctx, t)
    places = []
    if signs[INFINITY] == -1:
        places.append(INFINITY)
    if signs[ctx.q] == 1:
        places.append(ctx.q)
    places.extend(p for p in sorted(k for k in signs if k not in (INFINITY, ctx.q)) if signs[p] == -1)
    return places


class LocalFactor(object):
    """
    The normalized factor W*_{t,v}(s) at one place.

    place
     ``INFINITY`` or the prime p
    value
     callable s -> normalized factor
    local_l_factor
     callable s -> L_v(s + 1), the factor folded into ``value``
    value_at_0, deriv_at_0
     the value and the s-derivative at s = 0
    """
    normalized = True

    def __init__(self, place, t, value, local_l_factor, value_at_0, deriv_at_0):
        self.place = place
        self.t = t
        self.value = value
        self.local_l_factor = local_l_factor
        self.value_at_0 = value_at_0
        self.deriv_at_0 = deriv_at_0

    def raw(self, s):
        """The unnormalized factor W_{t,v}(s)"""
        return self.value(s) / self.local_l_factor(s)

    def vanishes_at_0(self):
        return self.value_at_0 == 0

    def __repr__(self):
        return 'LocalFactor(place={}, t={})'.format(self.place, self.t)


def finite_factor(ctx, p, t, s):
    """
    sum_{r=0}^{ord_p t} (chi(p) p^-s)^r
    :param p: A prime different from q
    :param t: A nonzero integer
    :param s: Real or complex s
    """
    _check_finite_prime(ctx, p, t)
    mp = ctx.mp
    x = ctx.chi(p) * mp.mpf(p) ** (-mp.mpmathify(s))
    return mp.fsum(x ** r for r in range(ord_p(t, p) + 1))


def _finite_factor_deriv(ctx, p, t):
    mp = ctx.mp
    chi_p = ctx.chi(p)
    return -mp.log(p) * sum(r * chi_p ** r for r in range(ord_p(t, p) + 1))


def finite_factor_deriv0(ctx, p, t):
    """
    log(p) (ord_p(t) + 1) / 2, the derivative at s = 0 for inert p with odd ord_p(t).
    """
    _check_finite_prime(ctx, p, t)
    if ctx.is_split(p):
        raise SplitPrimeError("{} splits in Q(sqrt(-{}))".format(p, ctx.q))
    exponent = ord_p(t, p)
    if exponent % 2 == 0:
        raise DomainError("ord_{}({}) = {} is even, the factor does not vanish".format(p, t, exponent))
    mp = ctx.mp
    return mp.log(p) * (exponent + 1) / 2


def finite_local_factor(ctx, p, t):
    _check_finite_prime(ctx, p, t)
    mp = ctx.mp
    chi_p = ctx.chi(p)
    return LocalFactor(p, t,
                       value=lambda s: finite_factor(ctx, p, t, s),
                       local_l_factor=lambda s: 1 / (1 - chi_p * mp.mpf(p) ** (-mp.mpmathify(s) - 1)),
                       value_at_0=finite_factor(ctx, p, t, 0),
                       deriv_at_0=_finite_factor_deriv(ctx, p, t))


def c_q(ctx):
    mp = ctx.mp
    return mp.mpc(0, 1) / mp.sqrt(ctx.q)


def q_factor(ctx, t, s):
    """
    (1 - chi_q(t) q^(-s (ord_q(t) + 1))) c_q; for t = 0 this is the limit c_q.
    """
    mp = ctx.mp
    if t == 0:
        return c_q(ctx)
    exponent = ord_p(t, ctx.q) + 1
    return (1 - chi_q(ctx, t) * mp.mpf(ctx.q) ** (-mp.mpmathify(s) * exponent)) * c_q(ctx)


def q_factor_deriv0(ctx, t):
    """c_q chi_q(t) log(q) (ord_q(t) + 1)"""
    if t == 0:
        raise DomainError("q_factor_deriv0 is taken for t != 0")
    mp = ctx.mp
    return c_q(ctx) * chi_q(ctx, t) * mp.log(ctx.q) * (ord_p(t, ctx.q) + 1)


def q_local_factor(ctx, t):
    return LocalFactor(ctx.q, t,
                       value=lambda s: q_factor(ctx, t, s),
                       local_l_factor=lambda s: 1,
                       value_at_0=q_factor(ctx, t, 0),
                       deriv_at_0=q_factor_deriv0(ctx, t))


def arch_l_factor(s, precision_bits=numerics.DEFAULT_PRECISION_BITS):
    """L_inf(s + 1) = pi^(-(s+2)/2) Gamma(s/2 + 1)"""
    mp = numerics.context(precision_bits)
    s = mp.mpmathify(s)
    return mp.pi ** (-(s + 2) / 2) * mp.gamma(s / 2 + 1)


def arch_factor(tau, t, s, precision_bits=numerics.DEFAULT_PRECISION_BITS):
    """
    The normalized archimedean factor W*_{t,inf}(tau, s) for real s. With T = t v:

    * t > 0: 2i v^((1-s)/2) e(tu) pi^(s/2) e^(-2 pi T) (2T)^s U(s/2, s+1, 4 pi T)
    * t < 0: the same with |T| and (s/2) U(s/2 + 1, s + 1, 4 pi |T|)
    * t = 0: i v^((1-s)/2) pi^(-(s+1)/2) Gamma((s+1)/2)

    At s = 0 these are 2i v^(1/2) e(t tau), 0 and i v^(1/2).
    """
    mp = numerics.context(precision_bits)
    tau = _as_tau(mp, tau)
    s = mp.mpf(s)
    u, v = mp.re(tau), mp.im(tau)
    if t == 0:
        return mp.mpc(0, 1) * v ** ((1 - s) / 2) * mp.pi ** (-(s + 1) / 2) * numerics.gamma((s + 1) / 2, precision_bits)
    big_t = abs(t) * v
    z = 4 * mp.pi * big_t
    prefactor = (2 * mp.mpc(0, 1) * v ** ((1 - s) / 2) * mp.expjpi(2 * t * u) * mp.pi ** (s / 2)
                 * mp.exp(-2 * mp.pi * big_t))
    if t > 0:
        if s == 0:
            return prefactor
        return prefactor * (2 * big_t) ** s * mp.hyperu(s / 2, s + 1, z)
    if s == 0:
        return mp.mpc(0)
    return prefactor * (2 * big_t) ** s * (s / 2) * mp.hyperu(s / 2 + 1, s + 1, z)


def arch_factor_deriv0(tau, t, precision_bits=numerics.DEFAULT_PRECISION_BITS):
    """i v^(1/2) e(t tau) beta_1(4 pi |t| v), the s-derivative at 0 for t < 0"""
    if t >= 0:
        raise DomainError("arch_factor_deriv0 is taken for t < 0, got {}".format(t))
    mp = numerics.context(precision_bits)
    tau = _as_tau(mp, tau)
    v = mp.im(tau)
    return (mp.mpc(0, 1) * mp.sqrt(v) * mp.expjpi(2 * t * tau)
            * numerics.beta1(4 * mp.pi * abs(t) * v, precision_bits))


def arch_factor_quadrature(tau, t, s, precision_bits=numerics.DEFAULT_PRECISION_BITS):
    """
    W*_{t,inf}(tau, s) from the Siegel integral, as an oracle for ``arch_factor``. The integration variable is shifted
    by max(2tv, 0) so the only endpoint singularity sits at 0; for t > 0 and s < 2 it is removed by x = y^(2/s).
    :param s: Real s > 0
    """
    mp = numerics.context(precision_bits)
    tau = _as_tau(mp, tau)
    s = mp.mpf(s)
    if s <= 0:
        raise DomainError("the Siegel integral converges for s > 0 only, got {}".format(s))
    u, v = mp.re(tau), mp.im(tau)
    big_t = abs(t) * v
    two_pi = 2 * mp.pi
    if t > 0:
        if s < 2:
            power = 2 / s

            def integrand(y):
                x = y ** power
                return mp.exp(-two_pi * x) * (x + 2 * big_t) ** (s / 2)

            integral = power * numerics.integrate(integrand, [0, 1, mp.inf], precision_bits)
        else:
            integral = numerics.integrate(
                lambda x: mp.exp(-two_pi * x) * (x + 2 * big_t) ** (s / 2) * x ** (s / 2 - 1),
                [0, 1, mp.inf], precision_bits)
        exponential = mp.exp(-two_pi * big_t)
    elif t < 0:
        integral = numerics.integrate(
            lambda x: mp.exp(-two_pi * x) * x ** (s / 2) * (x + 2 * big_t) ** (s / 2 - 1),
            [0, 1, mp.inf], precision_bits)
        exponential = mp.exp(-two_pi * big_t)
    else:
        integral = numerics.integrate(lambda x: mp.exp(-two_pi * x) * x ** (s - 1), [0, 1, mp.inf], precision_bits)
        exponential = mp.one
    raw = 2 * mp.mpc(0, 1) * mp.pi ** (s + 1) * exponential / (mp.gamma(s / 2) * mp.gamma(s / 2 + 1)) * integral
    return v ** ((1 - s) / 2) * mp.expjpi(2 * t * u) * arch_l_factor(s, precision_bits) * raw


def arch_local_factor(tau, t, precision_bits=numerics.DEFAULT_PRECISION_BITS):
    deriv = arch_factor_deriv0(tau, t, precision_bits) if t < 0 else None
    return LocalFactor(INFINITY, t,
                       value=lambda s: arch_factor(tau, t, s, precision_bits),
                       local_l_factor=lambda s: arch_l_factor(s, precision_bits),
                       value_at_0=arch_factor(tau, t, 0, precision_bits),
                       deriv_at_0=deriv)


def local_factors(ctx, tau, t):
    """
    The factors entering the coefficient of index t != 0: infinity, q and every prime p != q dividing t (the factors at
    primes not dividing t are 1).
    """
    if t == 0:
        raise DomainError("local_factors is taken for t != 0")
    factors = [arch_local_factor(tau, t, ctx.precision_bits), q_local_factor(ctx, t)]
    factors.extend(finite_local_factor(ctx, p, t) for p in sorted(factorint(abs(t))) if p != ctx.q)
    return factors
