"""
The incoherent Eisenstein series E(tau, s) of weight one attached to k = Q(sqrt(-q)), normalized as
E*(tau, s) = q^((s+1)/2) Lambda(s + 1, chi) E(tau, s).

Two independent descriptions live here. The direct lattice sum over coprime (c, d) (numpy, float64) is valid for
Re(s) > 1 and serves as the oracle; the Fourier coefficients assembled from the local factors of
``incoherent.whittaker`` are the closed forms. The two are related by
``classical coefficient = v^(-1/2) e(-tu) E*_t(g_tau, s) / (q^((s+1)/2) Lambda(s + 1, chi))`` with scalar
``PINNED_SCALAR``.
"""
from concurrent.futures import Executor
import logging
import math

import numpy as np

from incoherent import numerics, whittaker
from incoherent.exceptions import DomainError
from incoherent.quadfield import lambda_chi, lambda_chi_logderiv

__author__ = 'maintainers@incoherent-eisenstein.org'

log = logging.getLogger(__name__)

PINNED_SCALAR = 1
DEFAULT_PANELS = 32
DEFAULT_TOLERANCE = 1e-6
MIN_CUTOFF = 100
RADIUS_FACTOR = 8
MULTIPLE = 'multiple'


class HalfPlanePoint(object):
    """
    tau = u + iv with v > 0, held at a fixed precision. ``mpmath`` converts it to ``mpc`` directly.
    """

    def __init__(self, u, v, precision_bits=numerics.DEFAULT_PRECISION_BITS):
        mp = numerics.context(precision_bits)
        self.u = mp.mpf(u)
        self.v = mp.mpf(v)
        if self.v <= 0:
            raise DomainError("v must be positive, got {}".format(v))
        self.precision_bits = precision_bits

    @property
    def tau(self):
        return numerics.context(self.precision_bits).mpc(self.u, self.v)

    @property
    def _mpc_(self):
        return self.u._mpf_, self.v._mpf_

    def __complex__(self):
        return complex(float(self.u), float(self.v))

    def __eq__(self, other):
        return isinstance(other, HalfPlanePoint) and (self.u, self.v) == (other.u, other.v)

    def __repr__(self):
        return 'HalfPlanePoint(u={}, v={})'.format(self.u, self.v)


class FourierCoefficient(object):
    """
    One Fourier coefficient of E*(g_tau, s) or of its s-derivative at 0.

    t
     the index
    value
     the coefficient
    v_dependent
     whether the matching coefficient of phi depends on v beyond e(t tau) (t <= 0)
    vanishing_places
     the places whose factor vanished at s = 0; empty for values of E*
    """

    def __init__(self, t, value, v_dependent, vanishing_places=()):
        self.t = t
        self.value = value
        self.v_dependent = v_dependent
        self.vanishing_places = tuple(vanishing_places)

    @property
    def vanishing_place(self):
        """The place that was differentiated, ``MULTIPLE`` if three or more vanished, None for values of E*"""
        if not self.vanishing_places:
            return None
        if len(self.vanishing_places) == 1:
            return self.vanishing_places[0]
        return MULTIPLE

    @property
    def is_derivative(self):
        return bool(self.vanishing_places)

    def __repr__(self):
        return 'FourierCoefficient(t={}, value={}, vanishing_place={})'.format(self.t, self.value,
                                                                             self.vanishing_place)


def _check_convergence_region(s):
    if float(s) <= 1:
        raise DomainError("the lattice sum converges for Re(s) > 1 only, got s = {}".format(s))


def _gamma_ratio(sigma):
    """sqrt(pi) Gamma(sigma/2) / Gamma((1+sigma)/2), the integral of (1 + x^2)^(-(1+sigma)/2)"""
    return math.sqrt(math.pi) * math.gamma(sigma / 2) / math.gamma((1 + sigma) / 2)


def tail_bound(s, v, cutoff, radius):
    """
    Bound for the terms left out of ``eisenstein_direct``: all c > cutoff, and |cu + d| > radius for c <= cutoff.
    """
    sigma = float(s)
    v = float(v)
    c_tail = (2 * v ** (-1 - sigma) * cutoff ** (-sigma) / sigma
              + _gamma_ratio(sigma) * v ** (-sigma) * cutoff ** (1 - sigma) / (sigma - 1))
    d_tail = 2 * cutoff * (radius ** (-1 - sigma) + radius ** (-sigma) / sigma)
    return v ** (sigma / 2) * (c_tail + d_tail)


def coefficient_tail_bound(s, v, cutoff, radius):
    """
    Estimate of the truncation error of a single Fourier coefficient extracted from the truncated sum. The exponential
    sums over d mod c are bounded by the gcd of c and t, which averages to a small constant.
    """
    sigma = float(s)
    v = float(v)
    return v ** (sigma / 2) * (_gamma_ratio(sigma) * v ** (-sigma) * 8 * cutoff ** (-sigma) / sigma
                               + 2 * cutoff * radius ** (-sigma) / sigma)


def coefficient_cutoff(s, tolerance=DEFAULT_TOLERANCE):
    """The smallest cutoff (at least ``MIN_CUTOFF``) whose coefficient tail estimate is below ``tolerance``"""
    sigma = float(s)
    _check_convergence_region(sigma)
    return max(MIN_CUTOFF, int(math.ceil((8 / (sigma * tolerance)) ** (1 / sigma))))


def _chi_array(ctx):
    return np.array([ctx.chi(a) for a in range(ctx.q)], dtype=np.float64)


def _direct_sum(ctx, chi_array, u, v, s, cutoff, radius):
    q = ctx.q
    tau = complex(u, v)
    coprime_phi = -1j / math.sqrt(q)
    partials = [1.0 + 0.0j]
    for c in range(1, cutoff + 1):
        centre = -c * u
        d = np.arange(math.ceil(centre - radius), math.floor(centre + radius) + 1, dtype=np.int64)
        d = d[np.gcd(d, c) == 1]
        if c % q == 0:
            phi = chi_array[d % q]
        else:
            phi = coprime_phi * ctx.chi(c)
        z = c * tau + d
        partials.append(np.sum(phi * np.power(np.abs(z), -s) / z))
    return v ** (s / 2) * np.sum(np.array(partials))


def eisenstein_direct(ctx, tau, s, cutoff, radius=None):
    """
    E(tau, s) = v^(s/2) sum over coprime (c, d) modulo +-1 of Phi(c, d) (c tau + d)^-1 |c tau + d|^-s, with
    Phi = chi(d) when q | c and -i q^(-1/2) chi(c) otherwise, summed in float64.
    :param tau: A point of the upper half plane
    :param s: Real s > 1
    :param cutoff: Largest c included
    :param radius: Window |cu + d| <= radius for each c, defaults to ``RADIUS_FACTOR * cutoff``
    :return: (value, tail bound)
    """
    _check_convergence_region(s)
    radius = radius or RADIUS_FACTOR * cutoff
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError("tau must lie in the upper half plane, got {}".format(tau))
    value = _direct_sum(ctx, _chi_array(ctx), tau.real, tau.imag, float(s), cutoff, radius)
    mp = ctx.mp
    return mp.mpc(value.real, value.imag), mp.mpf(tail_bound(s, tau.imag, cutoff, radius))


def fourier_coefficients(ctx, v, s, ts, cutoff=None, panels=DEFAULT_PANELS, radius=None, executor: Executor=None,
                         tolerance=DEFAULT_TOLERANCE):
    """
    Fourier coefficients int_0^1 E(u + iv, s) e(-tu) du of the direct sum for every t in ``ts``, from a single
    sampling pass over ``panels`` equispaced nodes (trapezoid rule).
    :param cutoff: Direct sum cutoff, defaults to ``coefficient_cutoff(s, tolerance)``
    :param executor: Optional executor for sampling the nodes in parallel; results are gathered in node order
    :return: dictionary t -> mpc
    """
    _check_convergence_region(s)
    cutoff = cutoff or coefficient_cutoff(s, tolerance)
    radius = radius or RADIUS_FACTOR * cutoff
    for t in ts:
        if abs(t) > panels / 2:
            log.warning("t = {} aliases with {} panels".format(t, panels))
    log.debug("Sampling the lattice sum at v={} s={} with cutoff {} radius {} on {} panels".format(
        v, s, cutoff, radius, panels))
    chi_array = _chi_array(ctx)
    nodes = [k / panels for k in range(panels)]
    sample = lambda u: _direct_sum(ctx, chi_array, u, float(v), float(s), cutoff, radius)
    if executor is not None:
        samples = np.array(list(executor.map(sample, nodes)))
    else:
        samples = np.array([sample(u) for u in nodes])
    nodes = np.array(nodes)
    mp = ctx.mp
    result = {}
    for t in ts:
        coefficient = np.sum(samples * np.exp(-2j * np.pi * t * nodes)) / panels
        result[t] = mp.mpc(coefficient.real, coefficient.imag)
    return result


def fourier_extract(ctx, v, s, t, cutoff=None, panels=DEFAULT_PANELS, radius=None, executor=None,
                    tolerance=DEFAULT_TOLERANCE):
    """The single coefficient of index t, see ``fourier_coefficients``"""
    return fourier_coefficients(ctx, v, s, [t], cutoff, panels, radius, executor, tolerance)[t]


def coefficient_product(ctx, tau, t, s):
    """
    E*_t(g_tau, s) = q^((s+1)/2) W*_{t,inf}(tau, s) W*_{t,q}(s) prod_{p | t, p != q} W*_{t,p}(s)
    """
    if t == 0:
        raise DomainError("coefficient_product is taken for t != 0, use constant_term")
    mp = ctx.mp
    s = mp.mpf(s)
    result = mp.mpf(ctx.q) ** ((s + 1) / 2)
    for factor in whittaker.local_factors(ctx, tau, t):
        result *= factor.value(s)
    return result


def eisenstein_coefficient(ctx, tau, t, s):
    """The coefficient of index t of E*(g_tau, s), as a FourierCoefficient"""
    value = constant_term(ctx, tau, s) if t == 0 else coefficient_product(ctx, tau, t, s)
    return FourierCoefficient(t, value, v_dependent=True)


def central_deriv_coefficient(ctx, tau, t):
    """
    E*'_t(g_tau, 0). Exactly one vanishing place contributes q^(1/2) times its derivative times the values of the
    other factors; with three or more vanishing places the derivative is 0.
    """
    if t == 0:
        raise DomainError("central_deriv_coefficient is taken for t != 0, use constant_term_deriv0")
    mp = ctx.mp
    factors = whittaker.local_factors(ctx, tau, t)
    vanishing = [f for f in factors if f.vanishes_at_0()]
    places = [f.place for f in vanishing]
    if len(vanishing) == 1:
        value = mp.sqrt(ctx.q) * vanishing[0].deriv_at_0
        for factor in factors:
            if factor is not vanishing[0]:
                value *= factor.value_at_0
    else:
        value = mp.mpc(0)
    return FourierCoefficient(t, value, v_dependent=t < 0, vanishing_places=places)


def _v_of(mp, tau):
    return mp.im(mp.mpmathify(tau))


def constant_term(ctx, tau, s):
    """
    E*_0(g_tau, s) = q^((s+1)/2) Lambda(s+1, chi) v^((s+1)/2) - q^((1-s)/2) Lambda(1-s, chi) v^((1-s)/2)
    """
    mp = ctx.mp
    s = mp.mpf(s)
    v = _v_of(mp, tau)
    q = mp.mpf(ctx.q)
    return (q ** ((s + 1) / 2) * lambda_chi(ctx, s + 1) * v ** ((s + 1) / 2)
            - q ** ((1 - s) / 2) * lambda_chi(ctx, 1 - s) * v ** ((1 - s) / 2))


def constant_term_deriv0(ctx, tau):
    """v^(1/2) h (log q + log v + 2 Lambda'(1, chi) / Lambda(1, chi))"""
    mp = ctx.mp
    v = _v_of(mp, tau)
    return mp.sqrt(v) * ctx.class_number * (mp.log(ctx.q) + mp.log(v) + 2 * lambda_chi_logderiv(ctx, 1))


def classical_coefficient(ctx, v, t, s):
    """
    The t-th Fourier coefficient in u of E(u + iv, s), from the closed forms:
    v^(-1/2) E*_t(g_iv, s) / (q^((s+1)/2) Lambda(s + 1, chi)) times ``PINNED_SCALAR``.
    """
    mp = ctx.mp
    s = mp.mpf(s)
    v = mp.mpf(v)
    tau = mp.mpc(0, v)
    normalization = mp.mpf(ctx.q) ** ((s + 1) / 2) * lambda_chi(ctx, s + 1)
    value = constant_term(ctx, tau, s) if t == 0 else coefficient_product(ctx, tau, t, s)
    return PINNED_SCALAR * value / (mp.sqrt(v) * normalization)
