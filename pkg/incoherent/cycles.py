"""
Arithmetic degrees of the special 0-cycles Z(t) on the moduli of CM elliptic curves with CM by O_k.

Two routes give deg Z(t) for t >= 1:
  * the closed form 2 log q (ord_q t + 1) rho(t) + 2 sum_{p inert} log p (ord_p t + 1) rho(t/p);
  * point counting: sum_p f_p log p nu_p(t) |O_k^x| sum_C #{ideals c in C of norm t / kappa_p}, with
    kappa_p = p for inert p and kappa_q = 1.
For t <= -1 the cycle becomes an Arakelov divisor with purely archimedean weights 2 beta_1(4 pi |t| v) per class.

Degrees are returned as exact ``LogCombination`` values by the ``*_symbolic`` functions.
"""
import logging

from sympy import factorint

from incoherent import numerics
from incoherent.exceptions import DomainError, SplitPrimeError
from incoherent.numerics import LogCombination
from incoherent.quadfield import ord_p, rho, class_rep_count

__author__ = 'maintainers@incoherent-eisenstein.org'

log = logging.getLogger(__name__)


class GrossMultiplicity(object):
    """
    The length nu_p(t) = (ord_p t + d_p - 1) / f_p + 1 of the local deformation ring at a point of Z(t), with
    f_p = [residue field : F_p] and d_p = ord_p(disc k).
    """

    def __init__(self, p, f, d, nu):
        self.p = p
        self.f = f
        self.d = d
        self.nu = nu

    def __eq__(self, other):
        return isinstance(other, GrossMultiplicity) and \
            (self.p, self.f, self.d, self.nu) == (other.p, other.f, other.d, other.nu)

    def __repr__(self):
        return 'GrossMultiplicity(p={}, f={}, d={}, nu={})'.format(self.p, self.f, self.d, self.nu)


def gross_multiplicity(ctx, p, t):
    """
    :param p: A prime not split in k
    :param t: A nonzero integer; for inert p, ord_p(t) must be odd
    """
    if t == 0:
        raise DomainError("Gross multiplicities are taken for t != 0")
    if p != ctx.q and not ctx.is_inert(p):
        raise SplitPrimeError("{} splits in Q(sqrt(-{}))".format(p, ctx.q))
    order = ord_p(t, p)
    if p == ctx.q:
        f, d = 1, 1
    else:
        f, d = 2, 0
        if order % 2 == 0:
            raise DomainError("ord_{}({}) = {} is even, so {} does not support Z({})".format(p, t, order, p, t))
    nu = (order + d - 1) // f + 1
    return GrossMultiplicity(p, f, d, nu)


def kappa(ctx, p):
    """p for inert p, 1 for p = q"""
    if p == ctx.q:
        return 1
    if not ctx.is_inert(p):
        raise SplitPrimeError("{} splits in Q(sqrt(-{}))".format(p, ctx.q))
    return p


def supporting_primes(ctx, t):
    """q together with the inert primes dividing t to odd order, sorted"""
    if t < 1:
        raise DomainError("supporting primes are taken for t >= 1, got {}".format(t))
    primes = {ctx.q}
    for p, exponent in factorint(t).items():
        if ctx.is_inert(p) and exponent % 2 == 1:
            primes.add(p)
    return sorted(primes)


def deg_z_closed_symbolic(ctx, t):
    if t < 1:
        raise DomainError("deg Z(t) is computed for t >= 1, got {}".format(t))
    terms = {}
    rho_t = rho(ctx, t)
    if rho_t:
        terms[ctx.q] = 2 * (ord_p(t, ctx.q) + 1) * rho_t
    for p, exponent in factorint(t).items():
        if ctx.is_inert(p):
            rho_rest = rho(ctx, t // p)
            if rho_rest:
                terms[p] = 2 * (exponent + 1) * rho_rest
    return LogCombination(terms)


def deg_z_closed(ctx, t):
    return deg_z_closed_symbolic(ctx, t).evaluate(ctx.precision_bits)


class ArakelovDivisor(object):
    """
    D = sum_lambda r_lambda lambda + sum_P n_P P.

    :ivar finite_part: {(p, form): n} multiplicities of the primes of the Hilbert class field above p, one per ideal
     class labelled by its reduced form
    :ivar archimedean_part: {form: r} real weights of the complex embeddings, one per ideal class
    :ivar residue_degrees: {p: f_p} for every p in ``finite_part``
    """

    def __init__(self, finite_part=None, archimedean_part=None, residue_degrees=None, precision_bits=None):
        self.finite_part = {key: n for key, n in (finite_part or {}).items() if n}
        self.archimedean_part = dict(archimedean_part or {})
        self.residue_degrees = dict(residue_degrees or {})
        self.precision_bits = precision_bits or numerics.DEFAULT_PRECISION_BITS
        for (p, _), n in self.finite_part.items():
            if n < 0:
                raise DomainError("negative multiplicity {} at {}".format(n, p))
            if p not in self.residue_degrees:
                raise DomainError("no residue degree for {}".format(p))
        for form, r in self.archimedean_part.items():
            if r < 0:
                raise DomainError("negative archimedean weight {} at {}".format(r, form))

    def primes(self):
        return sorted({p for p, _ in self.finite_part})

    def degree_symbolic(self):
        """The finite degree sum f_p log p n_P"""
        terms = {}
        for (p, _), n in self.finite_part.items():
            terms[p] = terms.get(p, 0) + self.residue_degrees[p] * n
        return LogCombination(terms)

    def degree(self):
        mp = numerics.context(self.precision_bits)
        return self.degree_symbolic().evaluate(self.precision_bits) + mp.fsum(
            self.archimedean_part[form] for form in sorted(self.archimedean_part))

    def is_zero(self):
        return not self.finite_part and not any(self.archimedean_part.values())

    def __repr__(self):
        return 'ArakelovDivisor(finite={}, archimedean={})'.format(self.finite_part, self.archimedean_part)


def arakelov_finite(ctx, t):
    """
    Z(t) for t >= 1 as a divisor: n_P = nu_p(t) |O_k^x| #{c in C_P : N(c) = t / kappa_p}.
    """
    if t < 1:
        raise DomainError("arakelov_finite needs t >= 1, got {}".format(t))
    finite_part = {}
    residue_degrees = {}
    for p in supporting_primes(ctx, t):
        norm = t // kappa(ctx, p)
        counts = {form: class_rep_count(ctx, form, norm) for form in ctx.forms}
        if not any(counts.values()):
            continue
        multiplicity = gross_multiplicity(ctx, p, t)
        residue_degrees[p] = multiplicity.f
        for form, count in counts.items():
            finite_part[(p, form)] = multiplicity.nu * ctx.unit_count * count
    log.debug("Z({}) for q={} supported at {}".format(t, ctx.q, sorted(residue_degrees)))
    return ArakelovDivisor(finite_part, residue_degrees=residue_degrees, precision_bits=ctx.precision_bits)


def deg_z_lattice_symbolic(ctx, t):
    """deg Z(t) from the per-class counts of ``arakelov_finite``"""
    return arakelov_finite(ctx, t).degree_symbolic()


def deg_z_lattice(ctx, t):
    return deg_z_lattice_symbolic(ctx, t).evaluate(ctx.precision_bits)


def arakelov_archimedean(ctx, t, v):
    """
    Z(t, v) for t <= -1: weight 2 beta_1(4 pi |t| v) #{c in C : N(c) = |t|} at the embedding of class C.
    """
    if t > -1:
        raise DomainError("arakelov_archimedean needs t <= -1, got {}".format(t))
    mp = ctx.mp
    v = mp.mpf(v)
    if v <= 0:
        raise DomainError("v must be positive, got {}".format(v))
    weight = 2 * numerics.beta1(4 * mp.pi * (-t) * v, ctx.precision_bits)
    archimedean_part = {form: weight * class_rep_count(ctx, form, -t) for form in ctx.forms}
    return ArakelovDivisor(archimedean_part=archimedean_part, precision_bits=ctx.precision_bits)
