"""
Arithmetic of the imaginary quadratic field k = Q(sqrt(-q)), q > 3 a prime congruent to 3 modulo 4: the character
chi = (-q / .), the class group realised by reduced binary quadratic forms, the ideal counting function rho and the
Dirichlet L-function of chi.

Ideal classes and forms correspond by ``(a, (-b + sqrt(-q)) / 2) <-> (a, b, c)``; under this correspondence the ideals
of norm m in a class C are counted by the representations of m by the form of the inverse class.
"""
import logging
from math import gcd, isqrt

from sympy import isprime, factorint, legendre_symbol, gcdex, multiplicity

from incoherent import numerics
from incoherent.exceptions import InvalidFieldError, InvalidDiscriminantError, DomainError, PrecisionError

__author__ = 'maintainers@incoherent-eisenstein.org'

log = logging.getLogger(__name__)

UNIT_COUNT = 2
CLASS_NUMBER_TOLERANCE = 1e-10


def ord_p(n, p):
    """The exponent of p in the nonzero integer n"""
    return multiplicity(p, abs(n))


def is_fundamental_discriminant(disc):
    if disc >= 0:
        return False
    if disc % 4 == 1:
        return all(e == 1 for e in factorint(-disc).values())
    if disc % 4 == 0:
        m = disc // 4
        if m % 4 not in (2, 3):
            return False
        return all(e == 1 for e in factorint(-m).values())
    return False


class ReducedForm(object):
    """
    A reduced positive definite binary quadratic form ``a x^2 + b x y + c y^2``: ``|b| <= a <= c`` and ``b >= 0`` if
    ``|b| == a`` or ``a == c``. Forms are immutable, hashable and ordered by ``(a, b, c)``.
    """
    __slots__ = ('a', 'b', 'c')

    def __init__(self, a, b, c):
        if a <= 0 or b * b - 4 * a * c >= 0:
            raise InvalidDiscriminantError("({}, {}, {}) is not positive definite".format(a, b, c))
        if not (abs(b) <= a <= c) or (b < 0 and (-b == a or a == c)):
            raise DomainError("({}, {}, {}) is not reduced".format(a, b, c))
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'c', c)

    def __setattr__(self, key, value):
        raise AttributeError("ReducedForm is immutable")

    @classmethod
    def reduce(cls, a, b, c):
        """The reduced form equivalent to the positive definite form (a, b, c)"""
        if a <= 0 or b * b - 4 * a * c >= 0:
            raise InvalidDiscriminantError("({}, {}, {}) is not positive definite".format(a, b, c))
        while True:
            if not -a < b <= a:
                r = (a - b) // (2 * a)
                b, c = b + 2 * r * a, a * r * r + b * r + c
            if a > c:
                a, b, c = c, -b, a
            elif a == c and b < 0:
                b = -b
            else:
                return cls(a, b, c)

    @classmethod
    def identity(cls, disc):
        """The principal form of discriminant ``disc``"""
        if disc % 4 == 0:
            return cls(1, 0, -disc // 4)
        return cls(1, 1, (1 - disc) // 4)

    def discriminant(self):
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def inverse(self):
        return ReducedForm.reduce(self.a, -self.b, self.c)

    def compose(self, other):
        """
        Dirichlet composition, followed by reduction.
        :param other: A form of the same discriminant
        """
        disc = self.discriminant()
        if other.discriminant() != disc:
            raise InvalidDiscriminantError("cannot compose forms of discriminants {} and {}".format(
                disc, other.discriminant()))
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        s = (b1 + b2) // 2
        u1, v1, d1 = (int(x) for x in gcdex(a1, a2))
        x, w, g = (int(y) for y in gcdex(d1, s))
        if g < 0:
            x, w, g = -x, -w, -g
        u, v = x * u1, x * v1
        a3 = a1 * a2 // (g * g)
        b3 = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + disc) // 2) // g
        b3 %= 2 * a3
        return ReducedForm.reduce(a3, b3, (b3 * b3 - disc) // (4 * a3))

    def is_identity(self):
        return self == ReducedForm.identity(self.discriminant())

    def as_tuple(self):
        return self.a, self.b, self.c

    def __iter__(self):
        return iter(self.as_tuple())

    def __eq__(self, other):
        return isinstance(other, ReducedForm) and self.as_tuple() == other.as_tuple()

    def __lt__(self, other):
        return self.as_tuple() < other.as_tuple()

    def __hash__(self):
        return hash(self.as_tuple())

    def __repr__(self):
        return 'ReducedForm({}, {}, {})'.format(self.a, self.b, self.c)


def reduced_forms(disc):
    """
    One reduced primitive form per class of discriminant ``disc``, sorted by ``(a, b, c)``.
    :param disc: A negative integer congruent to 0 or 1 mod 4
    """
    if disc >= 0 or disc % 4 not in (0, 1):
        raise InvalidDiscriminantError("{} is not a negative discriminant".format(disc))
    forms = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            numerator = b * b - disc
            if numerator % (4 * a):
                continue
            c = numerator // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            forms.append(ReducedForm(a, b, c))
        a += 1
    return sorted(forms)


def representation_count(form, m):
    """
    |{(x, y) in Z^2 : form(x, y) = m}|, solving ``(2ax + by)^2 = 4am - |D| y^2`` for x on each admissible y.
    """
    if m <= 0:
        raise DomainError("representation counts are taken for m >= 1, got {}".format(m))
    a, b = form.a, form.b
    disc = -form.discriminant()
    count = 0
    y_max = isqrt(4 * a * m // disc)
    for y in range(-y_max, y_max + 1):
        k = 4 * a * m - disc * y * y
        if k < 0:
            continue
        root = isqrt(k)
        if root * root != k:
            continue
        for r in {root, -root}:
            x2a = r - b * y
            if x2a % (2 * a) == 0:
                count += 1
    return count


def _local_rho(chi_p, exponent):
    if chi_p == 1:
        return exponent + 1
    if chi_p == -1:
        return 1 if exponent % 2 == 0 else 0
    return 1


class FieldContext(object):
    """
    Everything attached to a fixed prime q: the character, the reduced forms of discriminant -q, the class number and
    the cached values L(1, chi) and Lambda'(1, chi) / Lambda(1, chi).
    Immutable after construction and safe to share between threads; ``mp`` always hands out the calling thread's
    ``mpmath`` context.
    """

    def __init__(self, q, precision_bits=numerics.DEFAULT_PRECISION_BITS):
        """
        :param q: A prime congruent to 3 modulo 4, larger than 3
        :param precision_bits: Working precision of every value computed for this field
        """
        validate_q(q)
        self.q = q
        self.discriminant = -q
        self.precision_bits = precision_bits
        self.unit_count = UNIT_COUNT
        self._chi_table = [legendre_symbol(a, q) if a else 0 for a in range(q)]
        self.forms = reduced_forms(-q)
        self.class_number = len(self.forms)
        if self.class_number % 2 != 1:
            raise InvalidFieldError("class number {} of -{} is even".format(self.class_number, q))
        self.l_at_1 = dirichlet_l(self, 1)
        self.lambda_logderiv_at_1 = -self.mp.log(q) - _lambda_chi_logderiv_direct(self, self.mp.zero)
        self._check_class_number()
        log.debug("FieldContext q={} h={} at {} bits".format(q, self.class_number, precision_bits))

    @property
    def mp(self):
        return numerics.context(self.precision_bits)

    @property
    def h(self):
        return self.class_number

    def chi(self, n):
        return self._chi_table[n % self.q]

    def is_inert(self, p):
        return p != self.q and self.chi(p) == -1

    def is_split(self, p):
        return self.chi(p) == 1

    def principal_form(self):
        return self.forms[0]

    def _check_class_number(self):
        mp = self.mp
        expected = mp.pi * self.class_number / mp.sqrt(self.q)
        gap = abs(self.l_at_1 - expected) / expected
        if gap > CLASS_NUMBER_TOLERANCE:
            log.error("L(1, chi) = {} but pi h / sqrt(q) = {}".format(self.l_at_1, expected))
            raise PrecisionError("class number formula check failed for q = {}".format(self.q))

    def __repr__(self):
        return 'FieldContext(q={}, precision_bits={})'.format(self.q, self.precision_bits)


def validate_q(q):
    if not isinstance(q, int) or q <= 3 or q % 4 != 3 or not isprime(q):
        raise InvalidFieldError("q must be a prime congruent to 3 mod 4 and larger than 3, got {}".format(q))
    return q


def chi(ctx, n):
    """The Kronecker symbol (-q / n)"""
    return ctx.chi(n)


def rho(ctx, n):
    """
    The number of integral ideals of O_k of norm n, from the factorisation of n.
    :param n: A nonzero integer; negative n give 0
    """
    if n == 0:
        raise DomainError("rho(0) is not defined")
    if n < 0:
        return 0
    result = 1
    for p, exponent in factorint(n).items():
        result *= _local_rho(ctx.chi(p), exponent)
        if result == 0:
            break
    return result


def rho_table(ctx, nmax):
    """[rho(0) placeholder 0, rho(1), ..., rho(nmax)] by a smallest-prime-factor sieve"""
    smallest = list(range(nmax + 1))
    for i in range(2, isqrt(nmax) + 1):
        if smallest[i] == i:
            for j in range(i * i, nmax + 1, i):
                if smallest[j] == j:
                    smallest[j] = i
    table = [0] * (nmax + 1)
    if nmax >= 1:
        table[1] = 1
    for m in range(2, nmax + 1):
        p = smallest[m]
        rest, exponent = m, 0
        while rest % p == 0:
            rest //= p
            exponent += 1
        table[m] = table[rest] * _local_rho(ctx.chi(p), exponent)
    return table


def rho_brute(ctx, n):
    """rho(n) by counting representations by every reduced form of discriminant -q"""
    if n < 1:
        raise DomainError("rho_brute needs n >= 1, got {}".format(n))
    return sum(representation_count(form, n) for form in ctx.forms) // ctx.unit_count


def class_rep_count(ctx, form, m):
    """
    The number of integral ideals of norm m in the class labelled by ``form``.
    :param form: A reduced form of discriminant -q labelling the class
    :param m: A positive integer
    """
    if form.discriminant() != ctx.discriminant:
        raise InvalidDiscriminantError("{} is not a form of discriminant {}".format(form, ctx.discriminant))
    return representation_count(form.inverse(), m) // ctx.unit_count


def _l_value(ctx, s):
    mp = ctx.mp
    q = ctx.q
    return mp.mpf(q) ** (-s) * mp.fsum(
        ctx.chi(a) * numerics.hurwitz_zeta(s, mp.mpf(a) / q, ctx.precision_bits) for a in range(1, q))


def _l_derivative(ctx, s):
    mp = ctx.mp
    q = ctx.q
    partial = mp.fsum(ctx.chi(a) * numerics.hurwitz_zeta(s, mp.mpf(a) / q, ctx.precision_bits, derivative=1)
                      for a in range(1, q))
    return -mp.log(q) * _l_value(ctx, s) + mp.mpf(q) ** (-s) * partial


def dirichlet_l(ctx, s):
    """
    L(s, chi) = q^-s sum_a chi(a) zeta(s, a/q) for s != 1, and -1/q sum_a chi(a) psi(a/q) at s = 1.
    :param s: A real number, s > 0
    """
    mp = ctx.mp
    s = mp.mpf(s)
    if s <= 0:
        raise DomainError("dirichlet_l is evaluated for s > 0, got {}".format(s))
    if s == 1:
        q = ctx.q
        return -mp.fsum(ctx.chi(a) * mp.digamma(mp.mpf(a) / q) for a in range(1, q)) / q
    return _l_value(ctx, s)


def l_logderiv(ctx, s):
    """
    L'(s, chi) / L(s, chi). The derivative is the analytic s-derivative of the Hurwitz representation; at s = 1 it is
    read off the cached Lambda'(1, chi) / Lambda(1, chi).
    """
    mp = ctx.mp
    s = mp.mpf(s)
    if s <= 0:
        raise DomainError("l_logderiv is evaluated for s > 0, got {}".format(s))
    if s == 1:
        return ctx.lambda_logderiv_at_1 + mp.log(mp.pi) / 2 - mp.digamma(mp.one) / 2
    return _l_derivative(ctx, s) / _l_value(ctx, s)


def lambda_chi(ctx, s):
    """
    Lambda(s, chi) = pi^-((s+1)/2) Gamma((s+1)/2) L(s, chi), for every real s;
    below 1/2 through Lambda(s, chi) = q^(1/2 - s) Lambda(1 - s, chi).
    """
    mp = ctx.mp
    s = mp.mpf(s)
    half = mp.mpf(1) / 2
    if s < half:
        return mp.mpf(ctx.q) ** (half - s) * lambda_chi(ctx, 1 - s)
    l_value = ctx.l_at_1 if s == 1 else _l_value(ctx, s)
    return mp.pi ** (-(s + 1) / 2) * mp.gamma((s + 1) / 2) * l_value


def _lambda_chi_logderiv_direct(ctx, s):
    mp = ctx.mp
    return -mp.log(mp.pi) / 2 + mp.digamma((s + 1) / 2) / 2 + _l_derivative(ctx, s) / _l_value(ctx, s)


def lambda_chi_logderiv(ctx, s):
    """
    Lambda'(s, chi) / Lambda(s, chi) for every real s, continued by Lambda'/Lambda(s) = -log q - Lambda'/Lambda(1 - s).
    """
    mp = ctx.mp
    s = mp.mpf(s)
    if s == 1:
        return ctx.lambda_logderiv_at_1
    if s == 0:
        return _lambda_chi_logderiv_direct(ctx, s)
    if s < mp.mpf(1) / 2:
        return -mp.log(ctx.q) - lambda_chi_logderiv(ctx, 1 - s)
    return _lambda_chi_logderiv_direct(ctx, s)


def dedekind_zeta(ctx, s):
    """zeta_k(s) = zeta(s) L(s, chi)"""
    return numerics.riemann_zeta(s, ctx.precision_bits) * dirichlet_l(ctx, s)
