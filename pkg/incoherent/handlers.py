"""
Command handlers of the command line front end. Each handler is built with the command name and the run
configuration dictionary, and its ``handle()`` returns the report rows as records. ``failures`` picks the rows that
missed their tolerance.
"""
import logging

from incoherent import cm, eisenstein, numerics, phi
from incoherent.checks import Checks
from incoherent.cycles import deg_z_closed_symbolic, deg_z_lattice_symbolic, arakelov_finite, arakelov_archimedean
from incoherent.exceptions import NoHandlerError, ToleranceError, DomainError
from incoherent.quadfield import FieldContext, rho
from incoherent.records import (format_real, format_complex, CoefficientRecord, EvaluationRecord, OracleRecord,
                                MellinRecord, DegreeRecord, ArakelovRecord, GrossZagierRecord, SelftestRecord)
from incoherent.whittaker import INFINITY

__author__ = 'maintainers@incoherent-eisenstein.org'

log = logging.getLogger(__name__)

DEFAULT_TMAX = 20
DEFAULT_V = 1
DEFAULT_U = 0
ORACLE_TOLERANCE = 1e-6
MELLIN_TOLERANCE = 1e-5
GROSS_ZAGIER_TOLERANCE = 1e-12
FRICKE_BELOW_V = 1
CUTOFF_MARGIN = 10


class CommandHandler(object):
    """
    Base handler. Reads its parameters from ``configuration`` with ``configuration.get(key) or DEFAULT``.
    """

    def __init__(self, command, configuration=None, **kwargs):
        self.command = command
        self.configuration = configuration or {}
        self.precision_bits = self.configuration.get('precision_bits') or numerics.DEFAULT_PRECISION_BITS
        self.executor = self.configuration.get('executor')
        self._ctx = None

    @property
    def ctx(self):
        if self._ctx is None:
            self._ctx = FieldContext(self.configuration['q'], self.precision_bits)
        return self._ctx

    @property
    def tolerance(self):
        return self.configuration.get('tolerance') or self.default_tolerance

    default_tolerance = None

    def real(self, x):
        return format_real(x, self.precision_bits)

    def handle(self):
        raise NotImplementedError

    def failures(self, records):
        return [record for record in records if getattr(record, 'passed', True) is False]

    def check(self, records):
        failed = self.failures(records)
        if failed:
            log.error("{} of {} {} rows missed the tolerance".format(len(failed), len(records), self.command))
            raise ToleranceError("{} rows of {} failed".format(len(failed), self.command))


class CoeffsHandler(CommandHandler):
    """a_t(phi) for tmin <= t <= tmax; rows with t <= 0 are taken at v"""

    def handle(self):
        tmax = self.configuration.get('tmax') or DEFAULT_TMAX
        tmin = self.configuration.get('tmin')
        tmin = 0 if tmin is None else tmin
        v = self.configuration.get('tau_v') or DEFAULT_V
        ctx = self.ctx
        expansion = phi.PhiExpansion(ctx, max(tmax, 1), self.executor)
        records = []
        for t in range(tmin, tmax + 1):
            if t > 0:
                symbolic = expansion.symbolic[t]
                primes = symbolic.primes()
                records.append(CoefficientRecord(t=t, kind='positive', value=self.real(expansion.positive[t]),
                                                 prime=str(primes[0]) if len(primes) == 1 else None, v=None,
                                                 v_dependent=False, symbolic=symbolic))
            elif t == 0:
                records.append(CoefficientRecord(t=0, kind='constant', value=self.real(phi.coeff_constant(ctx, v)),
                                                 prime=None, v=self.real(v), v_dependent=True, symbolic=None))
            else:
                records.append(CoefficientRecord(t=t, kind='negative', value=self.real(phi.coeff_negative(ctx, -t, v)),
                                                 prime=INFINITY if rho(ctx, -t) else None, v=self.real(v),
                                                 v_dependent=True, symbolic=None))
        return records


class EvalHandler(CommandHandler):

    def handle(self):
        ctx = self.ctx
        mp = ctx.mp
        u = mp.mpf(self.configuration.get('tau_u') or DEFAULT_U)
        v = mp.mpf(self.configuration.get('tau_v') or DEFAULT_V)
        nmax = self.configuration.get('nmax') or phi.DEFAULT_NMAX
        expansion = phi.PhiExpansion(ctx, nmax, self.executor)
        value, bound = expansion.evaluate(mp.mpc(u, v))
        real, imag = format_complex(value, self.precision_bits)
        fricke_real = fricke_imag = None
        if v < FRICKE_BELOW_V:
            fricke, _ = expansion.evaluate_fricke(mp.mpc(u, v))
            fricke_real, fricke_imag = format_complex(fricke, self.precision_bits)
        return [EvaluationRecord(u=self.real(u), v=self.real(v), real=real, imag=imag, tail_bound=self.real(bound),
                                 nmax=nmax, fricke_real=fricke_real, fricke_imag=fricke_imag)]


class OracleHandler(CommandHandler):
    """Direct lattice-sum coefficients against the local-factor products, for real s > 1"""
    default_tolerance = ORACLE_TOLERANCE

    def handle(self):
        ctx = self.ctx
        s = self.configuration.get('s')
        if s is None:
            raise DomainError("oracle needs --s")
        v = self.configuration.get('tau_v') or DEFAULT_V
        tmax = self.configuration.get('tmax') or DEFAULT_TMAX // 2
        tmin = self.configuration.get('tmin')
        tmin = -tmax if tmin is None else tmin
        ts = [t for t in range(tmin, tmax + 1) if t]
        panels = max(eisenstein.DEFAULT_PANELS, 4 * max(abs(t) for t in ts))
        cutoff = eisenstein.coefficient_cutoff(s, self.tolerance / CUTOFF_MARGIN)
        direct = eisenstein.fourier_coefficients(ctx, v, s, ts, cutoff=cutoff, panels=panels, executor=self.executor)
        records = []
        for t in ts:
            closed = eisenstein.classical_coefficient(ctx, v, t, s)
            gap = abs(direct[t] - closed)
            direct_real, direct_imag = format_complex(direct[t], self.precision_bits)
            product_real, product_imag = format_complex(closed, self.precision_bits)
            records.append(OracleRecord(t=t, direct_real=direct_real, direct_imag=direct_imag,
                                        product_real=product_real, product_imag=product_imag, gap=self.real(gap),
                                        tolerance=self.real(self.tolerance), passed=bool(gap < self.tolerance)))
        return records


class MellinHandler(CommandHandler):
    default_tolerance = MELLIN_TOLERANCE

    def handle(self):
        ctx = self.ctx
        s = self.configuration.get('s')
        if s is None:
            raise DomainError("mellin needs --s")
        nmax = self.configuration.get('nmax') or phi.MELLIN_NMAX
        closed = phi.mellin_closed(ctx, s)
        quadrature = phi.mellin_quadrature(ctx, s, nmax, executor=self.executor)
        gap = abs(quadrature / closed - 1)
        return [MellinRecord(s=self.real(s), closed=self.real(closed), quadrature=self.real(quadrature),
                             relative_gap=self.real(gap),
                             holomorphic=self.real(phi.mellin_holomorphic_closed(ctx, s)),
                             nonholomorphic=self.real(phi.mellin_nonholomorphic_closed(ctx, s)),
                             tolerance=self.real(self.tolerance), passed=bool(gap < self.tolerance))]


class DegzHandler(CommandHandler):
    """deg Z(t) by the closed form and by point counting, next to a_t(phi)"""

    def handle(self):
        ctx = self.ctx
        tmax = self.configuration.get('tmax') or DEFAULT_TMAX
        expansion = phi.PhiExpansion(ctx, tmax, self.executor)
        records = []
        for t in range(1, tmax + 1):
            closed = deg_z_closed_symbolic(ctx, t)
            lattice = deg_z_lattice_symbolic(ctx, t)
            records.append(DegreeRecord(t=t, closed=self.real(closed.evaluate(self.precision_bits)),
                                        lattice=self.real(lattice.evaluate(self.precision_bits)),
                                        coefficient=self.real(expansion.positive[t]),
                                        equal=closed == lattice == expansion.symbolic[t], symbolic=closed))
        return records

    def failures(self, records):
        return [record for record in records if not record.equal]


class ArakelovHandler(CommandHandler):
    """The components of Z(t) for tmin <= t <= tmax, t != 0; archimedean weights at v"""

    def handle(self):
        ctx = self.ctx
        tmax = self.configuration.get('tmax') or DEFAULT_TMAX // 2
        tmin = self.configuration.get('tmin')
        tmin = -tmax if tmin is None else tmin
        v = self.configuration.get('tau_v') or DEFAULT_V
        records = []
        for t in range(tmin, tmax + 1):
            if t > 0:
                divisor = arakelov_finite(ctx, t)
                for (p, form), n in sorted(divisor.finite_part.items()):
                    records.append(ArakelovRecord(t=t, place=str(p), form=list(form), multiplicity=n,
                                                  residue_degree=divisor.residue_degrees[p], weight=None))
            elif t < 0:
                divisor = arakelov_archimedean(ctx, t, v)
                for form in sorted(divisor.archimedean_part):
                    records.append(ArakelovRecord(t=t, place=INFINITY, form=list(form), multiplicity=None,
                                                  residue_degree=None,
                                                  weight=self.real(divisor.archimedean_part[form])))
        return records


class GrossZagierHandler(CommandHandler):
    default_tolerance = GROSS_ZAGIER_TOLERANCE

    def handle(self):
        d = self.configuration.get('d')
        if d is None:
            raise DomainError("gz needs --d")
        check = cm.gross_zagier_check(self.ctx, d, self.precision_bits, self.executor)
        factors, _ = cm.factor_singular_modulus(check.product.nearest_integer, check.q, d)
        return [GrossZagierRecord(q=check.q, d=d, J=check.product.nearest_integer,
                                  integrality_gap=self.real(check.product.integrality_gap),
                                  lhs=self.real(check.lhs), rhs=self.real(check.rhs), gap=self.real(check.gap),
                                  rhs_nonnegative=self.real(check.rhs_nonnegative),
                                  gap_nonnegative=self.real(check.gap_nonnegative),
                                  rhs_corrected=self.real(check.rhs_corrected),
                                  gap_corrected=self.real(check.gap_corrected), convention=check.convention,
                                  factors=[[int(p), int(e)] for p, e in sorted(factors.items())],
                                  rhs_symbolic=check.rhs_corrected_symbolic, tolerance=self.real(self.tolerance),
                                  passed=bool(check.gap_corrected < self.tolerance))]


class SelftestHandler(CommandHandler):

    def handle(self):
        checks = Checks(quick=bool(self.configuration.get('quick')), precision_bits=self.precision_bits,
                        executor=self.executor)
        return [SelftestRecord(name=name, passed=passed, detail=detail) for name, passed, detail in checks.run_all()]


def _command_is(name):
    return lambda command, **kwargs: command == name


default_handlers = [
    (_command_is('coeffs'), CoeffsHandler),
    (_command_is('eval'), EvalHandler),
    (_command_is('oracle'), OracleHandler),
    (_command_is('mellin'), MellinHandler),
    (_command_is('degz'), DegzHandler),
    (_command_is('arakelov'), ArakelovHandler),
    (_command_is('gz'), GrossZagierHandler),
    (_command_is('selftest'), SelftestHandler),
]


def get_handler(command, configuration=None, **kwargs):
    """
    The first handler in ``configuration['handlers']`` (or ``default_handlers``) whose predicate accepts the command.
    """
    handlers = (configuration and configuration.get('handlers')) or default_handlers
    for can_handle, handler in handlers:
        if can_handle(command, **kwargs):
            return handler(command, configuration, **kwargs)
    raise NoHandlerError("No handler can handle command={}, params={}".format(command, kwargs))
