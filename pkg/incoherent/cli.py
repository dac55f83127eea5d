"""
``incoherent`` command line front end.

Subcommands: coeffs, eval, oracle, mellin, degz, arakelov, gz, selftest. Exit codes: 0 success, 1 invalid input,
2 a comparison missed its tolerance, 3 a quadrature or precision failure.
"""
from concurrent.futures import ThreadPoolExecutor
import argparse
import csv
import io
import json
import logging
import math
import sys

from incoherent import __version__, numerics
from incoherent.exceptions import (DomainError, InvalidFieldError, InvalidDiscriminantError, ToleranceError,
                                   ConvergenceError, PrecisionError, NoHandlerError, PoleError)
from incoherent.handlers import get_handler
from incoherent.quadfield import validate_q
from incoherent.records import emit_json, RECORD_TYPES

__author__ = 'maintainers@incoherent-eisenstein.org'

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_TOLERANCE = 2
EXIT_CONVERGENCE = 3
COMMANDS = ('coeffs', 'eval', 'oracle', 'mellin', 'degz', 'arakelov', 'gz', 'selftest')
FORMATS = ('json', 'csv', 'text')
LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


class RunConfig(object):
    """
    The validated parameters of one run. ``configuration()`` hands them to the command handler as a plain dict.
    """

    def __init__(self, command, q=None, precision_bits=numerics.DEFAULT_PRECISION_BITS, nmax=None, tau_u=None,
                 tau_v=None, s=None, tmin=None, tmax=None, d=None, output_format='text', threads=1, tolerance=None,
                 quick=False):
        if command not in COMMANDS:
            raise DomainError("unknown command {}".format(command))
        if q is not None:
            validate_q(q)
        elif command != 'selftest':
            raise InvalidFieldError("--q is required for {}".format(command))
        if precision_bits < 16:
            raise DomainError("--bits must be at least 16, got {}".format(precision_bits))
        for name, value in (('nmax', nmax), ('tmax', tmax), ('threads', threads)):
            if value is not None and value < 1:
                raise DomainError("--{} must be positive, got {}".format(name, value))
        if output_format not in FORMATS:
            raise DomainError("--format must be one of {}".format(', '.join(FORMATS)))
        self.command = command
        self.q = q
        self.precision_bits = precision_bits
        self.nmax = nmax
        self.tau_u = tau_u
        self.tau_v = tau_v
        self.s = s
        self.tmin = tmin
        self.tmax = tmax
        self.d = d
        self.output_format = output_format
        self.threads = threads
        self.tolerance = tolerance
        self.quick = quick

    @classmethod
    def from_args(cls, args):
        return cls(args.command, q=args.q, precision_bits=args.bits, nmax=args.nmax, tau_u=args.tau_u,
                   tau_v=args.tau_v, s=args.s, tmin=args.tmin, tmax=args.tmax, d=args.d, output_format=args.format,
                   threads=args.threads, tolerance=args.tolerance, quick=getattr(args, 'quick', False))

    def configuration(self, executor=None):
        return {
            'q': self.q,
            'precision_bits': self.precision_bits,
            'nmax': self.nmax,
            'tau_u': self.tau_u,
            'tau_v': self.tau_v,
            's': self.s,
            'tmin': self.tmin,
            'tmax': self.tmax,
            'd': self.d,
            'tolerance': self.tolerance,
            'quick': self.quick,
            'executor': executor,
        }

    def header(self):
        return {'q': self.q, 'precision_bits': self.precision_bits}


def decimal(text):
    """A finite real number, kept as its decimal string so no binary rounding reaches mpmath"""
    if not math.isfinite(float(text)):
        raise ValueError(text)
    return text.strip()


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write('{}: error: {}\n'.format(self.prog, message))
        sys.exit(EXIT_VALIDATION)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--q', type=int, help="prime q = 3 mod 4, q > 3")
    common.add_argument('--bits', type=int, default=numerics.DEFAULT_PRECISION_BITS, help="working precision")
    common.add_argument('--nmax', type=int, help="number of Fourier terms")
    common.add_argument('--tau-u', dest='tau_u', type=decimal, help="real part of tau")
    common.add_argument('--tau-v', '--v', dest='tau_v', type=decimal, help="imaginary part of tau")
    common.add_argument('--s', type=decimal, help="real s")
    common.add_argument('--tmin', type=int, help="smallest index t")
    common.add_argument('--tmax', type=int, help="largest index t")
    common.add_argument('--d', type=int, help="-d, the second fundamental discriminant")
    common.add_argument('--format', choices=FORMATS, default='text')
    common.add_argument('--threads', type=int, default=1)
    common.add_argument('--tolerance', type=float)
    common.add_argument('--verbose', action='count', default=0, help="once for info, twice for debug logging")

    parser = _Parser(prog='incoherent', description="The weight one form phi of Q(sqrt(-q)) and its cross-checks")
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    commands = parser.add_subparsers(dest='command', parser_class=_Parser)
    commands.required = True
    for name in COMMANDS:
        command = commands.add_parser(name, parents=[common])
        if name == 'selftest':
            command.add_argument('--quick', action='store_true', help="reduced ranges")
    return parser


def _cell(value):
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    return '' if value is None else value


def emit_csv(command, records):
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=RECORD_TYPES[command].columns(), lineterminator='\n')
    writer.writeheader()
    for record in records:
        writer.writerow({key: _cell(value) for key, value in record.to_dict().items()})
    return out.getvalue().rstrip('\n')


def emit_text(command, records):
    columns = RECORD_TYPES[command].columns()
    rows = [[str(_cell(record.to_dict()[column])) for column in columns] for record in records]
    widths = [max([len(column)] + [len(row[i]) for row in rows]) for i, column in enumerate(columns)]
    lines = ['  '.join(column.ljust(width) for column, width in zip(columns, widths)).rstrip()]
    lines.extend('  '.join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows)
    return '\n'.join(lines)


def render(config, records):
    if config.output_format == 'json':
        return emit_json(config.command, records, **config.header())
    if config.output_format == 'csv':
        return emit_csv(config.command, records)
    return emit_text(config.command, records)


def run(config, out=None, handlers=None):
    """
    Runs one command and writes its report to ``out``.
    :param handlers: Optional (can_handle, handler class) pairs used in place of ``default_handlers``
    :raise ToleranceError: after the report is written, when rows missed their tolerance
    """
    out = out or sys.stdout
    executor = ThreadPoolExecutor(max_workers=config.threads) if config.threads > 1 else None
    try:
        configuration = config.configuration(executor)
        if handlers:
            configuration['handlers'] = handlers
        handler = get_handler(config.command, configuration)
        records = handler.handle()
        out.write(render(config, records) + '\n')
        handler.check(records)
        return records
    finally:
        if executor is not None:
            executor.shutdown()


def main(argv=None, out=None, handlers=None):
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT)
    try:
        run(RunConfig.from_args(args), out, handlers)
    except (DomainError, PoleError, InvalidFieldError, InvalidDiscriminantError, NoHandlerError) as e:
        sys.stderr.write('incoherent: {}\n'.format(e))
        return EXIT_VALIDATION
    except ToleranceError as e:
        sys.stderr.write('incoherent: {}\n'.format(e))
        return EXIT_TOLERANCE
    except (ConvergenceError, PrecisionError) as e:
        sys.stderr.write('incoherent: {}\n'.format(e))
        return EXIT_CONVERGENCE
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
