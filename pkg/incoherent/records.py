"""
Result records emitted by the command line front end, one class per kind of report row.

Records hold display-ready values: arbitrary precision numbers are kept as decimal strings with a digit count derived
from the working precision, exact degrees as ``LogCombination``. ``to_dict`` gives the JSON form and the deserializers
in ``DESERIALIZERS`` rebuild equal records from it.
"""
import json
import logging
import math

from incoherent import numerics
from incoherent.deserialize import DictDeserializer, IterableDictDeserializer
from incoherent.numerics import LogCombination

__author__ = 'maintainers@incoherent-eisenstein.org'

log = logging.getLogger(__name__)

MIN_DIGITS = 6
DIGIT_MARGIN = 2


def digits_for(precision_bits):
    return max(MIN_DIGITS, int(math.floor(precision_bits * math.log10(2))) - DIGIT_MARGIN)


def format_real(x, precision_bits):
    if x is None:
        return None
    mp = numerics.context(precision_bits)
    return mp.nstr(mp.mpf(x), digits_for(precision_bits))


def format_complex(z, precision_bits):
    """(real, imag) as decimal strings"""
    mp = numerics.context(precision_bits)
    z = mp.mpmathify(z)
    return format_real(mp.re(z), precision_bits), format_real(mp.im(z), precision_bits)


class Record(object):
    """
    A report row. ``FIELDS`` lists ``(name, json type)`` in output order; ``SYMBOLIC`` names the fields holding a
    ``LogCombination``.
    """
    FIELDS = ()
    SYMBOLIC = ()

    def __init__(self, **values):
        names = [name for name, _ in self.FIELDS]
        unknown = set(values) - set(names)
        if unknown:
            raise TypeError("{} has no fields {}".format(type(self).__name__, sorted(unknown)))
        for name in names:
            setattr(self, name, values.get(name))

    def to_dict(self):
        result = {}
        for name, _ in self.FIELDS:
            value = getattr(self, name)
            if name in self.SYMBOLIC and value is not None:
                value = value.to_json()
            result[name] = value
        return result

    def __eq__(self, other):
        return type(self) is type(other) and self.to_dict() == other.to_dict()

    def __repr__(self):
        fields = ', '.join('{}={!r}'.format(k, v) for k, v in self.to_dict().items())
        return '{}({})'.format(type(self).__name__, fields)

    @classmethod
    def columns(cls):
        return [name for name, _ in cls.FIELDS]


class CoefficientRecord(Record):
    """One Fourier coefficient of phi; ``kind`` is positive, negative or constant"""
    FIELDS = (('t', 'integer'), ('kind', 'string'), ('value', 'decimal'), ('prime', 'string|null'),
              ('v', 'decimal|null'), ('v_dependent', 'boolean'), ('symbolic', 'logcombination|null'))
    SYMBOLIC = ('symbolic',)


class EvaluationRecord(Record):
    FIELDS = (('u', 'decimal'), ('v', 'decimal'), ('real', 'decimal'), ('imag', 'decimal'),
              ('tail_bound', 'decimal'), ('nmax', 'integer'),
              ('fricke_real', 'decimal|null'), ('fricke_imag', 'decimal|null'))


class OracleRecord(Record):
    FIELDS = (('t', 'integer'), ('direct_real', 'decimal'), ('direct_imag', 'decimal'),
              ('product_real', 'decimal'), ('product_imag', 'decimal'), ('gap', 'decimal'),
              ('tolerance', 'decimal'), ('passed', 'boolean'))


class MellinRecord(Record):
    FIELDS = (('s', 'decimal'), ('closed', 'decimal'), ('quadrature', 'decimal'), ('relative_gap', 'decimal'),
              ('holomorphic', 'decimal'), ('nonholomorphic', 'decimal'), ('tolerance', 'decimal'),
              ('passed', 'boolean'))


class DegreeRecord(Record):
    FIELDS = (('t', 'integer'), ('closed', 'decimal'), ('lattice', 'decimal'), ('coefficient', 'decimal'),
              ('equal', 'boolean'), ('symbolic', 'logcombination'))
    SYMBOLIC = ('symbolic',)


class ArakelovRecord(Record):
    """One component of Z(t): a finite prime over ``place`` in the class of ``form``, or an archimedean weight"""
    FIELDS = (('t', 'integer'), ('place', 'string'), ('form', 'integer[3]'), ('multiplicity', 'integer|null'),
              ('residue_degree', 'integer|null'), ('weight', 'decimal|null'))


class GrossZagierRecord(Record):
    FIELDS = (('q', 'integer'), ('d', 'integer'), ('J', 'integer'), ('integrality_gap', 'decimal'),
              ('lhs', 'decimal'), ('rhs', 'decimal'), ('gap', 'decimal'),
              ('rhs_nonnegative', 'decimal'), ('gap_nonnegative', 'decimal'),
              ('rhs_corrected', 'decimal'), ('gap_corrected', 'decimal'),
              ('convention', 'string'), ('factors', '[integer, integer][]'), ('rhs_symbolic', 'logcombination'),
              ('tolerance', 'decimal'), ('passed', 'boolean'))
    SYMBOLIC = ('rhs_symbolic',)


class SelftestRecord(Record):
    FIELDS = (('name', 'string'), ('passed', 'boolean'), ('detail', 'string'))


RECORD_TYPES = {
    'coeffs': CoefficientRecord,
    'eval': EvaluationRecord,
    'oracle': OracleRecord,
    'mellin': MellinRecord,
    'degz': DegreeRecord,
    'arakelov': ArakelovRecord,
    'gz': GrossZagierRecord,
    'selftest': SelftestRecord,
}

SCHEMA = {command: dict(record_type.FIELDS) for command, record_type in RECORD_TYPES.items()}


def _decode_symbolic(key, value):
    return key, None if value is None else LogCombination.from_json(value)


def _rules(record_type):
    return {name: (_decode_symbolic if name in record_type.SYMBOLIC else name) for name, _ in record_type.FIELDS}


DESERIALIZERS = {
    command: IterableDictDeserializer(record_type, _rules(record_type),
                                      unmapped_behaviour=DictDeserializer.UnmappedBehaviour.FAIL)
    for command, record_type in RECORD_TYPES.items()
}


def report_dict(command, records, **header):
    report = {'command': command}
    report.update(header)
    report['rows'] = [record.to_dict() for record in records]
    return report


def emit_json(command, records, **header):
    return json.dumps(report_dict(command, records, **header), indent=2, sort_keys=True)


def parse_json(text):
    """
    :return: (command, header dict, list of records)
    """
    report = json.loads(text)
    command = report.pop('command')
    if command not in DESERIALIZERS:
        raise DictDeserializer.DeserializerError("Unknown report command {}".format(command))
    rows = report.pop('rows')
    return command, report, list(DESERIALIZERS[command].create_from(rows))
