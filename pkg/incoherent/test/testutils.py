from functools import lru_cache

from incoherent import numerics
from incoherent.quadfield import FieldContext

__author__ = 'maintainers@incoherent-eisenstein.org'

FIELDS = (7, 11, 19, 31)


@lru_cache(maxsize=None)
def field(q, precision_bits=numerics.DEFAULT_PRECISION_BITS):
    """Field contexts are immutable, so tests share one per (q, precision)"""
    return FieldContext(q, precision_bits)


def assert_close(test, actual, expected, tolerance, relative=False):
    """Fails ``test`` unless |actual - expected| (relative to |expected| if asked) is below ``tolerance``"""
    gap = abs(actual - expected)
    if relative:
        gap = gap / abs(expected)
    test.assertLess(float(gap), tolerance, "{} != {} (gap {:.3g})".format(actual, expected, float(gap)))
