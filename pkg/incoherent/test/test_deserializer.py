from collections.abc import Iterable
from unittest.case import TestCase

from incoherent.deserialize import DictDeserializer, IterableDictDeserializer
from incoherent.exceptions import DomainError
from incoherent.numerics import LogCombination
from incoherent.quadfield import ReducedForm
from incoherent.records import CoefficientRecord, DegreeRecord

__author__ = 'maintainers@incoherent-eisenstein.org'

FORM_RULES = {'a': 0, 'b': 1, 'c': 2}


def _symbolic(key, value):
    return 'symbolic', LogCombination.from_json(value)


class DeserializerTests(TestCase):

    def test_positional_rules(self):
        deserializer = DictDeserializer(ReducedForm, mapping_rules=FORM_RULES)
        form = deserializer.create_from({'c': 3, 'b': -1, 'a': 2, 'discriminant': -23})
        self.assertEqual(form, ReducedForm(2, -1, 3))

    def test_keyword_rules(self):
        deserializer = DictDeserializer(CoefficientRecord, mapping_rules={'index': 't', 'a_t': 'value'})
        record = deserializer.create_from({'index': 3, 'a_t': '4.394', 'note': 'inert'})
        self.assertEqual(record.t, 3)
        self.assertEqual(record.value, '4.394')
        self.assertIsNone(record.kind)

    def test_transforming_rule(self):
        deserializer = DictDeserializer(DegreeRecord, mapping_rules={'t': 't', 'symbolic': _symbolic})
        record = deserializer.create_from({'t': 7, 'symbolic': [{'prime': 7, 'coeff': '4'}]})
        self.assertEqual(record.symbolic, LogCombination({7: 4}))

    def test_function_creator(self):
        deserializer = DictDeserializer(lambda a, b, c: ReducedForm.reduce(a, b, c), mapping_rules=FORM_RULES)
        self.assertEqual(deserializer.create_from({'a': 4, 'b': 5, 'c': 3}), ReducedForm(2, -1, 3))

    def test_creator_must_be_callable_type(self):
        self.assertRaises(TypeError, DictDeserializer, ReducedForm(1, 1, 2))

    def test_fail_on_missing_args(self):
        deserializer = DictDeserializer(ReducedForm, mapping_rules=FORM_RULES)
        self.assertRaises(DictDeserializer.DeserializerError, deserializer.create_from, {'a': 1, 'b': 1})

    def test_fail_on_unknown_field(self):
        deserializer = DictDeserializer(CoefficientRecord, mapping_rules={'t': 'kind', 'x': 'no_such_field'})
        self.assertRaises(DictDeserializer.DeserializerError, deserializer.create_from, {'t': 1, 'x': 2})

    def test_fail_on_unmapped(self):
        deserializer = DictDeserializer(ReducedForm, mapping_rules=FORM_RULES,
                                        unmapped_behaviour=DictDeserializer.UnmappedBehaviour.FAIL)
        self.assertRaises(DictDeserializer.DeserializerError, deserializer.create_from,
                          {'a': 1, 'b': 1, 'c': 2, 'h': 1})

    def test_pass_unmapped(self):
        deserializer = DictDeserializer(CoefficientRecord, mapping_rules={'index': 't'},
                                        unmapped_behaviour=DictDeserializer.UnmappedBehaviour.TO_KWARGS)
        record = deserializer.create_from({'index': -2, 'kind': 'negative', 'v_dependent': True})
        self.assertEqual((record.t, record.kind, record.v_dependent), (-2, 'negative', True))

    def test_invalid_rule(self):
        deserializer = DictDeserializer(ReducedForm, mapping_rules={'a': 0.5})
        self.assertRaises(DictDeserializer.DeserializerError, deserializer.create_from, {'a': 1})

    def test_domain_errors_pass_through(self):
        deserializer = DictDeserializer(ReducedForm, mapping_rules=FORM_RULES)
        self.assertRaises(DomainError, deserializer.create_from, {'a': 2, 'b': -2, 'c': 3})

    def test_only_dictionaries(self):
        deserializer = DictDeserializer(ReducedForm, mapping_rules=FORM_RULES)
        self.assertRaises(DictDeserializer.DeserializerError, deserializer.create_from, [1, 1, 2])


class IterableDeserializerTests(TestCase):

    def test_rows(self):
        rows = [{'a': 1, 'b': 1, 'c': 6}, {'a': 2, 'b': -1, 'c': 3}, {'a': 2, 'b': 1, 'c': 3}]
        forms = IterableDictDeserializer(ReducedForm, mapping_rules=FORM_RULES).create_from(rows)
        self.assertIsInstance(forms, Iterable)
        forms = list(forms)
        self.assertEqual(len(forms), len(rows))
        self.assertEqual({form.discriminant() for form in forms}, {-23})
        self.assertEqual(forms[0], ReducedForm(1, 1, 6))

    def test_empty(self):
        self.assertEqual(list(IterableDictDeserializer(ReducedForm, FORM_RULES).create_from([])), [])
