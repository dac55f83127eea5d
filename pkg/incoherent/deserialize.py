from collections.abc import Iterable
from enum import Enum
import inspect

__author__ = 'maintainers@incoherent-eisenstein.org'


class DictDeserializer(object):
    """
    Rebuilds a result record from the dictionary it was emitted as.

    ``creator`` is the record class (or any function returning one) and ``mapping_rules`` says how each key of the
    emitted dictionary reaches it:

    * an integer rule passes the value positionally, at that index;
    * a string rule passes the value as the keyword of that name;
    * a callable rule is called with ``(key, value)`` and returns the ``(keyword, value)`` to pass, which is how
      nested values such as log-combinations are decoded.

    Examples::

      # ReducedForm(2, -1, 3), positionally
      DictDeserializer(ReducedForm, {'a': 0, 'b': 1, 'c': 2}).create_from({'a': 2, 'b': -1, 'c': 3})

      # CoefficientRecord(t=1, value='3.89', kind='positive')
      DictDeserializer(CoefficientRecord, {'t': 't', 'a_t': 'value', 'kind': 'kind'}).create_from(
          {'t': 1, 'a_t': '3.89', 'kind': 'positive'})

      # symbolic=LogCombination({7: 2})
      DictDeserializer(DegreeRecord, {'symbolic': lambda k, v: ('symbolic', LogCombination.from_json(v))})

    """

    class UnmappedBehaviour(Enum):
        """
        What to do with keys of the input that no rule names.
        IGNORE: drop them (the default).
        TO_KWARGS: pass them through to the creator unchanged.
        FAIL: raise DeserializerError.
        """
        IGNORE = 0
        TO_KWARGS = 1
        FAIL = 2

    class DeserializerError(TypeError):
        pass

    def __init__(self, creator, mapping_rules=None, **kwargs):
        """
        :param creator: The record class or a function building the record
        :param mapping_rules: Input key -> rule, see the class documentation
        :param unmapped_behaviour: An ``UnmappedBehaviour``, IGNORE by default
        """
        if not (inspect.isclass(creator) or inspect.isfunction(creator)):
            raise TypeError("creator must be a class or a function")
        self.target_class = creator
        self.rules = mapping_rules or {}
        self.unmapped_behaviour = kwargs.pop('unmapped_behaviour', DictDeserializer.UnmappedBehaviour.IGNORE)

    def _apply_rule(self, key, value):
        rule = self.rules[key]
        if callable(rule):
            keyword, value = rule(key, value)
            return None, keyword, value
        if isinstance(rule, str):
            return None, rule, value
        if isinstance(rule, int):
            return rule, None, value
        raise DictDeserializer.DeserializerError("Unsupported rule {!r} for key {}".format(rule, key))

    def _unmapped(self, raw):
        if self.unmapped_behaviour == DictDeserializer.UnmappedBehaviour.IGNORE:
            return {}
        extra = sorted(set(raw) - set(self.rules))
        if extra and self.unmapped_behaviour == DictDeserializer.UnmappedBehaviour.FAIL:
            raise DictDeserializer.DeserializerError("No mapping rules for keys: {}".format(', '.join(extra)))
        return {key: raw[key] for key in extra}

    def _arguments(self, raw):
        positional = {}
        keywords = self._unmapped(raw)
        for key in sorted(set(raw) & set(self.rules)):
            index, keyword, value = self._apply_rule(key, raw[key])
            if index is None:
                keywords[keyword] = value
            else:
                positional[index] = value
        return [positional[index] for index in sorted(positional)], keywords

    def create_from(self, raw: dict) -> 'object':
        if not isinstance(raw, dict):
            raise DictDeserializer.DeserializerError("Records are deserialized from dictionaries, got {}".format(
                type(raw).__name__))
        arguments, keywords = self._arguments(raw)
        try:
            return self.target_class(*arguments, **keywords)
        except (AttributeError, TypeError) as e:
            raise DictDeserializer.DeserializerError("Failed to create {}".format(self.target_class.__name__)) from e


class IterableDictDeserializer(DictDeserializer):
    """:class:`DictDeserializer` over a sequence of dictionaries, e.g. the rows of a report"""

    def create_from(self, raw: Iterable) -> Iterable:
        return map(super(IterableDictDeserializer, self).create_from, raw)
