from schematics.types import *
from schematics.common import *
from schematics.exceptions import ConversionError


class ComplexType(BaseType):
    """Complex amplitude accepting ``1+2j`` strings, ``[re, im]`` pairs,
    ``{"re": .., "im": ..}`` mappings or plain numbers."""

    primitive_type = list
    native_type = complex

    MESSAGES = {
        'convert': "Couldn't interpret '{0}' as a complex number.",
    }

    def to_native(self, value, context=None):
        if isinstance(value, complex):
            return value
        try:
            if isinstance(value, (int, float)):
                return complex(value)
            if isinstance(value, str):
                return complex(value.replace(' ', ''))
            if isinstance(value, dict):
                return complex(float(value['re']), float(value.get('im', 0.0)))
            if isinstance(value, (list, tuple)) and len(value) == 2:
                return complex(float(value[0]), float(value[1]))
        except (KeyError, TypeError, ValueError):
            pass
        raise ConversionError(self.messages['convert'].format(value))

    def to_primitive(self, value, context=None):
        return [value.real, value.imag]
