import hashlib
import json

from schematics.models import Model
from schematics.exceptions import DataError, ConversionError, ValidationError


def flatten_errors(errors, prefix=''):
    """Turn a schematics error tree into ``{"dotted.path": [messages]}``."""
    if hasattr(errors, 'to_primitive'):
        errors = errors.to_primitive()

    flat = {}
    if isinstance(errors, dict):
        for key, value in errors.items():
            path = f'{prefix}.{key}' if prefix else str(key)
            flat.update(flatten_errors(value, path))
    elif isinstance(errors, (list, tuple)):
        messages = []
        for item in errors:
            if isinstance(item, (dict, list, tuple)):
                flat.update(flatten_errors(item, prefix))
            else:
                messages.append(str(item))
        if messages:
            flat[prefix] = messages
    else:
        flat[prefix] = [str(errors)]
    return flat


class ConfigModel(Model):
    """Base for every JSON-backed configuration or report record."""

    def __init__(self, raw_data=None, *args, **kwargs):
        if isinstance(raw_data, (str, bytes)):
            raw_data = json.loads(raw_data)
        super().__init__(raw_data, *args, **kwargs)

    @classmethod
    def load(cls, raw_data):
        """Convert and validate, surfacing conversion problems as DataError."""
        try:
            obj = cls(raw_data)
        except (ConversionError, ValidationError) as e:
            raise DataError({'': e.messages}) from e
        obj.validate()
        return obj

    def to_json(self):
        return json.dumps(self.to_primitive(), sort_keys=True)

    def digest(self):
        return hashlib.sha256(self.to_json().encode('utf-8')).hexdigest()
