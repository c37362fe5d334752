import csv
import hashlib
import io
import json
import logging
import math
import os
import tempfile

import numpy as np

import echo_imager
from echo_imager import settings
from echo_imager.base.exceptions import ConfigError


logger = logging.getLogger(__name__)


class Report:
    def __init__(self, path, rows=0):
        self.path = path
        self.rows = rows

    def __repr__(self):
        return f'<Report {self.path} ({self.rows} rows)>'


def config_hash(data):
    """SHA-256 of the canonical JSON form of ``data``."""
    if hasattr(data, 'to_primitive'):
        data = data.to_primitive()
    canonical = json.dumps(data, sort_keys=True, separators=(',', ':'), default=_plain)
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


def _plain(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f'{type(value).__name__} is not JSON serialisable')


class ReportManager:
    """Writes tables and run summaries under one output directory."""
    digits = settings.CSV_SIGNIFICANT_DIGITS

    def __init__(self, directory=settings.OUTPUT_DIR):
        self.directory = directory

    def path(self, name):
        return os.path.join(self.directory, name)

    def format_value(self, value):
        if value is None:
            return ''
        if isinstance(value, (bool, np.bool_)):
            return str(bool(value)).lower()
        if isinstance(value, (float, np.floating)):
            value = float(value)
            if math.isnan(value):
                return 'nan'
            return format(value, f'.{self.digits}g')
        return str(value)

    def header(self, columns, units=None):
        units = units or {}
        return [f'{column}[{units[column]}]' if units.get(column) else column for column in columns]

    def write_csv(self, name, rows, columns, units=None):
        """RFC 4180 table of ``rows`` (mappings) restricted to ``columns``."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\r\n')
        writer.writerow(self.header(columns, units))
        for row in rows:
            writer.writerow([self.format_value(row.get(column)) for column in columns])
        path = self._replace(name, buffer.getvalue())
        return Report(path, len(rows))

    def write_json(self, name, payload):
        text = json.dumps(payload, sort_keys=True, indent=2, default=_plain)
        path = self._replace(name, text + '\n')
        return Report(path, 1)

    def summary(self, command, config=None, seed=None, outputs=(), **extra):
        """Provenance record of one run: config hash, seed, version and outputs."""
        payload = {
            'command': command,
            'version': echo_imager.__version__,
            'schema_version': settings.SCHEMA_VERSION,
            'seed': seed,
            'rng': settings.RNG_ALGORITHM,
            'config_hash': None if config is None else config_hash(config),
            'outputs': [os.path.basename(report.path) for report in outputs],
        }
        payload.update(extra)
        return payload

    def _replace(self, name, text):
        target = self.path(name)
        temporary = None
        try:
            os.makedirs(self.directory, exist_ok=True)
            handle, temporary = tempfile.mkstemp(dir=self.directory, prefix=f'.{name}.', suffix='.tmp')
            with os.fdopen(handle, 'w', encoding='utf-8', newline='') as stream:
                stream.write(text)
            os.replace(temporary, target)
        except BaseException as e:
            if temporary and os.path.exists(temporary):
                os.remove(temporary)
            if isinstance(e, OSError):
                raise ConfigError(f'cannot write {target}: {e.strerror or e}', {'run.output': [str(e)]}) from e
            raise
        logger.debug('wrote %s', target)
        return target
