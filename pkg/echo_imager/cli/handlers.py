import json
import logging

from cached_property import cached_property

from echo_imager.base.exceptions import ConfigError, DataError
from echo_imager.base.managers import ReportManager
from echo_imager.base.models import flatten_errors
from echo_imager.base.preconditions import DEFAULT_PRECONDITIONS
from echo_imager.cli.config import ScenarioConfig
from echo_imager.experiments.estimation import estimation_study
from echo_imager.experiments.sweeps import (
    COLUMNS as SWEEP_COLUMNS, UNITS as SWEEP_UNITS, analytic_fi, fit_exponent, rayleigh_sweep,
    separation_model,
)
from echo_imager.experiments.verification import COLUMNS as ECHO_COLUMNS, ORACLE_COLUMNS, echo_verification
from echo_imager.fisher.classical import classical_fi
from echo_imager.fisher.table import COLUMNS as TABLE_COLUMNS, table1_grid
from echo_imager.protocols.noise import noise_matrix


logger = logging.getLogger(__name__)

TABLE_UNITS = {column: 'per trial, rate^-2' for column in ('analytic', 'exact', 'echo_fi', 'fock_fi', 'oracle_qfi')}
TABLE_UNITS.update(n_s='photons', rate='per trial')
NOISE_COLUMNS = ('noise', 'probe', 'd_absorption', 'd_fluorescence', 'absorption_robust', 'fluorescence_robust')
NOISE_UNITS = {'d_absorption': 'probability per unit rate', 'd_fluorescence': 'probability per unit rate'}
FISHER_COLUMNS = ('strategy', 'd_over_sigma', 'fi_analytic', 'fi_numeric', 'error_estimate', 'dropped_mass')
MLE_COLUMNS = ('parameter', 'truth', 'estimate', 'bias', 'sample_variance', 'crb', 'efficiency',
               'replications', 'failures')


class ScenarioHandler:
    """
    Loads a scenario, checks its preconditions and writes what ``execute``
    returns. Command-line options override the file.
    """
    command = None
    config_class = ScenarioConfig
    precondition_classes = DEFAULT_PRECONDITIONS

    def __init__(self, options):
        self.options = options

    @cached_property
    def raw_config(self):
        path = getattr(self.options, 'config', None)
        if not path:
            return {}
        try:
            with open(path, encoding='utf-8') as stream:
                return json.load(stream)
        except OSError as e:
            raise ConfigError(f'cannot read {path}: {e.strerror}', {'config': [str(path)]})
        except json.JSONDecodeError as e:
            raise ConfigError(f'{path}:{e.lineno}:{e.colno}: {e.msg}', {'config': [e.msg]})

    @cached_property
    def config(self):
        raw = dict(self.raw_config)
        run = dict(raw.get('run') or {})
        for option, field in (('seed', 'seed'), ('threads', 'threads'), ('out', 'output')):
            value = getattr(self.options, option, None)
            if value is not None:
                run[field] = value
        raw['run'] = run
        try:
            return self.config_class.load(raw)
        except DataError as e:
            errors = flatten_errors(e.errors)
            message = '; '.join(f'{path}: {", ".join(messages)}' for path, messages in sorted(errors.items()))
            raise ConfigError(message, errors)

    @cached_property
    def manager(self):
        return ReportManager(self.config.run.output)

    @property
    def output_format(self):
        return getattr(self.options, 'format', None) or 'csv'

    def check_preconditions(self):
        for precondition_class in self.precondition_classes:
            precondition = precondition_class()
            if not precondition.check(self.config):
                field = precondition_class.field
                raise ConfigError(f'{field}: {precondition_class.message}', {field: [precondition_class.message]})

    def prepare(self):
        self.check_preconditions()
        logger.info('%s: config %s', self.command, self.manager.summary(self.command, self.config)['config_hash'])

    def write(self, name, rows, columns, units=None):
        rows = list(rows)
        if self.output_format == 'json':
            return self.manager.write_json(f'{name}.json', [{c: row.get(c) for c in columns} for row in rows])
        return self.manager.write_csv(f'{name}.csv', rows, columns, units)

    def execute(self):
        """Run the experiment; return ``(reports, summary_fields)``."""
        raise NotImplementedError

    def run(self):
        self.prepare()
        outputs, extra = self.execute()
        summary = self.manager.summary(self.command, self.config, self.config.run.seed, outputs, **extra)
        self.manager.write_json(f'{self.command.replace("-", "_")}_summary.json', summary)
        logger.info('%s: wrote %s', self.command, ', '.join(report.path for report in outputs))
        return summary


class Table1Handler(ScenarioHandler):
    command = 'table1'

    def execute(self):
        run = self.config.run
        rows = table1_grid(run.n_s, run.rates, self.config.scene.separation, run.oracle)
        report = self.write('table1', rows, TABLE_COLUMNS, TABLE_UNITS)
        ratios = [row[column] for row in rows for column in ('echo_ratio', 'fock_ratio')
                  if row[column] is not None]
        return [report], {'rows': len(rows), 'worst_ratio_gap': max(abs(1 - value) for value in ratios)}


class EchoVerifyHandler(ScenarioHandler):
    command = 'echo-verify'
    precondition_classes = []

    def execute(self):
        rows, oracle, summary = echo_verification(seed=self.config.run.seed)
        reports = [self.write('echo_covariance', rows, ECHO_COLUMNS),
                   self.write('echo_oracle', oracle, ORACLE_COLUMNS)]
        return reports, summary


class SweepHandler(ScenarioHandler):
    command = 'sweep'

    def execute(self):
        config = self.config
        strategy = config.measurement.strategy
        rows = rayleigh_sweep(strategy, config.measurement.d_grid, config.probe.to_probe(),
                              config.run.trials, config.scene.brightness, config.run.replications,
                              config.run.seed, config.run.threads, config.noise.to_noise())
        report = self.write('rayleigh_sweep', rows, SWEEP_COLUMNS, SWEEP_UNITS)
        exponent = fit_exponent([row['d_over_sigma'] for row in rows], [row['fi_numeric'] for row in rows])
        return [report], {'strategy': strategy, 'fi_exponent': exponent}


class FisherHandler(ScenarioHandler):
    command = 'fisher'

    def execute(self):
        config = self.config
        strategy, probe = config.measurement.strategy, config.probe.to_probe()
        d, brightness = config.scene.separation, config.scene.brightness
        result = classical_fi(separation_model(strategy, probe, brightness, config.noise.to_noise()), d)
        row = {
            'strategy': strategy,
            'd_over_sigma': d,
            'fi_analytic': analytic_fi(strategy, d, probe, brightness),
            'fi_numeric': result.value,
            'error_estimate': result.error_estimate,
            'dropped_mass': result.dropped_mass,
        }
        report = self.write('fisher', [row], FISHER_COLUMNS, SWEEP_UNITS)
        return [report], {'fi': result.value}


class NoiseMatrixHandler(ScenarioHandler):
    command = 'noise-matrix'

    def execute(self):
        probe = self.config.probe
        matrix = noise_matrix(probe.squeeze_r[0], probe.fock_n[0], sector=self.config.noise.sector)
        report = self.write('noise_matrix', matrix.rows(), NOISE_COLUMNS, NOISE_UNITS)
        return [report], {'sector': matrix.sector}


class MLEHandler(ScenarioHandler):
    command = 'mle'

    def execute(self):
        config = self.config
        d = config.scene.separation
        model = separation_model(config.measurement.strategy, config.probe.to_probe(), config.scene.brightness,
                                 config.noise.to_noise())
        report = estimation_study(model, d, (0., 4 * d), config.run.trials, config.run.replications,
                                  config.run.seed, config.run.threads, parameters=('separation',))
        efficiency = report.efficiency()
        rows = [{
            'parameter': name,
            'truth': report.truth[i],
            'estimate': report.estimates[i],
            'bias': report.bias[i],
            'sample_variance': report.sample_variance[i],
            'crb': report.crb[i],
            'efficiency': efficiency[i],
            'replications': report.replications,
            'failures': report.failures,
        } for i, name in enumerate(report.parameters)]
        output = self.write('mle', rows, MLE_COLUMNS)
        return [output], {'report': report.to_primitive()}


RUN_HANDLERS = {
    'rayleigh_sweep': SweepHandler,
    'mle': MLEHandler,
    'noise_matrix': NoiseMatrixHandler,
    'table1': Table1Handler,
}


class RunHandler(ScenarioHandler):
    """Dispatches on ``run.kind``."""
    command = 'run'

    def execute(self):
        handler = RUN_HANDLERS[self.config.run.kind](self.options)
        handler.config = self.config
        return handler.execute()
