import json
import os

import numpy as np
import pytest

from echo_imager.base.batching import Batcher, BatchNotAnInteger, EmptyBatch
from echo_imager.base.exceptions import ConfigError, DataError, NumericalError
from echo_imager.base.managers import ReportManager, config_hash
from echo_imager.base.models import flatten_errors
from echo_imager.base.preconditions import DEFAULT_PRECONDITIONS, NoiseBound, PositiveWidth, ProbeConsistency
from echo_imager.cli.config import ScenarioConfig


class TestBatcher:

    def test_pages_cover_every_index(self):
        batcher = Batcher.for_workers(10, 3)
        assert len(batcher) == 3
        assert [list(batch) for batch in batcher] == [[0, 1, 2, 3], [4, 5, 6, 7], [8, 9]]

    def test_more_workers_than_work(self):
        assert [list(batch) for batch in Batcher.for_workers(2, 8)] == [[0], [1]]

    def test_no_work(self):
        assert len(Batcher.for_workers(0, 4)) == 0

    def test_invalid_batch_number(self):
        batcher = Batcher(5, 2)
        with pytest.raises(BatchNotAnInteger):
            batcher.batch('first')
        with pytest.raises(EmptyBatch):
            batcher.batch(0)
        with pytest.raises(EmptyBatch):
            batcher.batch(4)


class TestErrors:

    def test_flatten_errors(self):
        errors = {'scene': {'sigma': ['too small']}, 'run': [{'seed': ['negative']}, 'bad']}
        assert flatten_errors(errors) == {
            'scene.sigma': ['too small'],
            'run.seed': ['negative'],
            'run': ['bad'],
        }

    def test_exit_codes(self):
        assert ConfigError('x').exit_code == 2
        assert NumericalError('x').exit_code == 3
        assert ConfigError('x', {'a': ['b']}).errors == {'a': ['b']}


class TestPreconditions:

    def test_defaults_pass(self):
        config = ScenarioConfig.load({})
        assert all(precondition().check(config) for precondition in DEFAULT_PRECONDITIONS)

    def test_width(self):
        assert not PositiveWidth().check(ScenarioConfig.load({'scene': {'sigma': 0.}}))

    def test_noise_bound_can_be_forced(self):
        noisy = {'noise': {'kappa_loss': 0.5}}
        assert not NoiseBound().check(ScenarioConfig.load(noisy))
        noisy['noise']['force'] = True
        assert NoiseBound().check(ScenarioConfig.load(noisy))

    def test_probe_parameters_match_the_basis(self):
        config = ScenarioConfig.load({'probe': {'squeeze_r': [1., 1.]}, 'measurement': {'truncation': 3}})
        assert not ProbeConsistency().check(config)


class TestReportManager:

    def test_csv_layout(self, tmp_path):
        manager = ReportManager(str(tmp_path))
        rows = [{'d': 0.1, 'fi': 1 / 3, 'robust': True, 'note': None}, {'d': 0.2, 'fi': float('nan')}]
        report = manager.write_csv('table.csv', rows, ('d', 'fi', 'robust', 'note'), {'d': 'sigma'})
        assert report.rows == 2
        with open(report.path, 'rb') as stream:
            text = stream.read().decode('utf-8')
        assert text.split('\r\n') == [
            'd[sigma],fi,robust,note',
            '0.10000000000000001,0.33333333333333331,true,',
            '0.20000000000000001,nan,,',
            '',
        ]

    def test_values_survive_a_round_trip(self):
        manager = ReportManager()
        value = np.float64(2) / 7
        assert float(manager.format_value(value)) == value

    def test_no_temporary_files_remain(self, tmp_path):
        manager = ReportManager(str(tmp_path / 'out'))
        manager.write_json('summary.json', {'value': np.float64(1.5), 'amp': 1j})
        manager.write_json('summary.json', {'value': 2.5})
        assert os.listdir(tmp_path / 'out') == ['summary.json']
        assert json.loads((tmp_path / 'out' / 'summary.json').read_text()) == {'value': 2.5}

    def test_failed_write_keeps_the_old_file(self, tmp_path):
        manager = ReportManager(str(tmp_path))
        manager.write_json('summary.json', {'value': 1})
        with pytest.raises(TypeError):
            manager.write_json('summary.json', {'value': object()})
        assert json.loads((tmp_path / 'summary.json').read_text()) == {'value': 1}

    def test_unwritable_directory_is_a_config_error(self, tmp_path):
        (tmp_path / 'taken').write_text('', encoding='utf-8')
        manager = ReportManager(str(tmp_path / 'taken' / 'out'))
        with pytest.raises(ConfigError) as info:
            manager.write_json('summary.json', {'value': 1})
        assert 'run.output' in info.value.errors

    def test_failed_replace_leaves_no_temporary(self, tmp_path, mocker):
        manager = ReportManager(str(tmp_path))
        mocker.patch('echo_imager.base.managers.os.replace', side_effect=PermissionError(13, 'Permission denied'))
        with pytest.raises(ConfigError):
            manager.write_json('summary.json', {'value': 1})
        assert os.listdir(tmp_path) == []

    def test_summary(self, tmp_path):
        manager = ReportManager(str(tmp_path))
        report = manager.write_json('a.json', {})
        summary = manager.summary('fisher', ScenarioConfig.load({}), 5, [report], fi=0.5)
        assert summary['outputs'] == ['a.json']
        assert summary['seed'] == 5
        assert summary['fi'] == 0.5
        assert summary['schema_version'] == 1


class TestConfigHash:

    def test_key_order_does_not_matter(self):
        assert config_hash({'a': 1, 'b': [1., 2.]}) == config_hash({'b': [1., 2.], 'a': 1})
        assert config_hash({'a': 1}) != config_hash({'a': 2})

    def test_models_hash_by_content(self):
        first = ScenarioConfig.load({'run': {'seed': 3}})
        second = ScenarioConfig.load({'run': {'seed': 3}})
        assert config_hash(first) == config_hash(second)
        assert config_hash(first) != config_hash(ScenarioConfig.load({'run': {'seed': 4}}))


class TestConfigModel:

    def test_loads_json_text(self):
        config = ScenarioConfig('{"run": {"seed": 12}}')
        assert config.run.seed == 12

    def test_conversion_errors_become_data_errors(self):
        with pytest.raises(DataError):
            ScenarioConfig.load({'run': {'seed': 'twelve'}})
