# -*- coding: utf-8 -*-
import logging

import pytest

from peakseg import config
from peakseg.errors import ConfigError


def test_retrieval_environment(monkeypatch):
    monkeypatch.setenv('PEAKSEG_ALPHA', '2.5')
    monkeypatch.setenv('PEAKSEG_BETA', '0')

    actual_config = config.settings_from_environment()
    expected_config = {
        'retrieval.alpha': '2.5',
        'retrieval.beta': '0',
    }
    assert actual_config == expected_config


def test_radius_environment(monkeypatch):
    monkeypatch.setenv('PEAKSEG_RADIUS', '5')

    actual_config = config.settings_from_environment()
    expected_config = {'stimulation.radius': '5'}
    assert actual_config == expected_config


def test_seed_environment(monkeypatch):
    monkeypatch.setenv('PEAKSEG_SEED', '7')

    actual_config = config.settings_from_environment()
    expected_config = {'data.seed': '7', 'train.seed': '7'}
    assert actual_config == expected_config


def test_workers_environment(monkeypatch):
    monkeypatch.setenv('PEAKSEG_WORKERS', '4')

    actual_config = config.settings_from_environment()
    expected_config = {'pipeline.workers': '4'}
    assert actual_config == expected_config


def test_empty_environment():
    assert config.settings_from_environment() == {}


def test_defaults():
    settings = config.get_settings()
    assert settings == config.coerce(config.DEFAULTS)
    assert settings['stimulation.radius'] == 3
    assert settings['train.steps'] is None


def test_every_default_has_a_coercion():
    assert set(config.DEFAULTS) == set(config.COERCE)


def test_file_settings(test_ini):
    settings = config.get_settings(test_ini)
    assert settings['stimulation.radius'] == 2
    assert settings['retrieval.alpha'] == 2.0
    assert settings['train.steps'] == 10
    assert settings['sweep.alphas'] == [0.5, 1.0]
    assert settings['retrieval.beta'] == 1.0


def test_config_from_environment_variable(monkeypatch, test_ini):
    monkeypatch.setenv('PEAKSEG_CONFIG', test_ini)
    assert config.get_settings()['stimulation.radius'] == 2


def test_environment_beats_file(monkeypatch, test_ini):
    monkeypatch.setenv('PEAKSEG_ALPHA', '3')
    assert config.get_settings(test_ini)['retrieval.alpha'] == 3.0


def test_overrides_beat_environment(monkeypatch, test_ini):
    monkeypatch.setenv('PEAKSEG_ALPHA', '3')
    settings = config.get_settings(test_ini, {'retrieval.alpha': 0.25,
                                              'retrieval.beta': None})
    assert settings['retrieval.alpha'] == 0.25
    assert settings['retrieval.beta'] == 1.0


def test_missing_file(tmpdir):
    with pytest.raises(ConfigError):
        config.get_settings(str(tmpdir.join('nope.ini')))


def test_unknown_file_settings_are_dropped(tmpdir, caplog):
    ini = tmpdir.join('extra.ini')
    ini.write('[peakseg]\nretrieval.beta = 0.5\nretrieval.gamma = 2\n')
    with caplog.at_level(logging.WARNING, logger='peakseg.config'):
        settings = config.get_settings(str(ini))
    assert settings['retrieval.beta'] == 0.5
    assert 'retrieval.gamma' not in settings
    assert 'retrieval.gamma' in caplog.text


@pytest.mark.parametrize('key,value,expected', [
    ('stimulation.fallback', 'false', False),
    ('stimulation.fallback', 'on', True),
    ('train.steps', 'none', None),
    ('train.steps', '', None),
    ('train.steps', '12', 12),
    ('sweep.betas', '0 1,2', [0.0, 1.0, 2.0]),
    ('train.aggregation', 'gap', 'gap'),
])
def test_coercion(key, value, expected):
    assert config.coerce({key: value}) == {key: expected}


@pytest.mark.parametrize('settings', [
    {'stimulation.radius': 'three'},
    {'train.aggregation': 'max'},
    {'sweep.alphas': '1, x'},
    {'no.such.key': 1},
])
def test_bad_settings(settings):
    with pytest.raises(ConfigError):
        config.coerce(settings)


def test_stimulation_config(settings):
    cfg = config.stimulation_config(settings)
    assert (cfg.radius, cfg.fallback) == (2, True)


def test_invalid_radius():
    settings = config.get_settings(overrides={'stimulation.radius': 0})
    with pytest.raises(ConfigError):
        config.stimulation_config(settings)


def test_retrieval_params(settings):
    params = config.retrieval_params(settings)
    assert (params.alpha, params.beta, params.nms_iou) == (2.0, 1.0, 0.5)


def test_negative_weights_are_rejected():
    settings = config.get_settings(overrides={'retrieval.beta': -1})
    with pytest.raises(ConfigError):
        config.retrieval_params(settings)


def test_training_options(settings):
    assert config.training_options(settings) == {
        'epochs': 1, 'lr': 0.05, 'seed': 0, 'steps': 10,
        'aggregation': 'peak',
    }
