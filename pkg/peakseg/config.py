# -*- coding: utf-8 -*-
"""
Settings.

Settings form a flat dict of dotted keys. They are assembled from the
built-in defaults, the ``[peakseg]`` section of an ini file, environment
variables and finally explicit overrides (command line flags), each
source taking precedence over the previous ones.
"""
import logging
import os

import plaster
from pyramid.settings import asbool, aslist

from peakseg.errors import ConfigError
from peakseg.retrieval.scoring import RetrievalParams
from peakseg.stimulation.peaks import StimulationConfig
from peakseg.stimulation.pooling import AGGREGATIONS

log = logging.getLogger(__name__)

SECTION = 'peakseg'
CONFIG_ENV = 'PEAKSEG_CONFIG'

DEFAULTS = {
    'stimulation.radius': 3,
    'stimulation.fallback': True,
    'retrieval.alpha': 1.0,
    'retrieval.beta': 1.0,
    'retrieval.boundary_weight': 1.0,
    'retrieval.nms_iou': 0.5,
    'retrieval.bias': 0.0,
    'retrieval.cutoff': 0.0,
    'train.lr': 0.05,
    'train.epochs': 5,
    'train.steps': None,
    'train.seed': 0,
    'train.aggregation': 'peak',
    'train.width': 8,
    'data.seed': 0,
    'data.image_size': 64,
    'data.num_classes': 3,
    'data.max_instances': 4,
    'data.distractors': 20,
    'sweep.alphas': [0.0, 0.5, 1.0, 2.0, 4.0],
    'sweep.betas': [0.0, 0.5, 1.0, 2.0, 4.0],
    'gradcheck.seed': 1,
    'gradcheck.trials': 20,
    'pipeline.workers': 1,
}


def _optional_int(value):
    if value is None or (isinstance(value, str) and
                         value.strip().lower() in ('', 'none')):
        return None
    return int(value)


def _floats(value):
    if isinstance(value, str):
        value = aslist(value.replace(',', ' '))
    return [float(v) for v in value]


def _aggregation(value):
    if value not in AGGREGATIONS:
        raise ValueError('expected one of {}'.format(', '.join(AGGREGATIONS)))
    return value


COERCE = {
    'stimulation.radius': int,
    'stimulation.fallback': asbool,
    'retrieval.alpha': float,
    'retrieval.beta': float,
    'retrieval.boundary_weight': float,
    'retrieval.nms_iou': float,
    'retrieval.bias': float,
    'retrieval.cutoff': float,
    'train.lr': float,
    'train.epochs': int,
    'train.steps': _optional_int,
    'train.seed': int,
    'train.aggregation': _aggregation,
    'train.width': int,
    'data.seed': int,
    'data.image_size': int,
    'data.num_classes': int,
    'data.max_instances': int,
    'data.distractors': int,
    'sweep.alphas': _floats,
    'sweep.betas': _floats,
    'gradcheck.seed': int,
    'gradcheck.trials': int,
    'pipeline.workers': int,
}


def settings_from_environment():
    settings = {}

    _setup_retrieval(settings)
    _setup_stimulation(settings)
    _setup_seed(settings)
    _setup_pipeline(settings)

    return settings


def _setup_retrieval(settings):
    if 'PEAKSEG_ALPHA' in os.environ:
        settings['retrieval.alpha'] = os.environ['PEAKSEG_ALPHA']
    if 'PEAKSEG_BETA' in os.environ:
        settings['retrieval.beta'] = os.environ['PEAKSEG_BETA']


def _setup_stimulation(settings):
    if 'PEAKSEG_RADIUS' in os.environ:
        settings['stimulation.radius'] = os.environ['PEAKSEG_RADIUS']


def _setup_seed(settings):
    # One seed for both data generation and training.
    if 'PEAKSEG_SEED' in os.environ:
        settings['data.seed'] = os.environ['PEAKSEG_SEED']
        settings['train.seed'] = os.environ['PEAKSEG_SEED']


def _setup_pipeline(settings):
    if 'PEAKSEG_WORKERS' in os.environ:
        settings['pipeline.workers'] = os.environ['PEAKSEG_WORKERS']


def settings_from_file(config_uri):
    """Read the ``[peakseg]`` section of an ini file."""
    if not os.path.exists(config_uri.split('#', 1)[0]):
        raise ConfigError('config file {} does not exist'.format(config_uri))
    raw = plaster.get_settings(config_uri, SECTION)
    settings = {}
    for key, value in raw.items():
        if key not in DEFAULTS:
            log.warning('ignoring unknown setting %r in %s', key, config_uri)
            continue
        settings[key] = value
    return settings


def coerce(settings):
    """Convert every value to its declared type."""
    result = {}
    for key, value in settings.items():
        if key not in COERCE:
            raise ConfigError('unknown setting {!r}'.format(key))
        try:
            result[key] = COERCE[key](value)
        except (TypeError, ValueError) as exc:
            raise ConfigError('bad value {!r} for {}: {}'.format(
                value, key, exc))
    return result


def get_settings(config_uri=None, overrides=None):
    """Assemble the effective settings.

    :param config_uri: ini file to read; defaults to ``$PEAKSEG_CONFIG``.
    :param overrides: highest-precedence values, e.g. from the command
        line; ``None`` values are ignored.
    """
    settings = dict(DEFAULTS)
    config_uri = config_uri or os.environ.get(CONFIG_ENV)
    if config_uri:
        settings.update(settings_from_file(config_uri))
    settings.update(settings_from_environment())
    if overrides:
        settings.update((k, v) for k, v in overrides.items() if v is not None)
    return coerce(settings)


def stimulation_config(settings):
    try:
        return StimulationConfig(radius=settings['stimulation.radius'],
                                 fallback=settings['stimulation.fallback'])
    except ValueError as exc:
        raise ConfigError(str(exc))


def retrieval_params(settings):
    return RetrievalParams(alpha=settings['retrieval.alpha'],
                           beta=settings['retrieval.beta'],
                           boundary_weight=settings['retrieval.boundary_weight'],
                           nms_iou=settings['retrieval.nms_iou'],
                           bias=settings['retrieval.bias'],
                           cutoff=settings['retrieval.cutoff'])


def training_options(settings):
    """Keyword arguments for :func:`peakseg.stimulation.train.train_toy`."""
    return {
        'epochs': settings['train.epochs'],
        'lr': settings['train.lr'],
        'seed': settings['train.seed'],
        'steps': settings['train.steps'],
        'aggregation': settings['train.aggregation'],
    }
