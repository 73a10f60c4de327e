# -*- coding: utf-8 -*-
"""
Dataset directories.

Layout::

    index.json
    images/<image_id>.pgm        channels tiled vertically
    masks/<image_id>_<k>.pgm     one 0/255 mask per instance

``index.json`` lists every sample with its labels, seed and instances
(class, box and mask file).
"""
import json
import logging
import os

import numpy as np
from jsonschema import ValidationError, validate

from peakseg.errors import ConsistencyError, FormatError, VersionError
from peakseg.storage.files import write_atomic
from peakseg.storage.pgm import read_image, read_mask, write_image
from peakseg.storage.pgm import write_mask
from peakseg.synthetic import SyntheticSample

log = logging.getLogger(__name__)

INDEX = 'index.json'
VERSION = 1

index_schema = {
    'type': 'object',
    'properties': {
        'version': {'type': 'integer'},
        'channels': {'type': 'integer', 'minimum': 1},
        'num_classes': {'type': 'integer', 'minimum': 1},
        'samples': {
            'type': 'array',
            'items': {
                'type': 'object',
                'properties': {
                    'id': {'type': 'string'},
                    'image': {'type': 'string'},
                    'seed': {'type': 'integer'},
                    'labels': {'type': 'array',
                               'items': {'enum': [0, 1]}},
                    'instances': {
                        'type': 'array',
                        'items': {
                            'type': 'object',
                            'properties': {
                                'class': {'type': 'integer', 'minimum': 0},
                                'box': {'type': 'array',
                                        'items': {'type': 'integer'},
                                        'minItems': 4, 'maxItems': 4},
                                'mask': {'type': 'string'},
                            },
                            'required': ['class', 'box', 'mask'],
                        },
                    },
                },
                'required': ['id', 'image', 'labels', 'instances'],
            },
        },
    },
    'required': ['version', 'channels', 'num_classes', 'samples'],
}


def save_dataset(path, samples):
    """Write ``samples`` under the directory ``path``.

    The index is written last, so a directory without one is incomplete.
    """
    samples = list(samples)
    entries = []
    channels = samples[0].image.shape[0] if samples else 3
    num_classes = len(samples[0].labels) if samples else 0
    for sample in samples:
        image_file = 'images/{}.pgm'.format(sample.image_id)
        write_image(os.path.join(path, image_file), sample.image)
        instances = []
        for k, ((cls, mask), (_, box)) in enumerate(zip(sample.masks,
                                                        sample.boxes)):
            mask_file = 'masks/{}_{}.pgm'.format(sample.image_id, k)
            write_mask(os.path.join(path, mask_file), mask)
            instances.append({'class': cls, 'box': list(box),
                              'mask': mask_file})
        entries.append({'id': sample.image_id, 'image': image_file,
                        'seed': getattr(sample, 'seed', 0),
                        'labels': [int(v) for v in sample.labels],
                        'instances': instances})
    index = {'version': VERSION, 'channels': channels,
             'num_classes': num_classes, 'samples': entries}
    write_atomic(os.path.join(path, INDEX),
                 json.dumps(index, sort_keys=True, indent=1))
    log.info('saved %d samples to %s', len(samples), path)


def load_index(path):
    with open(os.path.join(path, INDEX), 'r') as fp:
        try:
            index = json.load(fp)
        except ValueError as exc:
            raise FormatError('{} is not JSON: {}'.format(INDEX, exc))
    try:
        validate(index, index_schema)
    except ValidationError as exc:
        raise FormatError('invalid {}: {}'.format(INDEX, exc.message))
    if index['version'] != VERSION:
        raise VersionError('unsupported dataset version {}'.format(
            index['version']))
    return index


def load_dataset(path):
    """Read the samples of a dataset directory, in index order."""
    index = load_index(path)
    samples = []
    for entry in index['samples']:
        image = read_image(os.path.join(path, entry['image']),
                           index['channels'])
        if len(entry['labels']) != index['num_classes']:
            raise ConsistencyError('sample {} has {} labels, index says {}'
                                   .format(entry['id'], len(entry['labels']),
                                           index['num_classes']))
        masks, boxes = [], []
        for instance in entry['instances']:
            mask = read_mask(os.path.join(path, instance['mask']))
            masks.append((instance['class'], mask))
            boxes.append((instance['class'], tuple(instance['box'])))
        samples.append(SyntheticSample(image, boxes, masks,
                                       np.asarray(entry['labels']),
                                       entry.get('seed', 0),
                                       image_id=entry['id']))
    log.info('loaded %d samples from %s', len(samples), path)
    return samples
