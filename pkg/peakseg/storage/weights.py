# -*- coding: utf-8 -*-
"""
Network weight files.

A weights file is one line of JSON describing the layers, followed by the
parameters as raw little-endian float64 values, layer by layer, weights
before bias. The header also records the parameter count and the SHA-256
of the payload.
"""
import hashlib
import json
import logging

import numpy as np
from jsonschema import ValidationError, validate

from peakseg.errors import ChecksumError, ConsistencyError, FormatError
from peakseg.errors import ShapeError, TruncatedError, VersionError
from peakseg.nn.layers import LAYER_TYPES, AvgPool, Conv, MaxPool, ReLU
from peakseg.nn.network import NetworkSpec
from peakseg.storage.files import read_bytes, write_atomic

log = logging.getLogger(__name__)

FORMAT = 'peakseg-weights'
VERSION = 1
DTYPE = np.dtype('<f8')
PARAM_ORDER = ('weights', 'bias')

layer_schema = {
    'type': 'object',
    'properties': {
        'type': {'enum': sorted(LAYER_TYPES)},
        'out_channels': {'type': 'integer', 'minimum': 1},
        'in_channels': {'type': 'integer', 'minimum': 1},
        'kernel': {'type': 'array', 'items': {'type': 'integer',
                                              'minimum': 1},
                   'minItems': 2, 'maxItems': 2},
        'stride': {'type': 'integer', 'minimum': 1},
        'padding': {'type': 'integer', 'minimum': 0},
        'window': {'type': 'integer', 'minimum': 1},
    },
    'required': ['type'],
}

header_schema = {
    'type': 'object',
    'properties': {
        'format': {'const': FORMAT},
        'version': {'type': 'integer'},
        'layers': {'type': 'array', 'items': layer_schema, 'minItems': 1},
        'num_params': {'type': 'integer', 'minimum': 0},
        'sha256': {'type': 'string', 'pattern': '^[0-9a-f]{64}$'},
    },
    'required': ['format', 'version', 'layers', 'num_params', 'sha256'],
}


def _flatten(net):
    arrays = []
    for params in net.parameters():
        for name in PARAM_ORDER:
            if name in params:
                arrays.append(params[name].ravel())
    if not arrays:
        return np.zeros(0, dtype=DTYPE)
    return np.concatenate(arrays).astype(DTYPE)


def encode_weights(net):
    payload = _flatten(net).tobytes()
    header = {
        'format': FORMAT,
        'version': VERSION,
        'layers': [layer.describe() for layer in net.layers],
        'num_params': int(net.num_params()),
        'sha256': hashlib.sha256(payload).hexdigest(),
    }
    line = json.dumps(header, sort_keys=True, separators=(',', ':'))
    return line.encode('utf-8') + b'\n' + payload


def save_weights(path, net):
    write_atomic(path, encode_weights(net))
    log.info('saved %d parameters to %s', net.num_params(), path)


def _param_count(descriptor):
    if descriptor['type'] != Conv.kind:
        return 0
    kh, kw = descriptor['kernel']
    out = descriptor['out_channels']
    return out * descriptor['in_channels'] * kh * kw + out


def _build_layer(descriptor, values):
    kind = descriptor['type']
    try:
        if kind == Conv.kind:
            out = descriptor['out_channels']
            kh, kw = descriptor['kernel']
            shape = (out, descriptor['in_channels'], kh, kw)
            split = int(np.prod(shape))
            return Conv(values[:split].reshape(shape), values[split:],
                        stride=descriptor.get('stride', 1),
                        padding=descriptor.get('padding', 0))
        if kind == ReLU.kind:
            return ReLU()
        pool = MaxPool if kind == MaxPool.kind else AvgPool
        return pool(descriptor['window'], descriptor.get('stride'))
    except (KeyError, ShapeError) as exc:
        raise ConsistencyError('bad {} layer descriptor {}: {}'.format(
            kind, descriptor, exc))


def decode_weights(data):
    newline = data.find(b'\n')
    if newline < 0:
        raise TruncatedError('weights header is not terminated')
    try:
        header = json.loads(data[:newline].decode('utf-8'))
    except ValueError as exc:
        raise FormatError('weights header is not JSON: {}'.format(exc))
    if isinstance(header, dict) and header.get('version') != VERSION:
        raise VersionError('unsupported weights version {!r}, expected {}'
                           .format(header.get('version'), VERSION))
    try:
        validate(header, header_schema)
    except ValidationError as exc:
        raise FormatError('invalid weights header: {}'.format(exc.message))

    try:
        declared = sum(_param_count(d) for d in header['layers'])
    except KeyError as exc:
        raise ConsistencyError('conv layer descriptor lacks {}'.format(exc))
    if declared != header['num_params']:
        raise ConsistencyError(
            'layers declare {} parameters, header says {}'.format(
                declared, header['num_params']))
    payload = data[newline + 1:]
    expected = header['num_params'] * DTYPE.itemsize
    if len(payload) < expected:
        raise TruncatedError('payload holds {} of {} bytes'.format(
            len(payload), expected))
    if len(payload) > expected:
        raise ConsistencyError('payload has {} bytes beyond {} parameters'
                               .format(len(payload) - expected,
                                       header['num_params']))
    if hashlib.sha256(payload).hexdigest() != header['sha256']:
        raise ChecksumError('payload checksum mismatch')

    values = np.frombuffer(payload, dtype=DTYPE).astype(np.float64)
    layers = []
    offset = 0
    for descriptor in header['layers']:
        count = _param_count(descriptor)
        layers.append(_build_layer(descriptor, values[offset:offset + count]))
        offset += count
    try:
        return NetworkSpec(layers)
    except ShapeError as exc:
        raise ConsistencyError(str(exc))


def load_weights(path, net=None):
    """Load a network from ``path``.

    When ``net`` is given the file must describe the same architecture;
    a new network carrying the stored parameters is returned either way.
    """
    loaded = decode_weights(read_bytes(path))
    if net is not None:
        expected = [layer.describe() for layer in net.layers]
        found = [layer.describe() for layer in loaded.layers]
        if expected != found:
            raise ConsistencyError('{} describes a different architecture'
                                   .format(path))
    log.info('loaded %d parameters from %s', loaded.num_params(), path)
    return loaded
