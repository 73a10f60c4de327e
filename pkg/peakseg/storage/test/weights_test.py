# -*- coding: utf-8 -*-
import hashlib
import json

import numpy as np
import pytest

from peakseg.errors import ChecksumError, ConsistencyError, FormatError
from peakseg.errors import TruncatedError, VersionError
from peakseg.nn.layers import Conv
from peakseg.nn.network import NetworkSpec, toy_network
from peakseg.storage import weights


def split(data):
    newline = data.index(b'\n')
    return json.loads(data[:newline].decode('utf-8')), data[newline + 1:]


def join(header, payload):
    return json.dumps(header).encode('utf-8') + b'\n' + payload


def resign(header, payload):
    header['sha256'] = hashlib.sha256(payload).hexdigest()
    return join(header, payload)


def parameters(net):
    return [array for params in net.parameters() for array in params.values()]


@pytest.fixture
def net():
    return toy_network(3, in_channels=3, width=4, seed=11)


def test_save_and_load(tmpdir, net):
    path = str(tmpdir.join('model.weights'))
    weights.save_weights(path, net)
    loaded = weights.load_weights(path)
    assert [l.describe() for l in loaded.layers] == [
        l.describe() for l in net.layers]
    for a, b in zip(parameters(loaded), parameters(net)):
        np.testing.assert_array_equal(a, b)


def test_load_into_matching_architecture(tmpdir, net):
    path = str(tmpdir.join('model.weights'))
    weights.save_weights(path, net)
    loaded = weights.load_weights(path, toy_network(3, width=4, seed=0))
    assert loaded.num_params() == net.num_params()


def test_load_into_other_architecture(tmpdir, net):
    path = str(tmpdir.join('model.weights'))
    weights.save_weights(path, net)
    with pytest.raises(ConsistencyError):
        weights.load_weights(path, toy_network(3, width=5))


def test_header(net):
    header, payload = split(weights.encode_weights(net))
    assert header['format'] == 'peakseg-weights'
    assert header['version'] == 1
    assert header['num_params'] == net.num_params()
    assert len(payload) == 8 * net.num_params()
    assert header['layers'][2] == {'type': 'maxpool', 'window': 2,
                                   'stride': 2}


def test_payload_is_little_endian_weights_then_bias():
    net = NetworkSpec([Conv(np.array([1.5]).reshape(1, 1, 1, 1), [-2.0])])
    _, payload = split(weights.encode_weights(net))
    assert np.frombuffer(payload, dtype='<f8').tolist() == [1.5, -2.0]


def test_missing_newline():
    with pytest.raises(TruncatedError):
        weights.decode_weights(b'{"format": "peakseg-weights"')


def test_header_is_not_json(net):
    _, payload = split(weights.encode_weights(net))
    with pytest.raises(FormatError):
        weights.decode_weights(b'{nope\n' + payload)


def test_wrong_version(net):
    header, payload = split(weights.encode_weights(net))
    header['version'] = 2
    with pytest.raises(VersionError):
        weights.decode_weights(join(header, payload))


def test_wrong_format(net):
    header, payload = split(weights.encode_weights(net))
    header['format'] = 'other'
    with pytest.raises(FormatError):
        weights.decode_weights(join(header, payload))


def test_truncated_payload(net):
    data = weights.encode_weights(net)
    with pytest.raises(TruncatedError):
        weights.decode_weights(data[:-8])


def test_trailing_payload(net):
    header, payload = split(weights.encode_weights(net))
    with pytest.raises(ConsistencyError):
        weights.decode_weights(resign(header, payload + b'\x00' * 8))


def test_corrupted_payload(net):
    data = bytearray(weights.encode_weights(net))
    data[-1] ^= 0xff
    with pytest.raises(ChecksumError):
        weights.decode_weights(bytes(data))


def test_parameter_count_disagrees_with_layers(net):
    header, payload = split(weights.encode_weights(net))
    header['num_params'] -= 1
    with pytest.raises(ConsistencyError):
        weights.decode_weights(resign(header, payload[:-8]))


def test_conv_descriptor_missing_fields(net):
    header, payload = split(weights.encode_weights(net))
    del header['layers'][0]['kernel']
    with pytest.raises(ConsistencyError):
        weights.decode_weights(join(header, payload))


def test_channel_mismatch_between_layers(net):
    header, payload = split(weights.encode_weights(net))
    first = header['layers'][0]
    last = header['layers'][-1]
    first['out_channels'], last['in_channels'] = (last['in_channels'],
                                                  first['out_channels'])
    with pytest.raises(ConsistencyError):
        weights.decode_weights(resign(header, payload))


def test_all_format_errors_share_a_base(net):
    for cls in (ChecksumError, ConsistencyError, TruncatedError,
                VersionError):
        assert issubclass(cls, FormatError)
    codes = {cls.code for cls in (FormatError, ChecksumError,
                                  ConsistencyError, TruncatedError,
                                  VersionError)}
    assert len(codes) == 5
