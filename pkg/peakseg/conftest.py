# -*- coding: utf-8 -*-
"""
The `conftest` module is automatically loaded by py.test and serves as a place
to put fixture functions that are useful package-wide.
"""
import os

import numpy as np
import pytest

from peakseg import config
from peakseg.nn.layers import AvgPool, Conv, MaxPool, ReLU
from peakseg.nn.network import NetworkSpec

TEST_INI = os.path.join(os.path.dirname(__file__), '..', 'conf', 'test.ini')

ENVIRONMENT = ('PEAKSEG_CONFIG', 'PEAKSEG_ALPHA', 'PEAKSEG_BETA',
               'PEAKSEG_RADIUS', 'PEAKSEG_SEED', 'PEAKSEG_WORKERS')


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep the caller's PEAKSEG_* variables out of the tests."""
    for name in ENVIRONMENT:
        monkeypatch.delenv(name, raising=False)


@pytest.fixture()
def settings():
    """Settings from conf/test.ini."""
    return config.get_settings(TEST_INI)


@pytest.fixture()
def test_ini():
    return TEST_INI


@pytest.fixture()
def rng():
    return np.random.default_rng(0)


def random_network(rng, in_channels=2, num_classes=2, positive=False,
                   max_layers=3):
    """A random small network ending in a classifier conv.

    With ``positive`` every weight is strictly positive and biases are
    zero.
    """
    def weights(shape):
        w = rng.normal(size=shape)
        return np.abs(w) + 0.05 if positive else w

    def bias(size):
        return np.zeros(size) if positive else rng.normal(size=size) * 0.1

    layers = []
    channels = in_channels
    for _ in range(int(rng.integers(0, max_layers))):
        choice = int(rng.integers(4))
        if choice == 0:
            out = int(rng.integers(1, 4))
            k = int(rng.choice([1, 3]))
            layers.append(Conv(weights((out, channels, k, k)),
                               bias(out),
                               padding=k // 2))
            channels = out
        elif choice == 1:
            layers.append(ReLU())
        elif choice == 2:
            layers.append(MaxPool(2, 1))
        else:
            layers.append(AvgPool(2, 1))
    k = int(rng.choice([1, 3]))
    layers.append(Conv(weights((num_classes, channels, k, k)),
                       bias(num_classes), padding=k // 2))
    return NetworkSpec(layers).validate()


@pytest.fixture()
def make_network():
    """Factory fixture for :func:`random_network`."""
    return random_network
