# -*- coding: utf-8 -*-
"""
Fully convolutional networks: plain feed-forward layer stacks whose final
layer is a convolutional classifier head producing one class response map
per class.
"""
import copy
import logging

import numpy as np

from peakseg.errors import ShapeError
from peakseg.nn.layers import AvgPool, Conv, MaxPool, ReLU, as_tensor
from peakseg.nn.layers import layer_forward

log = logging.getLogger(__name__)


class NetworkSpec(object):

    """An ordered stack of layers ending in a convolution.

    The final convolution's output channels are the classes, so the
    network emits class response maps ``M`` shaped ``(C, H, W)``.
    """

    def __init__(self, layers):
        layers = list(layers)
        if not layers:
            raise ShapeError('a network needs at least one layer')
        self.layers = layers
        self._check_channels()

    def _check_channels(self):
        channels = None
        for index, layer in enumerate(self.layers):
            if isinstance(layer, Conv):
                if channels is not None and layer.in_channels != channels:
                    raise ShapeError(
                        'layer {} expects {} channels but receives {}'.format(
                            index, layer.in_channels, channels))
                channels = layer.out_channels

    @property
    def in_channels(self):
        for layer in self.layers:
            if isinstance(layer, Conv):
                return layer.in_channels
        return None

    @property
    def num_classes(self):
        head = self.layers[-1]
        if isinstance(head, Conv):
            return head.out_channels
        return None

    @property
    def has_head(self):
        return isinstance(self.layers[-1], Conv)

    def validate(self):
        """Raise ShapeError unless the final layer is a classifier conv."""
        if not self.has_head:
            raise ShapeError('the final layer must be a convolution, got {!r}'
                             .format(self.layers[-1]))
        return self

    def output_shape(self, input_shape):
        shape = tuple(input_shape)
        for layer in self.layers:
            shape = layer.output_shape(shape)
        return shape

    def parameters(self):
        """Return a list with one ``{name: array}`` dict per layer."""
        return [layer.parameters() for layer in self.layers]

    def num_params(self):
        return sum(array.size
                   for params in self.parameters()
                   for array in params.values())

    def copy(self):
        return copy.deepcopy(self)

    def __repr__(self):
        return 'NetworkSpec([{}])'.format(', '.join(repr(l) for l in self.layers))


class ForwardTrace(object):

    """The input of every layer, recorded during a forward pass.

    ``inputs[i]`` is exactly what layer ``i`` consumed, so ``inputs[0]``
    is the image itself.
    """

    def __init__(self, inputs, output):
        self.inputs = tuple(inputs)
        self.output = output

    def __len__(self):
        return len(self.inputs)


def network_forward(net, image):
    """Run ``image`` through ``net``.

    :returns: ``(trace, output)`` where ``output`` holds the class
        response maps.
    """
    x = as_tensor(image)
    if net.in_channels is not None and x.shape[0] != net.in_channels:
        raise ShapeError('image has {} channels, network expects {}'.format(
            x.shape[0], net.in_channels))
    inputs = []
    for layer in net.layers:
        inputs.append(x)
        x = layer_forward(layer, x)
    return ForwardTrace(inputs, x), x


def toy_network(num_classes, in_channels=3, width=8, seed=0):
    """Build the small fully convolutional classifier used for experiments.

    Conv3x3 - ReLU - MaxPool2 - Conv3x3 - ReLU - Conv1x1, He-normal
    initialised from ``seed``.
    """
    rng = np.random.default_rng(seed)

    def he(out_channels, channels, k):
        scale = np.sqrt(2.0 / (channels * k * k))
        return rng.normal(0.0, scale, size=(out_channels, channels, k, k))

    return NetworkSpec([
        Conv(he(width, in_channels, 3), padding=1),
        ReLU(),
        MaxPool(2),
        Conv(he(2 * width, width, 3), padding=1),
        ReLU(),
        Conv(he(num_classes, 2 * width, 1)),
    ]).validate()


__all__ = ('NetworkSpec', 'ForwardTrace', 'network_forward', 'toy_network',
           'Conv', 'ReLU', 'MaxPool', 'AvgPool')
