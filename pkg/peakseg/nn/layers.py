# -*- coding: utf-8 -*-
"""
Layer descriptions and their forward passes.

Tensors are ``float64`` arrays shaped ``(channels, height, width)``.
Convolution is cross-correlation (no kernel flip) with zero padding.
"""
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from peakseg.errors import ShapeError


def as_tensor(data):
    """Return ``data`` as a finite, C-contiguous float64 3-D array."""
    tensor = np.ascontiguousarray(data, dtype=np.float64)
    if tensor.ndim != 3:
        raise ShapeError('expected a (channels, height, width) tensor, '
                         'got shape {}'.format(tensor.shape))
    if not np.all(np.isfinite(tensor)):
        raise ShapeError('tensor contains non-finite values')
    return tensor


class Conv(object):

    """A convolution layer.

    ``weights`` is shaped ``(out_channels, in_channels, kH, kW)`` and
    ``bias`` holds one value per output channel.
    """

    kind = 'conv'

    def __init__(self, weights, bias=None, stride=1, padding=0):
        weights = np.array(weights, dtype=np.float64)
        if weights.ndim != 4 or min(weights.shape) < 1:
            raise ShapeError('conv weights must be (out, in, kH, kW), '
                             'got {}'.format(weights.shape))
        if bias is None:
            bias = np.zeros(weights.shape[0])
        bias = np.array(bias, dtype=np.float64).reshape(-1)
        if bias.shape != (weights.shape[0],):
            raise ShapeError('conv bias must have {} entries, got {}'.format(
                weights.shape[0], bias.shape[0]))
        if stride < 1 or padding < 0:
            raise ShapeError('conv needs stride >= 1 and padding >= 0')
        self.weights = weights
        self.bias = bias
        self.stride = int(stride)
        self.padding = int(padding)

    @property
    def out_channels(self):
        return self.weights.shape[0]

    @property
    def in_channels(self):
        return self.weights.shape[1]

    @property
    def kernel(self):
        return self.weights.shape[2:]

    def parameters(self):
        return {'weights': self.weights, 'bias': self.bias}

    def output_shape(self, shape):
        channels, height, width = shape
        if channels != self.in_channels:
            raise ShapeError(
                'conv expects {} input channels, got {}'.format(
                    self.in_channels, channels))
        kh, kw = self.kernel
        padded_h = height + 2 * self.padding
        padded_w = width + 2 * self.padding
        if kh > padded_h or kw > padded_w:
            raise ShapeError(
                'conv kernel {}x{} larger than padded input {}x{}'.format(
                    kh, kw, padded_h, padded_w))
        return (self.out_channels,
                (padded_h - kh) // self.stride + 1,
                (padded_w - kw) // self.stride + 1)

    def describe(self):
        return {'type': self.kind,
                'out_channels': self.out_channels,
                'in_channels': self.in_channels,
                'kernel': list(self.kernel),
                'stride': self.stride,
                'padding': self.padding}

    def __repr__(self):
        return 'Conv({}->{}, k={}x{}, stride={}, pad={})'.format(
            self.in_channels, self.out_channels, self.kernel[0],
            self.kernel[1], self.stride, self.padding)


class ReLU(object):
    kind = 'relu'

    def parameters(self):
        return {}

    def output_shape(self, shape):
        return tuple(shape)

    def describe(self):
        return {'type': self.kind}

    def __repr__(self):
        return 'ReLU()'


class _Pool(object):
    kind = None

    def __init__(self, window, stride=None):
        stride = window if stride is None else stride
        if window < 1 or stride < 1:
            raise ShapeError('pooling needs window >= 1 and stride >= 1')
        self.window = int(window)
        self.stride = int(stride)

    def parameters(self):
        return {}

    def output_shape(self, shape):
        channels, height, width = shape
        if self.window > height or self.window > width:
            raise ShapeError(
                '{} window {} larger than input {}x{}'.format(
                    self.kind, self.window, height, width))
        return (channels,
                (height - self.window) // self.stride + 1,
                (width - self.window) // self.stride + 1)

    def describe(self):
        return {'type': self.kind, 'window': self.window,
                'stride': self.stride}

    def __repr__(self):
        return '{}(window={}, stride={})'.format(
            type(self).__name__, self.window, self.stride)


class MaxPool(_Pool):
    kind = 'maxpool'


class AvgPool(_Pool):
    kind = 'avgpool'


LAYER_TYPES = {cls.kind: cls for cls in (Conv, ReLU, MaxPool, AvgPool)}


def windows(tensor, kernel, stride):
    """View ``tensor`` as ``(C, outH, outW, kH, kW)`` sliding windows."""
    view = sliding_window_view(tensor, kernel, axis=(1, 2))
    return view[:, ::stride, ::stride]


def pad(tensor, padding):
    if not padding:
        return tensor
    return np.pad(tensor, ((0, 0), (padding, padding), (padding, padding)))


def unpad(tensor, padding):
    """Inverse of :func:`pad`: drop ``padding`` border pixels."""
    if not padding:
        return tensor
    return tensor[:, padding:-padding, padding:-padding]


def conv_forward(input, layer):
    out_shape = layer.output_shape(input.shape)
    patches = windows(pad(input, layer.padding), layer.kernel, layer.stride)
    patches = patches[:, :out_shape[1], :out_shape[2]]
    out = np.einsum('chwij,ocij->ohw', patches, layer.weights)
    out += layer.bias[:, None, None]
    return np.ascontiguousarray(out)


def relu_forward(input):
    return np.maximum(input, 0.0)


def pool_forward(input, layer):
    out_shape = layer.output_shape(input.shape)
    patches = windows(input, (layer.window, layer.window), layer.stride)
    patches = patches[:, :out_shape[1], :out_shape[2]]
    if isinstance(layer, MaxPool):
        out = patches.max(axis=(3, 4))
    else:
        out = patches.mean(axis=(3, 4))
    return np.ascontiguousarray(out)


def layer_forward(layer, input):
    if isinstance(layer, Conv):
        return conv_forward(input, layer)
    if isinstance(layer, ReLU):
        return relu_forward(input)
    if isinstance(layer, (MaxPool, AvgPool)):
        return pool_forward(input, layer)
    raise TypeError('unknown layer type: {!r}'.format(layer))
