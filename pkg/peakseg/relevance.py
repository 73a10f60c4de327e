# -*- coding: utf-8 -*-
"""
Peak back-propagation.

A walker starts at one class peak with probability mass 1 and moves down
the network one layer at a time. From an output location ``(o, p, q)`` of
a convolution it steps to input ``(c, i, j)`` with probability
proportional to ``Û[c, i, j] * W⁺[o, c, i - p·s, j - q·s]``, normalised
jointly over every input channel and tap of that output. ``Û`` is the
(positive part of the) activation recorded during the forward pass and
``W⁺`` keeps only the positive weights. Biases take no part.

Average pooling is treated as a convolution with uniform positive
weights; max pooling sends all mass to the recorded arg-max; ReLU passes
the distribution through unchanged because deactivated units already
carry ``Û = 0`` into the next transition.

Outputs whose normaliser is zero have nowhere to send their mass. That
mass is moved to ``leaked_mass`` and never redistributed.
"""
import logging

import numpy as np

from peakseg.errors import ShapeError
from peakseg.nn.backward import argmax_windows, conv_input_gradient
from peakseg.nn.backward import scatter_windows
from peakseg.nn.layers import AvgPool, Conv, MaxPool, ReLU, pad, unpad
from peakseg.nn.layers import windows
from peakseg.stimulation.peaks import Peak

log = logging.getLogger(__name__)


class RelevanceState(object):

    """A visiting-probability distribution over one layer's units."""

    def __init__(self, distribution, leaked_mass=0.0):
        self.distribution = distribution
        self.leaked_mass = float(leaked_mass)

    @property
    def total(self):
        return float(self.distribution.sum()) + self.leaked_mass

    def __repr__(self):
        return 'RelevanceState(shape={}, mass={:.12f}, leaked={:.12f})'.format(
            self.distribution.shape, float(self.distribution.sum()),
            self.leaked_mass)


class PeakResponseMap(object):

    """The input-resolution relevance map of a single peak.

    ``R`` is the walker's final distribution summed over input channels.
    """

    def __init__(self, origin, R, leaked_mass):
        self.origin = origin
        self.R = R
        self.leaked_mass = float(leaked_mass)

    @property
    def cls(self):
        return self.origin.cls

    @property
    def shape(self):
        return self.R.shape

    def __repr__(self):
        return 'PeakResponseMap(class={}, peak=({}, {}), leaked={:.6f})'.format(
            self.origin.cls, self.origin.row, self.origin.col,
            self.leaked_mass)


def _as_peak(peak):
    if isinstance(peak, Peak):
        return peak
    cls, row, col = peak[:3]
    return Peak(int(cls), int(row), int(col), None, False)


def init_relevance(peak, shape):
    """Put all probability mass on the peak's unit."""
    peak = _as_peak(peak)
    shape = tuple(shape)
    if len(shape) != 3:
        raise ShapeError('relevance shape must be (C, H, W), got {}'.format(
            shape))
    index = (peak.cls, peak.row, peak.col)
    if any(i < 0 or i >= n for i, n in zip(index, shape)):
        raise ShapeError('peak {} outside maps of shape {}'.format(
            index, shape))
    distribution = np.zeros(shape)
    distribution[index] = 1.0
    return RelevanceState(distribution, 0.0)


def _check(layer, trace_input, state):
    expected = tuple(layer.output_shape(trace_input.shape))
    if state.distribution.shape != expected:
        raise ShapeError('relevance shape {} does not match layer output {}'
                         .format(state.distribution.shape, expected))


def _spread(mass, normaliser, leaked_mass):
    """Per-output ratio ``mass / Z``, moving unreachable mass to the leak."""
    live = normaliser > 0
    ratio = np.zeros_like(mass)
    np.divide(mass, normaliser, out=ratio, where=live)
    leaked = float(mass[~live].sum())
    if leaked > 0:
        log.debug('leaking %.3g probability mass', leaked)
    return ratio, leaked_mass + leaked


def backprop_conv(layer, trace_input, state):
    _check(layer, trace_input, state)
    activations = np.maximum(pad(trace_input, layer.padding), 0.0)
    positive = np.maximum(layer.weights, 0.0)
    _, out_h, out_w = state.distribution.shape
    patches = windows(activations, layer.kernel,
                      layer.stride)[:, :out_h, :out_w]
    normaliser = np.einsum('chwij,ocij->ohw', patches, positive)
    ratio, leaked = _spread(state.distribution, normaliser, state.leaked_mass)
    spread = conv_input_gradient(ratio, positive, layer.stride,
                                 activations.shape)
    distribution = unpad(activations * spread, layer.padding)
    return RelevanceState(np.ascontiguousarray(distribution), leaked)


def backprop_pool(layer, trace_input, state):
    _check(layer, trace_input, state)
    mass = state.distribution
    channels, out_h, out_w = mass.shape
    k = layer.window
    if isinstance(layer, MaxPool):
        best = argmax_windows(trace_input, layer, mass.shape)
        per_tap = np.zeros((channels, out_h, out_w, k * k))
        np.put_along_axis(per_tap, best[..., np.newaxis],
                          mass[..., np.newaxis], axis=-1)
        per_tap = per_tap.reshape(channels, out_h, out_w, k, k)
        distribution = scatter_windows(per_tap, trace_input.shape, (k, k),
                                       layer.stride)
        return RelevanceState(distribution, state.leaked_mass)

    activations = np.maximum(trace_input, 0.0)
    patches = windows(activations, (k, k), layer.stride)[:, :out_h, :out_w]
    normaliser = patches.sum(axis=(3, 4))
    ratio, leaked = _spread(mass, normaliser, state.leaked_mass)
    per_tap = patches * ratio[..., np.newaxis, np.newaxis]
    distribution = scatter_windows(per_tap, trace_input.shape, (k, k),
                                   layer.stride)
    return RelevanceState(distribution, leaked)


def backprop_relu(state):
    return state


def backprop_layer(layer, trace_input, state):
    if isinstance(layer, Conv):
        return backprop_conv(layer, trace_input, state)
    if isinstance(layer, (MaxPool, AvgPool)):
        return backprop_pool(layer, trace_input, state)
    if isinstance(layer, ReLU):
        return backprop_relu(state)
    raise TypeError('unknown layer type: {!r}'.format(layer))


def peak_response_map(net, trace, peak):
    """Walk ``peak`` from the class response maps down to the image."""
    if len(trace) != len(net.layers):
        raise ShapeError('trace has {} entries for {} layers'.format(
            len(trace), len(net.layers)))
    peak = _as_peak(peak)
    state = init_relevance(peak, trace.output.shape)
    for layer, trace_input in zip(reversed(net.layers),
                                  reversed(trace.inputs)):
        state = backprop_layer(layer, trace_input, state)
    R = state.distribution.sum(axis=0)
    return PeakResponseMap(peak, R, state.leaked_mass)


def peak_response_maps(net, trace, peaks):
    """One map per peak, in the order the peaks are given."""
    return [peak_response_map(net, trace, peak) for peak in peaks]
