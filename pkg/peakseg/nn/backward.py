# -*- coding: utf-8 -*-
"""Analytic gradients for every layer type."""
import numpy as np

from peakseg.errors import ShapeError
from peakseg.nn.layers import AvgPool, Conv, MaxPool, ReLU
from peakseg.nn.layers import pad, unpad, windows


def _check_grad(layer, trace_input, grad_out):
    expected = layer.output_shape(trace_input.shape)
    if grad_out.shape != tuple(expected):
        raise ShapeError('gradient shape {} does not match layer output {}'
                         .format(grad_out.shape, tuple(expected)))


def scatter_windows(values, padded_shape, kernel, stride):
    """Sum per-window contributions back onto the (padded) input grid.

    ``values`` is shaped ``(C, outH, outW, kH, kW)``; entry
    ``[c, p, q, i, j]`` lands on input location
    ``(c, p * stride + i, q * stride + j)``.
    """
    out = np.zeros(padded_shape)
    _, out_h, out_w, kh, kw = values.shape
    for i in range(kh):
        for j in range(kw):
            out[:, i:i + stride * (out_h - 1) + 1:stride,
                j:j + stride * (out_w - 1) + 1:stride] += values[:, :, :, i, j]
    return out


def conv_input_gradient(grad_out, weights, stride, padded_shape):
    """Transposed convolution of ``grad_out`` with ``weights``."""
    per_tap = np.einsum('ohw,ocij->chwij', grad_out, weights)
    return scatter_windows(per_tap, padded_shape, weights.shape[2:], stride)


def conv_backward(layer, trace_input, grad_out):
    padded = pad(trace_input, layer.padding)
    _, out_h, out_w = grad_out.shape
    patches = windows(padded, layer.kernel, layer.stride)[:, :out_h, :out_w]
    grad_weights = np.einsum('ohw,chwij->ocij', grad_out, patches)
    grad_bias = grad_out.sum(axis=(1, 2))
    grad_in = conv_input_gradient(grad_out, layer.weights, layer.stride,
                                  padded.shape)
    grad_in = np.ascontiguousarray(unpad(grad_in, layer.padding))
    return grad_in, {'weights': grad_weights, 'bias': grad_bias}


def relu_backward(trace_input, grad_out):
    return np.where(trace_input > 0, grad_out, 0.0), {}


def argmax_windows(trace_input, layer, out_shape):
    """Flat in-window index of each window's maximum.

    Ties go to the first position in row-major order, i.e. the
    lexicographically smallest coordinate, matching ``numpy.argmax``.
    """
    patches = windows(trace_input, (layer.window, layer.window),
                      layer.stride)[:, :out_shape[1], :out_shape[2]]
    flat = patches.reshape(patches.shape[:3] + (-1,))
    return np.argmax(flat, axis=-1)


def pool_backward(layer, trace_input, grad_out):
    k = layer.window
    channels, out_h, out_w = grad_out.shape
    if isinstance(layer, MaxPool):
        best = argmax_windows(trace_input, layer, grad_out.shape)
        per_tap = np.zeros((channels, out_h, out_w, k * k))
        np.put_along_axis(per_tap, best[..., np.newaxis],
                          grad_out[..., np.newaxis], axis=-1)
        per_tap = per_tap.reshape(channels, out_h, out_w, k, k)
    else:
        per_tap = np.broadcast_to(grad_out[..., np.newaxis, np.newaxis] / (k * k),
                                  (channels, out_h, out_w, k, k))
    grad_in = scatter_windows(per_tap, trace_input.shape, (k, k), layer.stride)
    return grad_in, {}


def layer_backward(layer, trace_input, grad_out):
    """Return ``(grad_in, grad_params)`` for one layer.

    ``grad_params`` maps parameter names to gradients (empty for layers
    without parameters).
    """
    _check_grad(layer, trace_input, grad_out)
    if isinstance(layer, Conv):
        return conv_backward(layer, trace_input, grad_out)
    if isinstance(layer, ReLU):
        return relu_backward(trace_input, grad_out)
    if isinstance(layer, (MaxPool, AvgPool)):
        return pool_backward(layer, trace_input, grad_out)
    raise TypeError('unknown layer type: {!r}'.format(layer))


def network_backward(net, trace, grad_output):
    """Back-propagate ``grad_output`` through ``net``.

    :returns: ``(grad_image, grads)`` where ``grads[i]`` is the parameter
        gradient dict of layer ``i``.
    """
    grads = [None] * len(net.layers)
    grad = grad_output
    for index in reversed(range(len(net.layers))):
        grad, grads[index] = layer_backward(net.layers[index],
                                            trace.inputs[index], grad)
    return grad, grads
