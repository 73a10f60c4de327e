# -*- coding: utf-8 -*-
"""
Finite-difference checks of the analytic gradients.

Every check draws a small random problem, projects the layer output onto
a random direction ``G`` so the objective is a scalar, and compares the
analytic gradient with central differences. Inputs of piecewise linear
layers are drawn away from their kinks so the differences are exact up
to rounding.
"""
import collections
import logging

import numpy as np

from peakseg.nn.backward import layer_backward
from peakseg.nn.layers import AvgPool, Conv, MaxPool, ReLU, layer_forward
from peakseg.stimulation.loss import multilabel_loss
from peakseg.stimulation.peaks import find_peaks
from peakseg.stimulation.pooling import gap_backward, gap_forward
from peakseg.stimulation.pooling import stimulate_backward, stimulate_forward

log = logging.getLogger(__name__)

STEP = 1e-6
TOLERANCE = 1e-6

CheckResult = collections.namedtuple('CheckResult', 'name seed max_error')


def relative_error(analytic, numeric, floor=1.0):
    """Elementwise ``|a - n| / max(|a|, |n|, floor)``.

    Entries smaller than ``floor`` in magnitude are compared absolutely.
    """
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return np.abs(analytic - numeric) / scale


def numeric_gradient(f, x, G, h=STEP):
    """Central differences of ``sum(G * f(x))`` with respect to ``x``.

    ``x`` is perturbed in place and restored. Output differences are
    taken before projecting onto ``G``.
    """
    grad = np.zeros_like(x)
    flat = x.reshape(-1)
    for index in range(flat.size):
        original = flat[index]
        flat[index] = original + h
        plus = np.array(f(x), dtype=np.float64)
        flat[index] = original - h
        minus = np.array(f(x), dtype=np.float64)
        flat[index] = original
        grad.reshape(-1)[index] = np.sum(G * (plus - minus)) / (2.0 * h)
    return grad


def _max_error(pairs):
    return max(float(relative_error(a, n).max()) for a, n in pairs)


def check_conv(rng, h=STEP):
    channels = int(rng.integers(1, 3))
    out_channels = int(rng.integers(1, 4))
    k = int(rng.choice([1, 3]))
    stride = int(rng.integers(1, 3))
    padding = int(rng.integers(0, 2))
    layer = Conv(rng.normal(size=(out_channels, channels, k, k)),
                 rng.normal(size=out_channels), stride=stride,
                 padding=padding)
    x = rng.normal(size=(channels, 5, 5))
    G = rng.uniform(-1.0, 1.0, size=layer.output_shape(x.shape))
    grad_in, grads = layer_backward(layer, x, G)

    def forward(_):
        return layer_forward(layer, x)

    return _max_error([
        (grad_in, numeric_gradient(forward, x, G, h)),
        (grads['weights'], numeric_gradient(forward, layer.weights, G, h)),
        (grads['bias'], numeric_gradient(forward, layer.bias, G, h)),
    ])


def check_relu(rng, h=STEP):
    x = rng.normal(size=(2, 4, 4))
    x += np.sign(x) * 0.1
    G = rng.uniform(-1.0, 1.0, size=x.shape)
    layer = ReLU()
    grad_in, _ = layer_backward(layer, x, G)
    numeric = numeric_gradient(lambda v: layer_forward(layer, v), x, G, h)
    return _max_error([(grad_in, numeric)])


def check_pool(rng, pool_type, h=STEP):
    window = int(rng.integers(1, 4))
    stride = int(rng.integers(1, window + 1))
    layer = pool_type(window, stride)
    size = 6
    # distinct values at least 0.01 apart keep every window's max unique
    x = (rng.permutation(2 * size * size).reshape(2, size, size) * 0.01
         + rng.uniform(0.0, 1e-3))
    G = rng.uniform(-1.0, 1.0, size=layer.output_shape(x.shape))
    grad_in, _ = layer_backward(layer, x, G)
    numeric = numeric_gradient(lambda v: layer_forward(layer, v), x, G, h)
    return _max_error([(grad_in, numeric)])


def check_stimulation(rng, h=STEP):
    """Peak stimulation with the peak set frozen at the unperturbed map."""
    M = rng.normal(size=(3, 8, 8))
    peaks = find_peaks(M)
    G = rng.uniform(-1.0, 1.0, size=3)
    analytic = stimulate_backward(peaks, G, M.shape)
    numeric = numeric_gradient(lambda v: stimulate_forward(v, peaks), M, G, h)
    return _max_error([(analytic, numeric)])


def check_gap(rng, h=STEP):
    M = rng.normal(size=(3, 5, 5))
    G = rng.uniform(-1.0, 1.0, size=3)
    analytic = gap_backward(G, M.shape)
    numeric = numeric_gradient(gap_forward, M, G, h)
    return _max_error([(analytic, numeric)])


def check_loss(rng, h=STEP):
    num_classes = int(rng.integers(2, 6))
    scores = rng.normal(scale=2.0, size=num_classes)
    labels = rng.integers(0, 2, size=num_classes)
    _, analytic = multilabel_loss(scores, labels)
    numeric = numeric_gradient(lambda s: multilabel_loss(s, labels)[0],
                               scores, 1.0, h)
    return _max_error([(analytic, numeric)])


CHECKS = collections.OrderedDict([
    ('conv', check_conv),
    ('relu', check_relu),
    ('maxpool', lambda rng, h=STEP: check_pool(rng, MaxPool, h)),
    ('avgpool', lambda rng, h=STEP: check_pool(rng, AvgPool, h)),
    ('stimulation', check_stimulation),
    ('gap', check_gap),
    ('loss', check_loss),
])


def run_suite(seed=1, trials=20, h=STEP):
    """Run every check on ``trials`` consecutive seeds starting at ``seed``.

    :returns: a list of :class:`CheckResult`.
    """
    results = []
    for trial_seed in range(seed, seed + trials):
        for name, check in CHECKS.items():
            rng = np.random.default_rng(trial_seed)
            error = check(rng, h=h)
            results.append(CheckResult(name, trial_seed, error))
            log.debug('%s seed %d: max relative error %.3e', name,
                      trial_seed, error)
    return results


def failures(results, tolerance=TOLERANCE):
    return [r for r in results if not r.max_error < tolerance]
