# -*- coding: utf-8 -*-
"""
Plain stochastic gradient descent on image-level labels.

Peaks are re-detected on every forward pass; the gradient reaches the
network only through them (or uniformly through every location when the
GAP baseline aggregation is selected).
"""
import logging

import numpy as np

from peakseg.errors import DivergenceError
from peakseg.nn.backward import network_backward
from peakseg.nn.network import network_forward
from peakseg.stimulation.loss import multilabel_loss
from peakseg.stimulation.pooling import aggregate_backward, class_scores

log = logging.getLogger(__name__)


def training_pairs(samples):
    """Turn samples carrying ``image`` and ``labels`` into pairs."""
    return [(sample.image, sample.labels) for sample in samples]


def compute_gradients(net, image, labels, cfg=None, aggregation='peak'):
    """Return ``(loss, grads)`` for one labelled image.

    ``grads`` holds one ``{name: gradient}`` dict per layer of ``net``.
    """
    trace, M = network_forward(net, image)
    if not np.all(np.isfinite(M)):
        raise DivergenceError('class response maps are not finite')
    scores, peaks = class_scores(M, aggregation, cfg)
    loss, grad_scores = multilabel_loss(scores, labels)
    grad_maps = aggregate_backward(grad_scores, M.shape, aggregation, peaks)
    _, grads = network_backward(net, trace, grad_maps)
    return loss, grads


def sgd_step(net, grads, lr):
    """Update the parameters of ``net`` in place."""
    for layer, layer_grads in zip(net.layers, grads):
        params = layer.parameters()
        for name, grad in layer_grads.items():
            params[name] -= lr * grad


def train_toy(net, dataset, epochs=1, lr=0.05, seed=0, steps=None,
              cfg=None, aggregation='peak'):
    """Train a copy of ``net`` on ``(image, labels)`` pairs.

    Samples are visited in a seed-determined order, one SGD update per
    sample, for ``epochs`` passes or until ``steps`` updates were made.

    :raises DivergenceError: when the loss stops being finite.
    :returns: the trained copy; ``net`` itself is left untouched.
    """
    trained = net.copy()
    dataset = list(dataset)
    if not dataset:
        return trained
    rng = np.random.default_rng(seed)
    step = 0
    for epoch in range(epochs):
        losses = []
        for index in rng.permutation(len(dataset)):
            if steps is not None and step >= steps:
                break
            image, labels = dataset[index]
            loss, grads = compute_gradients(trained, image, labels, cfg,
                                            aggregation)
            if not np.isfinite(loss):
                log.error('loss diverged at step %d (epoch %d): %r',
                          step, epoch, loss)
                raise DivergenceError(
                    'non-finite loss {!r} at step {} (lr={})'.format(
                        loss, step, lr))
            sgd_step(trained, grads, lr)
            losses.append(loss)
            step += 1
        if losses:
            log.info('epoch %d: %d steps, mean loss %.6f (%s aggregation)',
                     epoch, len(losses), np.mean(losses), aggregation)
        if steps is not None and step >= steps:
            break
    return trained
