# -*- coding: utf-8 -*-
"""
Aggregation of class response maps into class confidence scores.

Peak stimulation averages each map over its peaks only, and hands the
gradient of each score back to those peaks in equal shares. Global
average pooling is kept as the baseline aggregation.
"""
import numpy as np

from peakseg.errors import EmptyPeakSetError, ShapeError
from peakseg.stimulation.peaks import find_peaks

AGGREGATIONS = ('peak', 'gap')


def stimulate_forward(M, peaks):
    """Return ``s`` with ``s[c]`` the mean of ``M[c]`` over the peaks of c."""
    if M.shape[0] != peaks.num_classes:
        raise ShapeError('{} maps but peaks for {} classes'.format(
            M.shape[0], peaks.num_classes))
    scores = np.empty(peaks.num_classes)
    for cls, coords in enumerate(peaks.coords):
        if len(coords) == 0:
            raise EmptyPeakSetError('class {} has no peaks'.format(cls))
        scores[cls] = M[cls, coords[:, 0], coords[:, 1]].mean()
    return scores


def stimulate_backward(peaks, grad_scores, shape):
    """Apportion ``grad_scores[c]`` equally over the peaks of class c."""
    if len(grad_scores) != peaks.num_classes or shape[0] != peaks.num_classes:
        raise ShapeError('gradient for {} classes, shape {}, peaks for {}'
                         .format(len(grad_scores), shape, peaks.num_classes))
    delta = np.zeros(shape)
    for cls, coords in enumerate(peaks.coords):
        if len(coords) == 0:
            continue
        delta[cls, coords[:, 0], coords[:, 1]] = (
            grad_scores[cls] / float(len(coords)))
    return delta


def gap_forward(M):
    return M.mean(axis=(1, 2))


def gap_backward(grad_scores, shape):
    _, height, width = shape
    delta = np.empty(shape)
    delta[:] = (np.asarray(grad_scores) / float(height * width))[:, None, None]
    return delta


def class_scores(M, aggregation='peak', cfg=None):
    """Aggregate ``M`` into class scores.

    :returns: ``(scores, peaks)``; ``peaks`` is None for ``'gap'``.
    """
    if aggregation == 'peak':
        peaks = find_peaks(M, cfg)
        return stimulate_forward(M, peaks), peaks
    if aggregation == 'gap':
        return gap_forward(M), None
    raise ValueError('unknown aggregation {!r}, expected one of {}'.format(
        aggregation, ', '.join(AGGREGATIONS)))


def aggregate_backward(grad_scores, shape, aggregation='peak', peaks=None):
    if aggregation == 'peak':
        return stimulate_backward(peaks, grad_scores, shape)
    return gap_backward(grad_scores, shape)
