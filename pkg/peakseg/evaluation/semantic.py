# -*- coding: utf-8 -*-
"""
Semantic segmentation from instance predictions.

Label maps use 0 for background and ``class + 1`` for object classes.
"""
import numpy as np

from peakseg.errors import ShapeError
from peakseg.evaluation.reports import MetricReport

BACKGROUND = 0


def merge_semantic(predictions, num_classes, shape=None):
    """Merge instance masks into one label map.

    Each pixel takes the class of the most confident prediction covering
    it; equal confidences go to the lower class id.
    """
    predictions = list(predictions)
    if shape is None:
        if not predictions:
            raise ShapeError('need a shape to merge an empty prediction set')
        shape = predictions[0].mask.shape
    labels = np.full(shape, BACKGROUND, dtype=np.int64)
    painted = np.zeros(shape, dtype=bool)
    order = sorted(predictions, key=lambda p: (-p.confidence, p.cls))
    for prediction in order:
        if not 0 <= prediction.cls < num_classes:
            raise ShapeError('class {} outside 0..{}'.format(
                prediction.cls, num_classes - 1))
        fresh = prediction.mask & ~painted
        labels[fresh] = prediction.cls + 1
        painted |= prediction.mask
    return labels


def semantic_labels(sample, shape=None):
    """Ground truth label map of an :class:`EvalSample`."""
    shape = shape or sample.shape
    labels = np.full(shape, BACKGROUND, dtype=np.int64)
    for cls, mask in sample.masks:
        labels[mask] = cls + 1
    return labels


def miou(pred, gt, num_classes):
    """Mean IoU over background plus ``num_classes`` object labels.

    Only labels present in the prediction or the ground truth are
    averaged. ``pred`` and ``gt`` may be single label maps or equally
    long sequences of them; pixel counts are pooled across the set.
    """
    if isinstance(pred, np.ndarray) and pred.ndim == 2:
        pred, gt = [pred], [gt]
    intersection = np.zeros(num_classes + 1)
    union = np.zeros(num_classes + 1)
    present = np.zeros(num_classes + 1, dtype=bool)
    for p, g in zip(pred, gt):
        p = np.asarray(p)
        g = np.asarray(g)
        if p.shape != g.shape:
            raise ShapeError('label maps differ: {} vs {}'.format(
                p.shape, g.shape))
        for label in range(num_classes + 1):
            in_pred = p == label
            in_gt = g == label
            intersection[label] += np.count_nonzero(in_pred & in_gt)
            union[label] += np.count_nonzero(in_pred | in_gt)
            present[label] |= bool(in_pred.any() or in_gt.any())
    per_class = {label: intersection[label] / union[label]
                 for label in range(num_classes + 1) if present[label]}
    return MetricReport('miou', per_class)
