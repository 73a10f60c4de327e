# -*- coding: utf-8 -*-
"""Instance segmentation metrics: mask IoU, mAP^r and ABO."""
import numpy as np

from peakseg.errors import ShapeError
from peakseg.evaluation.reports import MetricReport, average_precision
from peakseg.evaluation.reports import ranked

DEFAULT_THRESHOLDS = (0.25, 0.5, 0.75)


def mask_iou(A, B):
    """Intersection over union of two binary masks (0 when both empty)."""
    A = np.asarray(A, dtype=bool)
    B = np.asarray(B, dtype=bool)
    if A.shape != B.shape:
        raise ShapeError('mask shapes differ: {} vs {}'.format(A.shape,
                                                                B.shape))
    union = np.count_nonzero(A | B)
    if union == 0:
        return 0.0
    return np.count_nonzero(A & B) / float(union)


def _classes(predictions, samples):
    classes = {cls for sample in samples.values() for cls, _ in sample.masks}
    classes.update(p.cls for preds in predictions.values() for p in preds)
    return sorted(classes)


def _class_ap(cls, predictions, samples, threshold):
    num_gt = sum(len(s.masks_of(cls)) for s in samples.values())
    candidates = [(image_id, p)
                  for image_id, preds in predictions.items()
                  for p in preds if p.cls == cls]
    matched = {image_id: set() for image_id in samples}
    hits = []
    for image_id, prediction in ranked(candidates,
                                       key=lambda item: item[1].confidence):
        sample = samples.get(image_id)
        gt_masks = sample.masks_of(cls) if sample is not None else []
        best, best_iou = None, -1.0
        for index, mask in enumerate(gt_masks):
            if index in matched[image_id]:
                continue
            iou = mask_iou(prediction.mask, mask)
            if iou > best_iou:
                best, best_iou = index, iou
        hit = best is not None and best_iou >= threshold
        if hit:
            matched[image_id].add(best)
        hits.append(hit)
    return average_precision(hits, num_gt)


def map_r(predictions, samples, thresholds=DEFAULT_THRESHOLDS):
    """Mask mean average precision at each IoU threshold.

    :param predictions: mapping from image id to a list of predictions
        carrying ``cls``, ``confidence`` and ``mask``.
    :param samples: mapping from image id to :class:`EvalSample`.
    :returns: a dict from threshold to :class:`MetricReport`.

    Predictions are matched greedily by descending confidence, each to the
    unmatched same-class ground truth mask it overlaps most.
    """
    classes = _classes(predictions, samples)
    reports = {}
    for threshold in thresholds:
        per_class = {cls: _class_ap(cls, predictions, samples, threshold)
                     for cls in classes}
        reports[threshold] = MetricReport(
            'map_r@{:g}'.format(threshold), per_class)
    return reports


def abo(predictions, samples):
    """Average best overlap of ground truth instances.

    For each ground truth mask take the best IoU over same-class
    predictions on its image, average per class, then over classes.
    """
    per_class = {}
    for image_id, sample in samples.items():
        preds = predictions.get(image_id, [])
        for cls, mask in sample.masks:
            best = max([mask_iou(p.mask, mask) for p in preds if p.cls == cls]
                       or [0.0])
            per_class.setdefault(cls, []).append(best)
    return MetricReport('abo', {cls: float(np.mean(values))
                                for cls, values in per_class.items()})
