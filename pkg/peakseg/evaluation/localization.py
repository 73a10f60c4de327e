# -*- coding: utf-8 -*-
"""
Pointwise localization.

Class response maps are upsampled to the image with bilinear
interpolation; the arg-max of each map is the class's point. For each
class, every image is ranked by its class score and counts as a hit when
its point falls inside a ground truth box of that class.
"""
import numpy as np

from peakseg.evaluation.reports import MetricReport, average_precision
from peakseg.evaluation.reports import ranked
from peakseg.evaluation.sample import contains
from peakseg.nn.network import network_forward
from peakseg.nn.upsample import bilinear_upsample
from peakseg.stimulation.pooling import class_scores


class LocalizationRecord(object):

    """Per-class scores and maximum-response coordinates of one image."""

    def __init__(self, image_id, scores, points):
        self.image_id = image_id
        self.scores = np.asarray(scores, dtype=np.float64)
        self.points = np.asarray(points, dtype=np.intp).reshape(-1, 2)


def localize(net, image, cfg=None, aggregation='peak', image_id=None):
    _, M = network_forward(net, image)
    scores, _ = class_scores(M, aggregation, cfg)
    _, height, width = np.shape(image)
    upsampled = bilinear_upsample(M, height, width)
    flat = upsampled.reshape(len(upsampled), -1).argmax(axis=1)
    points = np.stack(np.unravel_index(flat, (height, width)), axis=1)
    return LocalizationRecord(image_id, scores, points)


def _boxes_of(samples, record, cls):
    sample = samples.get(record.image_id)
    return sample.boxes_of(cls) if sample is not None else []


def point_localization_ap(records, samples):
    """Pointwise localization mAP.

    :param records: :class:`LocalizationRecord` objects, one per image.
    :param samples: mapping from image id to :class:`EvalSample`.

    Classes without a single ground truth box are left out of the mean.
    Records of images missing from ``samples`` have no boxes, so their
    points only ever count as misses.
    """
    records = list(records)
    classes = sorted({cls for r in records if r.image_id in samples
                      for cls in samples[r.image_id].classes()})
    per_class = {}
    for cls in classes:
        positives = sum(1 for r in records if _boxes_of(samples, r, cls))
        if not positives:
            continue
        hits = []
        for record in ranked(records, key=lambda r: r.scores[cls]):
            point = record.points[cls]
            boxes = _boxes_of(samples, record, cls)
            hits.append(any(contains(box, point) for box in boxes))
        per_class[cls] = average_precision(hits, positives)
    return MetricReport('pointwise_localization_map', per_class)
