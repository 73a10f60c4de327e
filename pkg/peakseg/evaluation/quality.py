# -*- coding: utf-8 -*-
"""
Peak response map quality.

The quality of a map ``R`` is the largest share of its mass that falls
inside a single ground truth mask of the peak's class. Maps scoring
above 0.5 count as hits.
"""
import collections

import numpy as np

from peakseg.evaluation.reports import MetricReport

HIT_THRESHOLD = 0.5


QualityEntry = collections.namedtuple(
    'QualityEntry', 'cls quality num_instances relative_area')


def _best_match(R, sample, cls):
    total = R.sum()
    best, best_mask = 0.0, None
    if total <= 0:
        return best, best_mask
    for mask in sample.masks_of(cls):
        share = R[mask].sum() / total
        if best_mask is None or share > best:
            best, best_mask = float(share), mask
    return best, best_mask


def prm_quality(R, sample, cls=None):
    """Return ``max_G sum(R * G) / sum(R)`` over same-class masks ``G``.

    ``R`` may be a :class:`PeakResponseMap` (its class is used) or a 2-D
    array together with ``cls``. Returns 0 when the map carries no mass
    or the class has no ground truth mask.
    """
    if cls is None:
        cls = R.cls
    R = getattr(R, 'R', R)
    return _best_match(R, sample, cls)[0]


def quality_entry(prm, sample):
    R = prm.R
    quality, mask = _best_match(R, sample, prm.cls)
    area = None
    if mask is not None:
        area = mask.sum() / float(mask.size)
    return QualityEntry(prm.cls, quality, sample.num_instances, area)


def crowding_bucket(num_instances):
    if num_instances < 1:
        return None
    if num_instances == 1:
        return '1'
    if num_instances <= 5:
        return '2-5'
    return '6+'


def size_bucket(relative_area):
    if relative_area < 0.05:
        return 'small'
    if relative_area <= 0.20:
        return 'medium'
    return 'large'


def quality_breakdown(entries):
    """Summarise quality entries.

    :returns: a dict of :class:`MetricReport` objects:
        ``prm_quality`` (mean quality per class), ``prm_hit_rate``
        (fraction above 0.5 per class), ``prm_quality_by_crowding``
        (mean quality for images with 1, 2-5 and 6+ instances) and
        ``prm_quality_by_size`` (mean quality by the matched instance's
        share of the image).
    """
    by_class = collections.defaultdict(list)
    by_crowding = collections.defaultdict(list)
    by_size = collections.defaultdict(list)
    for entry in entries:
        by_class[entry.cls].append(entry.quality)
        crowding = crowding_bucket(entry.num_instances)
        if crowding is not None:
            by_crowding[crowding].append(entry.quality)
        if entry.relative_area is not None:
            by_size[size_bucket(entry.relative_area)].append(entry.quality)

    def means(groups):
        return {k: float(np.mean(v)) for k, v in groups.items()}

    return {
        'prm_quality': MetricReport('prm_quality', means(by_class)),
        'prm_hit_rate': MetricReport('prm_hit_rate', {
            k: float(np.mean(np.asarray(v) > HIT_THRESHOLD))
            for k, v in by_class.items()}),
        'prm_quality_by_crowding': MetricReport('prm_quality_by_crowding',
                                                means(by_crowding)),
        'prm_quality_by_size': MetricReport('prm_quality_by_size',
                                            means(by_size)),
    }
