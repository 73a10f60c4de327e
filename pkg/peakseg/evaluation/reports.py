# -*- coding: utf-8 -*-
"""Metric reports and the average precision convention."""
import numpy as np

from peakseg.errors import ShapeError


class MetricReport(object):

    """A named metric with per-class values and their mean.

    Keys of ``per_class`` are class ids (or bucket names for breakdowns);
    ``aggregate`` is the mean over the keys present, or 0.0 when there
    are none.
    """

    def __init__(self, name, per_class):
        self.name = name
        self.per_class = dict(per_class)
        if self.per_class:
            self.aggregate = float(np.mean(list(self.per_class.values())))
        else:
            self.aggregate = 0.0

    def to_dict(self):
        return {
            'name': self.name,
            'per_class': {str(k): float(v)
                          for k, v in sorted(self.per_class.items(),
                                             key=lambda kv: str(kv[0]))},
            'aggregate': self.aggregate,
        }

    def format(self, percent=True):
        scale, unit = (100.0, '%') if percent else (1.0, '')
        lines = ['{}: {:.2f}{}'.format(self.name, self.aggregate * scale, unit)]
        for key in sorted(self.per_class, key=str):
            lines.append('  {:>8}: {:.2f}{}'.format(
                key, self.per_class[key] * scale, unit))
        return '\n'.join(lines)

    def __repr__(self):
        return 'MetricReport({!r}, aggregate={:.4f})'.format(
            self.name, self.aggregate)


def average_precision(hits, num_positives):
    """Average precision of a ranked list of hit/miss flags.

    Precision is taken at the rank of every hit and the sum is divided by
    ``num_positives``, so positives that are never retrieved count as
    zero precision. Returns 0.0 when there are no positives.
    """
    hits = np.asarray(hits, dtype=bool)
    if num_positives <= 0:
        return 0.0
    if hits.sum() > num_positives:
        raise ShapeError('{} hits for {} positives'.format(
            int(hits.sum()), num_positives))
    if not hits.any():
        return 0.0
    ranks = np.arange(1, len(hits) + 1)
    precision = np.cumsum(hits) / ranks.astype(np.float64)
    return float(precision[hits].sum() / num_positives)


def ranked(items, key):
    """Sort by descending ``key``; ties keep their input order."""
    return sorted(items, key=lambda item: -key(item))
