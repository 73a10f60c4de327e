# -*- coding: utf-8 -*-
"""
Peak finding on class response maps.

A peak of class ``c`` is a location whose value is at least every value
in the ``(2r + 1)`` square window around it, with the window clipped at
the map border. Adjacent window maxima necessarily share one value, so
each 8-connected group of them is a plateau and contributes only its
lexicographically smallest coordinate.
"""
import collections

import numpy as np
from scipy import ndimage

from peakseg.errors import ShapeError

Peak = collections.namedtuple('Peak', 'cls row col value fallback')


class StimulationConfig(object):

    """Peak finding settings.

    :param radius: window radius ``r``; the window is ``2r + 1`` wide.
    :param fallback: emit a flagged pseudo-peak for constant maps.
    """

    def __init__(self, radius=3, fallback=True):
        if int(radius) < 1:
            raise ShapeError('peak radius must be >= 1, got {}'.format(radius))
        self.radius = int(radius)
        self.fallback = bool(fallback)

    def __repr__(self):
        return 'StimulationConfig(radius={}, fallback={})'.format(
            self.radius, self.fallback)


class PeakList(object):

    """Per-class peak coordinates and their response values."""

    def __init__(self, coords, values, fallback, shape):
        self.coords = [np.asarray(c, dtype=np.intp).reshape(-1, 2)
                       for c in coords]
        self.values = [np.asarray(v, dtype=np.float64) for v in values]
        self.fallback = [bool(f) for f in fallback]
        self.shape = tuple(shape)

    @property
    def num_classes(self):
        return len(self.coords)

    def count(self, cls):
        """Return ``N^c``, the number of peaks of class ``cls``."""
        return len(self.coords[cls])

    def for_class(self, cls):
        return [Peak(cls, int(r), int(c), float(v), self.fallback[cls])
                for (r, c), v in zip(self.coords[cls], self.values[cls])]

    def strongest(self, cls):
        """Return the class's highest peak (first one on ties)."""
        peaks = self.for_class(cls)
        if not peaks:
            return None
        return max(peaks, key=lambda p: p.value)

    def __iter__(self):
        for cls in range(self.num_classes):
            for peak in self.for_class(cls):
                yield peak

    def __len__(self):
        return sum(self.count(c) for c in range(self.num_classes))


def window_maxima(plane, radius):
    """Boolean map of locations that equal their clipped window maximum."""
    size = 2 * radius + 1
    local = ndimage.maximum_filter(plane, size=size, mode='constant',
                                   cval=-np.inf)
    return plane >= local


def plateau_representatives(candidates):
    """Return the smallest row-major coordinate of every connected group."""
    labels, count = ndimage.label(candidates, structure=np.ones((3, 3)))
    if count == 0:
        return np.empty((0, 2), dtype=np.intp)
    flat = labels.ravel()
    positions = np.flatnonzero(flat)
    _, first = np.unique(flat[positions], return_index=True)
    chosen = np.sort(positions[first])
    return np.stack(np.unravel_index(chosen, candidates.shape), axis=1)


def find_peaks(M, cfg=None):
    """Locate the peaks of every class response map in ``M``.

    A constant map has no structure to find; it yields a single pseudo-peak
    at ``(0, 0)`` flagged as a fallback, or no peak at all when
    ``cfg.fallback`` is off.
    """
    cfg = cfg or StimulationConfig()
    if M.ndim != 3:
        raise ShapeError('expected class response maps (C, H, W), got {}'
                         .format(M.shape))
    coords, values, fallback = [], [], []
    for plane in M:
        if plane.max() == plane.min():
            if cfg.fallback:
                coords.append([(0, 0)])
                values.append([plane[0, 0]])
            else:
                coords.append(np.empty((0, 2), dtype=np.intp))
                values.append([])
            fallback.append(cfg.fallback)
            continue
        found = plateau_representatives(window_maxima(plane, cfg.radius))
        coords.append(found)
        values.append(plane[found[:, 0], found[:, 1]])
        fallback.append(False)
    return PeakList(coords, values, fallback, M.shape)
