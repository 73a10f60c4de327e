# -*- coding: utf-8 -*-
import numpy as np

from peakseg.errors import ShapeError


class EvalSample(object):

    """Ground truth of one image.

    :param boxes: ``(class, (top, left, bottom, right))`` pairs; bottom and
        right are exclusive.
    :param masks: ``(class, mask)`` pairs, one per instance, aligned with
        ``boxes``.
    :param labels: 0/1 vector of image-level labels.
    """

    def __init__(self, boxes, masks, labels, image_id=None, shape=None):
        self.masks = [(int(c), np.asarray(m, dtype=bool)) for c, m in masks]
        if shape is None and self.masks:
            shape = self.masks[0][1].shape
        self.shape = tuple(shape) if shape is not None else None
        self.boxes = [(int(c), tuple(int(v) for v in box)) for c, box in boxes]
        self.labels = np.asarray(labels, dtype=np.int64)
        self.image_id = image_id
        self._check()

    def _check(self):
        for cls, mask in self.masks:
            if not mask.any():
                raise ShapeError('ground truth mask of class {} is empty'
                                 .format(cls))
            if mask.shape != self.shape:
                raise ShapeError('ground truth mask shape {} != {}'.format(
                    mask.shape, self.shape))
        for cls, (top, left, bottom, right) in self.boxes:
            if self.shape is not None and not (
                    0 <= top < bottom <= self.shape[0] and
                    0 <= left < right <= self.shape[1]):
                raise ShapeError('box {} outside image {}'.format(
                    (top, left, bottom, right), self.shape))

    @property
    def num_instances(self):
        return len(self.masks)

    def masks_of(self, cls):
        return [mask for c, mask in self.masks if c == cls]

    def boxes_of(self, cls):
        return [box for c, box in self.boxes if c == cls]

    def classes(self):
        return sorted({c for c, _ in self.masks} | {c for c, _ in self.boxes})


def contains(box, point):
    top, left, bottom, right = box
    row, col = point
    return top <= row < bottom and left <= col < right
