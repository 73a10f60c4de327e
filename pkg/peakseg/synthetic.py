# -*- coding: utf-8 -*-
"""
Synthetic blob images for desk-scale experiments.

Each image holds a few axis-aligned ellipses and rectangles on a noisy
dark background. A class is recognisable by its colour alone: the
base-3 digits of ``class + 1`` pick one of three intensity levels per
channel. Blob edges are softened with a Gaussian, while the recorded
ground truth masks are the hard shapes. Pixel values are multiples of
1/255 so images survive an 8-bit round trip unchanged.
"""
import logging

import numpy as np
from scipy import ndimage

from peakseg.errors import ConfigError, PackingError
from peakseg.evaluation.sample import EvalSample

log = logging.getLogger(__name__)

CHANNELS = 3
LEVELS = (0.15, 0.55, 0.95)
BACKGROUND = 0.15
NOISE = 0.04
MARGIN = 2
EDGE_SIGMA = 0.8
MIN_IMAGE_SIZE = 32
LAYOUT_RETRIES = 20
PLACEMENT_ATTEMPTS = 100


class SyntheticSample(EvalSample):

    """A generated image with its ground truth and the seed that made it."""

    def __init__(self, image, boxes, masks, labels, seed, image_id=None):
        image = np.asarray(image, dtype=np.float64)
        super(SyntheticSample, self).__init__(boxes, masks, labels,
                                              image_id=image_id,
                                              shape=image.shape[1:])
        self.image = image
        self.seed = int(seed)

    @property
    def num_classes(self):
        return len(self.labels)

    def __repr__(self):
        return 'SyntheticSample(id={!r}, instances={}, seed={})'.format(
            self.image_id, self.num_instances, self.seed)


def class_signature(cls):
    """Per-channel intensity of class ``cls``."""
    code = cls + 1
    digits = []
    for _ in range(CHANNELS):
        digits.append(code % 3)
        code //= 3
    return np.array([LEVELS[d] for d in digits])


def max_classes():
    return 3 ** CHANNELS - 1


def side_limits(image_size, num_blobs):
    low = max(6, image_size // 8)
    cells = int(np.ceil(np.sqrt(num_blobs)))
    high = max(low, min(image_size // 2, image_size // cells - MARGIN))
    return low, high


def _overlaps(box, boxes):
    top, left, bottom, right = box
    for other in boxes:
        if not (bottom + MARGIN <= other[0] or other[2] + MARGIN <= top or
                right + MARGIN <= other[1] or other[3] + MARGIN <= left):
            return True
    return False


def _scan(size, side, boxes):
    """First free ``side`` square in row-major order, or None."""
    for top in range(size - side + 1):
        for left in range(size - side + 1):
            box = (top, left, top + side, left + side)
            if not _overlaps(box, boxes):
                return box
    return None


def _place(rng, size, num_blobs):
    low, high = side_limits(size, num_blobs)
    boxes = []
    for _ in range(num_blobs):
        box = None
        for _ in range(PLACEMENT_ATTEMPTS):
            h, w = (int(v) for v in rng.integers(low, high + 1, size=2))
            top = int(rng.integers(0, size - h + 1))
            left = int(rng.integers(0, size - w + 1))
            candidate = (top, left, top + h, left + w)
            if not _overlaps(candidate, boxes):
                box = candidate
                break
        if box is None:
            box = _scan(size, low, boxes)
        if box is None:
            return None
        boxes.append(box)
    return boxes


def check_capacity(size, num_blobs):
    """Reject blob counts no layout of minimum-side squares can hold."""
    low, _ = side_limits(size, num_blobs)
    capacity = (size // (low + MARGIN)) ** 2
    if num_blobs > capacity:
        raise PackingError('{} blobs of side >= {} do not fit a {}x{} image'
                           .format(num_blobs, low, size, size))


def layout(rng, size, num_blobs):
    """Place ``num_blobs`` boxes at least ``MARGIN`` pixels apart."""
    check_capacity(size, num_blobs)
    for _ in range(LAYOUT_RETRIES):
        boxes = _place(rng, size, num_blobs)
        if boxes is not None:
            return boxes
    raise PackingError('could not place {} blobs in a {}x{} image'.format(
        num_blobs, size, size))


def blob_mask(box, size, ellipse):
    top, left, bottom, right = box
    mask = np.zeros((size, size), dtype=bool)
    if not ellipse:
        mask[top:bottom, left:right] = True
        return mask
    rows, cols = np.mgrid[top:bottom, left:right]
    cy = (top + bottom - 1) / 2.0
    cx = (left + right - 1) / 2.0
    ry = (bottom - top) / 2.0
    rx = (right - left) / 2.0
    mask[top:bottom, left:right] = (
        ((rows - cy) / ry) ** 2 + ((cols - cx) / rx) ** 2 <= 1.0)
    return mask


def tight_box(mask):
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    return (int(rows[0]), int(cols[0]), int(rows[-1]) + 1, int(cols[-1]) + 1)


def render_sample(seed, image_size, num_classes, max_instances,
                  image_id=None):
    """Generate the single sample determined by ``seed``."""
    rng = np.random.default_rng(seed)
    num_blobs = int(rng.integers(1, max_instances + 1))
    boxes = layout(rng, image_size, num_blobs)
    image = BACKGROUND + rng.normal(0.0, NOISE,
                                    size=(CHANNELS, image_size, image_size))
    gt_boxes, gt_masks = [], []
    labels = np.zeros(num_classes, dtype=np.int64)
    for box in boxes:
        cls = int(rng.integers(num_classes))
        mask = blob_mask(box, image_size, ellipse=bool(rng.integers(2)))
        colour = class_signature(cls) + rng.normal(0.0, NOISE / 2,
                                                   size=CHANNELS)
        alpha = ndimage.gaussian_filter(mask.astype(np.float64), EDGE_SIGMA)
        image = image * (1.0 - alpha) + colour[:, None, None] * alpha
        gt_boxes.append((cls, tight_box(mask)))
        gt_masks.append((cls, mask))
        labels[cls] = 1
    image = np.rint(np.clip(image, 0.0, 1.0) * 255.0) / 255.0
    return SyntheticSample(image, gt_boxes, gt_masks, labels, seed,
                           image_id=image_id)


def sample_seeds(seed, count):
    """Derive one independent integer seed per sample from ``seed``."""
    states = np.random.SeedSequence(seed).generate_state(count)
    return [int(s) for s in states]


def gen_synthetic(seed, count, image_size=64, num_classes=3,
                  max_instances=4, start=0):
    """Generate ``count`` samples, deterministically per ``seed``.

    :param start: offset of the first sample id, so several splits drawn
        from one seed get distinct ids.
    :raises ConfigError: for images below 32 pixels, fewer than two
        classes or more classes than there are colour signatures.
    :raises PackingError: when ``max_instances`` blobs can't fit.
    """
    if image_size < MIN_IMAGE_SIZE:
        raise ConfigError('image_size must be >= {}, got {}'.format(
            MIN_IMAGE_SIZE, image_size))
    if not 2 <= num_classes <= max_classes():
        raise ConfigError('num_classes must lie in 2..{}, got {}'.format(
            max_classes(), num_classes))
    if max_instances < 1:
        raise ConfigError('max_instances must be >= 1')
    check_capacity(image_size, max_instances)
    seeds = sample_seeds(seed, start + count)[start:]
    samples = [render_sample(s, image_size, num_classes, max_instances,
                             image_id='{:06d}'.format(start + index))
               for index, s in enumerate(seeds)]
    log.info('generated %d synthetic %dx%d samples (seed %d)', count,
             image_size, image_size, seed)
    return samples
