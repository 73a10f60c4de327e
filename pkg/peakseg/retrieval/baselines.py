# -*- coding: utf-8 -*-
"""
Box-driven mask baselines and synthetic proposal galleries.

The box baselines turn object boxes into masks by filling the box, by
fitting the largest inscribed ellipse, or by retrieving the gallery
proposal that best overlaps the filled box.
"""
import logging

import numpy as np

from peakseg.errors import ShapeError
from peakseg.evaluation.instances import mask_iou
from peakseg.retrieval.morphology import dilate, erode
from peakseg.retrieval.scoring import ProposalGallery, SegmentProposal
from peakseg.retrieval.segment import InstancePrediction

log = logging.getLogger(__name__)

STRATEGIES = ('rect', 'ellipse', 'proposal')


def rect_mask(box, shape):
    top, left, bottom, right = box
    mask = np.zeros(shape, dtype=bool)
    mask[top:bottom, left:right] = True
    return mask


def ellipse_mask(box, shape):
    top, left, bottom, right = box
    rows, cols = np.mgrid[:shape[0], :shape[1]]
    cy = (top + bottom - 1) / 2.0
    cx = (left + right - 1) / 2.0
    ry = (bottom - top) / 2.0
    rx = (right - left) / 2.0
    mask = ((rows - cy) / ry) ** 2 + ((cols - cx) / rx) ** 2 <= 1.0
    return mask


def box_masks(boxes, shape, strategy='rect', gallery=None, image_id=None):
    """Turn ``(class, box)`` pairs into instance predictions.

    Every prediction gets confidence 1.0.
    """
    if strategy not in STRATEGIES:
        raise ValueError('unknown strategy {!r}, expected one of {}'.format(
            strategy, ', '.join(STRATEGIES)))
    if strategy == 'proposal' and gallery is None:
        raise ShapeError('the proposal strategy needs a gallery')
    if gallery is not None and not isinstance(gallery, ProposalGallery):
        gallery = ProposalGallery(gallery)
    predictions = []
    for cls, box in boxes:
        filled = rect_mask(box, shape)
        proposal_id = None
        if strategy == 'rect':
            mask = filled
        elif strategy == 'ellipse':
            mask = ellipse_mask(box, shape)
        else:
            overlaps = [mask_iou(filled, m) for m in gallery.masks]
            best = int(np.argmax(overlaps))
            mask = gallery.masks[best]
            proposal_id = gallery[best].id
        predictions.append(InstancePrediction(cls, 1.0, mask,
                                              proposal_id=proposal_id,
                                              image_id=image_id))
    return predictions


def shift_mask(mask, dy, dx):
    """Translate ``mask`` by ``(dy, dx)``; pixels leaving the image drop."""
    out = np.zeros_like(mask)
    height, width = mask.shape
    src = mask[max(0, -dy):height - max(0, dy),
               max(0, -dx):width - max(0, dx)]
    out[max(0, dy):max(0, dy) + src.shape[0],
        max(0, dx):max(0, dx) + src.shape[1]] = src
    return out


def _half(mask, rng):
    rows, cols = np.nonzero(mask)
    out = mask.copy()
    if rng.random() < 0.5:
        middle = (rows.min() + rows.max() + 1) // 2
        if rng.random() < 0.5:
            out[:middle] = False
        else:
            out[middle:] = False
    else:
        middle = (cols.min() + cols.max() + 1) // 2
        if rng.random() < 0.5:
            out[:, :middle] = False
        else:
            out[:, middle:] = False
    return out


def _random_rect(shape, rng):
    height, width = shape
    h = int(rng.integers(max(2, height // 8), max(3, height // 2)))
    w = int(rng.integers(max(2, width // 8), max(3, width // 2)))
    top = int(rng.integers(0, height - h + 1))
    left = int(rng.integers(0, width - w + 1))
    return rect_mask((top, left, top + h, left + w), shape)


def jitter_mask(masks, rng):
    """Derive one distractor from a randomly chosen mask in ``masks``."""
    mask = masks[int(rng.integers(len(masks)))]
    kind = int(rng.integers(6))
    if kind == 0:
        dy, dx = 0, 0
        while dy == 0 and dx == 0:
            dy, dx = (int(v) for v in rng.integers(-6, 7, size=2))
        return shift_mask(mask, dy, dx)
    if kind == 1:
        return dilate(mask, iterations=int(rng.integers(1, 4)))
    if kind == 2:
        return erode(mask, iterations=int(rng.integers(1, 3)))
    if kind == 3:
        return _half(mask, rng)
    if kind == 4:
        other = masks[int(rng.integers(len(masks)))]
        dy, dx = (int(v) for v in rng.integers(-4, 5, size=2))
        return mask | shift_mask(other, dy, dx)
    return _random_rect(mask.shape, rng)


def synthesize_gallery(masks, distractors=20, seed=0, max_attempts=50):
    """Build a gallery of the given masks plus jittered distractors.

    Distractors never duplicate a given mask or each other. The gallery
    is shuffled so position carries no information; ids are positions.
    """
    masks = [np.asarray(m, dtype=bool) for m in masks]
    if not masks:
        raise ShapeError('need at least one mask to jitter')
    rng = np.random.default_rng(seed)
    gallery = list(masks)
    seen = {m.tobytes() for m in gallery}
    for _ in range(distractors):
        for _ in range(max_attempts):
            candidate = jitter_mask(masks, rng)
            key = candidate.tobytes()
            if candidate.any() and key not in seen:
                break
        else:
            log.debug('no fresh distractor after %d attempts, using a '
                      'random rectangle', max_attempts)
            candidate = _random_rect(masks[0].shape, rng)
            key = candidate.tobytes()
            if key in seen:
                continue
        seen.add(key)
        gallery.append(candidate)
    order = rng.permutation(len(gallery))
    return [SegmentProposal(gallery[i], id=position)
            for position, i in enumerate(order)]
