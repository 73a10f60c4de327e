# -*- coding: utf-8 -*-
"""
Proposal scoring.

A proposal ``S`` is scored against the peak response map ``R`` of one
peak and the background mask ``Q`` of the peak's class:

    score = alpha * sum(R * S) + boundary_weight * sum(R * contour(S))
            - beta * sum(Q * S) / |S|

The instance and boundary terms are raw sums of a probability map and so
already bounded by 1; the class term is normalised by the proposal area.
"""
import numpy as np

from peakseg.errors import ConfigError, ShapeError
from peakseg.retrieval.morphology import morph_gradient


class RetrievalParams(object):

    """Weights of the three score terms and the retrieval thresholds.

    :param alpha: weight of the instance-aware term.
    :param beta: weight of the class-aware penalty.
    :param boundary_weight: weight of the boundary-aware term.
    :param nms_iou: masks of one class overlapping more than this are
        suppressed.
    :param bias: offset added to the map mean to threshold the background.
    :param cutoff: classes whose confidence is not above this are skipped.
    """

    def __init__(self, alpha=1.0, beta=1.0, nms_iou=0.5, bias=0.0,
                 cutoff=0.0, boundary_weight=1.0):
        if alpha < 0 or beta < 0 or boundary_weight < 0:
            raise ConfigError('score weights must be non-negative')
        if not 0 < nms_iou <= 1:
            raise ConfigError('nms_iou must lie in (0, 1], got {}'.format(
                nms_iou))
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.boundary_weight = float(boundary_weight)
        self.nms_iou = float(nms_iou)
        self.bias = float(bias)
        self.cutoff = float(cutoff)

    def replace(self, **changes):
        values = dict(alpha=self.alpha, beta=self.beta,
                      nms_iou=self.nms_iou, bias=self.bias,
                      cutoff=self.cutoff,
                      boundary_weight=self.boundary_weight)
        values.update(changes)
        return RetrievalParams(**values)

    def __repr__(self):
        return ('RetrievalParams(alpha={}, beta={}, boundary_weight={}, '
                'nms_iou={}, bias={}, cutoff={})'.format(
                    self.alpha, self.beta, self.boundary_weight,
                    self.nms_iou, self.bias, self.cutoff))


class SegmentProposal(object):

    """A candidate binary mask from the proposal gallery."""

    def __init__(self, mask, id=None):
        mask = np.asarray(mask, dtype=bool)
        if mask.ndim != 2:
            raise ShapeError('proposal mask must be 2-D, got {}'.format(
                mask.shape))
        if not mask.any():
            raise ShapeError('proposal {!r} has no foreground pixel'.format(id))
        self.mask = mask
        self.id = id

    @property
    def area(self):
        return int(self.mask.sum())

    def __repr__(self):
        return 'SegmentProposal(id={!r}, area={})'.format(self.id, self.area)


class BackgroundMask(object):
    def __init__(self, Q):
        self.Q = np.asarray(Q, dtype=bool)

    @property
    def shape(self):
        return self.Q.shape


def background_mask(plane, bias=0.0):
    """Mark pixels whose response lies strictly below ``mean + bias``."""
    plane = np.asarray(plane, dtype=np.float64)
    return BackgroundMask(plane < plane.mean() + bias)


def _as_array(value, attr):
    return getattr(value, attr, value)


def score_proposal(R, S, Q, params):
    """Score one proposal; see the module docstring for the formula."""
    R = _as_array(R, 'R')
    mask = _as_array(S, 'mask')
    Q = _as_array(Q, 'Q')
    if not (R.shape == mask.shape == Q.shape):
        raise ShapeError('resolution mismatch: R {}, S {}, Q {}'.format(
            R.shape, mask.shape, Q.shape))
    mask = np.asarray(mask, dtype=bool)
    contour = morph_gradient(mask)
    area = mask.sum()
    instance = R[mask].sum()
    boundary = R[contour].sum()
    background = Q[mask].sum() / float(area) if area else 0.0
    return float(params.alpha * instance
                 + params.boundary_weight * boundary
                 - params.beta * background)


class ProposalGallery(object):

    """A set of proposals stacked for vectorised scoring."""

    def __init__(self, proposals):
        proposals = list(proposals)
        if not proposals:
            raise ShapeError('the proposal gallery is empty')
        shapes = {p.mask.shape for p in proposals}
        if len(shapes) != 1:
            raise ShapeError('proposals disagree on resolution: {}'.format(
                sorted(shapes)))
        self.proposals = proposals
        self.masks = np.stack([p.mask for p in proposals])
        self.contours = np.stack([morph_gradient(p.mask) for p in proposals])
        self.areas = self.masks.reshape(len(proposals), -1).sum(axis=1)

    @property
    def shape(self):
        return self.masks.shape[1:]

    def __len__(self):
        return len(self.proposals)

    def __getitem__(self, index):
        return self.proposals[index]

    def score(self, R, Q, params):
        """Score every proposal at once; returns a float array."""
        R = _as_array(R, 'R')
        Q = _as_array(Q, 'Q')
        if R.shape != self.shape or Q.shape != self.shape:
            raise ShapeError('resolution mismatch: R {}, Q {}, gallery {}'
                             .format(R.shape, Q.shape, self.shape))
        flat_masks = self.masks.reshape(len(self), -1).astype(np.float64)
        flat_contours = self.contours.reshape(len(self), -1).astype(np.float64)
        r = R.ravel()
        instance = flat_masks.dot(r)
        boundary = flat_contours.dot(r)
        background = flat_masks.dot(Q.ravel().astype(np.float64)) / self.areas
        return (params.alpha * instance
                + params.boundary_weight * boundary
                - params.beta * background)
