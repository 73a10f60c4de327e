# -*- coding: utf-8 -*-
"""
Instance segmentation by proposal retrieval.

For every class whose confidence clears the cutoff, each peak is walked
down to a peak response map, the whole gallery is scored against it and
the best proposal becomes an instance prediction. Greedy class-wise mask
NMS then removes duplicates, e.g. from two peaks on one object.
"""
import logging

import numpy as np

from peakseg.errors import ShapeError
from peakseg.evaluation.instances import mask_iou
from peakseg.nn.network import network_forward
from peakseg.nn.upsample import upsample_plane
from peakseg.relevance import peak_response_map
from peakseg.retrieval.scoring import ProposalGallery, RetrievalParams
from peakseg.retrieval.scoring import background_mask
from peakseg.stimulation.peaks import StimulationConfig, find_peaks
from peakseg.stimulation.pooling import stimulate_forward

log = logging.getLogger(__name__)


class InstancePrediction(object):

    """One predicted instance: a class, a confidence and a retrieved mask."""

    def __init__(self, cls, confidence, mask, retrieval_score=None,
                 proposal_id=None, peak=None, image_id=None):
        mask = np.asarray(mask, dtype=bool)
        if not mask.any():
            raise ShapeError('prediction mask is empty')
        if cls < 0:
            raise ShapeError('class id must be non-negative, got {}'.format(
                cls))
        self.cls = int(cls)
        self.confidence = float(confidence)
        self.mask = mask
        self.retrieval_score = retrieval_score
        self.proposal_id = proposal_id
        self.peak = peak
        self.image_id = image_id

    def __repr__(self):
        return ('InstancePrediction(class={}, confidence={:.4f}, '
                'proposal={!r})'.format(self.cls, self.confidence,
                                        self.proposal_id))


class PeakMap(object):

    """A peak of a predicted class with everything needed to score it."""

    def __init__(self, peak, prm, background):
        self.peak = peak
        self.prm = prm
        self.background = background


def collect_peak_maps(net, image, stim_cfg=None, params=None):
    """Forward ``image`` and walk every peak of every predicted class.

    :returns: a list of :class:`PeakMap`, class by class, peaks in
        row-major order.
    """
    stim_cfg = stim_cfg or StimulationConfig()
    params = params or RetrievalParams()
    trace, M = network_forward(net, image)
    peaks = find_peaks(M, stim_cfg)
    scores = stimulate_forward(M, peaks)
    _, height, width = trace.inputs[0].shape
    peak_maps = []
    for cls, score in enumerate(scores):
        if not score > params.cutoff:
            continue
        plane = upsample_plane(M[cls], height, width)
        background = background_mask(plane, params.bias)
        for peak in peaks.for_class(cls):
            prm = peak_response_map(net, trace, peak)
            peak_maps.append(PeakMap(peak, prm, background))
    log.debug('%d peaks from %d predicted classes', len(peak_maps),
              int(np.sum(scores > params.cutoff)))
    return peak_maps


def retrieve(peak_maps, gallery, params=None, image_id=None):
    """Pick the best-scoring proposal for every peak, then apply NMS."""
    params = params or RetrievalParams()
    if not isinstance(gallery, ProposalGallery):
        gallery = ProposalGallery(gallery)
    predictions = []
    for item in peak_maps:
        scores = gallery.score(item.prm, item.background, params)
        best = int(np.argmax(scores))
        proposal = gallery[best]
        predictions.append(InstancePrediction(
            cls=item.peak.cls,
            confidence=item.peak.value,
            mask=proposal.mask,
            retrieval_score=float(scores[best]),
            proposal_id=proposal.id,
            peak=item.peak,
            image_id=image_id))
    return nms_masks(predictions, params.nms_iou)


def segment_instances(net, image, proposals, stim_cfg=None, params=None,
                      image_id=None):
    """Segment the instances of ``image`` by retrieving gallery masks."""
    gallery = (proposals if isinstance(proposals, ProposalGallery)
               else ProposalGallery(proposals))
    _, height, width = np.shape(image)
    if gallery.shape != (height, width):
        raise ShapeError('gallery resolution {} does not match image {}x{}'
                         .format(gallery.shape, height, width))
    peak_maps = collect_peak_maps(net, image, stim_cfg, params)
    return retrieve(peak_maps, gallery, params, image_id=image_id)


def nms_masks(predictions, iou_threshold=0.5):
    """Greedy class-wise mask non-maximum suppression.

    Predictions are visited by descending confidence (stable for ties); a
    prediction is dropped when its mask overlaps an already kept mask of
    the same class by more than ``iou_threshold``.
    """
    order = sorted(range(len(predictions)),
                   key=lambda i: -predictions[i].confidence)
    kept = []
    for index in order:
        candidate = predictions[index]
        if any(other.cls == candidate.cls and
               mask_iou(other.mask, candidate.mask) > iou_threshold
               for other in kept):
            continue
        kept.append(candidate)
    return kept
