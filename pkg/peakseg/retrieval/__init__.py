# -*- coding: utf-8 -*-
"""Instance mask retrieval from a proposal gallery."""
from peakseg.retrieval.baselines import box_masks, synthesize_gallery
from peakseg.retrieval.morphology import morph_gradient
from peakseg.retrieval.scoring import BackgroundMask, ProposalGallery
from peakseg.retrieval.scoring import RetrievalParams, SegmentProposal
from peakseg.retrieval.scoring import background_mask, score_proposal
from peakseg.retrieval.segment import InstancePrediction, PeakMap
from peakseg.retrieval.segment import collect_peak_maps, nms_masks
from peakseg.retrieval.segment import retrieve, segment_instances

__all__ = (
    'BackgroundMask', 'InstancePrediction', 'PeakMap', 'ProposalGallery',
    'RetrievalParams', 'SegmentProposal', 'background_mask', 'box_masks',
    'collect_peak_maps', 'morph_gradient', 'nms_masks', 'retrieve',
    'score_proposal', 'segment_instances', 'synthesize_gallery',
)
