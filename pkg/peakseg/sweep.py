# -*- coding: utf-8 -*-
"""Grid search of the retrieval score weights on a validation split."""
import collections
import logging

from peakseg.evaluation.instances import map_r
from peakseg.retrieval.scoring import ProposalGallery, RetrievalParams
from peakseg.retrieval.segment import collect_peak_maps, retrieve

log = logging.getLogger(__name__)

SELECTION_THRESHOLD = 0.5

GridPoint = collections.namedtuple('GridPoint', 'alpha beta score')


class SweepResult(object):

    """All evaluated grid points and the selected one.

    Ties go to the point evaluated first (alphas outer, betas inner).
    """

    def __init__(self, points):
        self.points = list(points)
        best = None
        for point in self.points:
            if best is None or point.score > best.score:
                best = point
        self.best = best

    def to_dict(self):
        return {
            'metric': 'map_r@{:g}'.format(SELECTION_THRESHOLD),
            'grid': [p._asdict() for p in self.points],
            'best': self.best._asdict() if self.best else None,
        }


def sweep_alpha_beta(net, samples, galleries, alphas, betas, stim_cfg=None,
                     params=None, peak_maps=None):
    """Evaluate mAP^r at IoU 0.5 for every ``(alpha, beta)`` pair.

    :param samples: mapping from image id to sample (with ``image``).
    :param galleries: mapping from image id to a proposal list or
        :class:`ProposalGallery`.
    :param peak_maps: optional precomputed ``{image_id: [PeakMap]}``; the
        peak response maps don't depend on the swept weights, so they are
        computed once.
    """
    params = params or RetrievalParams()
    galleries = {image_id: (g if isinstance(g, ProposalGallery)
                            else ProposalGallery(g))
                 for image_id, g in galleries.items()}
    if peak_maps is None:
        peak_maps = {image_id: collect_peak_maps(net, sample.image, stim_cfg,
                                                 params)
                     for image_id, sample in samples.items()}
    points = []
    for alpha in alphas:
        for beta in betas:
            candidate = params.replace(alpha=alpha, beta=beta)
            predictions = {
                image_id: retrieve(peak_maps[image_id], galleries[image_id],
                                   candidate, image_id=image_id)
                for image_id in samples
            }
            report = map_r(predictions, samples,
                           thresholds=(SELECTION_THRESHOLD,))
            score = report[SELECTION_THRESHOLD].aggregate
            log.info('alpha=%g beta=%g: map_r@%g %.4f', alpha, beta,
                     SELECTION_THRESHOLD, score)
            points.append(GridPoint(float(alpha), float(beta), score))
    return SweepResult(points)
