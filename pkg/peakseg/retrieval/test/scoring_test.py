# -*- coding: utf-8 -*-
import numpy as np
import pytest

from peakseg.errors import ConfigError, ShapeError
from peakseg.retrieval.baselines import rect_mask
from peakseg.retrieval.scoring import ProposalGallery, RetrievalParams
from peakseg.retrieval.scoring import SegmentProposal, background_mask
from peakseg.retrieval.scoring import score_proposal
from peakseg.test import factories


def uniform(shape):
    return np.full(shape, 1.0 / (shape[0] * shape[1]))


class TestScoreProposal(object):

    def test_instance_term(self):
        S = rect_mask((0, 0, 2, 2), (4, 4))
        params = RetrievalParams(alpha=1.0, beta=1.0, boundary_weight=0.0)
        score = score_proposal(uniform((4, 4)), S, np.zeros((4, 4), bool),
                               params)
        assert score == pytest.approx(0.25)

    def test_class_term_is_area_normalised(self):
        S = rect_mask((0, 0, 2, 2), (4, 4))
        params = RetrievalParams(alpha=1.0, beta=1.0, boundary_weight=0.0)
        score = score_proposal(uniform((4, 4)), S, np.ones((4, 4), bool),
                               params)
        assert score == pytest.approx(-0.75)

    def test_boundary_term(self):
        S = rect_mask((0, 0, 2, 2), (4, 4))
        params = RetrievalParams(alpha=0.0, beta=0.0, boundary_weight=1.0)
        score = score_proposal(uniform((4, 4)), S, np.zeros((4, 4), bool),
                               params)
        assert score == pytest.approx(0.5)

    def test_accepts_wrapped_inputs(self):
        S = SegmentProposal(rect_mask((0, 0, 2, 2), (4, 4)))
        Q = background_mask(np.zeros((4, 4)))
        score = score_proposal(uniform((4, 4)), S, Q, RetrievalParams())
        assert np.isfinite(score)

    def test_rejects_resolution_mismatch(self):
        with pytest.raises(ShapeError):
            score_proposal(uniform((4, 4)), np.ones((3, 4), bool),
                           np.zeros((4, 4), bool), RetrievalParams())


class TestBackgroundMask(object):

    def test_below_the_mean(self):
        Q = background_mask(np.array([[0.0, 1.0, 2.0, 3.0]]))
        assert Q.Q.tolist() == [[True, True, False, False]]

    def test_bias_raises_the_threshold(self):
        Q = background_mask(np.array([[0.0, 1.0, 2.0, 3.0]]), bias=1.0)
        assert Q.Q.tolist() == [[True, True, True, False]]

    def test_constant_plane_has_no_background(self):
        assert not background_mask(np.full((3, 3), 2.0)).Q.any()


class TestRetrievalParams(object):

    @pytest.mark.parametrize('kwargs', [
        {'alpha': -1.0},
        {'beta': -0.5},
        {'boundary_weight': -2.0},
        {'nms_iou': 0.0},
        {'nms_iou': 1.5},
    ])
    def test_rejects_invalid_values(self, kwargs):
        with pytest.raises(ConfigError):
            RetrievalParams(**kwargs)

    def test_replace_keeps_other_values(self):
        params = RetrievalParams(alpha=2.0, beta=3.0, bias=0.5)
        changed = params.replace(beta=0.0)
        assert (changed.alpha, changed.beta, changed.bias) == (2.0, 0.0, 0.5)
        assert params.beta == 3.0


class TestProposals(object):

    def test_empty_proposal_is_rejected(self):
        with pytest.raises(ShapeError):
            SegmentProposal(np.zeros((3, 3)))

    def test_empty_gallery_is_rejected(self):
        with pytest.raises(ShapeError):
            ProposalGallery([])

    def test_mixed_resolutions_are_rejected(self):
        with pytest.raises(ShapeError):
            ProposalGallery([factories.Proposal(),
                             factories.Proposal(shape=(9, 9))])

    def test_gallery_scores_match_single_scores(self, rng):
        proposals = [SegmentProposal(rng.random((8, 8)) < p, id=n)
                     for n, p in enumerate((0.2, 0.5, 0.8))]
        gallery = ProposalGallery(proposals)
        R = rng.random((8, 8))
        R /= R.sum()
        Q = background_mask(rng.normal(size=(8, 8)))
        params = RetrievalParams(alpha=1.5, beta=0.7, boundary_weight=0.3)
        scores = gallery.score(R, Q, params)
        expected = [score_proposal(R, p, Q, params) for p in proposals]
        np.testing.assert_allclose(scores, expected, rtol=1e-12)

    def test_gallery_rejects_mismatched_maps(self):
        gallery = ProposalGallery([factories.Proposal()])
        with pytest.raises(ShapeError):
            gallery.score(uniform((4, 4)), np.zeros((4, 4), bool),
                          RetrievalParams())


class TestScoreProperties(object):

    @pytest.mark.parametrize('seed', range(20))
    def test_never_decreases_with_alpha(self, seed):
        rng = np.random.default_rng(seed)
        R = rng.random((8, 8))
        R /= R.sum()
        S = rng.random((8, 8)) < 0.5
        S[4, 4] = True
        Q = background_mask(rng.normal(size=(8, 8)))
        scores = [score_proposal(R, S, Q, RetrievalParams(alpha=alpha))
                  for alpha in (0.0, 0.1, 0.5, 1.0, 2.0, 10.0)]
        assert all(b >= a for a, b in zip(scores, scores[1:]))

    @pytest.mark.parametrize('beta', [0.1, 1.0, 5.0])
    def test_background_pixels_lower_the_score(self, beta):
        S = rect_mask((2, 2, 5, 5), (10, 10))
        grown = rect_mask((2, 2, 5, 6), (10, 10))
        R = np.zeros((10, 10))
        R[3, 3] = 1.0
        Q = ~S
        params = RetrievalParams(alpha=1.0, beta=beta)
        before = score_proposal(R, S, Q, params)
        after = score_proposal(R, grown, Q, params)
        assert before == pytest.approx(1.0)
        assert after == pytest.approx(1.0 - beta * 3.0 / 12.0)
        assert after < before
