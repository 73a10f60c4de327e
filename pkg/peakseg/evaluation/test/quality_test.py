# -*- coding: utf-8 -*-
import numpy as np
import pytest

from peakseg.evaluation.quality import QualityEntry, crowding_bucket
from peakseg.evaluation.quality import prm_quality, quality_breakdown
from peakseg.evaluation.quality import quality_entry, size_bucket
from peakseg.relevance import PeakResponseMap
from peakseg.stimulation.peaks import Peak
from peakseg.test import factories


def sample():
    return factories.Sample(instances=[(0, (0, 0, 8, 4)),
                                       (0, (0, 0, 8, 2)),
                                       (1, (0, 4, 8, 8))])


def uniform_map(cls=0):
    return PeakResponseMap(Peak(cls, 0, 0, 1.0, False),
                           np.full((8, 8), 1.0 / 64), 0.0)


def test_quality_is_the_best_share_inside_one_mask():
    assert prm_quality(uniform_map(), sample()) == pytest.approx(0.5)


def test_quality_accepts_plain_arrays():
    R = np.zeros((8, 8))
    R[0, 6] = 3.0
    assert prm_quality(R, sample(), cls=1) == 1.0
    assert prm_quality(R, sample(), cls=0) == 0.0


def test_massless_map_has_zero_quality():
    assert prm_quality(np.zeros((8, 8)), sample(), cls=0) == 0.0


def test_class_without_masks_has_zero_quality():
    assert prm_quality(np.ones((8, 8)), sample(), cls=2) == 0.0


def test_quality_entry_records_the_matched_area():
    entry = quality_entry(uniform_map(), sample())
    assert entry == QualityEntry(0, pytest.approx(0.5), 3, 0.5)


def test_quality_entry_without_match():
    entry = quality_entry(uniform_map(cls=3), sample())
    assert entry.quality == 0.0
    assert entry.relative_area is None


@pytest.mark.parametrize('count,bucket', [
    (0, None), (1, '1'), (2, '2-5'), (5, '2-5'), (6, '6+'), (40, '6+')])
def test_crowding_buckets(count, bucket):
    assert crowding_bucket(count) == bucket


@pytest.mark.parametrize('area,bucket', [
    (0.01, 'small'), (0.05, 'medium'), (0.2, 'medium'), (0.5, 'large')])
def test_size_buckets(area, bucket):
    assert size_bucket(area) == bucket


def test_breakdown():
    entries = [QualityEntry(0, 0.9, 1, 0.3),
               QualityEntry(0, 0.3, 3, 0.01),
               QualityEntry(1, 0.6, 3, None)]
    reports = quality_breakdown(entries)
    assert reports['prm_quality'].per_class == {0: pytest.approx(0.6),
                                                1: 0.6}
    assert reports['prm_hit_rate'].per_class == {0: 0.5, 1: 1.0}
    assert reports['prm_quality_by_crowding'].per_class == {
        '1': 0.9, '2-5': pytest.approx(0.45)}
    assert reports['prm_quality_by_size'].per_class == {
        'large': 0.9, 'small': 0.3}


def test_breakdown_of_nothing():
    reports = quality_breakdown([])
    assert all(r.aggregate == 0.0 for r in reports.values())


@pytest.mark.parametrize('scale', [1e-6, 0.5, 3.0, 1e6])
def test_quality_ignores_the_scale_of_the_map(rng, scale):
    for cls in (0, 1):
        R = rng.random((8, 8))
        assert prm_quality(scale * R, sample(), cls=cls) == pytest.approx(
            prm_quality(R, sample(), cls=cls), rel=1e-12)
