# -*- coding: utf-8 -*-
import numpy as np
import pytest

from peakseg.evaluation.localization import LocalizationRecord, localize
from peakseg.evaluation.localization import point_localization_ap
from peakseg.nn.layers import Conv, MaxPool
from peakseg.nn.network import NetworkSpec
from peakseg.test import factories


def block_image():
    image = np.zeros((1, 8, 8))
    image[0, 2:5, 2:5] = 1.0
    return image


def test_localize_points_at_the_strongest_response():
    net = NetworkSpec([Conv(np.array([1.0, -1.0]).reshape(2, 1, 1, 1))])
    record = localize(net, block_image(), image_id='a')
    assert record.image_id == 'a'
    assert record.points[0].tolist() == [2, 2]
    assert record.scores[0] == 1.0


def test_localize_upsamples_to_the_image():
    net = NetworkSpec([MaxPool(2), Conv(np.ones((1, 1, 1, 1)))])
    image = np.zeros((1, 8, 8))
    image[0, 7, 7] = 1.0
    record = localize(net, image)
    assert record.points[0].tolist() == [7, 7]


class TestPointLocalizationAP(object):

    def samples(self):
        return {
            'a': factories.Sample(instances=[(0, (0, 0, 4, 4))],
                                  image_id='a'),
            'b': factories.Sample(instances=[(0, (4, 4, 8, 8))],
                                  image_id='b'),
        }

    def test_all_points_inside(self):
        records = [LocalizationRecord('a', [0.9, 0.1], [(1, 1), (0, 0)]),
                   LocalizationRecord('b', [0.8, 0.2], [(5, 5), (0, 0)])]
        report = point_localization_ap(records, self.samples())
        assert report.per_class == {0: 1.0}

    def test_confident_miss_ranks_first(self):
        records = [LocalizationRecord('a', [0.9, 0.1], [(6, 6), (0, 0)]),
                   LocalizationRecord('b', [0.8, 0.2], [(5, 5), (0, 0)])]
        report = point_localization_ap(records, self.samples())
        assert report.per_class[0] == pytest.approx(0.25)

    def test_negative_images_only_add_false_positives(self):
        samples = self.samples()
        samples['c'] = factories.Sample(instances=[(1, (0, 0, 2, 2))],
                                        image_id='c')
        records = [LocalizationRecord('c', [0.95, 0.9], [(0, 0), (1, 1)]),
                   LocalizationRecord('a', [0.9, 0.1], [(1, 1), (7, 7)]),
                   LocalizationRecord('b', [0.8, 0.2], [(5, 5), (7, 7)])]
        report = point_localization_ap(records, samples)
        assert report.per_class[0] == pytest.approx((0.5 + 2.0 / 3.0) / 2.0)
        assert report.per_class[1] == 1.0

    def test_records_of_unknown_images_are_misses(self):
        records = [LocalizationRecord('z', [0.95, 0.9], [(1, 1), (1, 1)]),
                   LocalizationRecord('a', [0.9, 0.1], [(1, 1), (0, 0)]),
                   LocalizationRecord('b', [0.8, 0.2], [(5, 5), (0, 0)])]
        report = point_localization_ap(records, self.samples())
        assert report.per_class == {
            0: pytest.approx((0.5 + 2.0 / 3.0) / 2.0)}
