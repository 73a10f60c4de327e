# -*- coding: utf-8 -*-
import numpy as np
import pytest

from peakseg.errors import ShapeError
from peakseg.evaluation.sample import EvalSample, contains
from peakseg.retrieval.baselines import rect_mask
from peakseg.test import factories


def test_accessors():
    sample = factories.Sample(instances=[(0, (0, 0, 2, 2)),
                                         (1, (3, 3, 5, 5)),
                                         (0, (5, 5, 8, 8))])
    assert sample.num_instances == 3
    assert len(sample.masks_of(0)) == 2
    assert sample.boxes_of(1) == [(3, 3, 5, 5)]
    assert sample.classes() == [0, 1]
    assert sample.labels.tolist() == [1, 1]


def test_shape_defaults_to_the_masks():
    sample = EvalSample([], [(0, rect_mask((0, 0, 1, 1), (3, 5)))], [1])
    assert sample.shape == (3, 5)


def test_rejects_empty_masks():
    with pytest.raises(ShapeError):
        EvalSample([], [(0, np.zeros((4, 4)))], [1])


def test_rejects_masks_of_another_shape():
    with pytest.raises(ShapeError):
        EvalSample([], [(0, np.ones((4, 4)))], [1], shape=(4, 5))


@pytest.mark.parametrize('box', [(0, 0, 0, 2), (2, 0, 1, 3), (0, 0, 9, 2),
                                 (-1, 0, 2, 2)])
def test_rejects_boxes_outside_the_image(box):
    with pytest.raises(ShapeError):
        EvalSample([(0, box)], [], [1], shape=(8, 8))


def test_contains_excludes_bottom_and_right():
    box = (1, 1, 3, 3)
    assert contains(box, (1, 1))
    assert contains(box, (2, 2))
    assert not contains(box, (3, 2))
    assert not contains(box, (2, 3))
