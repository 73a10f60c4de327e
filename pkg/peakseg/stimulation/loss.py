# -*- coding: utf-8 -*-
import numpy as np
from scipy.special import expit

from peakseg.errors import ShapeError


def multilabel_loss(scores, labels):
    """One-vs-all logistic loss averaged over classes.

    With ``y = 2 * labels - 1`` the loss is ``mean(log(1 + exp(-y * s)))``.

    :returns: ``(loss, grad)`` where ``grad`` is d(loss)/d(scores).
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ShapeError('{} scores but {} labels'.format(
            scores.shape, labels.shape))
    if not np.all((labels == 0) | (labels == 1)):
        raise ValueError('labels must be 0 or 1')
    signs = 2.0 * labels - 1.0
    margins = signs * scores
    loss = np.logaddexp(0.0, -margins).mean()
    grad = -signs * expit(-margins) / float(len(scores))
    return float(loss), grad
