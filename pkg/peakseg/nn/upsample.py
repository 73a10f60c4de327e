# -*- coding: utf-8 -*-
import numpy as np

from peakseg.errors import ShapeError


def _interpolation_matrix(size, out_size):
    """Return the ``(out_size, size)`` align-corners interpolation weights."""
    weights = np.zeros((out_size, size))
    if size == 1 or out_size == 1:
        weights[:, 0] = 1.0
        return weights
    positions = np.arange(out_size) * (size - 1) / float(out_size - 1)
    lower = np.minimum(np.floor(positions).astype(int), size - 2)
    frac = positions - lower
    rows = np.arange(out_size)
    weights[rows, lower] = 1.0 - frac
    weights[rows, lower + 1] += frac
    return weights


def bilinear_upsample(input, out_h, out_w):
    """Resize every channel of ``input`` to ``out_h`` x ``out_w``.

    Uses align-corners interpolation, so the four corner pixels of every
    channel are preserved exactly and each output value is a convex
    combination of input values.
    """
    channels, height, width = input.shape
    if out_h < 1 or out_w < 1:
        raise ShapeError('upsample target must be non-empty, got {}x{}'
                         .format(out_h, out_w))
    if out_h < height or out_w < width:
        raise ShapeError('upsample target {}x{} smaller than input {}x{}'
                         .format(out_h, out_w, height, width))
    rows = _interpolation_matrix(height, out_h)
    cols = _interpolation_matrix(width, out_w)
    out = np.einsum('ph,chw,qw->cpq', rows, input, cols)
    return np.ascontiguousarray(out)


def upsample_plane(plane, out_h, out_w):
    """Resize a single 2-D map."""
    return bilinear_upsample(plane[np.newaxis], out_h, out_w)[0]
