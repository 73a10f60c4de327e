# -*- coding: utf-8 -*-
import numpy as np
from scipy import ndimage

CROSS = ndimage.generate_binary_structure(2, 1)


def dilate(mask, iterations=1):
    return ndimage.binary_dilation(mask, structure=CROSS,
                                   iterations=iterations, border_value=0)


def erode(mask, iterations=1):
    # Pixels outside the image count as background, so border pixels erode.
    return ndimage.binary_erosion(mask, structure=CROSS,
                                  iterations=iterations, border_value=0)


def morph_gradient(S):
    """Return the one-pixel contour band ``dilate(S) - erode(S)``."""
    S = np.asarray(S, dtype=bool)
    if not S.any():
        return np.zeros_like(S)
    return dilate(S) & ~erode(S)
