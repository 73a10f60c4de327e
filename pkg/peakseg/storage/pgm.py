# -*- coding: utf-8 -*-
"""
Binary 8-bit PGM (``P5``) images.

Multi-channel tensors are stored with their channels tiled vertically, so
a ``(3, H, W)`` image becomes a ``3H x W`` grey image. Masks are stored as
0/255.
"""
import re

import numpy as np

from peakseg.errors import ConsistencyError, FormatError, TruncatedError
from peakseg.storage.files import read_bytes, write_atomic

MAXVAL = 255

_HEADER = re.compile(br'P5\s+(?:#[^\n]*\s+)*(\d+)\s+(?:#[^\n]*\s+)*(\d+)'
                     br'\s+(?:#[^\n]*\s+)*(\d+)\s')


def encode_pgm(pixels):
    pixels = np.asarray(pixels)
    if pixels.ndim != 2 or pixels.dtype != np.uint8:
        raise FormatError('PGM pixels must be a 2-D uint8 array, got {} {}'
                          .format(pixels.dtype, pixels.shape))
    height, width = pixels.shape
    header = 'P5\n{} {}\n{}\n'.format(width, height, MAXVAL).encode('ascii')
    return header + np.ascontiguousarray(pixels).tobytes()


def decode_pgm(data):
    match = _HEADER.match(data)
    if match is None:
        raise FormatError('not a binary PGM file')
    width, height, maxval = (int(g) for g in match.groups())
    if maxval != MAXVAL:
        raise FormatError('only 8-bit PGM is supported, maxval={}'.format(
            maxval))
    body = data[match.end():]
    if len(body) < width * height:
        raise TruncatedError('PGM body holds {} of {} pixels'.format(
            len(body), width * height))
    if len(body) > width * height:
        raise ConsistencyError('PGM body has {} trailing bytes'.format(
            len(body) - width * height))
    return np.frombuffer(body, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(path, pixels):
    write_atomic(path, encode_pgm(pixels))


def read_pgm(path):
    return decode_pgm(read_bytes(path))


def to_bytes(values):
    """Map values in [0, 1] to 0..255."""
    values = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    return np.rint(values * MAXVAL).astype(np.uint8)


def image_to_pixels(image):
    """Tile a ``(C, H, W)`` tensor with values in [0, 1] vertically."""
    image = np.asarray(image)
    channels, height, width = image.shape
    return to_bytes(image.reshape(channels * height, width))


def pixels_to_image(pixels, channels):
    rows, width = pixels.shape
    if rows % channels:
        raise ConsistencyError('{} rows do not tile {} channels'.format(
            rows, channels))
    image = pixels.astype(np.float64) / MAXVAL
    return image.reshape(channels, rows // channels, width)


def write_image(path, image):
    write_pgm(path, image_to_pixels(image))


def read_image(path, channels):
    return pixels_to_image(read_pgm(path), channels)


def write_mask(path, mask):
    write_pgm(path, np.where(np.asarray(mask, dtype=bool), MAXVAL, 0)
              .astype(np.uint8))


def read_mask(path):
    return read_pgm(path) > MAXVAL // 2


def write_heatmap(path, values):
    """Write a non-negative map scaled so that its maximum is white."""
    values = np.asarray(values, dtype=np.float64)
    peak = values.max() if values.size else 0.0
    if peak > 0:
        values = values / peak
    write_pgm(path, to_bytes(values))
