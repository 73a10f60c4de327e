# -*- coding: utf-8 -*-
"""On-disk formats: PGM images, weights, RLE masks and datasets."""
from peakseg.storage.dataset import load_dataset, save_dataset
from peakseg.storage.files import write_atomic
from peakseg.storage.proposals import decode_mask, encode_mask
from peakseg.storage.proposals import load_predictions, load_proposals
from peakseg.storage.proposals import save_predictions, save_proposals
from peakseg.storage.weights import load_weights, save_weights

__all__ = (
    'decode_mask', 'encode_mask', 'load_dataset', 'load_predictions',
    'load_proposals', 'load_weights', 'save_dataset', 'save_predictions',
    'save_proposals', 'save_weights', 'write_atomic',
)
