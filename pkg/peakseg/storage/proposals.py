# -*- coding: utf-8 -*-
"""
JSON-lines files of run-length encoded masks.

A mask is flattened in row-major order and stored as alternating run
lengths of 0s and 1s, always starting with a run of 0s (which may be
empty). Proposal records look like::

    {"image_id": "000003", "id": 0, "height": 64, "width": 64,
     "runs": [130, 12, 52, 12]}

Prediction records carry ``class``, ``confidence``, ``retrieval_score``,
``proposal_id`` and ``peak`` in addition to the mask.
"""
import collections
import json
import logging

import numpy as np
from jsonschema import ValidationError, validate

from peakseg.errors import RecordError
from peakseg.retrieval.scoring import SegmentProposal
from peakseg.retrieval.segment import InstancePrediction
from peakseg.storage.files import write_atomic

log = logging.getLogger(__name__)

_image_id = {'type': ['string', 'integer']}

mask_properties = {
    'image_id': _image_id,
    'height': {'type': 'integer', 'minimum': 1},
    'width': {'type': 'integer', 'minimum': 1},
    'runs': {'type': 'array', 'items': {'type': 'integer', 'minimum': 0},
             'minItems': 2},
}

proposal_schema = {
    'type': 'object',
    'properties': dict(mask_properties, id={'type': ['string', 'integer']}),
    'required': ['image_id', 'height', 'width', 'runs'],
}

prediction_schema = {
    'type': 'object',
    'properties': dict(
        mask_properties,
        confidence={'type': 'number'},
        retrieval_score={'type': ['number', 'null']},
        proposal_id={'type': ['string', 'integer', 'null']},
        peak={'oneOf': [
            {'type': 'null'},
            {'type': 'array', 'items': {'type': 'integer', 'minimum': 0},
             'minItems': 2, 'maxItems': 2},
        ]},
        **{'class': {'type': 'integer', 'minimum': 0}}),
    'required': ['image_id', 'class', 'confidence', 'height', 'width',
                 'runs'],
}


def encode_mask(mask):
    """Run-length encode a binary mask."""
    flat = np.asarray(mask, dtype=bool).ravel()
    if flat.size == 0:
        return [0]
    changes = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    bounds = np.concatenate(([0], changes, [flat.size]))
    runs = np.diff(bounds).tolist()
    if flat[0]:
        runs.insert(0, 0)
    return runs


def decode_mask(runs, height, width):
    """Decode runs into a ``(height, width)`` mask.

    :raises RecordError: when the runs don't cover exactly
        ``height * width`` pixels, a run other than the first is empty or
        the mask has no foreground pixel.
    """
    runs = np.asarray(runs, dtype=np.int64)
    if runs.ndim != 1 or len(runs) < 2:
        raise RecordError('a mask needs at least two runs')
    if np.any(runs < 0) or np.any(runs[1:] == 0):
        raise RecordError('only the leading run may be empty')
    if runs.sum() != height * width:
        raise RecordError('runs cover {} pixels, mask has {}x{}={}'.format(
            int(runs.sum()), height, width, height * width))
    values = np.arange(len(runs)) % 2 == 1
    mask = np.repeat(values, runs).reshape(height, width)
    if not mask.any():
        raise RecordError('mask has no foreground pixel')
    return mask


def _mask_record(image_id, mask):
    height, width = mask.shape
    return {'image_id': image_id, 'height': int(height), 'width': int(width),
            'runs': encode_mask(mask)}


def _dumps(records):
    return ''.join(json.dumps(r, sort_keys=True) + '\n' for r in records)


def _records(path, schema):
    """Yield ``(lineno, record)`` for every non-blank line of ``path``."""
    with open(path, 'r') as fp:
        for lineno, line in enumerate(fp, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                validate(record, schema)
            except ValueError as exc:
                raise RecordError('not JSON: {}'.format(exc), lineno)
            except ValidationError as exc:
                raise RecordError(exc.message, lineno)
            yield lineno, record


def _decode(record, lineno):
    try:
        return decode_mask(record['runs'], record['height'], record['width'])
    except RecordError as exc:
        raise RecordError(str(exc), lineno)


def save_proposals(path, galleries):
    """Write ``{image_id: [SegmentProposal, ...]}`` as JSON lines."""
    records = []
    for image_id, proposals in galleries.items():
        for index, proposal in enumerate(proposals):
            record = _mask_record(image_id, proposal.mask)
            record['id'] = proposal.id if proposal.id is not None else index
            records.append(record)
    write_atomic(path, _dumps(records))
    log.info('wrote %d proposals for %d images to %s', len(records),
             len(galleries), path)


def load_proposals(path):
    """Read a proposal file into ``{image_id: [SegmentProposal, ...]}``.

    Images keep the order in which they first appear.
    """
    galleries = collections.OrderedDict()
    for lineno, record in _records(path, proposal_schema):
        mask = _decode(record, lineno)
        galleries.setdefault(record['image_id'], []).append(
            SegmentProposal(mask, id=record.get('id')))
    return galleries


def _peak_coords(peak):
    if peak is None:
        return None
    if hasattr(peak, 'row'):
        return [int(peak.row), int(peak.col)]
    return [int(peak[0]), int(peak[1])]


def save_predictions(path, predictions):
    """Write ``{image_id: [InstancePrediction, ...]}`` as JSON lines."""
    records = []
    for image_id, preds in predictions.items():
        for prediction in preds:
            record = _mask_record(image_id, prediction.mask)
            peak = _peak_coords(prediction.peak)
            record.update({
                'class': prediction.cls,
                'confidence': prediction.confidence,
                'retrieval_score': prediction.retrieval_score,
                'proposal_id': prediction.proposal_id,
                'peak': peak,
            })
            records.append(record)
    write_atomic(path, _dumps(records))
    log.info('wrote %d predictions to %s', len(records), path)


def load_predictions(path):
    """Read a predictions file into ``{image_id: [InstancePrediction]}``.

    Stored peaks come back as ``(row, col)`` tuples.
    """
    predictions = collections.OrderedDict()
    for lineno, record in _records(path, prediction_schema):
        mask = _decode(record, lineno)
        peak = record.get('peak')
        predictions.setdefault(record['image_id'], []).append(
            InstancePrediction(record['class'], record['confidence'], mask,
                               retrieval_score=record.get('retrieval_score'),
                               proposal_id=record.get('proposal_id'),
                               peak=tuple(peak) if peak else None,
                               image_id=record['image_id']))
    return predictions
