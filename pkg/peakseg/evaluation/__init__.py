# -*- coding: utf-8 -*-
"""Evaluation procedures and metric reports."""
from peakseg.evaluation.instances import abo, map_r, mask_iou
from peakseg.evaluation.localization import LocalizationRecord, localize
from peakseg.evaluation.localization import point_localization_ap
from peakseg.evaluation.quality import prm_quality, quality_breakdown
from peakseg.evaluation.quality import quality_entry
from peakseg.evaluation.reports import MetricReport, average_precision
from peakseg.evaluation.sample import EvalSample
from peakseg.evaluation.semantic import merge_semantic, miou
from peakseg.evaluation.semantic import semantic_labels

__all__ = (
    'EvalSample', 'LocalizationRecord', 'MetricReport', 'abo',
    'average_precision', 'localize', 'map_r', 'mask_iou', 'merge_semantic',
    'miou', 'point_localization_ap', 'prm_quality', 'quality_breakdown',
    'quality_entry', 'semantic_labels',
)
