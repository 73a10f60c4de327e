# -*- coding: utf-8 -*-
"""Peak finding, the peak stimulation layer and toy training."""
from peakseg.stimulation.loss import multilabel_loss
from peakseg.stimulation.peaks import Peak, PeakList, StimulationConfig
from peakseg.stimulation.peaks import find_peaks
from peakseg.stimulation.pooling import class_scores, gap_backward
from peakseg.stimulation.pooling import gap_forward, stimulate_backward
from peakseg.stimulation.pooling import stimulate_forward
from peakseg.stimulation.train import compute_gradients, train_toy
from peakseg.stimulation.train import training_pairs

__all__ = (
    'Peak', 'PeakList', 'StimulationConfig', 'class_scores',
    'compute_gradients', 'find_peaks', 'gap_backward', 'gap_forward',
    'multilabel_loss', 'stimulate_backward', 'stimulate_forward',
    'train_toy', 'training_pairs',
)
