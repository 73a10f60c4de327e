# -*- coding: utf-8 -*-
"""A small dense-tensor engine for fully convolutional classifiers."""
from peakseg.nn.backward import layer_backward, network_backward
from peakseg.nn.layers import AvgPool, Conv, MaxPool, ReLU
from peakseg.nn.layers import as_tensor, conv_forward, pool_forward
from peakseg.nn.layers import relu_forward
from peakseg.nn.network import ForwardTrace, NetworkSpec
from peakseg.nn.network import network_forward, toy_network
from peakseg.nn.upsample import bilinear_upsample, upsample_plane

__all__ = (
    'AvgPool', 'Conv', 'ForwardTrace', 'MaxPool', 'NetworkSpec', 'ReLU',
    'as_tensor', 'bilinear_upsample', 'conv_forward', 'layer_backward',
    'network_backward', 'network_forward', 'pool_forward', 'relu_forward',
    'toy_network', 'upsample_plane',
)
