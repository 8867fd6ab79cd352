"""Symmetric odd cycles from D(K_3) by directed Hajós operations."""

from .builder import (
    ConstructionReport,
    construct_odd_cycle,
    construct_power_cycle,
    double_order,
    hajos_bound,
)
from .digraph import Digraph, symmetric_cycle
from .hajos_ops import CyclicSpec, JoinSpec, cyclic_identification, hajos_join, identify
from .trace import HajosTrace, parse, replay, serialize, verify

__version__ = "0.1.0"
