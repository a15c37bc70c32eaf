"""Control flow, dependence graphs, call graph and backward slicing."""
from .callgraph import CallEdge, CallGraph, ExternalCall, call_graph
from .cfg import EXIT, Cfg, build_cfg, control_dependencies, immediate_post_dominators, post_dominators
from .pdg import MethodDependence, PdgEdge, analyze_method, data_dependencies, reaching_definitions
from .slicing import (DEFAULT_HOP_CAP, BackwardSlice, SliceEntry, Slicer, backward_slice,
                      select_slice_entry, statement_for_line)

__all__ = [
    "CallEdge", "CallGraph", "ExternalCall", "call_graph", "EXIT", "Cfg", "build_cfg",
    "control_dependencies", "immediate_post_dominators", "post_dominators",
    "MethodDependence", "PdgEdge", "analyze_method", "data_dependencies",
    "reaching_definitions", "DEFAULT_HOP_CAP", "BackwardSlice", "SliceEntry", "Slicer",
    "backward_slice", "select_slice_entry", "statement_for_line",
]
