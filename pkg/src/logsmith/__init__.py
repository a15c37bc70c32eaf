"""logsmith: block-aware log statement suggestion for Java code.

The package is organised as a library:

* :mod:`logsmith.codemodel` parses Java sources into methods and statements.
* :mod:`logsmith.blocks` finds Branch, TryCatch, Loop and MethodDef blocks.
* :mod:`logsmith.dependence` builds CFGs, dependence graphs and backward slices.
* :mod:`logsmith.scope` lists the variables and functions a log may use.
* :mod:`logsmith.prompting` and :mod:`logsmith.llm` talk to a language model.
* :mod:`logsmith.pipeline`, :mod:`logsmith.insertion` and
  :mod:`logsmith.refinement` place, adjust and prune logs.
* :mod:`logsmith.metrics` scores predictions against ground truth.
"""
__version__ = "0.1.0"

from .blocks import CodeBlock, annotate_method, extract_blocks
from .codemodel import CodeModel, LogStatement, MethodUnit, parse_project, parse_sources
from .dependence import backward_slice, build_cfg, post_dominators
from .groundtruth import extract_ground_truth_logs, restore_logs, strip_logs
from .insertion import insert_logs
from .llm import Gateway, LlmConfig
from .metrics import evaluate
from .pipeline import PipelineConfig, run_pipeline
from .refinement import deduplicate, message_equivalent, refine_level
from .scope import collect_candidates

__all__ = [
    "CodeBlock", "annotate_method", "extract_blocks", "CodeModel", "LogStatement", "MethodUnit",
    "parse_project", "parse_sources", "backward_slice", "build_cfg", "post_dominators",
    "extract_ground_truth_logs", "restore_logs", "strip_logs", "insert_logs", "Gateway",
    "LlmConfig", "evaluate", "PipelineConfig", "run_pipeline", "deduplicate",
    "message_equivalent", "refine_level", "collect_candidates",
]
