"""Prompt families and response parsers.

Templates are plain text files under ``templates/`` with ``{{name}}`` slots;
an override directory with files of the same names can replace any of them.

Slots by template:

* ``position_*.txt``: method_id, annotated_method, code_slice, log_slice
* ``generation.txt``: block_kind, block_marker, anchor_line, insert_marker,
  block_rule, method_id, method_text, slice_lines, candidates, code_slice,
  log_slice
* ``level_refine.txt``: level, message, method_id, method_text, explanation,
  block_role, block_lines
* ``system.txt``: none
"""
from .builders import (CONTEXT_LIMITED, INSERT_MARKER, InterprocContext, PromptBundle,
                       SliceMethod, block_line_count, build_generation_prompt,
                       build_interproc_context, build_level_refine_prompt, build_position_prompt,
                       fallback_explanation, numbered_lines, render_slice)
from .parsers import (MalformedResponse, parse_log_response, parse_position_response,
                      parse_refine_response, render_log_line, split_top_level)
from .render import POSITION_TEMPLATES, TemplateError, fill, load_template, placeholders, rule_text

__all__ = [
    "CONTEXT_LIMITED", "INSERT_MARKER", "InterprocContext", "PromptBundle", "SliceMethod",
    "block_line_count", "build_generation_prompt", "build_interproc_context",
    "build_level_refine_prompt", "build_position_prompt", "fallback_explanation",
    "numbered_lines", "render_slice", "MalformedResponse", "parse_log_response",
    "parse_position_response", "parse_refine_response", "render_log_line", "split_top_level",
    "POSITION_TEMPLATES", "TemplateError", "fill", "load_template", "placeholders", "rule_text",
]
