"""Five-factor level refinement."""
from __future__ import annotations

from dataclasses import replace

from ..blocks import CodeBlock
from ..codemodel import LogStatement, MethodUnit
from ..prompting import MalformedResponse, build_level_refine_prompt, parse_refine_response


def refine_level(log: LogStatement, method: MethodUnit, block: CodeBlock, gateway,
                 template_dir=None, key: tuple = ()) -> tuple[LogStatement, list[str]]:
    """Ask whether the level fits; only ``level`` can change.

    A response that is neither ``KEEP`` nor ``ADJUST: <valid level>`` keeps
    the original level and yields a diagnostic.
    """
    bundle = build_level_refine_prompt(log, method, block, template_dir)
    text = gateway.complete(bundle, key)
    return apply_refine_response(log, text)


def apply_refine_response(log: LogStatement, text: str) -> tuple[LogStatement, list[str]]:
    try:
        level = parse_refine_response(text)
    except MalformedResponse as exc:
        return log, [f"refine: kept {log.level} ({exc})"]
    if level is None or level == log.level:
        return log, []
    return replace(log, level=level), [f"refine: {log.level} -> {level}"]
