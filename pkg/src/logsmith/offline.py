"""A deterministic stand-in for the language model.

:class:`HeuristicResponder` answers all three prompt families with simple
rules read off the code model.  It makes the pipeline runnable without
network access and is what the bundled mock response sets were recorded
from.  It is not meant to be a good logger.
"""
from __future__ import annotations

import re

from .blocks import KIND_BY_MARKER, CodeBlock, blocks_of_kind, extract_blocks, find_block
from .codemodel import LEVEL_RANK, CodeModel, MethodUnit
from .llm import CallableBackend
from .prompting.builders import PromptBundle

_METHOD = re.compile(r"^Target method \((.+?)\):", re.MULTILINE)
_POSITION = re.compile(r"\(([A-Z]+)#(\d+)\); the log goes right after line (\d+)")
_LEVEL = re.compile(r"^Current level: ([A-Z]+)", re.MULTILINE)
_MESSAGE = re.compile(r"^Factor 1\. Log message content:\n\"(.*?)\"", re.MULTILINE)
_FAILURE = re.compile(r"\b(fail\w*|error\w*|exception|invalid|cannot|unable)\b", re.IGNORECASE)


def words(name: str) -> str:
    """``processData`` and ``process_data`` both become ``process data``."""
    spaced = re.sub(r"(?<=[a-z0-9])(?=[A-Z])", " ", name).replace("_", " ")
    return " ".join(spaced.lower().split())


class HeuristicResponder:
    def __init__(self, model: CodeModel):
        self.model = model

    def __call__(self, bundle: PromptBundle) -> str:
        if bundle.phase == "level_refine":
            return self.refine(bundle.user_text)
        match = _METHOD.search(bundle.user_text)
        method = self.model.methods.get(match.group(1)) if match else None
        if method is None:
            return "NONE"
        if bundle.phase == "position":
            return self.positions(method, bundle.block_kind)
        return self.generation(method, bundle.user_text)

    # ---------------------------------------------------------------- phases
    def positions(self, method: MethodUnit, kind: str) -> str:
        blocks = extract_blocks(method)
        pairs = []
        for block in blocks_of_kind(blocks, kind):
            if kind == "MethodDef":
                if len(blocks) == 1 and method.statements:
                    pairs.append((block.block_id, method.body_span[0]))
                continue
            for label, span in zip(block.sub_labels, block.sub_spans):
                if label in ("finally", "try"):
                    continue
                pairs.append((block.block_id, span[0]))
        if not pairs:
            return "NONE"
        return "\n".join(f"({b}, {line})" for b, line in pairs)

    def generation(self, method: MethodUnit, text: str) -> str:
        match = _POSITION.search(text)
        if match is None:
            return "I could not find the position."
        block = find_block(extract_blocks(method), (KIND_BY_MARKER[match.group(1)], int(match.group(2))))
        line = int(match.group(3))
        level, message, variables = self._compose(method, block, line)
        explanation = f"Records that {method.name} reached line {line}."
        holes = " ".join("{}" for _ in variables)
        rendered = f"{message} {holes}" if variables else message.rstrip(":")
        return (f"The position is in a {block.kind} block.\n"
                f"EXPLANATION: {explanation}\n"
                f'{level.upper()} | "{rendered}" | {", ".join(variables)}')

    def refine(self, text: str) -> str:
        level = _LEVEL.search(text)
        message = _MESSAGE.search(text)
        if level is None or message is None:
            return "KEEP"
        current = level.group(1).lower()
        if _FAILURE.search(message.group(1)) and LEVEL_RANK.get(current, 0) < LEVEL_RANK["warn"]:
            return "ADJUST: ERROR"
        return "KEEP"

    # --------------------------------------------------------------- helpers
    def _compose(self, method: MethodUnit, block: CodeBlock, line: int):
        action = words(method.name) or "run"
        if block.kind == "TryCatch":
            catch = next((s for s in method.statements
                          if s.kind == "catch" and s.span[0] <= line <= s.span[1]), None)
            var = catch.decls[0][0] if catch is not None and catch.decls else None
            return "debug", f"Failed to {action}:", (var,) if var else ()
        if block.kind == "Branch":
            label = block.sub_label_at(line) or "then"
            arm = block.sub_span_at(line) or block.span
            thrown = next((s.throw.message.text for s in method.statements
                           if s.kind == "throw" and s.throw is not None and s.throw.message is not None
                           and not s.throw.message.variables and arm[0] <= s.line <= arm[1]), None)
            if thrown:
                return "warn", thrown, ()  # echo the exception text, as models often do
            stmt = method.statements[block.stmt] if block.stmt is not None else None
            names = sorted(stmt.uses)[:1] if stmt is not None else []
            known = {p.name for p in method.params} | {n for s in method.statements for n, _ in s.decls}
            names = [n for n in names if n in known]
            text = "Unexpected state in" if label == "then" else "Falling back in"
            return ("warn" if label == "then" else "info"), f"{text} {action}:", tuple(names)
        if block.kind == "Loop":
            stmt = method.statements[block.stmt]
            names = sorted(n for n, _ in stmt.decls)[:1]
            return "debug", f"Iterating in {action}:", tuple(names)
        params = tuple(p.name for p in method.params[:1])
        return "info", f"Starting {action}:", params


def responder_backend(model: CodeModel):
    """A gateway backend that answers with :class:`HeuristicResponder`."""
    return CallableBackend(HeuristicResponder(model))
