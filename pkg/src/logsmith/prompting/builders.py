"""Prompt construction for the position, generation and level-refinement phases."""
from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from ..blocks import AnnotatedMethod, CodeBlock, block_role
from ..codemodel import CodeModel, LogStatement, MethodUnit
from ..dependence.callgraph import CallGraph
from ..dependence.slicing import BackwardSlice
from ..scope import CandidateSet, render_candidates
from .render import POSITION_TEMPLATES, fill, load_template, rule_text

PHASES = ("position", "generation", "level_refine")
SCHEMAS = {"position": "position_pairs", "generation": "log_line", "level_refine": "keep_or_adjust"}
INSERT_MARKER = "// >>> LOG POSITION <<<"
CONTEXT_LIMITED = "(context limited: no dependency slice could be computed for this position)"


@dataclass(frozen=True)
class PromptBundle:
    phase: str
    block_kind: str | None
    system_text: str
    user_text: str
    expected_schema: str

    def __post_init__(self):
        if self.phase not in PHASES:
            raise ValueError(f"unknown phase {self.phase!r}")
        if not self.user_text.strip():
            raise ValueError("user_text must not be empty")
        if self.phase == "position" and self.block_kind is None:
            raise ValueError("position prompts need a block kind")


@dataclass(frozen=True)
class SliceMethod:
    method: str
    relation: str  # target | caller | callee
    hop: int


@dataclass(frozen=True)
class InterprocContext:
    members: tuple[SliceMethod, ...]
    code_slice: str  # neighbour bodies with relation headers (target shown separately)
    log_slice: tuple[tuple[str, int, str], ...]  # (method id, line, statement text)

    def render_logs(self) -> str:
        if not self.log_slice:
            return "(none)\n"
        return "".join(f"{m}:{line}  {text}\n" for m, line, text in self.log_slice)


def numbered_lines(method: MethodUnit, mark_after: int | None = None) -> str:
    width = len(str(method.body_span[1]))
    out = []
    for offset, text in enumerate(method.lines):
        number = method.body_span[0] + offset
        out.append(f"{str(number).rjust(width)} | {text.rstrip(chr(13) + chr(10))}\n")
        if mark_after is not None and number == mark_after:
            indent = text[: len(text) - len(text.lstrip())]
            out.append(f"{' ' * width} | {indent}{INSERT_MARKER}\n")
    return "".join(out)


def _method_logs(method: MethodUnit) -> list[tuple[str, int, str]]:
    return [(method.id, s.line, s.text) for s in sorted(method.statements, key=lambda s: s.line)
            if s.log is not None]


def build_interproc_context(model: CodeModel, method: MethodUnit, seed: int, graph: CallGraph,
                            k_per_direction: int = 3, hops: int = 2) -> InterprocContext:
    """Sample up to ``k_per_direction`` callers and callees at each hop level.

    Sampling is seeded by (seed, method, direction, hop), so a method's context
    never depends on which other methods are processed.
    """
    chosen: dict[str, list[SliceMethod]] = {"caller": [], "callee": []}
    for direction in ("caller", "callee"):
        for hop, ids in graph.neighbors(method.id, hops, direction).items():
            rng = random.Random(f"{seed}:{method.id}:{direction}:{hop}")
            picked = sorted(rng.sample(ids, min(k_per_direction, len(ids))))
            chosen[direction].extend(SliceMethod(m, direction, hop) for m in picked)
    callers = sorted(chosen["caller"], key=lambda s: (-s.hop, s.method))
    callees = sorted(chosen["callee"], key=lambda s: (s.hop, s.method))
    members = tuple(callers + [SliceMethod(method.id, "target", 0)] + callees)
    parts = []
    logs: list[tuple[str, int, str]] = []
    for member in members:
        m = model.methods[member.method]
        logs.extend(_method_logs(m))
        if member.relation == "target":
            continue
        parts.append(f"// {member.relation} (hop {member.hop}): {m.id}\n{''.join(m.lines)}")
        if not parts[-1].endswith("\n"):
            parts[-1] += "\n"
    code = "".join(parts) if parts else "(no in-project callers or callees)\n"
    return InterprocContext(members, code, tuple(logs))


def system_text(template_dir: str | Path | None = None) -> str:
    return load_template("system.txt", template_dir).strip()


def build_position_prompt(annotated: AnnotatedMethod, block_kind: str, ctx: InterprocContext,
                          method: MethodUnit, template_dir: str | Path | None = None) -> PromptBundle:
    if not annotated:
        raise ValueError(f"method has no {block_kind} blocks to annotate")
    template = load_template(POSITION_TEMPLATES[block_kind], template_dir)
    user = fill(template, {
        "method_id": method.id,
        "annotated_method": annotated.numbered(),
        "code_slice": ctx.code_slice,
        "log_slice": ctx.render_logs(),
    })
    return PromptBundle("position", block_kind, system_text(template_dir), user,
                        SCHEMAS["position"])


def render_slice(model: CodeModel, sl: BackwardSlice | None, limit: int = 60) -> str:
    if sl is None or sl.degenerate:
        return CONTEXT_LIMITED + "\n"
    out = []
    for hop, method_id, line in sl.ordered()[:limit]:
        m = model.methods[method_id]
        if m.body_span[0] <= line <= m.body_span[1]:
            code = m.source_line(line).strip()
        else:
            code = ""
        label = "entry" if hop == 0 else f"hop {hop}"
        out.append(f"[{label}] {method_id}:{line}  {code}\n")
    return "".join(out)


def build_generation_prompt(model: CodeModel, method: MethodUnit, anchor_line: int,
                            block: CodeBlock, sl: BackwardSlice | None, cs: CandidateSet,
                            ctx: InterprocContext,
                            template_dir: str | Path | None = None) -> PromptBundle:
    template = load_template("generation.txt", template_dir)
    user = fill(template, {
        "block_kind": block.kind,
        "block_marker": block.marker,
        "anchor_line": anchor_line,
        "insert_marker": INSERT_MARKER,
        "block_rule": rule_text(block.kind, template_dir),
        "method_id": method.id,
        "method_text": numbered_lines(method, anchor_line),
        "slice_lines": render_slice(model, sl),
        "candidates": render_candidates(cs),
        "code_slice": ctx.code_slice,
        "log_slice": ctx.render_logs(),
    })
    return PromptBundle("generation", block.kind, system_text(template_dir), user,
                        SCHEMAS["generation"])


def block_line_count(block: CodeBlock, line: int) -> int:
    span = block.sub_span_at(line) or block.span
    return span[1] - span[0] + 1


def fallback_explanation(log: LogStatement) -> str:
    where = {"Branch": "a conditional branch", "TryCatch": "exception handling code",
             "Loop": "a loop", "MethodDef": "the method body"}[log.block[0]]
    message = log.message.replace("{}", "<value>").strip() or "an event"
    return f"Reports \"{message}\" from {where}."


def build_level_refine_prompt(log: LogStatement, method: MethodUnit, block: CodeBlock,
                              template_dir: str | Path | None = None) -> PromptBundle:
    """Five factors in fixed order: message, method, explanation, block role, block size."""
    template = load_template("level_refine.txt", template_dir)
    variables = ", ".join(log.variables)
    message = f'"{log.message}"' + (f" with variables {variables}" if variables else "")
    user = fill(template, {
        "level": log.level.upper(),
        "message": message,
        "method_id": method.id,
        "method_text": numbered_lines(method),
        "explanation": log.explanation or fallback_explanation(log),
        "block_role": block_role(method, block, log.anchor_line),
        "block_lines": block_line_count(block, log.anchor_line),
    })
    return PromptBundle("level_refine", block.kind, system_text(template_dir), user,
                        SCHEMAS["level_refine"])
