"""Typed code blocks (Branch, TryCatch, Loop, MethodDef) and marker annotation."""
from __future__ import annotations

from dataclasses import dataclass

from .codemodel import LOOP_KINDS, MethodUnit

BLOCK_KINDS = ("Branch", "TryCatch", "Loop", "MethodDef")
MARKER_NAMES = {"Branch": "BRANCH", "TryCatch": "TRYCATCH", "Loop": "LOOP", "MethodDef": "METHODDEF"}
KIND_BY_MARKER = {v: k for k, v in MARKER_NAMES.items()}


@dataclass(frozen=True)
class CodeBlock:
    kind: str
    block_id: int
    span: tuple[int, int]
    sub_spans: tuple[tuple[int, int], ...] = ()
    sub_labels: tuple[str, ...] = ()
    stmt: int | None = None  # index of the heading statement; None for MethodDef

    @property
    def key(self) -> tuple[str, int]:
        return (self.kind, self.block_id)

    @property
    def marker(self) -> str:
        return f"{MARKER_NAMES[self.kind]}#{self.block_id}"

    def contains(self, line: int) -> bool:
        return self.span[0] <= line <= self.span[1]

    def sub_span_at(self, line: int) -> tuple[int, int] | None:
        """The innermost arm span holding ``line``, when the block has arms."""
        best = None
        for sub in self.sub_spans:
            # a line shared by two arms (`} else {`) belongs to the arm it opens
            if sub[0] <= line <= sub[1] and (best is None or
                                             (sub[1] - sub[0], -sub[0]) < (best[1] - best[0], -best[0])):
                best = sub
        return best

    def sub_label_at(self, line: int) -> str | None:
        sub = self.sub_span_at(line)
        return None if sub is None else self.sub_labels[self.sub_spans.index(sub)]

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "id": self.block_id,
            "span": list(self.span),
            "sub_spans": [{"label": lab, "span": list(sp)}
                          for lab, sp in zip(self.sub_labels, self.sub_spans)],
        }


def _branch_chain(method: MethodUnit, index: int) -> tuple[list[tuple[int, int]], list[str]]:
    spans, labels = [], []
    stmt = method.statements[index]
    while True:
        spans.append(stmt.arm_spans[0])
        labels.append("then" if not labels else "elseif")
        if len(stmt.arms) < 2:
            break
        if stmt.arm_labels[1] == "elseif":
            stmt = method.statements[stmt.arms[1][0]]
            continue
        spans.append(stmt.arm_spans[1])
        labels.append("else")
        break
    return spans, labels


def _is_elseif(method: MethodUnit, index: int) -> bool:
    stmt = method.statements[index]
    if stmt.parent is None:
        return False
    parent = method.statements[stmt.parent]
    return parent.kind == "if" and len(parent.arms) > 1 and parent.arm_labels[1] == "elseif" \
        and parent.arms[1] == (index,)


def extract_blocks(method: MethodUnit) -> list[CodeBlock]:
    """MethodDef first, then every other block in source order.

    A whole if / else-if / else chain is one Branch; a switch is also a Branch
    whose arms are its case groups.  Statements inside lambdas and anonymous
    classes are not part of the method's statement list, so they never form
    blocks of their own.
    """
    counters = {kind: 0 for kind in BLOCK_KINDS}
    out = [CodeBlock("MethodDef", 1, method.body_span, (method.body_span,), ("body",))]
    found: list[CodeBlock] = []
    for stmt in sorted(method.statements, key=lambda s: (s.span[0], s.index)):
        kind = None
        spans: list[tuple[int, int]] = []
        labels: list[str] = []
        if stmt.kind == "if" and not _is_elseif(method, stmt.index):
            kind = "Branch"
            spans, labels = _branch_chain(method, stmt.index)
        elif stmt.kind == "switch":
            kind = "Branch"
            spans, labels = list(stmt.arm_spans), list(stmt.arm_labels)
        elif stmt.kind in LOOP_KINDS:
            kind = "Loop"
            spans, labels = list(stmt.arm_spans), list(stmt.arm_labels)
        elif stmt.kind == "try":
            kind = "TryCatch"
            spans, labels = list(stmt.arm_spans), list(stmt.arm_labels)
        if kind is None:
            continue
        counters[kind] += 1
        found.append(CodeBlock(kind, counters[kind], stmt.span, tuple(spans), tuple(labels),
                               stmt.index))
    return out + found


def blocks_of_kind(blocks: list[CodeBlock], kind: str) -> list[CodeBlock]:
    return [b for b in blocks if b.kind == kind]


def innermost_block(blocks: list[CodeBlock], line: int) -> CodeBlock | None:
    best = None
    for block in blocks:
        if block.contains(line):
            if best is None or (block.span[1] - block.span[0], -block.span[0]) < \
                    (best.span[1] - best.span[0], -best.span[0]):
                best = block
    return best


def find_block(blocks: list[CodeBlock], key: tuple[str, int]) -> CodeBlock | None:
    return next((b for b in blocks if b.key == key), None)


@dataclass(frozen=True)
class AnnotatedMethod:
    """Method text with marker lines; ``line_numbers[i]`` is None for markers."""

    kind: str
    lines: tuple[str, ...]
    line_numbers: tuple[int | None, ...]

    @property
    def text(self) -> str:
        return "".join(self.lines)

    def __bool__(self) -> bool:
        return bool(self.lines)

    def numbered(self) -> str:
        """Render with original line numbers in a fixed-width gutter."""
        width = max((len(str(n)) for n in self.line_numbers if n is not None), default=1)
        out = []
        for line, number in zip(self.lines, self.line_numbers):
            gutter = str(number).rjust(width) if number is not None else " " * width
            out.append(f"{gutter} | {line.rstrip(chr(13) + chr(10))}\n")
        return "".join(out)

    def strip_markers(self) -> str:
        return "".join(line for line, n in zip(self.lines, self.line_numbers) if n is not None)


def _indent_of(line: str) -> str:
    return line[: len(line) - len(line.lstrip(" \t"))]


def annotate_method(method: MethodUnit, blocks: list[CodeBlock], kind: str) -> AnnotatedMethod:
    """Surround every block of ``kind`` with ``// KIND#id START`` / ``END`` lines."""
    chosen = [b for b in blocks if b.kind == kind]
    if not chosen:
        return AnnotatedMethod(kind, (), ())
    before: dict[int, list[CodeBlock]] = {}
    after: dict[int, list[CodeBlock]] = {}
    for block in chosen:
        before.setdefault(block.span[0], []).append(block)
        after.setdefault(block.span[1], []).append(block)
    first = method.body_span[0]
    newline = "\r\n" if method.lines and method.lines[0].endswith("\r\n") else "\n"
    lines: list[str] = []
    numbers: list[int | None] = []
    for offset, text in enumerate(method.lines):
        number = first + offset
        indent = _indent_of(text)
        # outer blocks open first and close last
        for block in sorted(before.get(number, ()), key=lambda b: -b.span[1]):
            lines.append(f"{indent}// {block.marker} START{newline}")
            numbers.append(None)
        lines.append(text if text.endswith(("\n", "\r")) else text + newline)
        numbers.append(number)
        for block in sorted(after.get(number, ()), key=lambda b: b.span[0], reverse=True):
            start_indent = _indent_of(method.source_line(block.span[0]))
            lines.append(f"{start_indent}// {block.marker} END{newline}")
            numbers.append(None)
    if method.lines and not method.lines[-1].endswith(("\n", "\r")):
        # keep the round trip exact for a file lacking a trailing newline
        last = max(i for i, n in enumerate(numbers) if n is not None)
        lines[last] = lines[last][: -len(newline)]
    return AnnotatedMethod(kind, tuple(lines), tuple(numbers))


def block_role(method: MethodUnit, block: CodeBlock, line: int) -> str:
    """One-phrase description of what the block containing ``line`` does."""
    label = block.sub_label_at(line)
    if block.kind == "MethodDef":
        return f"body of method {method.name}, executed on every call"
    stmt = method.statements[block.stmt] if block.stmt is not None else None
    header = stmt.text if stmt is not None else ""
    if block.kind == "TryCatch":
        roles = {"try": "try body protected by exception handlers",
                 "catch": "exception handler (catch arm) of a try statement",
                 "finally": "finally arm, runs whether or not an exception occurred"}
        return roles.get(label or "try", "try statement")
    if block.kind == "Loop":
        return f"loop body repeated per iteration of `{header}`"
    if stmt is not None and stmt.kind == "switch":
        return f"case arm of `{header}`"
    arm = {"then": "branch taken when the condition holds",
           "elseif": "alternative branch of an else-if chain",
           "else": "else branch, taken when no condition holds"}
    return f"{arm.get(label or 'then', 'conditional branch')} (`{header}`)"
