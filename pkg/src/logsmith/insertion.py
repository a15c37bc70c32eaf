"""Insert log statements into Java source at anchor lines.

An anchor line ``L`` means "after line L".  When ``L`` starts a statement that
spans several lines the insertion moves past its syntactic end: after a
simple statement's last line, or after the line that opens the body of a
compound statement (so a log anchored on a multi-line ``if`` header lands at
the top of the ``then`` block).  The resulting gap must sit directly inside
a statement container, else the log is skipped with a diagnostic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from tree_sitter import Node

from .codemodel import (STATEMENT_TYPES, ClassUnit, CodeModel, Diagnostic, LogStatement,
                        parse_java)

_CONTAINERS = {"block", "constructor_body", "switch_block_statement_group"}
_BODY_FIELDS = ("body", "consequence")
FALLBACK_LOGGER = "LOG"
_JUMPS = {"break_statement", "continue_statement", "return_statement", "throw_statement",
          "yield_statement"}


def _line(node: Node) -> int:
    return node.start_point[0] + 1


def _end_line(node: Node) -> int:
    return node.end_point[0] + 1


def java_string(text: str) -> str:
    out = text.replace("\\", "\\\\").replace('"', '\\"')
    return out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")


def render_call(receiver: str, log: LogStatement) -> str:
    args = [f'"{java_string(log.message)}"'] + list(log.variables)
    return f"{receiver}.{log.level}({', '.join(args)});"


def _indent(line: str) -> str:
    return line[: len(line) - len(line.lstrip(" \t"))]


def _unit(lines: Sequence[str]) -> str:
    for line in lines:
        if line.startswith("\t"):
            return "\t"
    return "    "


def _statements(root: Node):
    stack = [root]
    while stack:
        node = stack.pop()
        if node.type in STATEMENT_TYPES and node.type != "block":
            yield node
        stack.extend(node.named_children)


def _body_of(stmt: Node) -> Node | None:
    for name in _BODY_FIELDS:
        body = stmt.child_by_field_name(name)
        if body is not None:
            return body
    if stmt.type == "switch_expression":
        return stmt.child_by_field_name("body")
    if stmt.type == "labeled_statement":
        inner = [c for c in stmt.named_children if c.type != "identifier"]
        return _body_of(inner[0]) if inner else None
    if stmt.type == "synchronized_statement":
        return next((c for c in stmt.named_children if c.type == "block"), None)
    return None


def termination_line(root: Node, anchor: int) -> int:
    """The line after which a log anchored at ``anchor`` is actually placed."""
    best: Node | None = None
    best_region = None
    for stmt in _statements(root):
        start, end = _line(stmt), _end_line(stmt)
        body = _body_of(stmt)
        if body is not None:
            if body.type in ("block", "switch_block"):
                region = (start, _line(body))
            else:
                region = (start, end)  # braceless body: skip the whole statement
        else:
            region = (start, end)
        if region[0] <= anchor <= region[1]:
            # the outermost statement whose own region holds the anchor wins,
            # so an anchor on `for (...) { x(); }` skips the whole loop line
            if best is None or (start, -end) < (_line(best), -_end_line(best)):
                best, best_region = stmt, region
    if best is None:
        return anchor
    return best_region[1]


def _starts_line(lines: Sequence[str], node: Node) -> bool:
    line = lines[_line(node) - 1]
    return not line.encode("utf-8")[: node.start_point[1]].strip()


def _deepest_container(root: Node, gap: int) -> Node | None:
    """Deepest node with start line <= gap < end line."""
    node = root
    while True:
        nxt = None
        for child in node.children:
            if _line(child) <= gap < _end_line(child):
                nxt = child
                break
        if nxt is None:
            return node
        node = nxt


@dataclass(frozen=True)
class Placement:
    gap: int  # insert after this original line
    indent: str


def plan(root: Node, lines: Sequence[str], anchor: int) -> Placement | str:
    """Where and with what indentation a log anchored at ``anchor`` goes."""
    if anchor < 1 or anchor > len(lines):
        return f"anchor line {anchor} outside file"
    gap = termination_line(root, anchor)
    container = _deepest_container(root, gap)
    group_tail = None
    if container is not None and container.type == "switch_block":
        group_tail = next((g for g in container.named_children
                           if g.type == "switch_block_statement_group" and _end_line(g) == gap), None)
        if group_tail is None:
            return f"line {gap} is inside a switch but outside any case group"
        container = group_tail
    if container is None or container.type not in _CONTAINERS:
        kind = container.type if container is not None else "file"
        return f"a statement cannot be inserted after line {gap} (inside {kind})"
    children = [c for c in container.named_children if c.type not in ("line_comment", "block_comment")]
    ending = [c for c in children if _end_line(c) == gap and _line(c) <= gap]
    if ending and ending[-1].type in _JUMPS and _starts_line(lines, ending[-1]):
        # a log after break/return/... would be unreachable: put it just before
        jump = ending[-1]
        return Placement(_line(jump) - 1, _indent(lines[_line(jump) - 1]))
    if ending and ending[-1].type != "switch_label":
        indent = _indent(lines[_line(ending[-1]) - 1])
    else:
        after = [c for c in children if _line(c) > gap and c.type != "switch_label"]
        if after:
            indent = _indent(lines[_line(after[0]) - 1])
        else:
            base_line = _line(ending[-1]) if ending else _line(container)
            indent = _indent(lines[base_line - 1]) + _unit(lines)
    return Placement(gap, indent)


@dataclass(frozen=True)
class PlacedLog:
    log: LogStatement
    line: int  # line of the inserted statement in the augmented file


@dataclass
class InsertionResult:
    files: dict[str, str]
    placed: list[PlacedLog]
    diagnostics: list[Diagnostic] = field(default_factory=list)
    inserted: dict[str, list[int]] = field(default_factory=dict)  # file -> inserted line numbers


def _class_for_line(model: CodeModel, file: str, line: int) -> ClassUnit | None:
    best = None
    for cls in model.classes.values():
        if cls.file == file and cls.span[0] <= line <= cls.span[1]:
            if best is None or cls.span[0] >= best.span[0]:
                best = cls
    return best


def _owner_class(model: CodeModel, log: LogStatement) -> ClassUnit | None:
    method = model.methods.get(log.method)
    if method is not None:
        return model.classes.get(method.enclosing_class)
    return _class_for_line(model, log.file, log.anchor_line)


def _logger_declaration(cls: ClassUnit, lines: Sequence[str], name: str) -> tuple[int, str]:
    """(gap line, text) for a fallback SLF4J logger field in ``cls``."""
    gap = cls.enum_body_line if cls.kind == "enum" and cls.enum_body_line else cls.body_line
    nxt = lines[gap] if gap < len(lines) else ""
    indent = _indent(nxt) if nxt.strip() and not nxt.strip().startswith("}") \
        else _indent(lines[cls.span[0] - 1]) + _unit(lines)
    mods = "static final" if cls.kind == "interface" else "private static final"
    text = (f"{indent}{mods} org.slf4j.Logger {name} = "
            f"org.slf4j.LoggerFactory.getLogger({cls.name}.class);")
    return gap, text


def _is_whole_line_decl_slot(root: Node, gap: int) -> bool:
    container = _deepest_container(root, gap)
    return container is not None and container.type in ("class_body", "interface_body",
                                                          "enum_body_declarations", "enum_body")


def insert_logs(model: CodeModel, logs: Sequence[LogStatement],
                files: Mapping[str, str] | None = None) -> InsertionResult:
    """Insert ``logs`` (anchor lines in ``model`` coordinates) into the sources.

    Per file, placements are computed on the original syntax tree and applied
    from the largest line to the smallest, so no anchor shifts before it is
    used.  Each log becomes exactly one new line.
    """
    texts = dict(files) if files is not None else {p: u.text for p, u in model.sources.items()}
    by_file: dict[str, list[tuple[int, LogStatement]]] = {}
    for seq, log in enumerate(logs):
        by_file.setdefault(log.file, []).append((seq, log))
    placed: list[PlacedLog] = []
    diagnostics: list[Diagnostic] = []
    inserted: dict[str, list[int]] = {}
    for path in sorted(by_file):
        if path not in texts:
            for _, log in by_file[path]:
                diagnostics.append(Diagnostic(path, "unknown file; log skipped", log.anchor_line))
            continue
        text = texts[path]
        data = text.encode("utf-8")
        root = parse_java(data).root_node
        lines = text.splitlines(keepends=True)
        newline = "\r\n" if "\r\n" in text else "\n"
        items: list[tuple[int, int, str, LogStatement | None]] = []  # (gap, seq, text, log)
        declared: dict[str, str] = {}
        for seq, log in by_file[path]:
            where = plan(root, lines, log.anchor_line)
            if isinstance(where, str):
                diagnostics.append(Diagnostic(path, f"log skipped: {where}", log.anchor_line))
                continue
            cls = _owner_class(model, log)
            receiver = cls.logger_field if cls is not None else None
            if receiver is None and cls is not None:
                receiver = declared.get(cls.id)
                if receiver is None:
                    taken = {f.name for f in cls.fields}
                    receiver = FALLBACK_LOGGER
                    while receiver in taken:
                        receiver += "_"
                    gap, decl = _logger_declaration(cls, lines, receiver)
                    if not _is_whole_line_decl_slot(root, gap):
                        diagnostics.append(Diagnostic(path, "no slot for a logger field; log skipped",
                                                      log.anchor_line))
                        continue
                    declared[cls.id] = receiver
                    items.append((gap, -1, decl, None))
            if receiver is None:
                diagnostics.append(Diagnostic(path, "no enclosing class; log skipped", log.anchor_line))
                continue
            items.append((where.gap, seq, where.indent + render_call(receiver, log), log))
        items.sort(key=lambda it: (it[0], it[1]))
        for gap, seq, line_text, _ in reversed(items):
            if gap > 0 and gap <= len(lines) and not lines[gap - 1].endswith(("\n", "\r")):
                lines[gap - 1] += newline
            lines.insert(gap, line_text + newline)
        final_lines = []
        for k, (gap, seq, _, log) in enumerate(items):
            final = gap + k + 1
            final_lines.append(final)
            if log is not None:
                placed.append(PlacedLog(log, final))
        texts[path] = "".join(lines)
        inserted[path] = final_lines
    placed.sort(key=lambda p: (p.log.file, p.line))
    return InsertionResult(texts, placed, diagnostics, inserted)


def remove_lines(files: Mapping[str, str], inserted: Mapping[str, Sequence[int]]) -> dict[str, str]:
    """Drop the given (1-indexed) lines; undoes :func:`insert_logs`."""
    out = dict(files)
    for path, numbers in inserted.items():
        drop = set(numbers)
        lines = out[path].splitlines(keepends=True)
        out[path] = "".join(l for k, l in enumerate(lines, 1) if k not in drop)
    return out
