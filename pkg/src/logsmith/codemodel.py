"""Immutable Java code model.

Java sources are parsed with tree-sitter once; everything downstream works on
the plain records defined here (statements with line spans, def/use sets,
call sites and recognised logger calls) and never touches the syntax tree.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import tree_sitter_java
from tree_sitter import Language, Node, Parser

JAVA = Language(tree_sitter_java.language())

LEVELS = ("trace", "debug", "info", "warn", "error")
LEVEL_RANK = {name: rank for rank, name in enumerate(LEVELS)}
_LOG_METHODS = {**{name: name for name in LEVELS}, "fatal": "error"}
LOGGER_NAME_RE = re.compile(r"(?i)^log(ger)?$")

PARAM_NODE = -2  # synthetic statement index: parameter definitions at the signature line

STATEMENT_TYPES = frozenset({
    "expression_statement", "local_variable_declaration", "return_statement",
    "throw_statement", "break_statement", "continue_statement", "yield_statement",
    "assert_statement", "if_statement", "while_statement", "for_statement",
    "enhanced_for_statement", "do_statement", "try_statement",
    "try_with_resources_statement", "switch_expression", "synchronized_statement",
    "labeled_statement", "local_class_declaration", "explicit_constructor_invocation",
    "block", "empty_statement",
})
COMPOUND_KINDS = frozenset({"if", "while", "for", "foreach", "do", "try", "catch",
                            "finally", "switch", "synchronized"})
LOOP_KINDS = frozenset({"while", "for", "foreach", "do"})

_SIMPLE_KINDS = {
    "expression_statement": "expression",
    "explicit_constructor_invocation": "expression",
    "local_variable_declaration": "declaration",
    "return_statement": "return",
    "throw_statement": "throw",
    "break_statement": "break",
    "continue_statement": "continue",
    "yield_statement": "yield",
    "assert_statement": "assert",
    "local_class_declaration": "local_class",
}
_FUNCTIONAL_TYPES = frozenset({
    "Runnable", "Callable", "Supplier", "Consumer", "BiConsumer", "Function",
    "BiFunction", "Predicate", "BiPredicate", "UnaryOperator", "BinaryOperator",
    "IntFunction", "IntPredicate", "IntSupplier", "IntConsumer", "ToIntFunction",
    "ToLongFunction", "ToDoubleFunction", "LongFunction", "LongSupplier",
    "DoubleFunction", "DoubleSupplier", "BooleanSupplier", "IntUnaryOperator",
    "IntBinaryOperator", "Comparator",
})


class NoSourcesError(ValueError):
    """Raised when a project yields no parseable Java source."""


def _squash(text: str) -> str:
    return " ".join(text.split())


def erase_generics(type_text: str) -> str:
    """``java.util.Map<K, List<V>>[]`` -> ``java.util.Map[]``."""
    out, depth = [], 0
    for ch in type_text:
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        elif depth == 0 and not ch.isspace():
            out.append(ch)
    return "".join(out)


def simple_type_name(type_text: str) -> str:
    """Erase generics, array brackets and package qualifiers."""
    base = erase_generics(type_text).replace("[]", "").replace("...", "")
    return base.rsplit(".", 1)[-1]


# ---------------------------------------------------------------- records


@dataclass(frozen=True)
class SourceUnit:
    path: str
    text: str
    line_starts: tuple[int, ...]  # entry i is the byte offset of line i + 1
    package: str = ""
    imports: tuple[str, ...] = ()
    static_imports: tuple[tuple[str, str], ...] = ()  # (qualified class, member or "*")

    @property
    def lines(self) -> list[str]:
        return self.text.splitlines(keepends=True)

    def line_offset(self, line: int) -> int:
        return self.line_starts[line - 1]

    @property
    def newline(self) -> str:
        return "\r\n" if "\r\n" in self.text else "\n"


@dataclass(frozen=True)
class Param:
    name: str
    type_text: str
    line: int


@dataclass(frozen=True)
class FieldDecl:
    name: str
    type_text: str
    line: int
    is_static: bool
    is_private: bool


@dataclass(frozen=True)
class CallSite:
    name: str
    receiver: str | None
    args: tuple[str, ...]
    arg_kinds: tuple[str, ...]
    arg_templates: tuple["MessageTemplate | None", ...]
    line: int
    is_constructor: bool = False


@dataclass(frozen=True)
class MessageTemplate:
    """A folded string expression: literal text with ``{}`` per non-literal operand."""

    text: str
    variables: tuple[str, ...]
    non_literal: bool = False

    @property
    def placeholders(self) -> int:
        return self.text.count("{}")


@dataclass(frozen=True)
class LogCall:
    receiver: str
    level: str
    message: str
    variables: tuple[str, ...]
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class ThrowInfo:
    exception_type: str | None
    message: MessageTemplate | None
    message_var: str | None  # set when the message argument is a bare identifier


@dataclass(frozen=True)
class Statement:
    index: int
    kind: str
    span: tuple[int, int]
    line: int  # the line the statement is identified by (condition line for do-while)
    text: str
    defs: frozenset[str] = frozenset()
    uses: frozenset[str] = frozenset()
    weak_defs: frozenset[str] = frozenset()  # local receivers of mutator-style calls
    calls: tuple[CallSite, ...] = ()
    parent: int | None = None
    arms: tuple[tuple[int, ...], ...] = ()
    arm_labels: tuple[str, ...] = ()
    arm_spans: tuple[tuple[int, int], ...] = ()
    decls: tuple[tuple[str, str], ...] = ()  # (name, declared type)
    lambda_decls: frozenset[str] = frozenset()
    values: tuple[tuple[str, MessageTemplate], ...] = ()  # string-valued assignments
    log: LogCall | None = None
    throw: ThrowInfo | None = None
    label: str | None = None
    in_block: bool = True  # parent syntax node is a block or switch group
    whole_lines: bool = True  # nothing else shares the statement's lines
    infinite: bool = False  # loop condition is the literal ``true`` or absent

    @property
    def is_compound(self) -> bool:
        return self.kind in COMPOUND_KINDS


@dataclass(frozen=True)
class MethodUnit:
    id: str
    name: str
    file: str
    enclosing_class: str
    params: tuple[Param, ...]
    return_type: str | None
    modifiers: frozenset[str]
    signature_line: int
    body_span: tuple[int, int]
    statements: tuple[Statement, ...]
    body: tuple[int, ...]
    lines: tuple[str, ...]  # source lines body_span[0]..body_span[1], with line endings
    has_body: bool = True
    is_constructor: bool = False
    summary: str = ""
    decl_text: str = ""
    local_types: tuple[tuple[str, str], ...] = ()

    @property
    def param_types(self) -> tuple[str, ...]:
        return tuple(p.type_text for p in self.params)

    @property
    def is_varargs(self) -> bool:
        return bool(self.params) and self.params[-1].type_text.endswith("...")

    def statement_at(self, line: int) -> Statement | None:
        for stmt in self.statements:
            if stmt.line == line:
                return stmt
        return None

    def source_line(self, line: int) -> str:
        return self.lines[line - self.body_span[0]]

    def types(self) -> dict[str, str]:
        return dict(self.local_types)


@dataclass(frozen=True)
class ClassUnit:
    id: str
    name: str
    kind: str  # class | interface | enum | record
    file: str
    span: tuple[int, int]
    body_line: int  # line of the opening brace of the body
    superclass: str | None
    interfaces: tuple[str, ...]
    fields: tuple[FieldDecl, ...]
    method_ids: tuple[str, ...]
    logger_field: str | None
    outer: str | None = None
    annotations: tuple[str, ...] = ()
    enum_body_line: int | None = None  # line of the ``;`` ending enum constants


@dataclass(frozen=True)
class Diagnostic:
    file: str
    message: str
    line: int | None = None

    def to_record(self) -> dict:
        return {"file": self.file, "line": self.line, "message": self.message}


@dataclass(frozen=True)
class CodeModel:
    sources: Mapping[str, SourceUnit]
    classes: Mapping[str, ClassUnit]
    methods: Mapping[str, MethodUnit]
    diagnostics: tuple[Diagnostic, ...] = ()

    def iter_methods(self) -> Iterator[MethodUnit]:
        return iter(self.methods.values())

    def class_of(self, method: MethodUnit) -> ClassUnit:
        return self.classes[method.enclosing_class]

    def classes_named(self, simple_name: str) -> list[ClassUnit]:
        return [c for c in self.classes.values() if c.name == simple_name]

    def resolve_class(self, type_text: str, context: ClassUnit | None = None) -> ClassUnit | None:
        """Best-effort lookup of a project class by (possibly qualified) type text."""
        erased = erase_generics(type_text).replace("[]", "").replace("...", "")
        if erased in self.classes:
            return self.classes[erased]
        candidates = self.classes_named(erased.rsplit(".", 1)[-1])
        if not candidates:
            return None
        if context is not None and len(candidates) > 1:
            pkg = context.id.rsplit(".", 1)[0] if "." in context.id else ""
            same = [c for c in candidates if c.id.startswith(pkg + ".")]
            if same:
                return same[0]
        return candidates[0]

    def methods_in(self, cls: ClassUnit) -> list[MethodUnit]:
        return [self.methods[m] for m in cls.method_ids]

    def method_at(self, file: str, line: int) -> MethodUnit | None:
        best = None
        for method in self.methods.values():
            if method.file == file and method.body_span[0] <= line <= method.body_span[1]:
                if best is None or method.body_span[0] >= best.body_span[0]:
                    best = method
        return best


# ------------------------------------------------------------- LogStatement


@dataclass(frozen=True)
class LogStatement:
    """One complete log statement: where it goes and what it prints."""

    file: str
    anchor_line: int
    level: str
    message: str
    variables: tuple[str, ...]
    block: tuple[str, int]
    method: str = ""
    line: int | None = None  # line of the statement itself, when it exists in a file
    flags: tuple[str, ...] = ()
    explanation: str = ""

    def __post_init__(self):
        if self.level not in LEVEL_RANK:
            raise ValueError(f"invalid level {self.level!r}")

    def to_record(self) -> dict:
        return {
            "file": self.file,
            "line": self.line if self.line is not None else self.anchor_line,
            "anchor_line": self.anchor_line,
            "level": self.level,
            "message": self.message,
            "variables": list(self.variables),
            "block": {"kind": self.block[0], "id": self.block[1]},
            "method": self.method,
            "flags": list(self.flags),
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "LogStatement":
        block = rec.get("block") or {"kind": "MethodDef", "id": 1}
        return cls(
            file=rec["file"],
            anchor_line=int(rec.get("anchor_line", rec["line"])),
            level=rec["level"],
            message=rec["message"],
            variables=tuple(rec.get("variables", ())),
            block=(block["kind"], int(block["id"])),
            method=rec.get("method", ""),
            line=int(rec["line"]),
            flags=tuple(rec.get("flags", ())),
        )


# ------------------------------------------------------------------ parsing


def _parser() -> Parser:
    return Parser(JAVA)


def parse_java(data: bytes):
    return _parser().parse(data)


def _line(node: Node) -> int:
    return node.start_point[0] + 1


def _end_line(node: Node) -> int:
    return node.end_point[0] + 1


class _Text:
    def __init__(self, data: bytes):
        self.data = data

    def __call__(self, node: Node | None) -> str:
        if node is None:
            return ""
        return self.data[node.start_byte:node.end_byte].decode("utf-8", "replace")


def _literal_kind(node: Node) -> str:
    t = node.type
    if t in ("string_literal", "text_block"):
        return "String"
    if t == "character_literal":
        return "char"
    if t in ("true", "false"):
        return "boolean"
    if t == "null_literal":
        return "null"
    if t.endswith("integer_literal"):
        return "int"
    if t.endswith("floating_point_literal"):
        return "double"
    return "expr"


def _literal_kind_refined(node: Node, text: str) -> str:
    kind = _literal_kind(node)
    if kind == "int" and text.rstrip().endswith(("L", "l")):
        return "long"
    if kind == "double" and text.rstrip().endswith(("f", "F")):
        return "float"
    if kind == "expr" and node.type == "identifier":
        return "name"
    return kind


def _string_content(node: Node, text: _Text) -> str:
    raw = text(node)
    if raw.startswith('"""'):
        return raw[3:-3]
    return raw[1:-1]


def fold_string_expression(node: Node, text: _Text) -> MessageTemplate:
    """Fold a string literal or ``+`` concatenation into a ``{}`` template."""
    if node.type == "parenthesized_expression" and node.named_child_count == 1:
        inner = fold_string_expression(node.named_children[0], text)
        if not inner.non_literal:
            return inner
    if node.type in ("string_literal", "text_block"):
        return MessageTemplate(_string_content(node, text), ())
    operands = _concat_operands(node)
    first_str = next((i for i, op in enumerate(operands)
                      if op.type in ("string_literal", "text_block")), None)
    if node.type != "binary_expression" or first_str is None:
        return MessageTemplate("{}", (_squash(text(node)),), non_literal=True)
    parts: list[str] = []
    variables: list[str] = []
    if first_str > 0:
        head = text.data[operands[0].start_byte:operands[first_str - 1].end_byte]
        parts.append("{}")
        variables.append(_squash(head.decode("utf-8", "replace")))
    for op in operands[first_str:]:
        if op.type in ("string_literal", "text_block"):
            parts.append(_string_content(op, text))
        else:
            parts.append("{}")
            variables.append(_squash(text(op)))
    return MessageTemplate("".join(parts), tuple(variables))


def _concat_operands(node: Node) -> list[Node]:
    if node.type == "binary_expression":
        op = node.child_by_field_name("operator")
        if op is not None and op.type == "+":
            return (_concat_operands(node.child_by_field_name("left"))
                    + _concat_operands(node.child_by_field_name("right")))
    return [node]


class _ExprFacts:
    __slots__ = ("defs", "uses", "calls", "lambdas")

    def __init__(self):
        self.defs: set[str] = set()
        self.uses: set[str] = set()
        self.calls: list[CallSite] = []
        self.lambdas: int = 0


class _Collector:
    """Collect defs, uses and call sites from expression subtrees."""

    def __init__(self, text: _Text):
        self.text = text

    def key(self, node: Node) -> str:
        return "".join(self.text(node).split())

    def collect(self, node: Node | None, facts: _ExprFacts) -> None:
        if node is None:
            return
        t = node.type
        if t == "identifier":
            facts.uses.add(self.text(node))
        elif t == "field_access":
            facts.uses.add(self.key(node))
            self.collect(node.child_by_field_name("object"), facts)
        elif t == "method_invocation":
            self._call(node, facts)
        elif t == "object_creation_expression":
            self._new(node, facts)
        elif t == "assignment_expression":
            self._assign(node, facts)
        elif t == "update_expression":
            for target in node.named_children:
                self._define(target, facts, also_use=True)
        elif t == "lambda_expression":
            self._lambda(node, facts)
        elif t == "method_reference":
            first = node.named_children[0] if node.named_children else None
            if first is not None and first.type in ("identifier", "field_access", "this"):
                self.collect(first, facts)
        elif t == "instanceof_expression":
            self.collect(node.child_by_field_name("left"), facts)
            name = node.child_by_field_name("name")
            if name is not None:
                facts.defs.add(self.text(name))
            for child in node.named_children:
                if child.type in ("record_pattern", "type_pattern"):
                    for ident in _descendants(child, "identifier"):
                        facts.defs.add(self.text(ident))
        elif t in ("class_literal", "marker_annotation", "annotation", "type_arguments",
                   "line_comment", "block_comment", "class_body", "this", "super"):
            return
        elif t.endswith("_type") or t in ("type_identifier", "scoped_type_identifier",
                                          "generic_type", "array_type"):
            return
        elif t == "variable_declarator":
            value = node.child_by_field_name("value")
            if value is not None:
                facts.defs.add(self.text(node.child_by_field_name("name")))
                self.collect(value, facts)
        else:
            for child in node.named_children:
                self.collect(child, facts)

    def _define(self, target: Node, facts: _ExprFacts, also_use: bool) -> None:
        if target.type == "identifier":
            name = self.text(target)
            facts.defs.add(name)
            if also_use:
                facts.uses.add(name)
        elif target.type in ("field_access", "array_access"):
            key = self.key(target)
            facts.defs.add(key)
            if also_use:
                facts.uses.add(key)
            for child in target.named_children:
                if target.type == "field_access" and child == target.child_by_field_name("field"):
                    continue
                self.collect(child, facts)
        else:
            self.collect(target, facts)

    def _assign(self, node: Node, facts: _ExprFacts) -> None:
        left = node.child_by_field_name("left")
        op = node.child_by_field_name("operator")
        compound = op is not None and self.text(op) != "="
        self._define(left, facts, also_use=compound)
        self.collect(node.child_by_field_name("right"), facts)

    def _args(self, node: Node | None) -> tuple[tuple[str, ...], tuple[str, ...], tuple]:
        if node is None:
            return (), (), ()
        texts, kinds, templates = [], [], []
        for arg in node.named_children:
            if arg.type in ("line_comment", "block_comment"):
                continue
            arg_text = self.text(arg)
            texts.append(_squash(arg_text))
            kinds.append(_literal_kind_refined(arg, arg_text))
            if arg.type in ("string_literal", "text_block", "binary_expression",
                            "parenthesized_expression"):
                folded = fold_string_expression(arg, self.text)
                templates.append(None if folded.non_literal else folded)
            else:
                templates.append(None)
        return tuple(texts), tuple(kinds), tuple(templates)

    def _call(self, node: Node, facts: _ExprFacts) -> None:
        obj = node.child_by_field_name("object")
        name = node.child_by_field_name("name")
        args = node.child_by_field_name("arguments")
        texts, kinds, templates = self._args(args)
        receiver = _squash(self.text(obj)) if obj is not None else None
        facts.calls.append(CallSite(self.text(name), receiver, texts, kinds, templates,
                                    _line(node)))
        if obj is not None:
            self.collect(obj, facts)
        if args is not None:
            for arg in args.named_children:
                self.collect(arg, facts)

    def _new(self, node: Node, facts: _ExprFacts) -> None:
        type_node = node.child_by_field_name("type")
        args = node.child_by_field_name("arguments")
        texts, kinds, templates = self._args(args)
        facts.calls.append(CallSite(simple_type_name(self.text(type_node)), None, texts, kinds,
                                    templates, _line(node), is_constructor=True))
        for child in node.named_children:
            if child.type == "class_body":
                continue
            if child == type_node:
                continue
            self.collect(child, facts)

    def _lambda(self, node: Node, facts: _ExprFacts) -> None:
        inner = _ExprFacts()
        params = node.child_by_field_name("parameters")
        bound: set[str] = set()
        if params is not None:
            for ident in _descendants(params, "identifier"):
                bound.add(self.text(ident))
        body = node.child_by_field_name("body")
        self.collect(body, inner)
        if body is not None:
            for decl in _descendants(body, "variable_declarator"):
                bound.add(self.text(decl.child_by_field_name("name")))
        facts.uses |= {u for u in inner.uses if u.split(".", 1)[0] not in bound}
        facts.calls.extend(inner.calls)
        facts.lambdas += 1


def _descendants(node: Node, type_name: str) -> Iterator[Node]:
    stack = list(reversed(node.named_children))
    while stack:
        cur = stack.pop()
        if cur.type == type_name:
            yield cur
        stack.extend(reversed(cur.named_children))


def _first_comment_line(node: Node, text: _Text) -> str:
    prev = node.prev_named_sibling
    if prev is None or prev.type not in ("block_comment", "line_comment"):
        return ""
    if _end_line(prev) < _line(node) - 1:
        return ""
    for raw in text(prev).splitlines():
        cleaned = raw.strip().lstrip("/").lstrip("*").strip()
        if cleaned.endswith("*/"):
            cleaned = cleaned[:-2].rstrip()
        if cleaned and not cleaned.startswith("@"):
            return cleaned
    return ""


class _MethodBuilder:
    """Turn a method body syntax tree into flat Statement records."""

    def __init__(self, text: _Text, known_types: dict[str, str], logger_fields: set[str]):
        self.text = text
        self.collector = _Collector(text)
        self.types = dict(known_types)  # name -> declared type (fields first, then locals)
        self.local_types: dict[str, str] = {}
        self.logger_fields = logger_fields
        self.params: set[str] = set()
        self.records: list[dict] = []

    # -- helpers
    def _new(self, node: Node, kind: str, parent: int | None, **extra) -> int:
        index = len(self.records)
        rec = dict(index=index, kind=kind, span=(_line(node), _end_line(node)),
                   line=_line(node), text="", defs=set(), uses=set(), weak_defs=set(), calls=[],
                   parent=parent, arms=[], arm_labels=[], arm_spans=[], decls=[],
                   lambda_decls=set(), values=[], log=None, throw=None, label=None,
                   in_block=True, whole_lines=self._whole_lines(node), infinite=False)
        rec.update(extra)
        self.records.append(rec)
        return index

    def _whole_lines(self, node: Node) -> bool:
        data = self.text.data
        start = data.rfind(b"\n", 0, node.start_byte) + 1
        end = data.find(b"\n", node.end_byte)
        end = len(data) if end < 0 else end
        before = data[start:node.start_byte].strip()
        after = data[node.end_byte:end].strip()
        return not before and (not after or after.startswith(b"//"))

    def _absorb(self, index: int, node: Node | None) -> None:
        if node is None:
            return
        facts = _ExprFacts()
        self.collector.collect(node, facts)
        rec = self.records[index]
        rec["defs"] |= facts.defs
        rec["uses"] |= facts.uses
        rec["calls"].extend(facts.calls)

    def _declare(self, index: int, name: str, type_text: str) -> None:
        self.records[index]["decls"].append((name, type_text))
        self.types[name] = type_text
        self.local_types[name] = type_text

    # -- statements
    def sequence(self, node: Node | None, parent: int | None, label: str | None = None) -> list[int]:
        """Statements of ``node`` flattened through nested blocks and labels."""
        if node is None:
            return []
        if node.type in ("block", "constructor_body"):
            out: list[int] = []
            for child in node.named_children:
                out.extend(self.sequence(child, parent))
            return out
        if node.type == "labeled_statement":
            inner = [c for c in node.named_children if c.type != "identifier"]
            name = next((self.text(c) for c in node.named_children if c.type == "identifier"), None)
            out = []
            for child in inner:
                out.extend(self.sequence(child, parent, label=name))
            return out
        if node.type not in STATEMENT_TYPES or node.type == "empty_statement":
            return []
        index = self.statement(node, parent)
        if label is not None and index is not None:
            self.records[index]["label"] = label
        return [] if index is None else [index]

    def _arm(self, node: Node | None, parent: int) -> tuple[list[int], tuple[int, int]]:
        if node is None:
            return [], (0, 0)
        ids = self.sequence(node, parent)
        if node.type != "block":
            for i in ids:
                self.records[i]["in_block"] = False
        return ids, (_line(node), _end_line(node))

    def statement(self, node: Node, parent: int | None) -> int | None:
        t = node.type
        text = self.text
        if t in _SIMPLE_KINDS:
            kind = _SIMPLE_KINDS[t]
            idx = self._new(node, kind, parent, text=_squash(text(node)))
            if t == "local_variable_declaration":
                type_text = text(node.child_by_field_name("type"))
                for decl in node.children_by_field_name("declarator"):
                    name = text(decl.child_by_field_name("name"))
                    dims = decl.child_by_field_name("dimensions")
                    self._declare(idx, name, type_text + (text(dims) if dims else ""))
                    value = decl.child_by_field_name("value")
                    if value is not None:
                        self.records[idx]["defs"].add(name)
                        self._absorb(idx, value)
                        if value.type in ("lambda_expression", "method_reference") or \
                                simple_type_name(type_text) in _FUNCTIONAL_TYPES:
                            self.records[idx]["lambda_decls"].add(name)
                        self._record_value(idx, name, value)
            elif t == "local_class_declaration":
                pass
            else:
                for child in node.named_children:
                    if t in ("break_statement", "continue_statement") and child.type == "identifier":
                        self.records[idx]["label"] = text(child)
                        continue
                    self._absorb(idx, child)
                if t == "expression_statement":
                    expr = node.named_children[0] if node.named_children else None
                    if expr is not None and expr.type == "assignment_expression":
                        left = expr.child_by_field_name("left")
                        if left.type == "identifier":
                            self._record_value(idx, text(left), expr.child_by_field_name("right"))
                    if expr is not None and expr.type == "method_invocation":
                        self.records[idx]["log"] = self._log_call(expr)
                        if self.records[idx]["log"] is not None:
                            self.records[idx]["kind"] = "log"
                        else:
                            obj = expr.child_by_field_name("object")
                            if obj is not None and obj.type == "identifier" and \
                                    (text(obj) in self.local_types or text(obj) in self.params):
                                self.records[idx]["weak_defs"].add(text(obj))
                if t == "throw_statement":
                    self.records[idx]["throw"] = self._throw_info(node)
            return idx
        if t == "if_statement":
            cond = node.child_by_field_name("condition")
            idx = self._new(node, "if", parent, text="if " + _squash(text(cond)))
            self._absorb(idx, cond)
            then_ids, then_span = self._arm(node.child_by_field_name("consequence"), idx)
            rec = self.records[idx]
            rec["arms"].append(then_ids)
            rec["arm_labels"].append("then")
            rec["arm_spans"].append(then_span)
            alt = node.child_by_field_name("alternative")
            if alt is not None:
                else_ids, else_span = self._arm(alt, idx)
                rec["arms"].append(else_ids)
                rec["arm_labels"].append("elseif" if alt.type == "if_statement" else "else")
                rec["arm_spans"].append(else_span)
            return idx
        if t == "while_statement":
            cond = node.child_by_field_name("condition")
            idx = self._new(node, "while", parent, text="while " + _squash(text(cond)))
            self._absorb(idx, cond)
            self.records[idx]["infinite"] = _squash(text(cond)) in ("(true)",)
            self._loop_body(idx, node)
            return idx
        if t == "do_statement":
            cond = node.child_by_field_name("condition")
            idx = self._new(node, "do", parent, text="do-while " + _squash(text(cond)),
                            line=_line(cond))
            self._absorb(idx, cond)
            self.records[idx]["infinite"] = _squash(text(cond)) in ("(true)",)
            self._loop_body(idx, node)
            return idx
        if t == "for_statement":
            inits = node.children_by_field_name("init")
            cond = node.child_by_field_name("condition")
            updates = node.children_by_field_name("update")
            header = "for (%s; %s; %s)" % (
                ", ".join(_squash(text(i)).rstrip(";") for i in inits),
                _squash(text(cond)), ", ".join(_squash(text(u)) for u in updates))
            idx = self._new(node, "for", parent, text=header)
            for init in inits:
                if init.type == "local_variable_declaration":
                    type_text = text(init.child_by_field_name("type"))
                    for decl in init.children_by_field_name("declarator"):
                        self._declare(idx, text(decl.child_by_field_name("name")), type_text)
                self._absorb(idx, init)
            self._absorb(idx, cond)
            for upd in updates:
                self._absorb(idx, upd)
            self.records[idx]["infinite"] = cond is None or _squash(text(cond)) == "true"
            self._loop_body(idx, node)
            return idx
        if t == "enhanced_for_statement":
            type_text = text(node.child_by_field_name("type"))
            name_node = node.child_by_field_name("name")
            value = node.child_by_field_name("value")
            header = "for (%s %s : %s)" % (type_text, text(name_node), _squash(text(value)))
            idx = self._new(node, "foreach", parent, text=header)
            if name_node is not None:
                name = text(name_node)
                self._declare(idx, name, type_text)
                self.records[idx]["defs"].add(name)
            self._absorb(idx, value)
            self._loop_body(idx, node)
            return idx
        if t in ("try_statement", "try_with_resources_statement"):
            return self._try(node, parent)
        if t == "switch_expression":
            return self._switch(node, parent)
        if t == "synchronized_statement":
            lock = next((c for c in node.named_children if c.type == "parenthesized_expression"), None)
            idx = self._new(node, "synchronized", parent, text="synchronized " + _squash(text(lock)))
            self._absorb(idx, lock)
            ids, span = self._arm(node.child_by_field_name("body"), idx)
            rec = self.records[idx]
            rec["arms"].append(ids)
            rec["arm_labels"].append("body")
            rec["arm_spans"].append(span)
            return idx
        if t == "block":
            return None
        return None

    def _loop_body(self, idx: int, node: Node) -> None:
        ids, span = self._arm(node.child_by_field_name("body"), idx)
        rec = self.records[idx]
        rec["arms"].append(ids)
        rec["arm_labels"].append("body")
        rec["arm_spans"].append(span)

    def _try(self, node: Node, parent: int | None) -> int:
        text = self.text
        resources = node.child_by_field_name("resources")
        idx = self._new(node, "try", parent,
                        text="try" + (" " + _squash(text(resources)) if resources else ""))
        if resources is not None:
            for res in resources.named_children:
                if res.type != "resource":
                    continue
                name = res.child_by_field_name("name")
                if name is not None:
                    self._declare(idx, text(name), text(res.child_by_field_name("type")))
                    self.records[idx]["defs"].add(text(name))
                    self._absorb(idx, res.child_by_field_name("value"))
                else:
                    self._absorb(idx, res)
        body = node.child_by_field_name("body")
        ids, span = self._arm(body, idx)
        arms, labels, spans = [ids], ["try"], [span]
        for child in node.named_children:
            if child.type == "catch_clause":
                param = next((c for c in child.named_children if c.type == "catch_formal_parameter"), None)
                cbody = child.child_by_field_name("body")
                cidx = self._new(child, "catch", idx,
                                 text="catch (" + _squash(text(param)) + ")")
                if param is not None:
                    ctype = next((c for c in param.named_children if c.type == "catch_type"), None)
                    pname = param.child_by_field_name("name")
                    self._declare(cidx, text(pname), _squash(text(ctype)))
                    self.records[cidx]["defs"].add(text(pname))
                cids, cspan = self._arm(cbody, cidx)
                self.records[cidx]["arms"].append(cids)
                self.records[cidx]["arm_labels"].append("body")
                self.records[cidx]["arm_spans"].append(cspan)
                arms.append([cidx])
                labels.append("catch")
                spans.append(cspan)
            elif child.type == "finally_clause":
                fbody = next((c for c in child.named_children if c.type == "block"), None)
                fidx = self._new(child, "finally", idx, text="finally")
                fids, fspan = self._arm(fbody, fidx)
                self.records[fidx]["arms"].append(fids)
                self.records[fidx]["arm_labels"].append("body")
                self.records[fidx]["arm_spans"].append(fspan)
                arms.append([fidx])
                labels.append("finally")
                spans.append(fspan)
        rec = self.records[idx]
        rec["arms"], rec["arm_labels"], rec["arm_spans"] = arms, labels, spans
        return idx

    def _switch(self, node: Node, parent: int | None) -> int:
        text = self.text
        cond = node.child_by_field_name("condition")
        idx = self._new(node, "switch", parent, text="switch " + _squash(text(cond)))
        self._absorb(idx, cond)
        body = node.child_by_field_name("body")
        arms, labels, spans = [], [], []
        if body is not None:
            for group in body.named_children:
                if group.type == "switch_block_statement_group":
                    is_default = any(c.type == "switch_label" and text(c).strip().startswith("default")
                                     for c in group.named_children)
                    ids: list[int] = []
                    for child in group.named_children:
                        if child.type == "switch_label":
                            self._absorb(idx, child)
                            continue
                        ids.extend(self.sequence(child, idx))
                    arms.append(ids)
                    labels.append("default" if is_default else "case")
                    spans.append((_line(group), _end_line(group)))
                elif group.type == "switch_rule":
                    is_default = any(c.type == "switch_label" and text(c).strip().startswith("default")
                                     for c in group.named_children)
                    ids = []
                    for child in group.named_children:
                        if child.type == "switch_label":
                            self._absorb(idx, child)
                            continue
                        ids.extend(self.sequence(child, idx))
                        for i in ids:
                            if child.type != "block":
                                self.records[i]["in_block"] = False
                    arms.append(ids)
                    labels.append("default_rule" if is_default else "rule")
                    spans.append((_line(group), _end_line(group)))
        rec = self.records[idx]
        rec["arms"], rec["arm_labels"], rec["arm_spans"] = arms, labels, spans
        return idx

    # -- logs and throws
    def _record_value(self, idx: int, name: str, value: Node | None) -> None:
        if value is None:
            return
        if value.type in ("string_literal", "text_block", "binary_expression"):
            folded = fold_string_expression(value, self.text)
            if not folded.non_literal:
                self.records[idx]["values"].append((name, folded))

    def is_logger(self, receiver: Node) -> str | None:
        if receiver.type == "identifier":
            name = self.text(receiver)
        elif receiver.type == "field_access" and \
                (receiver.child_by_field_name("object").type == "this"):
            name = self.text(receiver.child_by_field_name("field"))
        else:
            return None
        declared = self.types.get(name)
        if LOGGER_NAME_RE.match(name) or name in self.logger_fields or \
                (declared is not None and "Logger" in declared):
            return _squash(self.text(receiver))
        return None

    def _log_call(self, node: Node) -> LogCall | None:
        obj = node.child_by_field_name("object")
        name = self.text(node.child_by_field_name("name"))
        if obj is None or name not in _LOG_METHODS:
            return None
        receiver = self.is_logger(obj)
        if receiver is None:
            return None
        args = [a for a in node.child_by_field_name("arguments").named_children
                if a.type not in ("line_comment", "block_comment")]
        flags: list[str] = []
        if name == "fatal":
            flags.append("fatal")
        if not args:
            return LogCall(receiver, _LOG_METHODS[name], "", (), tuple(flags))
        template = fold_string_expression(args[0], self.text)
        if template.non_literal:
            flags.append("non_literal")
        variables = list(template.variables) + [_squash(self.text(a)) for a in args[1:]]
        if template.placeholders and len(variables) > template.placeholders:
            flags.append("trailing_throwable")
        return LogCall(receiver, _LOG_METHODS[name], template.text, tuple(variables), tuple(flags))

    def _throw_info(self, node: Node) -> ThrowInfo:
        expr = node.named_children[0] if node.named_children else None
        if expr is None or expr.type != "object_creation_expression":
            return ThrowInfo(None, None, None)
        exc = simple_type_name(self.text(expr.child_by_field_name("type")))
        args = expr.child_by_field_name("arguments")
        first = args.named_children[0] if args is not None and args.named_children else None
        if first is None:
            return ThrowInfo(exc, None, None)
        if first.type == "identifier":
            return ThrowInfo(exc, None, self.text(first))
        folded = fold_string_expression(first, self.text)
        return ThrowInfo(exc, None if folded.non_literal else folded, None)

    def freeze(self) -> tuple[Statement, ...]:
        out = []
        for rec in self.records:
            out.append(Statement(
                index=rec["index"], kind=rec["kind"], span=rec["span"], line=rec["line"],
                text=rec["text"], defs=frozenset(rec["defs"]), uses=frozenset(rec["uses"]),
                weak_defs=frozenset(rec["weak_defs"]),
                calls=tuple(rec["calls"]), parent=rec["parent"],
                arms=tuple(tuple(a) for a in rec["arms"]), arm_labels=tuple(rec["arm_labels"]),
                arm_spans=tuple(rec["arm_spans"]), decls=tuple(rec["decls"]),
                lambda_decls=frozenset(rec["lambda_decls"]), values=tuple(rec["values"]),
                log=rec["log"], throw=rec["throw"], label=rec["label"],
                in_block=rec["in_block"], whole_lines=rec["whole_lines"],
                infinite=rec["infinite"]))
        return tuple(out)


class _FileParser:
    def __init__(self, path: str, data: bytes):
        self.path = path
        self.data = data
        self.text = _Text(data)
        self.classes: list[ClassUnit] = []
        self.methods: list[MethodUnit] = []
        self.diagnostics: list[Diagnostic] = []
        self.package = ""
        self.lines = data.decode("utf-8", "replace").splitlines(keepends=True)

    def run(self, root: Node) -> SourceUnit:
        imports, static_imports = [], []
        for child in root.named_children:
            if child.type == "package_declaration":
                ident = next((c for c in child.named_children
                              if c.type in ("scoped_identifier", "identifier")), None)
                self.package = self.text(ident)
            elif child.type == "import_declaration":
                raw = _squash(self.text(child))[len("import "):].rstrip(";").strip()
                if raw.startswith("static "):
                    target = raw[len("static "):].strip()
                    owner, _, member = target.rpartition(".")
                    static_imports.append((owner, member))
                else:
                    imports.append(raw)
            elif child.type in _TYPE_DECLS:
                self._type(child, outer=None, outer_types={}, outer_loggers=set())
        text = self.data.decode("utf-8", "replace")
        starts = [0]
        offset = 0
        for line in self.data.splitlines(keepends=True):
            offset += len(line)
            starts.append(offset)
        if len(starts) > 1 and starts[-1] == len(self.data):
            starts.pop()
        return SourceUnit(self.path, text, tuple(starts), self.package, tuple(imports),
                          tuple(static_imports))

    def _type(self, node: Node, outer: ClassUnit | None, outer_types: dict[str, str],
              outer_loggers: set[str]) -> None:
        text = self.text
        name = text(node.child_by_field_name("name"))
        prefix = outer.id if outer is not None else self.package
        class_id = f"{prefix}.{name}" if prefix else name
        kind = _TYPE_DECLS[node.type]
        superclass = None
        interfaces: list[str] = []
        sup = node.child_by_field_name("superclass")
        if sup is not None:
            superclass = erase_generics(text(sup.named_children[0]))
        ifaces = node.child_by_field_name("interfaces")
        if ifaces is None:
            ifaces = next((c for c in node.named_children if c.type == "extends_interfaces"), None)
        if ifaces is not None:
            for tnode in _descendants(ifaces, "type_list"):
                interfaces.extend(erase_generics(text(t)) for t in tnode.named_children)
                break
        modifiers = next((c for c in node.named_children if c.type == "modifiers"), None)
        annotations = tuple(text(a).lstrip("@") for a in (modifiers.named_children if modifiers else ())
                            if a.type in ("marker_annotation", "annotation"))
        body = node.child_by_field_name("body")
        fields: list[FieldDecl] = []
        types = dict(outer_types)
        loggers = set(outer_loggers)
        logger_field = None
        enum_body_line = None
        members = list(body.named_children) if body is not None else []
        if node.type == "record_declaration":
            params = node.child_by_field_name("parameters")
            for p in (params.named_children if params is not None else ()):
                if p.type == "formal_parameter":
                    fname = text(p.child_by_field_name("name"))
                    ftype = text(p.child_by_field_name("type"))
                    fields.append(FieldDecl(fname, ftype, _line(p), False, True))
                    types[fname] = ftype
        expanded = []
        for member in members:
            if member.type == "enum_body_declarations":
                enum_body_line = _line(member)
                expanded.extend(member.named_children)
            else:
                expanded.append(member)
        for member in expanded:
            if member.type in ("field_declaration", "constant_declaration"):
                mods = next((c for c in member.named_children if c.type == "modifiers"), None)
                mod_text = text(mods) if mods is not None else ""
                ftype = text(member.child_by_field_name("type"))
                is_static = "static" in mod_text.split() or kind == "interface"
                for decl in member.children_by_field_name("declarator"):
                    fname = text(decl.child_by_field_name("name"))
                    fields.append(FieldDecl(fname, ftype, _line(decl), is_static,
                                            "private" in mod_text.split()))
                    types[fname] = ftype
                    if "Logger" in ftype or (LOGGER_NAME_RE.match(fname) and "Log" in ftype):
                        loggers.add(fname)
                        if logger_field is None:
                            logger_field = fname
        if logger_field is None and outer_loggers:
            logger_field = sorted(outer_loggers)[0]
        cls_method_ids: list[str] = []
        placeholder = ClassUnit(class_id, name, kind, self.path, (_line(node), _end_line(node)),
                                _line(body) if body is not None else _line(node), superclass,
                                tuple(interfaces), tuple(fields), (), logger_field,
                                outer.id if outer is not None else None, annotations,
                                enum_body_line)
        for member in expanded:
            if member.type in ("method_declaration", "constructor_declaration",
                               "compact_constructor_declaration"):
                method = self._method(member, placeholder, types, loggers)
                if method is not None:
                    cls_method_ids.append(method.id)
            elif member.type in _TYPE_DECLS:
                self._type(member, placeholder, types, loggers)
        self.classes.append(ClassUnit(
            placeholder.id, name, kind, self.path, placeholder.span, placeholder.body_line,
            superclass, tuple(interfaces), tuple(fields), tuple(cls_method_ids), logger_field,
            placeholder.outer, annotations, enum_body_line))

    def _method(self, node: Node, cls: ClassUnit, types: dict[str, str],
                loggers: set[str]) -> MethodUnit | None:
        text = self.text
        is_ctor = node.type != "method_declaration"
        name = text(node.child_by_field_name("name"))
        params_node = node.child_by_field_name("parameters")
        params: list[Param] = []
        for p in (params_node.named_children if params_node is not None else ()):
            if p.type == "formal_parameter":
                ptype = text(p.child_by_field_name("type"))
                dims = p.child_by_field_name("dimensions")
                params.append(Param(text(p.child_by_field_name("name")),
                                    ptype + (text(dims) if dims else ""), _line(p)))
            elif p.type == "spread_parameter":
                ptype = next((text(c) for c in p.named_children
                              if c.type not in ("modifiers", "variable_declarator")), "")
                decl = next((c for c in p.named_children if c.type == "variable_declarator"), None)
                pname = text(decl.child_by_field_name("name")) if decl is not None else ""
                params.append(Param(pname, ptype + "...", _line(p)))
        mods = next((c for c in node.named_children if c.type == "modifiers"), None)
        modifiers = frozenset(w for w in (text(mods).split() if mods is not None else ())
                              if not w.startswith("@"))
        ret = node.child_by_field_name("type")
        body = node.child_by_field_name("body")
        name_line = _line(node.child_by_field_name("name"))
        start = name_line
        if ret is not None:
            start = min(start, _line(ret))
        if mods is not None:
            plain = [c for c in mods.children if c.type not in ("marker_annotation", "annotation")]
            if plain:
                start = min(start, _line(plain[0]))
        end = _end_line(node)
        sig_params = ",".join(erase_generics(p.type_text) for p in params)
        method_id = f"{cls.id}.{name}({sig_params})"
        header_end = body.start_byte if body is not None else node.end_byte
        decl_text = _squash(self.data[node.start_byte:header_end].decode("utf-8", "replace"))
        if mods is not None:
            decl_text = _squash(text(node)[len(text(mods)):].split("{", 1)[0]) if body is not None \
                else _squash(text(node)[len(text(mods)):]).rstrip(";")
            decl_text = " ".join(w for w in modifiers) + (" " if modifiers else "") + decl_text
        decl_text = decl_text.rstrip(";").strip()
        builder = _MethodBuilder(text, types, loggers)
        for p in params:
            builder.types[p.name] = p.type_text
            builder.params.add(p.name)
        body_ids = builder.sequence(body, None) if body is not None else []
        statements = builder.freeze()
        return self._register(MethodUnit(
            id=method_id, name=name, file=self.path, enclosing_class=cls.id,
            params=tuple(params), return_type=None if is_ctor else text(ret), modifiers=modifiers,
            signature_line=name_line, body_span=(start, end), statements=statements,
            body=tuple(body_ids), lines=tuple(self.lines[start - 1:end]),
            has_body=body is not None, is_constructor=is_ctor,
            summary=_first_comment_line(node, text), decl_text=decl_text,
            local_types=tuple(sorted(builder.local_types.items()))))

    def _register(self, method: MethodUnit) -> MethodUnit:
        existing = {m.id for m in self.methods}
        if method.id in existing:
            n = 2
            while f"{method.id}#{n}" in existing:
                n += 1
            self.diagnostics.append(Diagnostic(self.path, f"duplicate method id {method.id}",
                                               method.signature_line))
            method = MethodUnit(**{**method.__dict__, "id": f"{method.id}#{n}"})
        self.methods.append(method)
        return method


_TYPE_DECLS = {
    "class_declaration": "class",
    "interface_declaration": "interface",
    "enum_declaration": "enum",
    "record_declaration": "record",
    "annotation_type_declaration": "interface",
}


def _first_error_line(root: Node) -> int | None:
    stack = [root]
    while stack:
        node = stack.pop()
        if node.type == "ERROR" or node.is_missing:
            return _line(node)
        stack.extend(c for c in node.children if c.has_error or c.is_missing or c.type == "ERROR")
    return None


def parse_sources(files: Mapping[str, str | bytes], *, require: bool = True) -> CodeModel:
    """Build a CodeModel from in-memory ``path -> source`` pairs."""
    sources: dict[str, SourceUnit] = {}
    classes: dict[str, ClassUnit] = {}
    methods: dict[str, MethodUnit] = {}
    diagnostics: list[Diagnostic] = []
    for path in sorted(files):
        raw = files[path]
        data = raw.encode("utf-8") if isinstance(raw, str) else raw
        tree = parse_java(data)
        if tree.root_node.has_error:
            diagnostics.append(Diagnostic(path, "syntax error; file skipped",
                                          _first_error_line(tree.root_node)))
            continue
        fp = _FileParser(path, data)
        unit = fp.run(tree.root_node)
        sources[path] = unit
        for cls in fp.classes:
            if cls.id in classes:
                diagnostics.append(Diagnostic(path, f"duplicate class {cls.id}", cls.span[0]))
                continue
            classes[cls.id] = cls
        for method in fp.methods:
            if method.id in methods:
                diagnostics.append(Diagnostic(path, f"duplicate method {method.id}",
                                              method.signature_line))
                continue
            methods[method.id] = method
        diagnostics.extend(fp.diagnostics)
    if require and not sources:
        raise NoSourcesError("no parseable sources")
    return CodeModel(MappingProxyType(sources), MappingProxyType(classes),
                     MappingProxyType(methods), tuple(diagnostics))


def read_project(root: str | Path) -> dict[str, str]:
    root = Path(root)
    if not root.is_dir():
        raise NoSourcesError(f"not a directory: {root}")
    files = {}
    for path in sorted(root.rglob("*.java")):
        files[path.relative_to(root).as_posix()] = path.read_bytes().decode("utf-8", "replace")
    return files


def parse_project(root: str | Path) -> CodeModel:
    """Parse every ``.java`` file under ``root``.

    Files with syntax errors are skipped and reported in ``diagnostics``;
    a project with nothing parseable raises :class:`NoSourcesError`.
    """
    files = read_project(root)
    if not files:
        raise NoSourcesError("no parseable sources")
    return parse_sources(files)


def write_project(files: Mapping[str, str], out: str | Path) -> None:
    out = Path(out)
    for rel, text in files.items():
        target = out / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(text.encode("utf-8"))


def iter_descendant_statements(method: MethodUnit, index: int) -> Iterable[int]:
    """All statement indices nested (at any depth) under statement ``index``."""
    stack = [i for arm in method.statements[index].arms for i in arm]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(i for arm in method.statements[cur].arms for i in arm)


def innermost_statement(method: MethodUnit, line: int) -> Statement | None:
    """Deepest statement whose span contains ``line``."""
    best = None
    for stmt in method.statements:
        if stmt.span[0] <= line <= stmt.span[1]:
            if best is None or (stmt.span[1] - stmt.span[0]) <= (best.span[1] - best.span[0]):
                best = stmt
    return best
