"""Hop-capped inter-procedural backward slicing and slice-entry selection."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..blocks import CodeBlock
from ..codemodel import CodeModel, MethodUnit, PARAM_NODE, Statement
from .callgraph import CallGraph, call_graph
from .pdg import MethodDependence, Node, PdgEdge, analyze_method

DEFAULT_HOP_CAP = 7
_UNSLICEABLE = frozenset({"log", "break", "continue", "local_class", "finally"})


def header_region(stmt: Statement) -> tuple[int, int]:
    """Lines that belong to a statement itself rather than to its arms."""
    if stmt.kind == "do":
        return (stmt.line, stmt.span[1])
    if stmt.arm_spans and stmt.kind not in ("switch",):
        return (stmt.span[0], max(stmt.span[0], stmt.arm_spans[0][0]))
    if stmt.kind == "switch":
        first = stmt.arm_spans[0][0] if stmt.arm_spans else stmt.span[1]
        return (stmt.span[0], max(stmt.span[0], first - 1 if first > stmt.span[0] else first))
    return stmt.span


def statement_for_line(method: MethodUnit, line: int) -> Statement | None:
    """Deepest statement whose own (non-arm) lines include ``line``."""
    best = None
    for stmt in method.statements:
        lo, hi = header_region(stmt)
        if lo <= line <= hi:
            if best is None or (stmt.span[1] - stmt.span[0]) < (best.span[1] - best.span[0]) \
                    or ((stmt.span[1] - stmt.span[0]) == (best.span[1] - best.span[0])
                        and stmt.index > best.index):
                best = stmt
    return best


def is_sliceable(stmt: Statement | None) -> bool:
    if stmt is None or stmt.kind in _UNSLICEABLE:
        return False
    if stmt.kind == "try":
        return bool(stmt.defs or stmt.uses or stmt.calls)
    return bool(stmt.defs or stmt.uses or stmt.calls) or stmt.kind == "catch"


@dataclass(frozen=True)
class SliceEntry:
    method: str
    line: int
    index: int | None  # statement index; None when degenerate
    degenerate: bool = False
    reason: str = ""


def _governing_statement(method: MethodUnit, block: CodeBlock, line: int) -> Statement | None:
    """The if (or switch) whose condition selects the arm holding ``line``."""
    if block.stmt is None:
        return None
    cur = method.statements[block.stmt]
    if cur.kind != "if":
        return cur
    # walk down the else-if chain to the innermost link still containing line
    while len(cur.arms) > 1 and cur.arm_labels[1] == "elseif":
        nxt = method.statements[cur.arms[1][0]]
        if not nxt.span[0] <= line <= nxt.span[1]:
            break
        cur = nxt
    return cur


def select_slice_entry(method: MethodUnit, predicted_line: int, block: CodeBlock) -> SliceEntry:
    """Pick the statement a backward slice starts from.

    The predicted line is used when it carries a sliceable statement.
    Otherwise lines are walked upward inside the block.  In a non-first arm
    of a Branch (else, else-if, switch case), leaving the arm selects the
    condition that governs it instead of continuing into a sibling arm.
    """
    stmt = statement_for_line(method, predicted_line)
    if is_sliceable(stmt):
        return SliceEntry(method.id, stmt.line, stmt.index)
    label = block.sub_label_at(predicted_line)
    arm = block.sub_span_at(predicted_line)
    alternative = block.kind == "Branch" and label not in (None, "then")
    floor = arm[0] if alternative and arm is not None else block.span[0]
    line = predicted_line - 1
    while line >= floor:
        cand = statement_for_line(method, line)
        if is_sliceable(cand) and (not alternative or cand.span[0] >= floor):
            return SliceEntry(method.id, cand.line, cand.index, reason="upward walk")
        line -= 1
    if alternative:
        gov = _governing_statement(method, block, predicted_line)
        if gov is not None:
            return SliceEntry(method.id, gov.line, gov.index, reason="governing condition")
    return SliceEntry(method.id, method.signature_line, None, True, "no sliceable statement")


@dataclass(frozen=True)
class BackwardSlice:
    entry: tuple[str, int]
    members: frozenset[tuple[str, int]]
    hops: dict[tuple[str, int], int]
    nodes: dict[Node, int] = field(default_factory=dict)
    hop_cap: int = DEFAULT_HOP_CAP
    degenerate: bool = False

    def ordered(self) -> list[tuple[int, str, int]]:
        """(hop, method id, line) sorted by hop then position."""
        return sorted((h, m, l) for (m, l), h in self.hops.items())


class Slicer:
    """Shares per-method dependence results and the call graph across slices."""

    def __init__(self, model: CodeModel, graph: CallGraph | None = None):
        self.model = model
        self.graph = graph or call_graph(model)
        self._dep: dict[str, MethodDependence] = {}
        self._returns: dict[str, list[int]] = {}

    def dependence(self, method_id: str) -> MethodDependence:
        dep = self._dep.get(method_id)
        if dep is None:
            dep = analyze_method(self.model.methods[method_id])
            self._dep[method_id] = dep
        return dep

    def returns(self, method_id: str) -> list[int]:
        if method_id not in self._returns:
            dep = self.dependence(method_id)
            m = self.model.methods[method_id]
            self._returns[method_id] = [n for n in dep.cfg.nodes
                                        if m.statements[n].kind == "return"]
        return self._returns[method_id]

    def line_of(self, node: Node) -> int:
        method = self.model.methods[node[0]]
        if node[1] == PARAM_NODE:
            return method.signature_line
        return method.statements[node[1]].line

    def edges_from(self, node: Node) -> list[PdgEdge]:
        """Every dependence edge leaving ``node``, call bindings included."""
        method_id, index = node
        out: list[PdgEdge] = []
        if index == PARAM_NODE:
            for e in self.graph.edges_to(method_id):
                out.append(PdgEdge(node, (e.caller, e.stmt), "call_param"))
            return out
        dep = self.dependence(method_id)
        out.extend(dep.edges_from(index))
        for e in self.graph.edges_from(method_id):
            if e.stmt == index:
                for r in self.returns(e.callee):
                    out.append(PdgEdge(node, (e.callee, r), "call_return"))
        return out

    def resolve_entry(self, method_id: str, line: int) -> Node:
        method = self.model.methods.get(method_id)
        if method is None or not method.body_span[0] <= line <= method.body_span[1]:
            raise ValueError(f"position ({method_id}, {line}) is not inside any method")
        stmt = statement_for_line(method, line)
        if stmt is None:
            if line <= method.signature_line or line == method.body_span[0]:
                return (method_id, PARAM_NODE)
            raise ValueError(f"no statement at line {line} of {method_id}")
        return (method_id, stmt.index)

    def slice(self, position: tuple[str, int], hop_cap: int = DEFAULT_HOP_CAP) -> BackwardSlice:
        entry = self.resolve_entry(*position)
        dist: dict[Node, int] = {entry: 0}
        queue = deque([entry])
        while queue:
            cur = queue.popleft()
            if dist[cur] >= hop_cap:
                continue
            for edge in self.edges_from(cur):
                if edge.dst not in dist:
                    dist[edge.dst] = dist[cur] + 1
                    queue.append(edge.dst)
        hops: dict[tuple[str, int], int] = {}
        for node, h in dist.items():
            key = (node[0], self.line_of(node))
            if key not in hops or h < hops[key]:
                hops[key] = h
        entry_key = (entry[0], self.line_of(entry))
        hops[entry_key] = 0
        return BackwardSlice(entry_key, frozenset(hops), hops, dist, hop_cap)


def backward_slice(model: CodeModel, position: tuple[str, int],
                   hop_cap: int = DEFAULT_HOP_CAP, slicer: Slicer | None = None) -> BackwardSlice:
    return (slicer or Slicer(model)).slice(position, hop_cap)
