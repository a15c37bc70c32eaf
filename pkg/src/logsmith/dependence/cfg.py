"""Intra-procedural control-flow graphs, post-dominators and control dependence.

Nodes are statement indices of a :class:`MethodUnit`; compound statements
contribute one node for their header (condition, loop header, ``try`` with its
resources, ``catch`` parameter binding, ``finally`` entry).  ``EXIT`` is a
synthetic sink.  Exceptions are modelled conservatively: every statement of a
``try`` body (nested ones included) has an edge to each of that try's catch
nodes, and a ``throw`` jumps to the innermost enclosing catch nodes.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from ..codemodel import Diagnostic, MethodUnit, PARAM_NODE

EXIT = -1


@dataclass(frozen=True)
class Cfg:
    method: str
    entry: int
    exit: int
    nodes: tuple[int, ...]
    succ: dict[int, tuple[int, ...]]
    lines: dict[int, int]
    kinds: dict[int, str]
    diagnostics: tuple[Diagnostic, ...] = ()
    removed: frozenset[int] = frozenset()

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in self.all_nodes for b in self.succ.get(a, ())]

    @property
    def all_nodes(self) -> tuple[int, ...]:
        return self.nodes + (self.exit,)

    def preds(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {n: [] for n in self.all_nodes}
        for a, b in self.edges:
            out[b].append(a)
        return out

    def node_info(self, node: int) -> tuple[str, int, str]:
        if node == EXIT:
            return (self.method, 0, "exit")
        return (self.method, self.lines[node], self.kinds[node])


@dataclass
class _Frame:
    label: str | None
    break_to: int
    continue_to: int | None  # None for switch frames


class _Builder:
    def __init__(self, method: MethodUnit):
        self.m = method
        self.st = method.statements
        self.succ: dict[int, list[int]] = {}
        self.frames: list[_Frame] = []
        self.catch_stack: list[list[int]] = []
        self.try_members: list[list[int]] = []

    def add(self, node: int, targets: Iterable[int]) -> None:
        out = self.succ.setdefault(node, [])
        for t in targets:
            if t not in out:
                out.append(t)
        for members in self.try_members:
            members.append(node)

    def seq(self, ids: Iterable[int], follow: int) -> int:
        nxt = follow
        for idx in reversed(tuple(ids)):
            nxt = self.stmt(idx, nxt)
        return nxt

    def _jump(self, label: str | None, want_continue: bool) -> int:
        for frame in reversed(self.frames):
            if want_continue and frame.continue_to is None:
                continue
            if label is None or frame.label == label:
                return frame.continue_to if want_continue else frame.break_to
        return EXIT

    def _loop(self, idx: int, follow: int, head: int) -> int:
        s = self.st[idx]
        self.frames.append(_Frame(s.label, follow, head))
        body = self.seq(s.arms[0], head) if s.arms else head
        self.frames.pop()
        return body

    def stmt(self, idx: int, follow: int) -> int:
        s = self.st[idx]
        k = s.kind
        if k == "return":
            self.add(idx, [EXIT])
        elif k == "throw":
            self.add(idx, self.catch_stack[-1] if self.catch_stack else [EXIT])
        elif k == "break":
            self.add(idx, [self._jump(s.label, False)])
        elif k == "continue":
            self.add(idx, [self._jump(s.label, True)])
        elif k == "yield":
            self.add(idx, [self._jump(None, False)])
        elif k == "if":
            then_entry = self.seq(s.arms[0], follow)
            else_entry = self.seq(s.arms[1], follow) if len(s.arms) > 1 else follow
            self.add(idx, [then_entry, else_entry])
        elif k in ("while", "for", "foreach"):
            self.succ.setdefault(idx, [])
            body = self._loop(idx, follow, idx)
            self.add(idx, [body] + ([] if s.infinite else [follow]))
        elif k == "do":
            self.succ.setdefault(idx, [])
            body = self._loop(idx, follow, idx)
            self.add(idx, [body] + ([] if s.infinite else [follow]))
            return body
        elif k == "switch":
            self.frames.append(_Frame(s.label, follow, None))
            entries: list[int] = []
            nxt = follow
            for arm, label in reversed(list(zip(s.arms, s.arm_labels))):
                fall = follow if label in ("rule", "default_rule") else nxt
                entry = self.seq(arm, fall)
                entries.insert(0, entry)
                nxt = entry
            self.frames.pop()
            has_default = any(lab.startswith("default") for lab in s.arm_labels)
            self.add(idx, entries + ([] if has_default else [follow]))
        elif k == "synchronized":
            self.add(idx, [self.seq(s.arms[0], follow)])
        elif k == "try":
            self._try(idx, follow)
        else:
            self.add(idx, [follow])
        return idx

    def _try(self, idx: int, follow: int) -> None:
        s = self.st[idx]
        after = follow
        catches: list[int] = []
        finally_idx = None
        for arm, label in zip(s.arms[1:], s.arm_labels[1:]):
            if label == "finally":
                finally_idx = arm[0]
        if finally_idx is not None:
            fin = self.st[finally_idx]
            self.add(finally_idx, [self.seq(fin.arms[0], follow)])
            after = finally_idx
        for arm, label in zip(s.arms[1:], s.arm_labels[1:]):
            if label == "catch":
                c = arm[0]
                self.add(c, [self.seq(self.st[c].arms[0], after)])
                catches.append(c)
        if catches:
            self.catch_stack.append(catches)
        members: list[int] = []
        self.try_members.append(members)
        body = self.seq(s.arms[0], after)
        self.try_members.pop()
        if catches:
            self.catch_stack.pop()
        self.add(idx, [body] + catches)
        for node in members:
            self.add(node, catches)


def _reach(start: Iterable[int], adj: dict[int, list[int]] | dict[int, tuple[int, ...]]) -> set[int]:
    seen = set(start)
    queue = deque(seen)
    while queue:
        cur = queue.popleft()
        for nxt in adj.get(cur, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def build_cfg(method: MethodUnit) -> Cfg:
    """Build the CFG of ``method``.

    Two repairs keep the graph well formed: any node that cannot reach EXIT
    (an infinite loop with no break) gets an edge to EXIT, and nodes not
    reachable from the entry are dropped with a diagnostic.
    """
    b = _Builder(method)
    entry = b.seq(method.body, EXIT)
    succ = {n: list(v) for n, v in b.succ.items()}
    diagnostics: list[Diagnostic] = []
    preds: dict[int, list[int]] = {}
    for a, targets in succ.items():
        for t in targets:
            preds.setdefault(t, []).append(a)
    reaches_exit = _reach([EXIT], preds)
    for node in sorted(succ):
        if node not in reaches_exit:
            succ[node].append(EXIT)
            preds.setdefault(EXIT, []).append(node)
            reaches_exit |= _reach([node], preds)
    reachable = _reach([entry], succ) if entry != EXIT else {EXIT}
    removed = frozenset(n for n in succ if n not in reachable)
    for n in sorted(removed):
        diagnostics.append(Diagnostic(method.file, f"unreachable statement in {method.id}",
                                      method.statements[n].line))
    nodes = tuple(sorted(n for n in succ if n in reachable))
    final = {n: tuple(t for t in succ[n] if t in reachable or t == EXIT) for n in nodes}
    final[EXIT] = ()
    return Cfg(method.id, entry, EXIT, nodes, final,
               {n: method.statements[n].line for n in nodes},
               {n: method.statements[n].kind for n in nodes},
               tuple(diagnostics), removed)


def post_dominators(cfg: Cfg) -> dict[int, frozenset[int]]:
    """Map each node to the set of nodes post-dominating it (reflexive)."""
    universe = frozenset(cfg.all_nodes)
    pdom: dict[int, frozenset[int]] = {n: universe for n in cfg.all_nodes}
    pdom[cfg.exit] = frozenset({cfg.exit})
    order = sorted(cfg.nodes, reverse=True)
    changed = True
    while changed:
        changed = False
        for n in order:
            succs = cfg.succ[n]
            meet = frozenset.intersection(*(pdom[s] for s in succs)) if succs else frozenset()
            new = meet | {n}
            if new != pdom[n]:
                pdom[n] = new
                changed = True
    return pdom


def immediate_post_dominators(cfg: Cfg, pdom: dict[int, frozenset[int]] | None = None) -> dict[int, int | None]:
    pdom = pdom or post_dominators(cfg)
    out: dict[int, int | None] = {}
    for n, doms in pdom.items():
        strict = doms - {n}
        # the immediate one is the strict post-dominator with the largest set
        out[n] = max(strict, key=lambda d: len(pdom[d])) if strict else None
    return out


def control_dependencies(cfg: Cfg, pdom: dict[int, frozenset[int]] | None = None):
    """Control edges ``s -> p`` for every s control-dependent on predicate p."""
    from .pdg import PdgEdge

    pdom = pdom or post_dominators(cfg)
    found: set[tuple[int, int]] = set()
    for p in cfg.nodes:
        succs = cfg.succ[p]
        if len(succs) < 2:
            continue
        for x in succs:
            for s in pdom[x]:
                if s == cfg.exit or s == p:
                    continue
                if s in pdom[p]:  # s strictly post-dominates p
                    continue
                found.add((s, p))
    return [PdgEdge((cfg.method, s), (cfg.method, p), "control") for s, p in sorted(found)]


__all__ = ["Cfg", "EXIT", "PARAM_NODE", "build_cfg", "post_dominators",
           "immediate_post_dominators", "control_dependencies"]
