"""Static deduplication of predicted logs over Code Context Bundles.

Five rules run in a fixed order.  The throw rule looks at the whole bundle
(target method plus 1-hop callers and callees); the four pair rules compare
logs of the same method.  Only predicted logs are ever removed: if a rule
would drop a developer-written log, the pair is left alone.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from ..codemodel import (LEVEL_RANK, CodeModel, MessageTemplate, MethodUnit, PARAM_NODE,
                         Statement, simple_type_name)
from ..dependence.slicing import Slicer

START_TOKENS = frozenset({"start", "starting", "begin", "beginning", "initiating"})
END_TOKENS = frozenset({"finished", "completed", "done", "ended", "succeeded"})
RULES = ("throw", "ifelse", "startend", "shared_var", "proximity")
DEFAULT_THRESHOLD = 0.7

UNCHECKED = frozenset({
    "RuntimeException", "IllegalStateException", "IllegalArgumentException",
    "NullPointerException", "UnsupportedOperationException", "IndexOutOfBoundsException",
    "ArrayIndexOutOfBoundsException", "StringIndexOutOfBoundsException", "ArithmeticException",
    "ClassCastException", "NumberFormatException", "ConcurrentModificationException",
    "NoSuchElementException", "UncheckedIOException", "SecurityException",
})
_PRINTERS = frozenset({"print", "println", "printf", "printStackTrace", "format"})
_TOKEN = re.compile(r"[a-z0-9]+")


def message_tokens(text: str) -> frozenset[str]:
    return frozenset(_TOKEN.findall(text.lower().replace("{}", " ")))


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)


def message_equivalent(a: str, b: str, threshold: float = DEFAULT_THRESHOLD) -> bool:
    """Token-set Jaccard after lowercasing and dropping placeholders and punctuation."""
    return jaccard(message_tokens(a), message_tokens(b)) >= threshold


def _root_name(expr: str) -> str:
    match = re.match(r"\s*(?:this\s*\.\s*)?([A-Za-z_$][\w$]*)", expr)
    return match.group(1) if match else expr.strip()


def _norm_var(expr: str) -> str:
    return "".join(expr.split())


@dataclass(frozen=True)
class LogSite:
    method: MethodUnit
    stmt: Statement
    predicted: bool
    ref: int = -1  # index of the predicted log this site stands for

    @property
    def line(self) -> int:
        return self.stmt.line

    @property
    def level(self) -> str:
        return self.stmt.log.level

    @property
    def message(self) -> str:
        return self.stmt.log.message

    @property
    def variables(self) -> tuple[str, ...]:
        return self.stmt.log.variables

    def to_record(self) -> dict:
        return {"file": self.method.file, "line": self.line, "method": self.method.id,
                "level": self.level, "message": self.message,
                "variables": list(self.variables), "predicted": self.predicted}


@dataclass(frozen=True)
class Removal:
    site: LogSite
    rule: str
    counterpart: dict

    def to_record(self) -> dict:
        return {"removed_log": self.site.to_record(), "rule": self.rule,
                "counterpart": self.counterpart}


@dataclass
class DedupConfig:
    threshold: float = DEFAULT_THRESHOLD
    start_tokens: frozenset[str] = START_TOKENS
    end_tokens: frozenset[str] = END_TOKENS
    judge: Callable[[str, str], bool] | None = None  # optional replacement equivalence test


@dataclass
class DedupResult:
    removed: list[Removal]
    survivors: list[int]  # refs of surviving predicted logs
    sites: list[LogSite] = field(default_factory=list)

    def removed_refs(self) -> set[int]:
        return {r.site.ref for r in self.removed}


class Deduplicator:
    def __init__(self, model: CodeModel, cfg: DedupConfig | None = None, slicer: Slicer | None = None):
        self.model = model
        self.cfg = cfg or DedupConfig()
        self.slicer = slicer or Slicer(model)

    # ---------------------------------------------------------------- helpers
    def equivalent(self, a: str, b: str) -> bool:
        if self.cfg.judge is not None:
            return self.cfg.judge(a, b)
        return message_equivalent(a, b, self.cfg.threshold)

    def bundle(self, method_id: str) -> list[str]:
        graph = self.slicer.graph
        return sorted({method_id, *graph.callers(method_id), *graph.callees(method_id)})

    @staticmethod
    def _ancestors(method: MethodUnit, index: int) -> list[tuple[int, int]]:
        """(ancestor statement, arm position holding the path), innermost first."""
        out = []
        child = index
        parent = method.statements[child].parent
        while parent is not None:
            p = method.statements[parent]
            arm = next((i for i, arm in enumerate(p.arms) if child in arm), -1)
            out.append((parent, arm))
            child, parent = parent, p.parent
        return out

    def _catch_matches(self, catch_type: str, exc: str) -> bool:
        exc_chain = [exc]
        cls = self.model.resolve_class(exc)
        seen = set()
        while cls is not None and cls.superclass and cls.id not in seen:
            seen.add(cls.id)
            exc_chain.append(simple_type_name(cls.superclass))
            cls = self.model.resolve_class(cls.superclass, cls)
        unchecked = any(e in UNCHECKED for e in exc_chain)
        for alt in catch_type.split("|"):
            name = simple_type_name(alt.strip())
            if name in exc_chain or name in ("Exception", "Throwable"):
                return True
            if name == "RuntimeException" and unchecked:
                return True
        return False

    def _handler(self, method: MethodUnit, index: int, exc: str) -> Statement | None:
        """Innermost catch of ``method`` that would intercept ``exc`` thrown at ``index``."""
        for anc, arm in self._ancestors(method, index):
            stmt = method.statements[anc]
            if stmt.kind != "try" or arm != 0:
                continue
            for arm_ids, label in zip(stmt.arms[1:], stmt.arm_labels[1:]):
                if label != "catch":
                    continue
                catch = method.statements[arm_ids[0]]
                ctype = catch.decls[0][1] if catch.decls else ""
                if self._catch_matches(ctype, exc):
                    return catch
        return None

    @staticmethod
    def _prints(method: MethodUnit, catch: Statement) -> bool:
        var = catch.decls[0][0] if catch.decls else None
        if var is None:
            return False
        stack = [i for arm in catch.arms for i in arm]
        while stack:
            s = method.statements[stack.pop()]
            stack.extend(i for arm in s.arms for i in arm)
            uses_var = any(_root_name(u) == var for u in s.uses)
            if not uses_var:
                continue
            if s.log is not None:
                return True
            if any(c.name in _PRINTERS for c in s.calls):
                return True
        return False

    def _origins(self, method: MethodUnit, index: int, var: str, depth: int = 0):
        """Literal templates a string variable can hold at ``index``; None if unknown."""
        if depth > 3:
            return None
        dep = self.slicer.dependence(method.id)
        defs = dep.reaching.get(index, {}).get(var)
        if not defs:
            return None
        out: list[MessageTemplate] = []
        for d in sorted(defs):
            if d == PARAM_NODE:
                pos = next((i for i, p in enumerate(method.params) if p.name == var), None)
                edges = self.slicer.graph.edges_to(method.id)
                if pos is None or not edges:
                    return None
                for e in edges:
                    caller = self.model.methods[e.caller]
                    call = next((c for c in caller.statements[e.stmt].calls
                                 if c.name == e.call_name and len(c.args) > pos), None)
                    if call is None:
                        return None
                    if call.arg_templates[pos] is not None:
                        out.append(call.arg_templates[pos])
                    elif call.arg_kinds[pos] == "name":
                        sub = self._origins(caller, e.stmt, call.args[pos], depth + 1)
                        if sub is None:
                            return None
                        out.extend(sub)
                    else:
                        return None
                continue
            values = dict(method.statements[d].values)
            if var not in values:
                return None
            out.append(values[var])
        return out

    def _throw_messages(self, method: MethodUnit, stmt: Statement):
        info = stmt.throw
        if info is None or info.exception_type is None:
            return None
        if info.message is not None:
            return [info.message]
        if info.message_var is not None:
            return self._origins(method, stmt.index, info.message_var)
        return None

    def _throw_condition(self, method: MethodUnit, stmt: Statement, bundle: Sequence[str]) -> bool:
        exc = stmt.throw.exception_type
        handler = self._handler(method, stmt.index, exc)
        if handler is not None:
            return self._prints(method, handler)
        if method.name == "main":
            return True
        for e in self.slicer.graph.edges_to(method.id):
            if e.caller not in bundle:
                continue
            caller = self.model.methods[e.caller]
            handler = self._handler(caller, e.stmt, exc)
            if handler is not None:
                if self._prints(caller, handler):
                    return True
            elif caller.name == "main":
                return True
        return False

    # ------------------------------------------------------------------ rules
    def rule_throw(self, site: LogSite) -> dict | None:
        """Counterpart throw when ``site`` repeats a thrown message that gets reported."""
        bundle = self.bundle(site.method.id)
        for mid in bundle:
            m = self.model.methods[mid]
            for s in m.statements:
                if s.kind != "throw":
                    continue
                messages = self._throw_messages(m, s)
                if not messages:
                    continue  # untraceable origin: conservative keep
                if not any(self.equivalent(site.message, t.text) for t in messages):
                    continue
                if self._throw_condition(m, s, bundle):
                    return {"kind": "throw", "file": m.file, "line": s.line, "method": m.id,
                            "exception": s.throw.exception_type,
                            "message": messages[0].text}
        return None

    def rule_ifelse(self, a: LogSite, b: LogSite) -> LogSite | None:
        """Survivor when a and b sit in opposite arms of one if; None otherwise."""
        arms_a = dict(self._ancestors(a.method, a.stmt.index))
        for anc, arm_b in self._ancestors(b.method, b.stmt.index):
            if anc in arms_a and a.method.statements[anc].kind == "if":
                arm_a = arms_a[anc]
                if arm_a == arm_b or -1 in (arm_a, arm_b):
                    return None
                if LEVEL_RANK[a.level] != LEVEL_RANK[b.level]:
                    return a if LEVEL_RANK[a.level] > LEVEL_RANK[b.level] else b
                return a if arm_a == 1 else b
        return None

    def startend_pair(self, a: LogSite, b: LogSite) -> bool:
        ta, tb = message_tokens(a.message), message_tokens(b.message)
        markers = self.cfg.start_tokens | self.cfg.end_tokens
        if not (ta & self.cfg.start_tokens and tb & self.cfg.end_tokens):
            return False
        sa, sb = ta - markers, tb - markers
        return bool(sa and sb) and jaccard(sa, sb) >= self.cfg.threshold

    def rule_startend(self, start: LogSite, end: LogSite) -> bool:
        """True when the start log should go: end post-dominates it, no trace level."""
        if "trace" in (start.level, end.level):
            return False
        pdom = self.slicer.dependence(start.method.id).pdom
        return end.stmt.index in pdom.get(start.stmt.index, frozenset())

    def rule_shared_var(self, a: LogSite, b: LogSite) -> LogSite | None:
        """The log to remove when a and b share a variable; None when they share none."""
        shared = {_norm_var(v) for v in a.variables} & {_norm_var(v) for v in b.variables}
        if not shared:
            return None
        dep = self.slicer.dependence(b.method.id)
        reaching = dep.reaching.get(b.stmt.index, {})
        for expr in sorted(shared):
            for d in reaching.get(_root_name(expr), ()):
                line = b.method.signature_line if d == PARAM_NODE else b.method.statements[d].line
                if line > a.line:
                    return a
        return b

    def _distance(self, site: LogSite) -> float:
        method = site.method
        log_lines = {l for s in method.statements if s.log is not None
                     for l in range(s.span[0], s.span[1] + 1)}

        def pos(line: int) -> int:
            return sum(1 for l in range(method.body_span[0], line) if l not in log_lines)

        here = pos(site.line) - 0.5
        best = float("inf")
        for s in method.statements:
            meaningful = s.log is None and (s.kind in ("throw", "catch") or bool(s.calls))
            if not meaningful:
                continue
            lo, hi = pos(s.span[0]), pos(s.span[1])
            if s.kind not in ("throw", "expression", "declaration", "return") and s.arm_spans:
                hi = lo  # a compound statement counts by its header line
            dist = 0.0 if lo <= here <= hi else min(abs(here - lo), abs(here - hi))
            best = min(best, dist)
        return best

    def rule_proximity(self, a: LogSite, b: LogSite) -> LogSite:
        """Survivor: the log nearer to a call, throw or catch; ties keep the earlier."""
        da, db = self._distance(a), self._distance(b)
        if db < da:
            return b
        return a

    # ------------------------------------------------------------------- pass
    def sites(self, predicted: dict[tuple[str, int], int]) -> list[LogSite]:
        out = []
        for method in self.model.iter_methods():
            for s in method.statements:
                if s.log is None:
                    continue
                ref = predicted.get((method.file, s.line), -1)
                out.append(LogSite(method, s, ref >= 0, ref))
        out.sort(key=lambda x: (x.method.file, x.line))
        return out

    def run(self, predicted_lines: Iterable[tuple[str, int]]) -> DedupResult:
        predicted = {loc: i for i, loc in enumerate(predicted_lines)}
        sites = self.sites(predicted)
        removed: list[Removal] = []
        gone: set[int] = set()  # ids of removed sites

        def drop(site: LogSite, rule: str, other: dict) -> bool:
            if not site.predicted:
                return False
            removed.append(Removal(site, rule, other))
            gone.add(id(site))
            return True

        for site in sites:
            if site.predicted:
                hit = self.rule_throw(site)
                if hit is not None:
                    drop(site, "throw", hit)
        by_method: dict[str, list[LogSite]] = {}
        for site in sites:
            by_method.setdefault(site.method.id, []).append(site)
        for method_id in sorted(by_method):
            group = by_method[method_id]
            for i, a in enumerate(group):
                for b in group[i + 1:]:
                    if id(a) in gone or id(b) in gone:
                        continue
                    if not (a.predicted or b.predicted):
                        continue
                    self._pair(a, b, drop)
        survivors = [s.ref for s in sites if s.predicted and id(s) not in gone]
        known = {s.ref for s in sites if s.predicted}
        survivors += [ref for ref in predicted.values() if ref not in known]
        return DedupResult(removed, sorted(survivors), sites)

    def _pair(self, a: LogSite, b: LogSite, drop) -> None:
        equivalent = self.equivalent(a.message, b.message)
        if equivalent:
            keep = self.rule_ifelse(a, b)
            if keep is not None:
                loser = b if keep is a else a
                drop(loser, "ifelse", keep.to_record())
                return
        for start, end in ((a, b), (b, a)):
            if self.startend_pair(start, end):
                if self.rule_startend(start, end):
                    drop(start, "startend", end.to_record())
                return
        if not equivalent:
            return
        loser = self.rule_shared_var(a, b)
        if loser is not None:
            drop(loser, "shared_var", (b if loser is a else a).to_record())
            return
        keep = self.rule_proximity(a, b)
        loser = b if keep is a else a
        drop(loser, "proximity", keep.to_record())


def deduplicate(model: CodeModel, predicted_lines: Sequence[tuple[str, int]],
                cfg: DedupConfig | None = None) -> DedupResult:
    """Run all five rules once over ``model`` (the project with logs inserted)."""
    return Deduplicator(model, cfg).run(predicted_lines)
