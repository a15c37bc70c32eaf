"""Candidate logging variables: five variable sets and five function sets."""
from __future__ import annotations

from dataclasses import dataclass

from .codemodel import ClassUnit, CodeModel, MethodUnit

VARIABLE_SETS = ("v_p", "v_m", "v_c", "v_s", "v_i")
FUNCTION_SETS = ("f_m", "f_i", "f_d", "f_l", "f_s")
SET_ORDER = VARIABLE_SETS + FUNCTION_SETS
SET_TITLES = {
    "v_p": "parameter", "v_m": "local variable", "v_c": "member variable",
    "v_s": "static variable", "v_i": "inherited variable", "f_m": "member method",
    "f_i": "inherited method", "f_d": "interface default method",
    "f_l": "lambda or function variable", "f_s": "statically imported method",
}
NO_CANDIDATES = "(no candidates)"


@dataclass(frozen=True)
class CandidateEntry:
    name: str
    scope: str
    type_text: str
    line: int | None
    signature: str = ""
    summary: str = ""
    unresolved: bool = False

    def to_record(self) -> dict:
        return {"name": self.name, "scope": self.scope, "type": self.type_text,
                "line": self.line, "signature": self.signature, "summary": self.summary,
                "unresolved": self.unresolved}


@dataclass(frozen=True)
class CandidateSet:
    method: str
    v_p: tuple[CandidateEntry, ...] = ()
    v_m: tuple[CandidateEntry, ...] = ()
    v_c: tuple[CandidateEntry, ...] = ()
    v_s: tuple[CandidateEntry, ...] = ()
    v_i: tuple[CandidateEntry, ...] = ()
    f_m: tuple[CandidateEntry, ...] = ()
    f_i: tuple[CandidateEntry, ...] = ()
    f_d: tuple[CandidateEntry, ...] = ()
    f_l: tuple[CandidateEntry, ...] = ()
    f_s: tuple[CandidateEntry, ...] = ()
    diagnostics: tuple[str, ...] = ()

    def sets(self):
        for key in SET_ORDER:
            yield key, getattr(self, key)

    def names(self) -> set[str]:
        return {e.name for _, entries in self.sets() for e in entries}

    def is_empty(self) -> bool:
        return not any(entries for _, entries in self.sets())

    def to_record(self) -> dict:
        rec = {"method": self.method}
        for key, entries in self.sets():
            rec[key] = [e.to_record() for e in entries]
        rec["diagnostics"] = list(self.diagnostics)
        return rec


def _is_logger_type(type_text: str) -> bool:
    return "Logger" in type_text or type_text.rsplit(".", 1)[-1] == "Log"


def method_signature(m: MethodUnit) -> str:
    params = ", ".join(f"{p.type_text} {p.name}" for p in m.params)
    ret = (m.return_type + " ") if m.return_type else ""
    return f"{ret}{m.name}({params})"


def _supertypes(model: CodeModel, cls: ClassUnit, notes: list[str]):
    """(superclass chain, all reachable in-project interfaces)."""
    chain: list[ClassUnit] = []
    seen = {cls.id}
    cur = cls
    while cur.superclass:
        parent = model.resolve_class(cur.superclass, cur)
        if parent is None:
            notes.append(f"supertype {cur.superclass} has no project source")
            break
        if parent.id in seen:
            break
        seen.add(parent.id)
        chain.append(parent)
        cur = parent
    interfaces: list[ClassUnit] = []
    queue = [i for c in [cls] + chain for i in c.interfaces]
    owners = [c for c in [cls] + chain for _ in c.interfaces]
    while queue:
        name = queue.pop(0)
        owner = owners.pop(0)
        iface = model.resolve_class(name, owner)
        if iface is None:
            notes.append(f"interface {name} has no project source")
            continue
        if iface.id in seen:
            continue
        seen.add(iface.id)
        interfaces.append(iface)
        queue.extend(iface.interfaces)
        owners.extend([iface] * len(iface.interfaces))
        if iface.superclass:
            queue.append(iface.superclass)
            owners.append(iface)
    return chain, interfaces


def _function(m: MethodUnit) -> CandidateEntry:
    return CandidateEntry(m.name, m.enclosing_class, m.return_type or "", m.signature_line,
                          method_signature(m), m.summary)


def _sorted(entries) -> tuple[CandidateEntry, ...]:
    unique = {}
    for e in entries:
        unique.setdefault((e.name, e.signature, e.scope), e)
    return tuple(sorted(unique.values(), key=lambda e: (e.name, e.signature, e.scope)))


def collect_candidates(model: CodeModel, method: MethodUnit) -> CandidateSet:
    """Populate the ten candidate sets for ``method``.

    Supertypes without project source end the traversal (noted in
    ``diagnostics``).  Logger fields are left out of the member and static
    sets since a logger is never something worth logging.
    """
    notes: list[str] = []
    cls = model.classes[method.enclosing_class]
    v_p = [CandidateEntry(p.name, method.id, p.type_text, p.line) for p in method.params]
    lambda_names: dict[str, int] = {}
    local_lines: dict[str, int] = {}
    for stmt in method.statements:
        for name in stmt.lambda_decls:
            lambda_names.setdefault(name, stmt.line)
        for name, _ in stmt.decls:
            local_lines.setdefault(name, stmt.line)
    types = method.types()
    v_m = [CandidateEntry(n, method.id, t, local_lines.get(n)) for n, t in types.items()
           if n not in lambda_names]
    f_l = [CandidateEntry(n, method.id, types.get(n, "lambda"), line, f"{types.get(n, 'lambda')} {n}")
           for n, line in lambda_names.items()]
    v_c, v_s = [], []
    for f in cls.fields:
        if _is_logger_type(f.type_text):
            continue
        entry = CandidateEntry(f.name, cls.id, f.type_text, f.line)
        (v_s if f.is_static else v_c).append(entry)
    chain, interfaces = _supertypes(model, cls, notes)
    v_i = [CandidateEntry(f.name, parent.id, f.type_text, f.line)
           for parent in chain for f in parent.fields
           if not f.is_private and not _is_logger_type(f.type_text)]
    own = [model.methods[mid] for mid in cls.method_ids]
    f_m = [_function(m) for m in own if m.id != method.id and not m.is_constructor]
    own_names = {(m.name, len(m.params)) for m in own}
    f_i = [_function(m) for parent in chain for m in model.methods_in(parent)
           if not m.is_constructor and "private" not in m.modifiers
           and (m.name, len(m.params)) not in own_names]
    f_d = [_function(m) for iface in interfaces for m in model.methods_in(iface)
           if "default" in m.modifiers]
    f_s = []
    for owner_cls in [cls] + chain:
        unit = model.sources.get(owner_cls.file)
        for owner, member in (unit.static_imports if unit else ()):
            target = model.resolve_class(owner, owner_cls)
            if target is None:
                if member != "*" and member[:1].islower():
                    f_s.append(CandidateEntry(member, owner, "", None, f"{owner}.{member}(...)",
                                              unresolved=True))
                else:
                    notes.append(f"static import {owner}.{member} has no project source")
                continue
            for m in model.methods_in(target):
                if "static" in m.modifiers and member in (m.name, "*"):
                    f_s.append(_function(m))
    return CandidateSet(method.id, _sorted(v_p), _sorted(v_m), _sorted(v_c), _sorted(v_s),
                        _sorted(v_i), _sorted(f_m), _sorted(f_i), _sorted(f_d), _sorted(f_l),
                        _sorted(f_s), tuple(notes))


def render_candidates(cs: CandidateSet) -> str:
    if cs.is_empty():
        return NO_CANDIDATES + "\n"
    lines = []
    for key, entries in cs.sets():
        title = SET_TITLES[key]
        for e in entries:
            if key in VARIABLE_SETS:
                text = f"{title}: {e.type_text} {e.name}".replace(":  ", ": ")
                if key == "v_i":
                    text += f" (from {e.scope})"
            else:
                text = f"{title}: {e.signature or e.name}"
                if e.summary:
                    text += f"  // {e.summary}"
            lines.append(text)
    return "\n".join(lines) + "\n"


def candidate_expressions(cs: CandidateSet) -> set[str]:
    """Names a generated log variable may legitimately start from."""
    out = set()
    for key, entries in cs.sets():
        for e in entries:
            out.add(e.name)
    return out
