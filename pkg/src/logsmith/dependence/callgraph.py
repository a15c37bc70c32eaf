"""Project call graph resolved by name, arity and argument kinds."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..codemodel import CallSite, ClassUnit, CodeModel, MethodUnit, simple_type_name

_NUMERIC = {"byte": 0, "short": 1, "char": 1, "int": 2, "long": 3, "float": 4, "double": 5}
_BOXED = {"Integer": "int", "Long": "long", "Double": "double", "Float": "float",
          "Boolean": "boolean", "Character": "char", "Short": "short", "Byte": "byte"}


@dataclass(frozen=True, order=True)
class CallEdge:
    caller: str
    line: int
    callee: str
    stmt: int = 0
    call_name: str = ""


@dataclass(frozen=True)
class ExternalCall:
    caller: str
    line: int
    name: str
    receiver: str | None


@dataclass
class CallGraph:
    edges: list[CallEdge]
    external: list[ExternalCall]
    _out: dict[str, list[CallEdge]] = field(default_factory=dict, repr=False)
    _in: dict[str, list[CallEdge]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for e in self.edges:
            self._out.setdefault(e.caller, []).append(e)
            self._in.setdefault(e.callee, []).append(e)

    def callees(self, method_id: str) -> list[str]:
        return sorted({e.callee for e in self._out.get(method_id, ())})

    def callers(self, method_id: str) -> list[str]:
        return sorted({e.caller for e in self._in.get(method_id, ())})

    def edges_from(self, method_id: str) -> list[CallEdge]:
        return list(self._out.get(method_id, ()))

    def edges_to(self, method_id: str) -> list[CallEdge]:
        return list(self._in.get(method_id, ()))

    def neighbors(self, method_id: str, hops: int, direction: str) -> dict[int, list[str]]:
        """Methods at exactly each hop distance (1..hops) in one direction."""
        step = self.callers if direction == "caller" else self.callees
        seen = {method_id}
        frontier = [method_id]
        out: dict[int, list[str]] = {}
        for hop in range(1, hops + 1):
            nxt = sorted({n for cur in frontier for n in step(cur)} - seen)
            if not nxt:
                break
            out[hop] = nxt
            seen.update(nxt)
            frontier = nxt
        return out


def _arg_fits(param_type: str, kind: str, arg_type: str | None) -> int:
    """2 = exact, 1 = plausible, 0 = incompatible."""
    p = simple_type_name(param_type)
    p = _BOXED.get(p, p)
    if kind == "name":
        if arg_type is None:
            return 1
        a = _BOXED.get(simple_type_name(arg_type), simple_type_name(arg_type))
        if a == p:
            return 2
        if a in _NUMERIC and p in _NUMERIC:
            return 1 if _NUMERIC[a] <= _NUMERIC[p] else 0
        if a in _NUMERIC or p in _NUMERIC or a == "boolean" or p == "boolean":
            return 0
        return 1
    if kind == "expr":
        return 1
    if kind == "null":
        return 0 if p in _NUMERIC or p == "boolean" else 1
    if kind == "String":
        return 2 if p == "String" else (1 if p in ("Object", "CharSequence") else 0)
    if kind == "boolean":
        return 2 if p == "boolean" else (1 if p == "Object" else 0)
    if kind in _NUMERIC:
        if p == kind:
            return 2
        if p in _NUMERIC:
            return 1 if _NUMERIC[kind] <= _NUMERIC[p] else 0
        return 1 if p in ("Object", "Number") else 0
    return 1


class _Resolver:
    def __init__(self, model: CodeModel):
        self.model = model
        self.by_class: dict[str, list[MethodUnit]] = {}
        for m in model.iter_methods():
            self.by_class.setdefault(m.enclosing_class, []).append(m)
        self.by_name: dict[str, list[MethodUnit]] = {}
        for m in model.iter_methods():
            self.by_name.setdefault(m.name, []).append(m)

    def hierarchy(self, cls: ClassUnit | None) -> list[ClassUnit]:
        out: list[ClassUnit] = []
        seen: set[str] = set()
        queue = [cls] if cls is not None else []
        while queue:
            cur = queue.pop(0)
            if cur is None or cur.id in seen:
                continue
            seen.add(cur.id)
            out.append(cur)
            for sup in ([cur.superclass] if cur.superclass else []) + list(cur.interfaces):
                queue.append(self.model.resolve_class(sup, cur))
        return out

    def enclosing(self, cls: ClassUnit) -> list[ClassUnit]:
        out = [cls]
        while out[-1].outer is not None and out[-1].outer in self.model.classes:
            out.append(self.model.classes[out[-1].outer])
        return out

    def candidates(self, classes: list[ClassUnit], name: str, ctor: bool) -> list[MethodUnit]:
        out = []
        for cls in classes:
            for m in self.by_class.get(cls.id, ()):
                if m.name == name and m.is_constructor == ctor:
                    out.append(m)
            if out:
                return out  # nearest declaring class wins
        return out

    def pick(self, cands: list[MethodUnit], call: CallSite, types: dict[str, str]) -> MethodUnit | None:
        best, best_score = None, -1
        n = len(call.args)
        for m in cands:
            params = m.params
            if m.is_varargs:
                if n < len(params) - 1:
                    continue
                ptypes = [p.type_text for p in params[:-1]]
                ptypes += [params[-1].type_text.replace("...", "")] * (n - len(params) + 1)
            else:
                if n != len(params):
                    continue
                ptypes = [p.type_text for p in params]
            score = 0
            ok = True
            for ptype, kind, text in zip(ptypes, call.arg_kinds, call.args):
                fit = _arg_fits(ptype, kind, types.get(text) if kind == "name" else None)
                if fit == 0:
                    ok = False
                    break
                score += fit
            if not m.is_varargs:
                score += 1  # prefer fixed arity, as Java overload resolution does
            if ok and score > best_score:
                best, best_score = m, score
        return best

    def resolve(self, method: MethodUnit, call: CallSite) -> MethodUnit | None | str:
        """A project method, None if clearly external, or ``"unknown"``."""
        model = self.model
        cls = model.classes.get(method.enclosing_class)
        types = dict(method.types())
        for sup in self.hierarchy(cls):
            for f in sup.fields:
                types.setdefault(f.name, f.type_text)
        for p in method.params:
            types[p.name] = p.type_text
        if call.is_constructor:
            target = model.resolve_class(call.name, cls)
            if target is None:
                return None
            return self.pick(self.candidates([target], target.name, True), call, types)
        receiver = call.receiver
        if receiver is None or receiver == "this":
            scope: list[ClassUnit] = []
            for c in self.enclosing(cls):
                scope.extend(self.hierarchy(c))
            found = self.pick(self.candidates(scope, call.name, False), call, types)
            if found is None and receiver is None:
                file = model.sources.get(method.file)
                for owner, member in (file.static_imports if file else ()):
                    if member in (call.name, "*"):
                        target = model.resolve_class(owner, cls)
                        if target is not None:
                            found = self.pick(self.candidates([target], call.name, False),
                                              call, types)
                            if found:
                                break
            return found
        if receiver == "super":
            parents = self.hierarchy(cls)[1:]
            return self.pick(self.candidates(parents, call.name, False), call, types)
        root = receiver.split(".")[0] if receiver.replace(".", "").isidentifier() else None
        if receiver.startswith("this.") and receiver.count(".") == 1:
            root = receiver[5:]
        if root is not None and (root in types or receiver in types):
            declared = types.get(receiver, types.get(root))
            if receiver != root and not receiver.startswith("this."):
                declared = None  # a.b receivers: the type of b is unknown
            if declared is not None:
                target = model.resolve_class(declared, cls)
                if target is None:
                    return None
                return self.pick(self.candidates(self.hierarchy(target), call.name, False),
                                 call, types)
        if receiver.isidentifier() and receiver[:1].isupper():
            target = model.resolve_class(receiver, cls)
            if target is not None:
                return self.pick(self.candidates(self.hierarchy(target), call.name, False),
                                 call, types)
            return None
        return "unknown"


def call_graph(model: CodeModel) -> CallGraph:
    """Resolve every call site in the project.

    When a receiver's type is unknown (for example a chained call), the call
    binds to the unique project method with that name and a fitting arity, if
    there is exactly one; everything else is external.
    """
    resolver = _Resolver(model)
    edges: list[CallEdge] = []
    external: list[ExternalCall] = []
    for method in model.iter_methods():
        for stmt in method.statements:
            for call in stmt.calls:
                target = resolver.resolve(method, call)
                if target == "unknown":
                    cands = [m for m in resolver.by_name.get(call.name, ())
                             if not m.is_constructor]
                    picked = resolver.pick(cands, call, method.types())
                    fitting = [m for m in cands if len(m.params) == len(call.args)]
                    target = picked if picked is not None and len(fitting) == 1 else None
                if target is None:
                    external.append(ExternalCall(method.id, call.line, call.name, call.receiver))
                else:
                    edges.append(CallEdge(method.id, call.line, target.id, stmt.index, call.name))
    edges.sort()
    return CallGraph(edges, external)
