"""Graphviz DOT dumps for CFGs, PDGs and slices."""
from __future__ import annotations

from ..codemodel import MethodUnit, PARAM_NODE
from .cfg import EXIT, Cfg
from .pdg import MethodDependence
from .slicing import BackwardSlice


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _label(method: MethodUnit, node: int) -> str:
    if node == EXIT:
        return "EXIT"
    if node == PARAM_NODE:
        return f"{method.signature_line}: PARAMS"
    stmt = method.statements[node]
    text = stmt.text if len(stmt.text) <= 60 else stmt.text[:57] + "..."
    return f"{stmt.line}: {text}"


def cfg_to_dot(method: MethodUnit, cfg: Cfg) -> str:
    lines = [f"digraph {_quote('cfg ' + method.id)} {{", "  node [shape=box];"]
    for n in cfg.all_nodes:
        lines.append(f"  n{n + 10} [label={_quote(_label(method, n))}];")
    for a, b in cfg.edges:
        lines.append(f"  n{a + 10} -> n{b + 10};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def pdg_to_dot(method: MethodUnit, dep: MethodDependence) -> str:
    lines = [f"digraph {_quote('pdg ' + method.id)} {{", "  node [shape=box];"]
    used = {PARAM_NODE} | set(dep.cfg.nodes)
    for n in sorted(used):
        lines.append(f"  n{n + 10} [label={_quote(_label(method, n))}];")
    for e in dep.data:
        lines.append(f"  n{e.src[1] + 10} -> n{e.dst[1] + 10} [label={_quote(e.var or '')}];")
    for e in dep.control:
        lines.append(f"  n{e.src[1] + 10} -> n{e.dst[1] + 10} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def slice_to_dot(sl: BackwardSlice) -> str:
    lines = ["digraph slice {", "  node [shape=box];"]
    for n, (hop, method, line) in enumerate(sl.ordered()):
        lines.append(f"  s{n} [label={_quote(f'{method}:{line} (hop {hop})')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
