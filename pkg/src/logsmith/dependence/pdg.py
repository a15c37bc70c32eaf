"""Reaching definitions and statement-level data/control dependence."""
from __future__ import annotations

from dataclasses import dataclass

from ..codemodel import MethodUnit, PARAM_NODE
from .cfg import Cfg, EXIT, build_cfg, control_dependencies, post_dominators

Node = tuple[str, int]  # (method id, statement index or PARAM_NODE)
EDGE_KINDS = ("data", "control", "call_param", "call_return")


@dataclass(frozen=True, order=True)
class PdgEdge:
    """Dependence edge pointing from the dependent node to what it depends on."""

    src: Node
    dst: Node
    kind: str
    var: str | None = None

    def __post_init__(self):
        if self.kind not in EDGE_KINDS:
            raise ValueError(f"bad edge kind {self.kind!r}")


Defs = dict[str, frozenset[int]]


def reaching_definitions(method: MethodUnit, cfg: Cfg | None = None) -> dict[int, Defs]:
    """For each CFG node, the definitions reaching its entry, by variable name.

    Parameters are defined by the synthetic PARAM node before the entry.  A
    definition of name ``x`` kills every other definition of exactly ``x``.
    A weak definition (a mutator-style call such as ``items.add(v)`` on a local
    receiver) adds itself without killing earlier definitions.
    """
    cfg = cfg or build_cfg(method)
    preds = cfg.preds()
    seed: Defs = {p.name: frozenset({PARAM_NODE}) for p in method.params}
    gen = {n: method.statements[n].defs for n in cfg.nodes}
    weak = {n: method.statements[n].weak_defs - gen[n] for n in cfg.nodes}
    # reaching sets carried as dict name -> frozenset of defining nodes
    in_sets: dict[int, Defs] = {n: {} for n in cfg.nodes}
    out_sets: dict[int, Defs] = {n: {} for n in cfg.nodes}
    order = list(cfg.nodes)
    changed = True
    while changed:
        changed = False
        for n in order:
            merged: dict[str, set[int]] = {}
            sources = [out_sets[p] for p in preds[n] if p != EXIT]
            if n == cfg.entry:
                sources.append(seed)
            for defs in sources:
                for name, nodes in defs.items():
                    merged.setdefault(name, set()).update(nodes)
            new_in = {k: frozenset(v) for k, v in merged.items()}
            new_out = dict(new_in)
            for name in weak[n]:
                new_out[name] = new_out.get(name, frozenset()) | {n}
            for name in gen[n]:
                new_out[name] = frozenset({n})
            if new_in != in_sets[n] or new_out != out_sets[n]:
                in_sets[n], out_sets[n] = new_in, new_out
                changed = True
    return in_sets


def data_dependencies(method: MethodUnit, cfg: Cfg | None = None) -> list[PdgEdge]:
    """Edges use -> reaching definition, one per (use node, def node, variable)."""
    cfg = cfg or build_cfg(method)
    rd = reaching_definitions(method, cfg)
    edges = []
    for n in cfg.nodes:
        for name in sorted(method.statements[n].uses):
            for d in sorted(rd[n].get(name, ())):
                if d != n:
                    edges.append(PdgEdge((method.id, n), (method.id, d), "data", name))
    return edges


@dataclass(frozen=True)
class MethodDependence:
    cfg: Cfg
    pdom: dict[int, frozenset[int]]
    reaching: dict[int, Defs]
    data: tuple[PdgEdge, ...]
    control: tuple[PdgEdge, ...]

    def edges_from(self, index: int) -> list[PdgEdge]:
        return [e for e in self.data + self.control if e.src[1] == index]


def analyze_method(method: MethodUnit) -> MethodDependence:
    cfg = build_cfg(method)
    pdom = post_dominators(cfg)
    return MethodDependence(cfg, pdom, reaching_definitions(method, cfg),
                            tuple(data_dependencies(method, cfg)),
                            tuple(control_dependencies(cfg, pdom)))

