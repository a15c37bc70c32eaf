"""Whole-corpus checks shared by the unit tests and the acceptance suite.

Each function returns a list of human-readable failures; an empty list means
the property held everywhere it was tried.
"""
from __future__ import annotations

import random
from pathlib import Path

import oracles as O
from blockgold import ROOT as BLOCK_ROOT, expected_spans

from logsmith import parse_project
from logsmith.blocks import extract_blocks
from logsmith.codemodel import LogStatement, parse_sources
from logsmith.dependence import EXIT, Cfg, Slicer, post_dominators
from logsmith.groundtruth import restore_logs, strip_logs
from logsmith.insertion import insert_logs, remove_lines

FIXTURES = Path(__file__).resolve().parent / "fixtures"
CORPUS = ("sample", "figure1", "blocks", "insertion")


def slicer_oracle(programs: int = 200, caps=(1, 3, 7)) -> list[str]:
    failures = []
    for seed in range(programs):
        rng = random.Random(seed)
        methods = O.ProgramGenerator(rng, 30).program()
        model = parse_sources({"r/P.java": O.render(methods)})
        slicer = Slicer(model)
        edges = O.dependence_edges(methods)
        for cap in caps:
            m = rng.choice(methods)
            s = rng.choice(O._flatten(m.body, []))
            got = dict(slicer.slice((O.method_id(m), s.line), cap).hops)
            want = O.closure_by_line(methods, O.capped_closure(edges, (m.name, s.line), cap))
            if got != want:
                failures.append(f"program {seed}, cap {cap}, line {s.line}")
    return failures


def to_cfg(nodes, succ) -> Cfg:
    fix = lambda v: EXIT if v == O.EXIT else v
    return Cfg(method="x", entry=0, exit=EXIT, nodes=tuple(nodes),
               succ={v: tuple(fix(w) for w in succ[v]) for v in nodes},
               lines={v: v + 1 for v in nodes}, kinds={v: "expr" for v in nodes})


def post_dominator_oracle(graphs: int = 100) -> list[str]:
    failures = []
    for seed in range(graphs):
        nodes, succ = O.random_cfg(random.Random(seed), 8)
        want = {v: frozenset(EXIT if d == O.EXIT else d for d in ds)
                for v, ds in O.post_dominators_by_paths(nodes, succ).items()}
        got = post_dominators(to_cfg(nodes, succ))
        if {v: got[v] for v in nodes} != want:
            failures.append(f"cfg {seed}: {succ}")
    return failures


def block_golden() -> tuple[int, list[str]]:
    model = parse_project(BLOCK_ROOT)
    expected = expected_spans(model)
    failures = []
    for mid, spans in sorted(expected.items()):
        got = {b.key: b.span for b in extract_blocks(model.methods[mid])}
        if got != spans:
            failures.append(f"{mid}: expected {spans}, got {got}")
    return len(expected), failures


def _anchor_logs(model) -> list[LogStatement]:
    """One log after every statement line of every method, plus the body's first line."""
    logs = []
    for m in model.iter_methods():
        if not m.has_body:
            continue
        anchors = {m.body_span[0]} | {s.span[1] for s in m.statements}
        for a in sorted(anchors):
            if a < m.body_span[1]:
                logs.append(LogStatement(m.file, a, "info", f"at {a} {{}}", ("1",),
                                         ("MethodDef", 1), m.id))
    return logs


def insertion_safety() -> tuple[int, list[str]]:
    """Insert a log at every anchor of the corpus, one anchor at a time."""
    failures = []
    total = 0
    for name in CORPUS:
        model = parse_project(FIXTURES / name)
        originals = {p: u.text for p, u in model.sources.items()}
        for log in _anchor_logs(model):
            total += 1
            res = insert_logs(model, [log])
            where = f"{name}/{log.file}:{log.anchor_line}"
            if res.diagnostics:
                continue  # refusing an anchor is safe; it leaves the file alone
            if remove_lines(res.files, res.inserted) != originals:
                failures.append(f"{where}: remove after insert is not the identity")
            new = res.files[log.file].splitlines(keepends=True)
            old = originals[log.file].splitlines(keepends=True)
            kept = [l for k, l in enumerate(new, 1) if k not in set(res.inserted[log.file])]
            if kept != old:
                failures.append(f"{where}: untouched lines changed")
            try:
                again = parse_sources({log.file: res.files[log.file]})
            except Exception as exc:  # noqa: BLE001 - any parser failure is a finding
                failures.append(f"{where}: re-parse raised {exc}")
                continue
            if again.diagnostics:
                failures.append(f"{where}: re-parse diagnostics {again.diagnostics}")
    return total, failures


def strip_restore_identity() -> tuple[int, list[str]]:
    failures, count = [], 0
    for name in CORPUS:
        model = parse_project(FIXTURES / name)
        data = strip_logs(model, "all", 0)
        count += len(data.ground_truth)
        restored = restore_logs(data.files, data.ground_truth)
        for path, unit in model.sources.items():
            if restored[path].encode("utf-8") != unit.text.encode("utf-8"):
                failures.append(f"{name}/{path}")
    return count, failures
