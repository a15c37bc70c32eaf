"""Read hand-written block labels out of the golden Java sources.

A block opens with ``// [Kind#n`` on its first line and closes with
``Kind#n]`` on its last line, numbered per method in source order.  A label
belongs to the innermost method whose body holds the opening line.
"""
from __future__ import annotations

import re
from pathlib import Path

OPEN = re.compile(r"\[(\w+)#(\d+)")
CLOSE = re.compile(r"(\w+)#(\d+)\]")
ROOT = Path(__file__).resolve().parent / "fixtures" / "blocks"


def _innermost(methods, line):
    inside = [m for m in methods if m.body_span[0] <= line <= m.body_span[1]]
    return min(inside, key=lambda m: m.body_span[1] - m.body_span[0]) if inside else None


def expected_spans(model) -> dict[str, dict[tuple[str, int], tuple[int, int]]]:
    """method id -> {(kind, id): (start, end)} taken from the labels."""
    out: dict[str, dict] = {}
    for rel, src in sorted(model.sources.items()):
        methods = [m for m in model.iter_methods() if m.file == rel]
        pending: list[tuple[str, str, int, int]] = []
        for no, text in enumerate(src.text.splitlines(), 1):
            comment = text.split("//", 1)[1] if "//" in text else ""
            for kind, n in OPEN.findall(comment):
                pending.append((_innermost(methods, no).id, kind, int(n), no))
            for kind, n in CLOSE.findall(comment):
                # the most recently opened label of that name closes first
                k = max(i for i, p in enumerate(pending) if p[1:3] == (kind, int(n)))
                mid, _, _, start = pending.pop(k)
                out.setdefault(mid, {})[(kind, int(n))] = (start, no)
        for m in methods:
            out.setdefault(m.id, {})
    return out

