"""Parsers for model responses.  All throw away anything outside the grammar."""
from __future__ import annotations

import re
from dataclasses import replace

from ..blocks import KIND_BY_MARKER, CodeBlock
from ..codemodel import LEVEL_RANK, LogStatement


class MalformedResponse(ValueError):
    code = "malformed_response"


_PAIR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")
_MARKED = re.compile(r"\b(BRANCH|TRYCATCH|LOOP|METHODDEF)\s*#\s*(\d+)\s*[:,]?\s*(?:line\s*)?(\d+)",
                     re.IGNORECASE)
_LOG_LINE = re.compile(r'^\s*`?\s*([A-Za-z]+)\s*\|\s*"(.*)"\s*\|(.*?)`?\s*$')
_EXPLANATION = re.compile(r"^\s*EXPLANATION\s*:\s*(.+?)\s*$", re.IGNORECASE | re.MULTILINE)
_ADJUST = re.compile(r"^\s*ADJUST\s*[:\-]?\s*([A-Za-z]+)\s*$", re.IGNORECASE)


def parse_position_response(text: str, blocks: list[CodeBlock], kind: str | None = None):
    """Return ``(pairs, diagnostics)`` with pairs as ``(kind, block_id, line)``.

    ``(id, line)`` pairs are read against ``kind``; ``KIND#id: line N``
    mentions carry their own kind.  Unknown blocks and out-of-span lines are
    dropped, duplicates collapsed, first occurrence order kept.
    """
    diagnostics: list[str] = []
    raw: list[tuple[str | None, int, int]] = []
    for match in _MARKED.finditer(text):
        raw.append((KIND_BY_MARKER[match.group(1).upper()], int(match.group(2)), int(match.group(3))))
    stripped = _MARKED.sub(" ", text)
    for match in _PAIR.finditer(stripped):
        raw.append((kind, int(match.group(1)), int(match.group(2))))
    if not raw:
        if text.strip() and not re.search(r"\bNONE\b|\bno\b", text, re.IGNORECASE):
            diagnostics.append("unparseable position response")
        return [], diagnostics
    index = {b.key: b for b in blocks}
    out: list[tuple[str, int, int]] = []
    for k, block_id, line in raw:
        if k is None:
            diagnostics.append(f"pair ({block_id}, {line}) has no block kind")
            continue
        block = index.get((k, block_id))
        if block is None:
            diagnostics.append(f"unknown block {k}#{block_id}")
            continue
        if not block.contains(line):
            diagnostics.append(f"line {line} outside {k}#{block_id} span {block.span}")
            continue
        if (k, block_id, line) not in out:
            out.append((k, block_id, line))
    return out, diagnostics


def split_top_level(text: str) -> list[str]:
    """Split on commas not nested in (), [], {}, <> or string literals."""
    parts, depth, cur, quote = [], 0, [], None
    prev = ""
    for ch in text:
        if quote:
            cur.append(ch)
            if ch == quote and prev != "\\":
                quote = None
        elif ch in "\"'":
            quote = ch
            cur.append(ch)
        elif ch in "([{":
            depth += 1
            cur.append(ch)
        elif ch in ")]}":
            depth -= 1
            cur.append(ch)
        elif ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
        prev = ch
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


_EMPTY_VARS = {"", "-", "none", "n/a", "(none)", "[]"}


def parse_log_response(text: str, position: LogStatement) -> LogStatement:
    """Read the last ``LEVEL | "message" | vars`` line into a copy of ``position``."""
    found = None
    for line in text.splitlines():
        match = _LOG_LINE.match(line)
        if match:
            found = match
    if found is None:
        raise MalformedResponse("no `LEVEL | \"message\" | vars` line")
    level = found.group(1).lower()
    if level == "warning":
        level = "warn"
    if level not in LEVEL_RANK:
        raise MalformedResponse(f"invalid level {found.group(1)!r}")
    message = found.group(2).replace('\\"', '"')
    var_text = found.group(3).strip()
    variables = [] if var_text.lower() in _EMPTY_VARS else split_top_level(var_text)
    holes = message.count("{}")
    if holes and holes != len(variables):
        raise MalformedResponse(f"{holes} placeholders but {len(variables)} variables")
    explanation = ""
    exp = _EXPLANATION.findall(text)
    if exp:
        explanation = exp[-1]
    return replace(position, level=level, message=message, variables=tuple(variables),
                   explanation=explanation)


def render_log_line(log: LogStatement) -> str:
    message = log.message.replace('"', '\\"')
    return f'{log.level.upper()} | "{message}" | {", ".join(log.variables)}'


def parse_refine_response(text: str) -> str | None:
    """None for keep, a level for adjust; anything else is malformed."""
    lines = [l.strip().strip("`").strip() for l in text.strip().splitlines() if l.strip()]
    if not lines:
        raise MalformedResponse("empty refine response")
    for line in reversed(lines):
        if re.fullmatch(r"KEEP\.?", line, re.IGNORECASE):
            return None
        match = _ADJUST.match(line)
        if match:
            level = match.group(1).lower()
            level = "warn" if level == "warning" else level
            if level not in LEVEL_RANK:
                raise MalformedResponse(f"invalid level {match.group(1)!r}")
            return level
    raise MalformedResponse("expected KEEP or ADJUST: <LEVEL>")
