"""Developer-written logs as ground truth, and log-stripped datasets."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping

from .blocks import extract_blocks, innermost_block
from .codemodel import CodeModel, Diagnostic, LogStatement, MethodUnit, Statement

MODES = ("one_random", "all")


def _log_statement(method: MethodUnit, stmt: Statement, blocks) -> LogStatement:
    block = innermost_block(blocks, stmt.line)
    return LogStatement(
        file=method.file, anchor_line=stmt.line, line=stmt.line, level=stmt.log.level,
        message=stmt.log.message, variables=stmt.log.variables, block=block.key,
        method=method.id, flags=stmt.log.flags)


def method_logs(method: MethodUnit) -> list[tuple[Statement, LogStatement]]:
    blocks = extract_blocks(method)
    return [(s, _log_statement(method, s, blocks))
            for s in sorted(method.statements, key=lambda s: s.line) if s.log is not None]


def extract_ground_truth_logs(model: CodeModel) -> list[LogStatement]:
    """Every recognised logger call in every method, sorted by file and line."""
    out: list[LogStatement] = []
    for method in model.iter_methods():
        out.extend(log for _, log in method_logs(method))
    return sorted(out, key=lambda l: (l.file, l.line, l.method))


@dataclass(frozen=True)
class GroundTruthEntry:
    log: LogStatement  # anchor_line in stripped-file coordinates, line in original coordinates
    source: str  # exact removed text, line endings included

    def to_record(self) -> dict:
        rec = self.log.to_record()
        rec["line"] = self.log.line
        rec["anchor_line"] = self.log.anchor_line
        rec["source"] = self.source
        return rec

    @classmethod
    def from_record(cls, rec: Mapping) -> "GroundTruthEntry":
        return cls(LogStatement.from_record(rec), rec.get("source", ""))


@dataclass
class StrippedDataset:
    files: dict[str, str]
    ground_truth: list[GroundTruthEntry]
    diagnostics: list[Diagnostic] = field(default_factory=list)
    excluded_methods: list[str] = field(default_factory=list)


def _removable(stmt: Statement) -> bool:
    return stmt.in_block and stmt.whole_lines


def strip_logs(model: CodeModel, mode: str = "all", seed: int = 0) -> StrippedDataset:
    """Remove logs from every method and record them as ground truth.

    ``all`` removes every removable log; ``one_random`` removes exactly one per
    method, picked by an RNG seeded from ``seed`` and the method id, so the
    choice for one method does not depend on the rest of the project.  Logs
    that cannot be deleted as whole lines without breaking the syntax (for
    example the lone statement of a braceless ``if``) are left in place with a
    diagnostic.
    """
    mode = mode.replace("-", "_")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    removals: dict[str, list[tuple[Statement, LogStatement]]] = {}
    diagnostics: list[Diagnostic] = []
    excluded: list[str] = []
    for method in model.iter_methods():
        pairs = method_logs(method)
        eligible = []
        for stmt, log in pairs:
            if _removable(stmt):
                eligible.append((stmt, log))
            else:
                diagnostics.append(Diagnostic(method.file, "log shares its lines or has no "
                                              "enclosing block; kept", stmt.line))
        if not eligible:
            excluded.append(method.id)
            continue
        if mode == "one_random":
            rng = random.Random(f"{seed}:{method.id}")
            eligible = [rng.choice(eligible)]
        removals.setdefault(method.file, []).extend(eligible)
    files: dict[str, str] = {}
    truth: list[GroundTruthEntry] = []
    for path, unit in model.sources.items():
        lines = unit.lines
        dropped: set[int] = set()
        chosen = sorted(removals.get(path, []), key=lambda p: p[0].span[0])
        for stmt, _ in chosen:
            dropped.update(range(stmt.span[0], stmt.span[1] + 1))
        prefix = [0] * (len(lines) + 1)  # prefix[k] = kept lines among 1..k
        for k in range(1, len(lines) + 1):
            prefix[k] = prefix[k - 1] + (k not in dropped)
        for stmt, log in chosen:
            anchor = prefix[stmt.span[0] - 1]
            source = "".join(lines[stmt.span[0] - 1:stmt.span[1]])
            truth.append(GroundTruthEntry(
                LogStatement(file=path, anchor_line=anchor, line=stmt.span[0], level=log.level,
                             message=log.message, variables=log.variables, block=log.block,
                             method=log.method, flags=log.flags), source))
        files[path] = "".join(l for k, l in enumerate(lines, 1) if k not in dropped)
    truth.sort(key=lambda e: (e.log.file, e.log.line))
    return StrippedDataset(files, truth, diagnostics, excluded)


def restore_logs(files: Mapping[str, str], truth: list[GroundTruthEntry]) -> dict[str, str]:
    """Re-insert recorded source text after each entry's anchor line."""
    out = dict(files)
    by_file: dict[str, list[GroundTruthEntry]] = {}
    for entry in truth:
        by_file.setdefault(entry.log.file, []).append(entry)
    for path, entries in by_file.items():
        lines = out[path].splitlines(keepends=True)
        for entry in sorted(entries, key=lambda e: (e.log.anchor_line, e.log.line), reverse=True):
            lines.insert(entry.log.anchor_line, entry.source)
        out[path] = "".join(lines)
    return out
