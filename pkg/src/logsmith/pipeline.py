"""End-to-end flow: predict positions, generate logs, refine, insert, deduplicate.

Model queries of one phase are issued together through the gateway (which
bounds concurrency), so each phase is a barrier.  Insertion and
deduplication run single-threaded over the whole project afterwards.
"""
from __future__ import annotations

import re
import shutil
from dataclasses import dataclass, field, replace
from pathlib import Path

from .blocks import CodeBlock, annotate_method, blocks_of_kind, extract_blocks, find_block
from .codemodel import CodeModel, Diagnostic, LogStatement, MethodUnit, parse_project, parse_sources
from .dependence.callgraph import call_graph
from .dependence.slicing import DEFAULT_HOP_CAP, Slicer, select_slice_entry
from .insertion import insert_logs
from .llm import AuthError, Gateway, GatewayError, ProviderUnavailable
from .prompting import (InterprocContext, MalformedResponse, PromptBundle, build_generation_prompt,
                        build_interproc_context, build_level_refine_prompt, build_position_prompt,
                        parse_log_response, parse_position_response)
from .refinement import DedupConfig, Deduplicator, apply_refine_response
from .scope import candidate_expressions, collect_candidates

KIND_ORDER = ("Branch", "TryCatch", "Loop", "MethodDef")
RETRY_NOTE = ("\n\nYour previous answer could not be read ({reason}). Answer again and end with "
              "the two required lines, the last one being LEVEL | \"message\" | variables.")
_LITERAL = re.compile(r"""^(?:-?\d[\w.]*|"(?:[^"\\]|\\.)*"|'(?:[^'\\]|\\.)*'|true|false|null)$""")
_ROOT = re.compile(r"\s*(?:this\s*\.\s*)?([A-Za-z_$][\w$]*)")


@dataclass
class PipelineConfig:
    seed: int = 0
    hop_cap: int = DEFAULT_HOP_CAP
    k_per_direction: int = 3
    context_hops: int = 2
    skip_refine: bool = False
    skip_dedup: bool = False
    dedup: DedupConfig = field(default_factory=DedupConfig)
    template_dir: str | None = None


@dataclass(frozen=True)
class Position:
    method: str
    block: CodeBlock
    line: int


@dataclass
class PipelineResult:
    files: dict[str, str]  # augmented sources, path relative to the project root
    report: list[dict]  # surviving logs, LogStatement records plus phase_diagnostics
    dedup_report: list[dict]
    diagnostics: list[Diagnostic]
    logs: list[LogStatement]
    changed: set[str] = field(default_factory=set)  # files that received lines


def _raise_fatal(results):
    for r in results:
        if isinstance(r, (AuthError, ProviderUnavailable)):
            raise r
    return results


class Pipeline:
    def __init__(self, model: CodeModel, gateway: Gateway, cfg: PipelineConfig | None = None):
        self.model = model
        self.gateway = gateway
        self.cfg = cfg or PipelineConfig()
        self.graph = call_graph(model)
        self.slicer = Slicer(model, self.graph)
        self.diagnostics: list[Diagnostic] = []
        self._ctx: dict[str, InterprocContext] = {}
        self._blocks: dict[str, list[CodeBlock]] = {}

    def _note(self, method: MethodUnit, message: str, line: int | None = None) -> None:
        self.diagnostics.append(Diagnostic(method.file, f"{method.id}: {message}", line))

    def context(self, method: MethodUnit) -> InterprocContext:
        if method.id not in self._ctx:
            self._ctx[method.id] = build_interproc_context(
                self.model, method, self.cfg.seed, self.graph,
                self.cfg.k_per_direction, self.cfg.context_hops)
        return self._ctx[method.id]

    def blocks(self, method: MethodUnit) -> list[CodeBlock]:
        if method.id not in self._blocks:
            self._blocks[method.id] = extract_blocks(method)
        return self._blocks[method.id]

    # --------------------------------------------------------------- positions
    def position_jobs(self, method: MethodUnit) -> list[tuple[tuple, PromptBundle]]:
        jobs = []
        blocks = self.blocks(method)
        for kind in KIND_ORDER:
            if not blocks_of_kind(blocks, kind):
                continue
            annotated = annotate_method(method, blocks, kind)
            bundle = build_position_prompt(annotated, kind, self.context(method), method,
                                           self.cfg.template_dir)
            jobs.append(((0, method.id, KIND_ORDER.index(kind)), bundle))
        return jobs

    def collect_positions(self, method: MethodUnit, jobs, results) -> list[Position]:
        blocks = self.blocks(method)
        by_line: dict[int, CodeBlock] = {}
        failures = 0
        for (key, bundle), text in zip(jobs, results):
            if isinstance(text, Exception):
                failures += 1
                self._note(method, f"position query for {bundle.block_kind} failed: {text}")
                continue
            pairs, notes = parse_position_response(text, blocks, bundle.block_kind)
            for n in notes:
                self._note(method, f"position ({bundle.block_kind}): {n}")
            for kind, block_id, line in pairs:
                block = find_block(blocks, (kind, block_id))
                held = by_line.get(line)
                # one position per line; the innermost (shortest) block wins
                if held is None or (block.span[1] - block.span[0]) < (held.span[1] - held.span[0]):
                    by_line[line] = block
        if jobs and failures == len(jobs):
            self._note(method, "all position queries failed; no positions")
        return [Position(method.id, by_line[l], l) for l in sorted(by_line)]

    def predict_positions(self, methods: list[MethodUnit]) -> list[Position]:
        per_method = [(m, self.position_jobs(m)) for m in methods]
        flat = [job for _, jobs in per_method for job in jobs]
        results = iter(_raise_fatal(self.gateway.complete_many(flat)))
        out = []
        for method, jobs in per_method:
            texts = [next(results) for _ in jobs]
            out.extend(self.collect_positions(method, jobs, texts))
        return out

    # -------------------------------------------------------------- generation
    def generation_job(self, pos: Position):
        method = self.model.methods[pos.method]
        entry = select_slice_entry(method, pos.line, pos.block)
        sl = None
        if not entry.degenerate:
            sl = self.slicer.slice((method.id, entry.line), self.cfg.hop_cap)
        cs = collect_candidates(self.model, method)
        bundle = build_generation_prompt(self.model, method, pos.line, pos.block, sl, cs,
                                         self.context(method), self.cfg.template_dir)
        seed = LogStatement(method.file, pos.line, "info", "", (), pos.block.key, method.id)
        return bundle, seed, cs, entry

    def generate_logs(self, positions: list[Position]) -> list[tuple[LogStatement, list[str]]]:
        prepared = [self.generation_job(p) for p in positions]
        jobs = [((1, p.method, p.line, 0), b) for p, (b, _, _, _) in zip(positions, prepared)]
        first = _raise_fatal(self.gateway.complete_many(jobs))
        parsed: list = [None] * len(positions)
        retry = []
        for i, (text, (bundle, seed, _, _)) in enumerate(zip(first, prepared)):
            try:
                if isinstance(text, Exception):
                    raise MalformedResponse(str(text))
                parsed[i] = parse_log_response(text, seed)
            except MalformedResponse as exc:
                again = replace(bundle, user_text=bundle.user_text + RETRY_NOTE.format(reason=exc))
                retry.append((i, ((1, positions[i].method, positions[i].line, 1), again)))
        second = _raise_fatal(self.gateway.complete_many([job for _, job in retry]))
        notes: dict[int, list[str]] = {}
        for (i, _), text in zip(retry, second):
            pos = positions[i]
            method = self.model.methods[pos.method]
            try:
                if isinstance(text, Exception):
                    raise MalformedResponse(str(text))
                parsed[i] = parse_log_response(text, prepared[i][1])
                notes[i] = ["generation: retried after malformed response"]
            except MalformedResponse as exc:
                self._note(method, f"generation skipped after retry: {exc}", pos.line)
        out = []
        for i, log in enumerate(parsed):
            if log is None:
                continue
            _, _, cs, entry = prepared[i]
            diag = list(notes.get(i, []))
            if entry.degenerate:
                diag.append("generation: context limited (no slice entry)")
            allowed = candidate_expressions(cs) | {"this"}
            stray = [v for v in log.variables if not _allowed(v, allowed)]
            if stray:
                log = replace(log, flags=tuple(sorted(set(log.flags) | {"unlisted_variable"})))
                diag.append("generation: variables outside candidates: " + ", ".join(stray))
            out.append((log, diag))
        return out

    # -------------------------------------------------------------- refinement
    def refine(self, generated: list[tuple[LogStatement, list[str]]]):
        jobs = []
        for log, _ in generated:
            method = self.model.methods[log.method]
            block = find_block(self.blocks(method), log.block)
            jobs.append(((2, log.method, log.anchor_line),
                         build_level_refine_prompt(log, method, block, self.cfg.template_dir)))
        results = _raise_fatal(self.gateway.complete_many(jobs))
        out = []
        for (log, diag), text in zip(generated, results):
            if isinstance(text, GatewayError):
                out.append((log, diag + [f"refine: kept {log.level} ({text})"]))
                continue
            new, notes = apply_refine_response(log, text)
            out.append((new, diag + notes))
        return out

    # --------------------------------------------------------------------- run
    def run(self) -> PipelineResult:
        methods = sorted((m for m in self.model.iter_methods() if m.has_body), key=lambda m: m.id)
        positions = self.predict_positions(methods)
        generated = self.generate_logs(positions)
        if not self.cfg.skip_refine:
            generated = self.refine(generated)
        kept: list[tuple[LogStatement, list[str]]] = []
        anchors: set[tuple[str, int]] = set()
        for log, diag in generated:
            if (log.file, log.anchor_line) in anchors:
                self._note(self.model.methods[log.method],
                           "second log at the same anchor dropped", log.anchor_line)
                continue
            anchors.add((log.file, log.anchor_line))
            kept.append((log, diag))
        first = insert_logs(self.model, [l for l, _ in kept])
        self.diagnostics.extend(first.diagnostics)
        diag_of = {id(l): d for l, d in kept}
        dedup_records: list[dict] = []
        survivors = list(range(len(first.placed)))
        if not self.cfg.skip_dedup and first.placed:
            augmented = parse_sources(first.files, require=False)
            lines = [(p.log.file, p.line) for p in first.placed]
            result = Deduplicator(augmented, self.cfg.dedup).run(lines)
            survivors = result.survivors
            anchor_of = {(p.log.file, p.line): p.log.anchor_line for p in first.placed}
            for removal in result.removed:
                placed = first.placed[removal.site.ref]
                rec = placed.log.to_record()
                rec["line"] = placed.line
                counterpart = dict(removal.counterpart)
                if counterpart.get("predicted"):
                    counterpart["anchor_line"] = anchor_of[(counterpart["file"], counterpart["line"])]
                dedup_records.append({"removed_log": rec, "rule": removal.rule,
                                      "counterpart": counterpart})
        chosen = [first.placed[i].log for i in survivors]
        final = insert_logs(self.model, chosen)
        report = []
        logs = []
        for p in final.placed:
            log = replace(p.log, line=p.line)
            logs.append(log)
            rec = log.to_record()
            rec["phase_diagnostics"] = list(diag_of.get(id(p.log), []))
            report.append(rec)
        changed = {path for path, lines in final.inserted.items() if lines}
        return PipelineResult(final.files, report, dedup_records, self.diagnostics, logs, changed)


def _allowed(expr: str, names: set[str]) -> bool:
    expr = expr.strip()
    if _LITERAL.match(expr):
        return True
    match = _ROOT.match(expr)
    return bool(match) and match.group(1) in names


def predict_positions(model: CodeModel, method: MethodUnit, gateway: Gateway,
                      cfg: PipelineConfig | None = None) -> list[tuple[CodeBlock, int]]:
    """Validated positions of one method, one per line, ascending."""
    return [(p.block, p.line) for p in Pipeline(model, gateway, cfg).predict_positions([method])]


def generate_logs(model: CodeModel, positions: list[tuple[str, CodeBlock, int]], gateway: Gateway,
                  cfg: PipelineConfig | None = None) -> list[LogStatement]:
    """One log per position (method id, block, line) with a well-formed answer."""
    pipe = Pipeline(model, gateway, cfg)
    return [log for log, _ in pipe.generate_logs([Position(m, b, l) for m, b, l in positions])]


def run_pipeline(root: str | Path, gateway: Gateway, cfg: PipelineConfig | None = None,
                 model: CodeModel | None = None) -> PipelineResult:
    model = model or parse_project(root)
    return Pipeline(model, gateway, cfg).run()


def write_augmented(root: str | Path, result: PipelineResult, out: str | Path) -> None:
    """Copy ``root`` to ``out``, then overwrite the files that received logs."""
    root, out = Path(root).resolve(), Path(out).resolve()
    if out == root:
        raise ValueError("output directory must differ from the input project")
    if out.exists():
        shutil.rmtree(out)
    shutil.copytree(root, out)
    for rel in sorted(result.changed):
        (out / rel).write_bytes(result.files[rel].encode("utf-8"))
