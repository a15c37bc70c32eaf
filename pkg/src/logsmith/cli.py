"""``logsmith`` command line.

Subcommands: ``analyze``, ``strip``, ``run``, ``evaluate`` and
``mock-from-audit``.  Exit codes: 0 on success, 2 for input problems
(missing or unparseable project, bad config, schema violations), 3 when the
model provider rejects credentials or stays unavailable.

Config files for ``run`` are flat ``key = value`` text.  Recognised keys:

* gateway: ``backend`` (mock, http or heuristic), ``endpoint``, ``model``,
  ``temperature``, ``max_tokens``, ``timeout_s``, ``retries``,
  ``concurrency``, ``mock_dir``
* pipeline: ``seed``, ``hop_cap``, ``k_per_direction``, ``context_hops``,
  ``threshold``, ``template_dir``, ``skip_dedup``, ``skip_level_refine``

Relative paths are resolved against the config file's directory.  The API
key is read from the environment only.
"""
from __future__ import annotations

import argparse
import json
import shutil
import sys
from pathlib import Path

from . import __version__
from .blocks import extract_blocks
from .codemodel import NoSourcesError, parse_project
from .dependence.dot import cfg_to_dot, pdg_to_dot
from .dependence.pdg import analyze_method
from .groundtruth import strip_logs
from .llm import (AuthError, ConfigError, Gateway, LlmConfig, ProviderUnavailable,
                  mock_dir_from_audit, read_config_file)
from .metrics import SETTINGS, evaluate, logs_from_records
from .offline import responder_backend
from .pipeline import PipelineConfig, run_pipeline, write_augmented
from .records import SchemaError, read_log_records, write_jsonl
from .refinement import DedupConfig
from .scope import collect_candidates

EXIT_OK, EXIT_INPUT, EXIT_PROVIDER = 0, 2, 3
_TRUE = {"1", "true", "yes", "on"}


class InputError(Exception):
    pass


def _load_model(root: str):
    if not Path(root).is_dir():
        raise InputError(f"not a directory: {root}")
    try:
        return parse_project(root)
    except NoSourcesError as exc:
        raise InputError(f"{root}: {exc}") from None


def _copy_with(root: Path, out: Path, files: dict[str, str], changed) -> None:
    if out.resolve() == root.resolve():
        raise InputError("--out must differ from the input project")
    if out.exists():
        shutil.rmtree(out)
    shutil.copytree(root, out)
    for rel in sorted(changed):
        (out / rel).write_bytes(files[rel].encode("utf-8"))


def _diagnostics(path: Path, diags) -> None:
    write_jsonl(path, [d.to_record() for d in diags])


# ------------------------------------------------------------------ commands


def cmd_analyze(args) -> int:
    model = _load_model(args.root)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    blocks, candidates = [], []
    methods = sorted(model.iter_methods(), key=lambda m: (m.file, m.body_span[0], m.id))
    for m in methods:
        for b in extract_blocks(m):
            blocks.append({"file": m.file, "method": m.id, **b.to_record()})
        candidates.append(collect_candidates(model, m).to_record())
    write_jsonl(out / "blocks.jsonl", blocks)
    write_jsonl(out / "candidates.jsonl", candidates)
    _diagnostics(out / "diagnostics.jsonl", model.diagnostics)
    if args.dot_pdg:
        dot_dir = out / "dot"
        dot_dir.mkdir(exist_ok=True)
        for k, m in enumerate(methods, 1):
            if not m.has_body:
                continue
            dep = analyze_method(m)
            (dot_dir / f"{k:04d}.cfg.dot").write_text(cfg_to_dot(m, dep.cfg), "utf-8")
            (dot_dir / f"{k:04d}.pdg.dot").write_text(pdg_to_dot(m, dep), "utf-8")
    print(f"{len(model.sources)} files, {len(model.classes)} classes, {len(methods)} methods, "
          f"{len(blocks)} blocks, {len(model.diagnostics)} diagnostics")
    return EXIT_OK


def cmd_strip(args) -> int:
    model = _load_model(args.root)
    data = strip_logs(model, args.mode, args.seed)
    if not data.ground_truth:
        raise InputError(f"{args.root}: no removable log statements found")
    out = Path(args.out)
    changed = [p for p, text in data.files.items() if text != model.sources[p].text]
    _copy_with(Path(args.root), out / "project", data.files, changed)
    write_jsonl(out / "ground_truth.jsonl", [e.to_record() for e in data.ground_truth])
    _diagnostics(out / "diagnostics.jsonl", data.diagnostics)
    print(f"stripped {len(data.ground_truth)} logs from {len(changed)} files")
    return EXIT_OK


def _run_config(args) -> tuple[LlmConfig, PipelineConfig]:
    values: dict[str, str] = {}
    base = Path.cwd()
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise InputError(f"config file not found: {path}")
        values = read_config_file(path)
        base = path.parent
    try:
        llm = LlmConfig.from_mapping(values, base)
        template_dir = values.get("template_dir")
        if template_dir and not Path(template_dir).is_absolute():
            template_dir = str((base / template_dir).resolve())
        pipe = PipelineConfig(
            seed=int(values.get("seed", 0)) if args.seed is None else args.seed,
            hop_cap=int(values.get("hop_cap", PipelineConfig.hop_cap)),
            k_per_direction=int(values.get("k_per_direction", PipelineConfig.k_per_direction)),
            context_hops=int(values.get("context_hops", PipelineConfig.context_hops)),
            skip_refine=args.skip_level_refine or values.get("skip_level_refine", "").lower() in _TRUE,
            skip_dedup=args.skip_dedup or values.get("skip_dedup", "").lower() in _TRUE,
            dedup=DedupConfig(threshold=float(values.get("threshold", DedupConfig.threshold))),
            template_dir=template_dir)
    except ValueError as exc:
        raise InputError(f"bad config: {exc}") from None
    return llm, pipe


def cmd_run(args) -> int:
    llm_cfg, pipe_cfg = _run_config(args)
    model = _load_model(args.root)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    backend = responder_backend(model) if llm_cfg.backend == "heuristic" else None
    try:
        gateway = Gateway(llm_cfg, backend, out / "audit.jsonl")
    except ConfigError as exc:
        raise InputError(str(exc)) from None
    try:
        result = run_pipeline(args.root, gateway, pipe_cfg, model=model)
    finally:
        gateway.close()
    write_augmented(args.root, result, out / "project")
    write_jsonl(out / "predicted_logs.jsonl", result.report)
    write_jsonl(out / "dedup_report.jsonl", result.dedup_report)
    _diagnostics(out / "diagnostics.jsonl", result.diagnostics)
    print(f"{len(result.report)} logs inserted, {len(result.dedup_report)} removed by dedup")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    try:
        predicted = logs_from_records(read_log_records(args.predicted))
        truth = logs_from_records(read_log_records(args.truth))
    except (OSError, SchemaError, ValueError, KeyError) as exc:
        raise InputError(str(exc)) from None
    report = evaluate(predicted, truth, args.setting, macro=args.macro)
    text = json.dumps(report.to_record(), sort_keys=True, indent=2)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n", "utf-8")
    if args.csv:
        report.write_csv(args.csv)
    return EXIT_OK


def cmd_mock_from_audit(args) -> int:
    if not Path(args.audit).is_file():
        raise InputError(f"audit file not found: {args.audit}")
    count = mock_dir_from_audit(args.audit, args.out)
    print(f"{count} responses written to {args.out}")
    return EXIT_OK


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logsmith", description="Suggest log statements for Java code.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="dump blocks and logging candidates")
    p.add_argument("root")
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p.add_argument("--dot-pdg", action="store_true", help="also write CFG and PDG DOT files")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("strip", help="remove logs and record them as ground truth")
    p.add_argument("root")
    p.add_argument("--mode", choices=("one-random", "all"), default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_strip)

    p = sub.add_parser("run", help="predict, generate, refine, insert and deduplicate logs")
    p.add_argument("root")
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--skip-dedup", action="store_true")
    p.add_argument("--skip-level-refine", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("evaluate", help="score predicted logs against ground truth")
    p.add_argument("--predicted", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--setting", choices=SETTINGS, default="multi")
    p.add_argument("--macro", action="store_true", help="macro-average variable scores")
    p.add_argument("--out", help="also write the report JSON here")
    p.add_argument("--csv", help="write a per-method CSV breakdown here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("mock-from-audit", help="turn an audit log into a mock response directory")
    p.add_argument("audit")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mock_from_audit)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"logsmith: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AuthError, ProviderUnavailable) as exc:
        print(f"logsmith: provider error ({exc.code}): {exc}", file=sys.stderr)
        return EXIT_PROVIDER


if __name__ == "__main__":
    sys.exit(main())
