"""Regenerate the frozen test goldens and the recorded mock responses.

Run from the repository root after an intentional behaviour change:

    python tools/regen_goldens.py

It rewrites:

* tests/fixtures/sample_stripped/          the sample project with all logs removed
* tests/golden/sample_ground_truth.jsonl   the logs that were removed
* tests/fixtures/mock_sample/              responses recorded from the offline responder
* tests/golden/run_sample/                 outputs of `logsmith run` on the stripped project
* tests/golden/analyze_sample/blocks.jsonl `logsmith analyze` on the sample project
* tests/golden/figure1_slice.json          the backward slice from the `result == null` line

Review the diff before committing: goldens are only as good as the run that
produced them.
"""
from __future__ import annotations

import json
import shutil
import sys
import tempfile
from pathlib import Path

from logsmith import parse_project
from logsmith.cli import main
from logsmith.dependence import Slicer

ROOT = Path(__file__).resolve().parents[1]
FIX = ROOT / "tests" / "fixtures"
GOLD = ROOT / "tests" / "golden"
FIGURE1_TARGET = ("demo.ingest.IngestService.handle(String,String)", 35)


def _run(argv: list[str]) -> None:
    code = main(argv)
    if code != 0:
        sys.exit(f"command failed ({code}): logsmith {' '.join(argv)}")


def stripped_sample() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        _run(["strip", str(FIX / "sample"), "--mode", "all", "--seed", "0", "--out", tmp])
        shutil.rmtree(FIX / "sample_stripped", ignore_errors=True)
        shutil.copytree(Path(tmp) / "project", FIX / "sample_stripped")
        shutil.copy(Path(tmp) / "ground_truth.jsonl", GOLD / "sample_ground_truth.jsonl")


def mock_responses() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        cfg = Path(tmp) / "heuristic.cfg"
        cfg.write_text("backend = heuristic\n", "utf-8")
        _run(["run", str(FIX / "sample_stripped"), "--config", str(cfg), "--out", f"{tmp}/out"])
        shutil.rmtree(FIX / "mock_sample", ignore_errors=True)
        _run(["mock-from-audit", f"{tmp}/out/audit.jsonl", "--out", str(FIX / "mock_sample")])


def run_golden() -> None:
    out = GOLD / "run_sample"
    shutil.rmtree(out, ignore_errors=True)
    _run(["run", str(FIX / "sample_stripped"), "--config", str(FIX / "mock_sample.cfg"),
          "--out", str(out)])


def analyze_golden() -> None:
    out = GOLD / "analyze_sample"
    shutil.rmtree(out, ignore_errors=True)
    _run(["analyze", str(FIX / "sample"), "--out", str(out)])
    for extra in ("candidates.jsonl", "diagnostics.jsonl"):
        (out / extra).unlink()


def figure1_golden() -> None:
    model = parse_project(FIX / "figure1")
    sl = Slicer(model).slice(FIGURE1_TARGET)
    rec = {"entry": list(sl.entry), "hop_cap": sl.hop_cap,
           "members": [{"hop": h, "method": m, "line": l} for h, m, l in sl.ordered()]}
    (GOLD / "figure1_slice.json").write_text(json.dumps(rec, indent=2) + "\n", "utf-8")


if __name__ == "__main__":
    GOLD.mkdir(parents=True, exist_ok=True)
    stripped_sample()
    mock_responses()
    run_golden()
    analyze_golden()
    figure1_golden()
    print("goldens regenerated under", GOLD.relative_to(ROOT))
