import json
import re
import subprocess
import sys
from pathlib import Path

import pytest
from conftest import FIXTURES, GOLDEN

from logsmith.cli import main

MOCK_CFG = FIXTURES / "mock_sample.cfg"


def tree(root: Path) -> dict[str, bytes]:
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def run_mock(out, *extra):
    return main(["run", str(FIXTURES / "sample_stripped"), "--config", str(MOCK_CFG),
                 "--out", str(out), *extra])


def test_run_matches_golden(tmp_path):
    assert run_mock(tmp_path / "out") == 0
    assert tree(tmp_path / "out") == tree(GOLDEN / "run_sample")


def test_skip_dedup_keeps_every_insertion(tmp_path):
    assert run_mock(tmp_path / "out", "--skip-dedup") == 0
    predicted = (tmp_path / "out" / "predicted_logs.jsonl").read_text("utf-8").splitlines()
    golden = (GOLDEN / "run_sample" / "predicted_logs.jsonl").read_text("utf-8").splitlines()
    removed = (GOLDEN / "run_sample" / "dedup_report.jsonl").read_text("utf-8").splitlines()
    assert (tmp_path / "out" / "dedup_report.jsonl").read_text("utf-8") == ""
    assert len(predicted) == len(golden) + len(removed)


def test_skip_level_refine_sends_no_refine_prompts(tmp_path):
    assert run_mock(tmp_path / "out", "--skip-level-refine") == 0
    audit = [json.loads(l) for l in (tmp_path / "out" / "audit.jsonl").read_text("utf-8").splitlines()]
    assert audit and all(r["phase"] != "level_refine" for r in audit)


def test_mock_misses_become_diagnostics_naming_the_prompt_hash(tmp_path):
    cfg = tmp_path / "empty.cfg"
    (tmp_path / "nothing").mkdir()
    cfg.write_text("backend = mock\nmock_dir = nothing\n", "utf-8")
    # every query misses: the run completes with diagnostics and no logs
    assert main(["run", str(FIXTURES / "sample_stripped"), "--config", str(cfg),
                 "--out", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "predicted_logs.jsonl").read_text("utf-8") == ""
    diags = (tmp_path / "out" / "diagnostics.jsonl").read_text("utf-8")
    assert "all position queries failed" in diags
    assert re.search(r"no mock response for prompt [0-9a-f]{64}", diags)


def test_missing_credentials_exit_3(tmp_path, monkeypatch, capsys):
    for var in ("LOGSMITH_API_KEY", "OPENAI_API_KEY"):
        monkeypatch.delenv(var, raising=False)
    cfg = tmp_path / "http.cfg"
    cfg.write_text("backend = http\nendpoint = http://127.0.0.1:9/v1/chat/completions\n", "utf-8")
    assert main(["run", str(FIXTURES / "sample_stripped"), "--config", str(cfg),
                 "--out", str(tmp_path / "out")]) == 3
    assert "auth_error" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["analyze", "/nonexistent/project"],
    ["strip", "/nonexistent/project", "--out", "x"],
    ["evaluate", "--predicted", "/nonexistent.jsonl", "--truth", "/nonexistent.jsonl"],
    ["mock-from-audit", "/nonexistent.jsonl", "--out", "x"],
])
def test_input_errors_exit_2(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2


def test_bad_config_exit_2(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("backend = mock\nhop_cap = many\nmock_dir = .\n", "utf-8")
    assert main(["run", str(FIXTURES / "sample_stripped"), "--config", str(cfg),
                 "--out", str(tmp_path / "out")]) == 2
    assert main(["run", str(FIXTURES / "sample_stripped"), "--config", str(tmp_path / "none.cfg"),
                 "--out", str(tmp_path / "out")]) == 2


def test_strip_without_logs_exit_2(tmp_path):
    (tmp_path / "p").mkdir()
    (tmp_path / "p" / "A.java").write_text("class A { void f() { } }\n", "utf-8")
    assert main(["strip", str(tmp_path / "p"), "--out", str(tmp_path / "out")]) == 2


def test_strip_matches_golden(tmp_path):
    assert main(["strip", str(FIXTURES / "sample"), "--mode", "all", "--out", str(tmp_path)]) == 0
    assert tree(tmp_path / "project") == tree(FIXTURES / "sample_stripped")
    assert (tmp_path / "ground_truth.jsonl").read_bytes() == \
        (GOLDEN / "sample_ground_truth.jsonl").read_bytes()


def test_analyze_blocks_match_golden(tmp_path):
    assert main(["analyze", str(FIXTURES / "sample"), "--out", str(tmp_path), "--dot-pdg"]) == 0
    assert (tmp_path / "blocks.jsonl").read_bytes() == \
        (GOLDEN / "analyze_sample" / "blocks.jsonl").read_bytes()
    cand = [json.loads(l) for l in (tmp_path / "candidates.jsonl").read_text("utf-8").splitlines()]
    assert {"method", "v_p", "f_s"} <= set(cand[0])
    dots = sorted(p.name for p in (tmp_path / "dot").iterdir())
    assert dots and all(d.endswith((".cfg.dot", ".pdg.dot")) for d in dots)
    assert (tmp_path / "dot" / dots[0]).read_text("utf-8").startswith("digraph")


def test_evaluate_writes_report_and_csv(tmp_path, capsys):
    pred = FIXTURES / "metrics" / "motivating_predicted.jsonl"
    truth = FIXTURES / "metrics" / "motivating_truth.jsonl"
    assert main(["evaluate", "--predicted", str(pred), "--truth", str(truth),
                 "--out", str(tmp_path / "r.json"), "--csv", str(tmp_path / "r.csv")]) == 0
    report = json.loads((tmp_path / "r.json").read_text("utf-8"))
    assert report["position"]["recall"] == 1.0
    assert round(report["position"]["precision"], 3) == 0.286
    assert json.loads(capsys.readouterr().out) == report
    assert (tmp_path / "r.csv").read_text("utf-8").count("\n") == 2


def test_evaluate_rejects_schema_violations(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"file": "a", "line": "ten"}\n', "utf-8")
    assert main(["evaluate", "--predicted", str(bad), "--truth", str(bad)]) == 2


def test_console_entry_point_runs():
    out = subprocess.run([sys.executable, "-m", "logsmith.cli", "--version"], capture_output=True,
                         text=True, check=True)
    assert out.stdout.startswith("logsmith ")
