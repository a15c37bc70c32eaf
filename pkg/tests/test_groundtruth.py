import json

from checks import FIXTURES, strip_restore_identity

from logsmith import parse_project
from logsmith.codemodel import parse_sources
from logsmith.groundtruth import (GroundTruthEntry, extract_ground_truth_logs, restore_logs,
                                  strip_logs)


def test_strip_restore_identity_on_the_corpus():
    count, failures = strip_restore_identity()
    assert failures == []
    assert count >= 9


def test_strip_all_matches_golden(golden):
    model = parse_project(FIXTURES / "sample")
    data = strip_logs(model, "all", 0)
    want = [json.loads(l) for l in (golden / "sample_ground_truth.jsonl").read_text("utf-8").splitlines()]
    assert [e.to_record() for e in data.ground_truth] == want
    stripped = parse_project(FIXTURES / "sample_stripped")
    assert {p: u.text for p, u in stripped.sources.items()} == data.files


def test_stripped_files_have_no_logs_and_anchor_lines_are_consistent():
    model = parse_project(FIXTURES / "sample")
    data = strip_logs(model, "all", 0)
    again = parse_sources(data.files)
    assert extract_ground_truth_logs(again) == []
    for entry in data.ground_truth:
        # anchor is in stripped coordinates and sits before the original line
        assert entry.log.anchor_line < entry.log.line


def test_one_random_mode_is_seeded():
    model = parse_project(FIXTURES / "sample")
    a = strip_logs(model, "one_random", 3)
    b = strip_logs(model, "one_random", 3)
    assert [e.to_record() for e in a.ground_truth] == [e.to_record() for e in b.ground_truth]
    methods = [e.log.method for e in a.ground_truth]
    assert len(methods) == len(set(methods))
    assert restore_logs(a.files, a.ground_truth) == {p: u.text for p, u in model.sources.items()}


def test_records_round_trip():
    model = parse_project(FIXTURES / "sample")
    for entry in strip_logs(model, "all", 0).ground_truth:
        assert GroundTruthEntry.from_record(entry.to_record()) == entry


def test_logs_inside_lambdas_are_left_alone():
    src = ("package l;\nimport org.slf4j.Logger;\nclass L {\n    static Logger LOG;\n"
           "    void f(java.util.List<String> xs) {\n"
           "        xs.forEach(x -> LOG.info(\"x {}\", x));\n"
           "        LOG.info(\"done\");\n    }\n}\n")
    data = strip_logs(parse_sources({"l/L.java": src}), "all", 0)
    assert [e.log.message for e in data.ground_truth] == ["done"]
    assert "forEach(x -> LOG.info" in data.files["l/L.java"]
