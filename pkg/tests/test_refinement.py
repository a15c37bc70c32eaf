import pytest
from dedup_cases import CASES, Case, run_case, rule_suite, source, tagged

from logsmith.blocks import extract_blocks, find_block
from logsmith.codemodel import LogStatement, parse_sources
from logsmith.llm import CallableBackend, Gateway, LlmConfig
from logsmith.refinement import (RULES, DedupConfig, Deduplicator, apply_refine_response,
                                 jaccard, message_equivalent, message_tokens, refine_level)


@pytest.mark.parametrize("case", CASES, ids=[c.name for c in CASES])
def test_rule_fixture(case):
    removed, survivors, second = run_case(case)
    assert removed == case.removed
    assert set(survivors) == set(tagged(source(case))) - set(case.removed)
    assert second == 0


def test_every_rule_has_a_fixture():
    assert {c.rule for c in CASES} == set(RULES)
    assert {rule for c in CASES for rule in c.removed.values()} == set(RULES)


def test_whole_suite_is_clean():
    assert rule_suite() == []


def test_throw_rule_runs_before_the_pair_rules():
    case = Case("order", "throw", """
    void check(int x) {
        if (x < 0) {
            LOG.warn("invalid state x"); // P:a
            throw new IllegalStateException("invalid state x");
        } else {
            LOG.info("invalid state x"); // P:b
        }
    }
    public static void main(String[] args) {
        new T().check(args.length);
    }
""")
    removed, survivors, _ = run_case(case)
    assert removed == {"a": "throw", "b": "throw"}
    assert survivors == []


def test_threshold_controls_equivalence():
    # five shared tokens out of seven distinct ones
    a, b = "Could not open file {} for reading", "Could not open file {} for writing"
    assert jaccard(message_tokens(a), message_tokens(b)) == pytest.approx(5 / 7)
    assert message_equivalent(a, b, 0.7)
    assert not message_equivalent(a, b, 0.75)
    # three of five: 0.6 falls below the default
    assert not message_equivalent("cache hit for key {}", "cache miss for key {}")
    assert jaccard(message_tokens("cache hit for key"), message_tokens("cache miss for key")) == \
        pytest.approx(0.6)
    assert message_equivalent("Done!", "done")
    assert not message_equivalent("{}", "{}")  # nothing left to compare


def test_custom_judge_replaces_jaccard():
    case = CASES[4]  # if/else with identical messages
    _, survivors, _ = run_case(case, DedupConfig(judge=lambda a, b: False))
    assert sorted(survivors) == ["high", "low"]


def test_removal_records_name_the_counterpart():
    case = CASES[6]
    src = source(case)
    tags = tagged(src)
    model = parse_sources({"d/T.java": src})
    result = Deduplicator(model).run([("d/T.java", tags["start"]), ("d/T.java", tags["end"])])
    rec = result.removed[0].to_record()
    assert rec["rule"] == "startend"
    assert rec["removed_log"]["line"] == tags["start"]
    assert rec["counterpart"]["line"] == tags["end"]


# -------------------------------------------------------------- level refine


METHOD = """package r;
class R {
    void f(int x) {
        if (x < 0) {
            x = 0;
        }
    }
}
"""


def _refine(answer, level="info"):
    model = parse_sources({"r/R.java": METHOD})
    m = model.methods["r.R.f(int)"]
    block = find_block(extract_blocks(m), ("Branch", 1))
    log = LogStatement("r/R.java", 4, level, "Invalid value {}", ("x",), block.key, m.id)
    seen = []

    def backend(bundle):
        seen.append(bundle)
        return answer
    out, notes = refine_level(log, m, block, Gateway(LlmConfig(), CallableBackend(backend)))
    return log, out, notes, seen[0]


def test_refine_adjusts_only_the_level():
    log, out, notes, bundle = _refine("ADJUST: WARN")
    assert out.level == "warn"
    assert (out.message, out.variables, out.anchor_line) == (log.message, log.variables, log.anchor_line)
    assert notes == ["refine: info -> warn"]
    assert bundle.phase == "level_refine"


def test_refine_keep_and_same_level():
    assert _refine("KEEP")[1].level == "info"
    assert _refine("ADJUST: INFO")[2] == []


def test_refine_malformed_keeps_level_with_a_note():
    log, out, notes, _ = _refine("I think it is fine")
    assert out == log
    assert len(notes) == 1 and "kept info" in notes[0]


def test_apply_refine_response_directly():
    log = LogStatement("f", 1, "debug", "x", (), ("MethodDef", 1))
    assert apply_refine_response(log, "ADJUST: ERROR")[0].level == "error"
