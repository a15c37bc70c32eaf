from conftest import FIXTURES

from logsmith import parse_project
from logsmith.llm import CallableBackend, Gateway, LlmConfig
from logsmith.offline import HeuristicResponder, words
from logsmith.pipeline import Pipeline, PipelineConfig
from logsmith.prompting import parse_log_response, parse_refine_response


def records_for(phase):
    model = parse_project(FIXTURES / "sample_stripped")
    gw = Gateway(LlmConfig(), CallableBackend(HeuristicResponder(model)))
    Pipeline(model, gw, PipelineConfig(skip_dedup=True)).run()
    return [r for r in gw.records() if r["phase"] == phase]


def test_words_splits_identifiers():
    assert words("processData") == "process data"
    assert words("flush_all_Items") == "flush all items"


def test_every_answer_parses():
    from logsmith.codemodel import LogStatement
    seed = LogStatement("f", 1, "info", "", (), ("MethodDef", 1))
    gen = records_for("generation")
    assert gen
    for rec in gen:
        parse_log_response(rec["response"], seed)
    for rec in records_for("level_refine"):
        parse_refine_response(rec["response"])


def test_thrown_message_is_echoed_in_branch_logs():
    texts = [r["response"] for r in records_for("generation")]
    assert any('"count must be positive"' in t for t in texts)
