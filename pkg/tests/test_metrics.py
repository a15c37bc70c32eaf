import random
import time

import pytest
from conftest import FIXTURES
from hypothesis import given, settings, strategies as st
from nltk.translate.bleu_score import SmoothingFunction, sentence_bleu as nltk_bleu
from rouge_score import rouge_scorer

from logsmith.codemodel import LogStatement
from logsmith.metrics import (evaluate, level_metrics, log_position_accuracy, logs_from_records,
                              match_logs, message_words, position_accuracy, rouge_1, rouge_l,
                              sentence_bleu, variable_metrics)
from logsmith.records import read_log_records

VOCAB = ("failed to open connection retry user request cache timeout data server "
         "error start finished item value for the of in at").split()


def random_pairs(n=50, seed=11):
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        ref = [rng.choice(VOCAB) for _ in range(rng.randint(1, 12))]
        cand = [rng.choice(VOCAB) for _ in range(rng.randint(1, 12))]
        if rng.random() < 0.3:
            cand = ref[: rng.randint(1, len(ref))] + cand[:2]
        out.append((ref, cand))
    return out


def reference_bleu(ref, cand, n):
    weights = tuple(1 / n for _ in range(n))
    return nltk_bleu([ref], cand, weights, smoothing_function=SmoothingFunction().method2,
                     auto_reweigh=True)


def metric_cross_check(pairs) -> float:
    scorer = rouge_scorer.RougeScorer(["rouge1", "rougeL"], tokenizer=_Whitespace())
    worst = 0.0
    for ref, cand in pairs:
        rs = scorer.score(" ".join(ref), " ".join(cand))
        worst = max(worst,
                    abs(sentence_bleu(ref, cand, 1) - reference_bleu(ref, cand, 1)),
                    abs(sentence_bleu(ref, cand, 4) - reference_bleu(ref, cand, 4)),
                    abs(rouge_1(ref, cand) - rs["rouge1"].fmeasure),
                    abs(rouge_l(ref, cand) - rs["rougeL"].fmeasure))
    return worst


class _Whitespace:
    def tokenize(self, text):
        return text.split()


def log(anchor, level="info", message="m", variables=(), block=("Branch", 1), method="a.A.f()",
        file="a/A.java"):
    return LogStatement(file, anchor, level, message, tuple(variables), block, method)


# ------------------------------------------------------------------ fixtures


def load(name):
    return logs_from_records(read_log_records(FIXTURES / "metrics" / name))


def test_motivating_fixture_precision_and_recall():
    start = time.perf_counter()
    report = evaluate(load("motivating_predicted.jsonl"), load("motivating_truth.jsonl"), "multi")
    assert time.perf_counter() - start < 1.0
    assert report.position["recall"] == pytest.approx(1.0)
    assert report.position["precision"] == pytest.approx(0.286, abs=1e-3)
    assert report.counts == {"matched": 2, "predicted": 7, "ground_truth": 2}


def test_identical_logs_score_one_everywhere():
    truth = load("motivating_truth.jsonl")
    rec = evaluate(truth, truth).to_record()
    for group in ("position", "levels", "variables", "texts"):
        for value in rec[group].values():
            assert value == pytest.approx(1.0)


# --------------------------------------------------------- reference parity


def test_text_metrics_match_reference_implementations():
    assert metric_cross_check(random_pairs(50)) < 1e-6


def test_bleu_examples():
    ref = message_words("Failed to open file {}")
    assert sentence_bleu(ref, ref, 4) == pytest.approx(1.0)
    assert sentence_bleu(ref, message_words("nothing in common"), 4) == 0.0
    assert sentence_bleu([], ref) == 0.0


def test_rouge1_hand_example():
    # 3 of 4 words shared with equal lengths: P = R = 0.75
    assert rouge_1("a b c d".split(), "a b c e".split()) == pytest.approx(0.75)
    assert rouge_l("a b c d".split(), "d c b a".split()) == pytest.approx(0.25)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(VOCAB), min_size=1, max_size=10),
       st.lists(st.sampled_from(VOCAB), min_size=1, max_size=10))
def test_scores_are_bounded_and_symmetric_where_expected(ref, cand):
    for score in (sentence_bleu(ref, cand, 1), sentence_bleu(ref, cand, 4),
                  rouge_1(ref, cand), rouge_l(ref, cand)):
        assert 0.0 <= score <= 1.0 + 1e-12
    assert rouge_1(ref, cand) == pytest.approx(rouge_1(cand, ref))
    assert rouge_l(ref, cand) == pytest.approx(rouge_l(cand, ref))
    assert sentence_bleu(ref, ref, 4) == pytest.approx(1.0)


# ---------------------------------------------------------------- levels


def test_aod_hand_checks():
    assert level_metrics([(log(1, "warn"), log(1, "error"))]) == (0.0, pytest.approx(0.75))
    assert level_metrics([(log(1, "trace"), log(1, "info"))]) == (0.0, pytest.approx(0.0))
    assert level_metrics([(log(1, "info"), log(1, "info"))]) == (1.0, 1.0)
    assert level_metrics([]) == (None, None)


# ------------------------------------------------------------- positions


def test_position_accuracy_needs_same_block_and_nearby_line():
    assert log_position_accuracy(log(10), log(11)) == 1
    assert log_position_accuracy(log(10), log(12)) == 0
    assert log_position_accuracy(log(10), log(10, block=("Loop", 1))) == 0
    assert log_position_accuracy(log(10), log(10, file="b/B.java")) == 0


def test_position_accuracy_with_blocks():
    from logsmith.blocks import CodeBlock
    blocks = [CodeBlock("MethodDef", 1, (1, 20)), CodeBlock("Loop", 1, (5, 8), stmt=0)]
    assert position_accuracy(6, 7, blocks) == 1
    assert position_accuracy(4, 5, blocks) == 0  # one is in the loop, the other is not


def test_greedy_matching_is_one_to_one():
    preds = [log(10), log(11), log(12)]
    truth = [log(11)]
    pairs = match_logs(preds, truth)
    assert [(p.anchor_line, t.anchor_line) for p, t in pairs] == [(10, 11)]
    truth = [log(10), log(12)]
    pairs = match_logs([log(11), log(12)], truth)
    assert [(p.anchor_line, t.anchor_line) for p, t in pairs] == [(11, 10), (12, 12)]


def test_single_setting_uses_the_first_prediction_per_method():
    truth = [log(10), log(30, method="a.A.g()")]
    preds = [log(10), log(40), log(50, method="a.A.g()")]
    report = evaluate(preds, truth, "single")
    assert report.position == {"pa": 0.5}


# ------------------------------------------------------------- variables


def test_variable_scores_micro_and_macro():
    pairs = [(log(1, variables=["a", "b"]), log(1, variables=["a"])),
             (log(2, variables=["x"]), log(2, variables=["x", "y", "z"]))]
    p, r, f = variable_metrics(pairs)
    assert (p, r) == (pytest.approx(2 / 3), pytest.approx(2 / 4))
    mp, mr, _ = variable_metrics(pairs, macro=True)
    assert (mp, mr) == (pytest.approx(0.75), pytest.approx((1 + 1 / 3) / 2))
    assert variable_metrics([(log(1), log(1))]) == (None, None, 0.0)
    # whitespace does not distinguish expressions
    assert variable_metrics([(log(1, variables=["f( a )"]), log(1, variables=["f(a)"]))])[0] == 1.0


def test_semantic_similarity_hook_and_csv(tmp_path):
    truth = load("motivating_truth.jsonl")
    report = evaluate(load("motivating_predicted.jsonl"), truth,
                      semantic_similarity=lambda a, b: 0.5)
    assert report.semantic_similarity == 0.5
    path = tmp_path / "per_method.csv"
    report.write_csv(path)
    rows = path.read_text("utf-8").splitlines()
    assert rows[0] == "file,method,predicted,ground_truth,matched"
    assert rows[1].endswith(",7,2,2")


def test_unknown_setting_is_rejected():
    with pytest.raises(ValueError):
        evaluate([], [], "triple")
