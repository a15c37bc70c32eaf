"""Evaluation metrics for generated logs.

Position: accuracy (single-log setting) or precision/recall/F1 after greedy
matching (multi-log setting).  Level: exact accuracy and average ordinal
distance score.  Variables: set precision/recall/F1 over normalized
expressions.  Text: BLEU-1/BLEU-4 and ROUGE-1/ROUGE-L F1.

Everything here is a pure function of log records.
"""
from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .blocks import CodeBlock, innermost_block
from .codemodel import LEVEL_RANK, LogStatement

SETTINGS = ("single", "multi")
SemanticSimilarity = Callable[[str, str], float]


# ------------------------------------------------------------------ position


def position_accuracy(pred_line: int, true_line: int, blocks: Sequence[CodeBlock]) -> int:
    """1 when the lines are at most one apart and share their innermost block."""
    if abs(pred_line - true_line) > 1:
        return 0
    a, b = innermost_block(list(blocks), pred_line), innermost_block(list(blocks), true_line)
    return int(a is not None and b is not None and a.key == b.key)


def log_position_accuracy(pred: LogStatement, truth: LogStatement) -> int:
    """Record form of :func:`position_accuracy`, reading each log's own block."""
    if pred.file != truth.file or abs(pred.anchor_line - truth.anchor_line) > 1:
        return 0
    return int(tuple(pred.block) == tuple(truth.block))


def _group(logs: Iterable[LogStatement]) -> dict[tuple[str, str], list[LogStatement]]:
    out: dict[tuple[str, str], list[LogStatement]] = {}
    for log in logs:
        out.setdefault((log.file, log.method), []).append(log)
    for items in out.values():
        items.sort(key=lambda l: (l.anchor_line, l.line or 0))
    return out


def match_logs(predicted: Sequence[LogStatement], truth: Sequence[LogStatement]
               ) -> list[tuple[LogStatement, LogStatement]]:
    """Greedy one-to-one matching of one method's logs, in ascending line order.

    Each prediction, taken by line, claims the unclaimed ground-truth log it
    matches (nearest first, then lowest line).
    """
    preds = sorted(predicted, key=lambda l: (l.anchor_line, l.line or 0))
    gts = sorted(truth, key=lambda l: (l.anchor_line, l.line or 0))
    used = [False] * len(gts)
    pairs = []
    for p in preds:
        choice = None
        for j, g in enumerate(gts):
            if used[j] or not log_position_accuracy(p, g):
                continue
            if choice is None or abs(p.anchor_line - g.anchor_line) < abs(p.anchor_line - gts[choice].anchor_line):
                choice = j
        if choice is not None:
            used[choice] = True
            pairs.append((p, gts[choice]))
    assert sum(used) == len(pairs), "a ground-truth log was matched twice"
    return pairs


def f1(precision: float | None, recall: float | None) -> float:
    if not precision or not recall:
        return 0.0
    return 2 * precision * recall / (precision + recall)


# --------------------------------------------------------------------- level


def level_metrics(pairs: Sequence[tuple[LogStatement, LogStatement]]):
    """(L-ACC, AOD) over (predicted, truth) pairs; both None when empty."""
    if not pairs:
        return None, None
    exact = 0
    aod = 0.0
    for pred, truth in pairs:
        a, p = LEVEL_RANK[truth.level], LEVEL_RANK[pred.level]
        exact += a == p
        aod += 1 - abs(a - p) / max(a, 4 - a)
    return exact / len(pairs), aod / len(pairs)


# ----------------------------------------------------------------- variables


def normalize_variable(expr: str) -> str:
    return "".join(expr.split())


def variable_metrics(pairs: Sequence[tuple[LogStatement, LogStatement]], macro: bool = False):
    """(precision, recall, F1); pairs with an empty side drop out of that side."""
    hits_p = size_p = hits_r = size_r = 0
    per_p: list[float] = []
    per_r: list[float] = []
    for pred, truth in pairs:
        sp = {normalize_variable(v) for v in pred.variables}
        sg = {normalize_variable(v) for v in truth.variables}
        common = len(sp & sg)
        if sp:
            hits_p += common
            size_p += len(sp)
            per_p.append(common / len(sp))
        if sg:
            hits_r += common
            size_r += len(sg)
            per_r.append(common / len(sg))
    if macro:
        precision = sum(per_p) / len(per_p) if per_p else None
        recall = sum(per_r) / len(per_r) if per_r else None
    else:
        precision = hits_p / size_p if size_p else None
        recall = hits_r / size_r if size_r else None
    return precision, recall, f1(precision, recall)


# ---------------------------------------------------------------------- text


def message_words(message: str) -> list[str]:
    return message.lower().replace("{}", " ").split()


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def sentence_bleu(reference: Sequence[str], candidate: Sequence[str], max_n: int = 4) -> float:
    """Uniform-weight BLEU up to ``max_n``.

    Orders above one add one to the clipped match count and to the total
    (Lin and Och's smoothing), so short candidates still score above zero.
    A candidate shorter than ``max_n`` tokens is scored up to its own length
    with reweighted orders, which keeps identical short messages at 1.0.
    """
    if not reference or not candidate:
        return 0.0
    max_n = min(max_n, len(candidate))
    log_sum = 0.0
    for n in range(1, max_n + 1):
        cand, ref = _ngrams(candidate, n), _ngrams(reference, n)
        matched = sum(min(c, ref[g]) for g, c in cand.items())
        total = max(1, len(candidate) - n + 1) if n > 1 else len(candidate)
        if n > 1:
            matched, total = matched + 1, total + 1
        if matched == 0:
            return 0.0
        log_sum += math.log(matched / total) / max_n
    c, r = len(candidate), len(reference)
    bp = 1.0 if c > r else math.exp(1 - r / c)
    return bp * math.exp(log_sum)


def _lcs(a: Sequence[str], b: Sequence[str]) -> int:
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def _fscore(overlap: int, n_ref: int, n_cand: int) -> float:
    if not overlap:
        return 0.0
    p, r = overlap / n_cand, overlap / n_ref
    return 2 * p * r / (p + r)


def rouge_1(reference: Sequence[str], candidate: Sequence[str]) -> float:
    if not reference or not candidate:
        return 0.0
    overlap = sum((Counter(reference) & Counter(candidate)).values())
    return _fscore(overlap, len(reference), len(candidate))


def rouge_l(reference: Sequence[str], candidate: Sequence[str]) -> float:
    if not reference or not candidate:
        return 0.0
    return _fscore(_lcs(reference, candidate), len(reference), len(candidate))


def text_metrics(pairs: Sequence[tuple[LogStatement, LogStatement]]):
    """Mean (BLEU-1, BLEU-4, ROUGE-1, ROUGE-L); all None when there are no pairs."""
    if not pairs:
        return None, None, None, None
    sums = [0.0, 0.0, 0.0, 0.0]
    for pred, truth in pairs:
        ref, cand = message_words(truth.message), message_words(pred.message)
        scores = (sentence_bleu(ref, cand, 1), sentence_bleu(ref, cand, 4),
                  rouge_1(ref, cand), rouge_l(ref, cand))
        sums = [s + v for s, v in zip(sums, scores)]
    return tuple(s / len(pairs) for s in sums)


# -------------------------------------------------------------------- report


@dataclass
class EvaluationReport:
    setting: str
    position: dict
    levels: dict
    variables: dict
    texts: dict
    counts: dict
    semantic_similarity: float | None = None
    per_method: list[dict] = field(default_factory=list)

    def to_record(self) -> dict:
        out = {"setting": self.setting, "position": self.position, "levels": self.levels,
               "variables": self.variables, "texts": self.texts, "counts": self.counts}
        if self.semantic_similarity is not None:
            out["semantic_similarity"] = self.semantic_similarity
        return out

    def write_csv(self, path) -> None:
        cols = ["file", "method", "predicted", "ground_truth", "matched"]
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=cols, lineterminator="\n")
            writer.writeheader()
            for row in self.per_method:
                writer.writerow({k: row[k] for k in cols})


def evaluate(predicted: Sequence[LogStatement], truth: Sequence[LogStatement],
             setting: str = "multi", macro: bool = False,
             semantic_similarity: SemanticSimilarity | None = None) -> EvaluationReport:
    """Score ``predicted`` against ``truth``; methods are keyed by (file, method id).

    In the single setting each ground-truth method contributes one position
    verdict, judged on its first prediction (a method without one scores 0).
    In the multi setting every prediction either matches or is a false
    positive.  Level, variable and text scores use matched pairs only.
    """
    if setting not in SETTINGS:
        raise ValueError(f"setting must be one of {SETTINGS}")
    pred_groups, gt_groups = _group(predicted), _group(truth)
    pairs: list[tuple[LogStatement, LogStatement]] = []
    per_method = []
    hits = 0
    for key in sorted(set(pred_groups) | set(gt_groups)):
        preds, gts = pred_groups.get(key, []), gt_groups.get(key, [])
        if setting == "single":
            if not gts:
                continue
            matched = match_logs(preds[:1], gts[:1])
            hits += bool(matched)
        else:
            matched = match_logs(preds, gts)
        pairs.extend(matched)
        per_method.append({"file": key[0], "method": key[1], "predicted": len(preds),
                           "ground_truth": len(gts), "matched": len(matched)})
    counts = {"matched": len(pairs), "predicted": len(predicted), "ground_truth": len(truth)}
    if setting == "single":
        methods = len([k for k in gt_groups])
        position = {"pa": hits / methods if methods else 0.0}
    else:
        precision = len(pairs) / len(predicted) if predicted else 0.0
        recall = len(pairs) / len(truth) if truth else 0.0
        position = {"precision": precision, "recall": recall, "f1": f1(precision, recall)}
    l_acc, aod = level_metrics(pairs)
    vp, vr, vf = variable_metrics(pairs, macro)
    b1, b4, r1, rl = text_metrics(pairs)
    sem = None
    if semantic_similarity is not None and pairs:
        sem = sum(semantic_similarity(t.message, p.message) for p, t in pairs) / len(pairs)
    return EvaluationReport(
        setting, position, {"l_acc": l_acc, "aod": aod},
        {"precision": vp, "recall": vr, "f1": vf},
        {"bleu1": b1, "bleu4": b4, "rouge1": r1, "rougeL": rl}, counts, sem, per_method)


def logs_from_records(records: Iterable[Mapping]) -> list[LogStatement]:
    return [LogStatement.from_record(r) for r in records]
