"""Scoring predicted logs against the ones a developer wrote.

The fixture holds one method with two real logs and seven predictions.  Both
real logs are found, so recall is perfect, but five predictions have no
counterpart and precision suffers.  Matched pairs are then compared on
level, logged variables and message text.

    python3 demos/scoring_predictions.py
"""
from pathlib import Path

from logsmith.metrics import evaluate, logs_from_records, match_logs, message_words, sentence_bleu
from logsmith.records import read_log_records

FIX = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "metrics"
truth = logs_from_records(read_log_records(FIX / "motivating_truth.jsonl"))
predicted = logs_from_records(read_log_records(FIX / "motivating_predicted.jsonl"))

print("developer logs:")
for log in truth:
    print(f"  after line {log.anchor_line:3}  {log.level:5} {log.message!r}")
print("predicted logs:")
for log in predicted:
    print(f"  after line {log.anchor_line:3}  {log.level:5} {log.message!r}")

print("\nmatched pairs (same method and code block):")
for pred, real in match_logs(predicted, truth):
    bleu = sentence_bleu(message_words(real.message), message_words(pred.message))
    print(f"  {pred.message!r}\n    vs {real.message!r}: BLEU-4 {bleu:.3f}")

report = evaluate(predicted, truth, "multi")
pos = report.position
print(f"\nposition: precision {pos['precision']:.3f}, recall {pos['recall']:.3f}, f1 {pos['f1']:.3f}")
print(f"levels:   accuracy {report.levels['l_acc']:.3f}, ordinal distance score {report.levels['aod']:.3f}")
print("text:    ", ", ".join(f"{k} {v:.3f}" for k, v in sorted(report.texts.items())))
