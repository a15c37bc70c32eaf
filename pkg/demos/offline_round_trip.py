"""Strip the logs from a project, let the pipeline put logs back, and score it.

Everything runs offline.  The "model" is logsmith's heuristic responder, a
deterministic rule set that answers the same prompts a real chat model
would get.  Point the gateway at an HTTP backend to use a real one.

    python3 demos/offline_round_trip.py
"""
import json
from pathlib import Path

from logsmith import Gateway, LlmConfig, evaluate, parse_project, parse_sources, strip_logs
from logsmith.offline import responder_backend
from logsmith.pipeline import Pipeline

SAMPLE = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "sample"

# Step 1: the developer-written logs become ground truth.
original = parse_project(SAMPLE)
data = strip_logs(original, "all", seed=0)
print(f"removed {len(data.ground_truth)} developer logs")
for entry in data.ground_truth[:3]:
    print("   ", entry.source.strip())
print("    ...")

# Step 2: run the pipeline on the stripped sources.  Position queries, log
# generation and level refinement each go out as one concurrent batch.
stripped = parse_sources(data.files)
gateway = Gateway(LlmConfig(concurrency=4), responder_backend(stripped))
result = Pipeline(stripped, gateway).run()
print(f"\n{len(list(gateway.records()))} model queries,",
      f"{len(result.report)} logs kept,", f"{len(result.dedup_report)} removed by dedup")

for rec in result.dedup_report:
    gone = rec["removed_log"]
    print(f"  dedup [{rec['rule']}] dropped line {gone['line']}: {gone['message']!r}")

# Step 3: compare with what the developers wrote.  Anchors of ground truth are
# stored in stripped-file coordinates, the same ones the pipeline works in.
truth = [e.log for e in data.ground_truth]
report = evaluate(result.logs, truth, "multi")
print("\nmulti-log evaluation:")
print(json.dumps(report.to_record(), indent=2, sort_keys=True))

# A peek at one augmented file.
path = sorted(result.changed)[0]
print(f"\n--- {path} (augmented) ---")
print(result.files[path])
