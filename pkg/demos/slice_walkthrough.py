"""Why is `result` null?  Following a backward slice through two methods.

The fixture under tests/fixtures/figure1 holds a small ingest service.  Its
`handle` method checks `result == null` near the end.  A developer adding a
log there wants to know which earlier statements could explain the value, and
a backward slice answers exactly that.

Run from the repository root:

    python3 demos/slice_walkthrough.py
"""
from pathlib import Path

from logsmith import parse_project
from logsmith.dependence import Slicer
from logsmith.dependence.dot import slice_to_dot

ROOT = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "figure1"
TARGET = "demo.ingest.IngestService.handle(String,String)"

model = parse_project(ROOT)
method = model.methods[TARGET]
check_line = next(n for n in range(method.body_span[0], method.body_span[1] + 1)
                  if "result == null" in method.source_line(n))
print(f"Slicing {TARGET} from line {check_line}:")
print("   ", method.source_line(check_line).strip())

# One Slicer caches per-method dependence graphs, so slicing again with a
# different hop budget is cheap.
slicer = Slicer(model)
for cap in (1, 3, 7):
    sl = slicer.slice((TARGET, check_line), cap)
    print(f"\nhop cap {cap}: {len(sl.hops)} statements")
    for hop, mid, line in sl.ordered():
        code = model.methods[mid].source_line(line).strip()
        short = mid.split("(")[0].rsplit(".", 1)[-1]
        print(f"  hop {hop}  {short:>12}:{line:<3} {code}")

# The full slice crosses into DataProcessor.process_data through the call on
# the `processed = ...` line: the return statements there feed `result`.
print("\nGraphviz rendering of the 7-hop slice:\n")
print(slice_to_dot(slicer.slice((TARGET, check_line), 7)))
