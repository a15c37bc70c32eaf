import pytest

from logsmith.records import SchemaError, read_jsonl, read_log_records, validate_log_record, write_jsonl

GOOD = {"file": "a/B.java", "line": 3, "level": "info", "message": "x {}", "variables": ["y"],
        "block": {"kind": "Loop", "id": 1}}


def test_valid_record_passes():
    validate_log_record(dict(GOOD))


@pytest.mark.parametrize("patch", [{"level": "verbose"}, {"line": 0}, {"variables": "y"},
                                   {"block": {"kind": "Switch", "id": 1}}])
def test_invalid_records_raise(patch):
    with pytest.raises(SchemaError):
        validate_log_record({**GOOD, **patch})


def test_jsonl_round_trip_is_stable(tmp_path):
    path = tmp_path / "x.jsonl"
    write_jsonl(path, [{"b": 1, "a": "é"}, GOOD])
    first = path.read_bytes()
    assert read_jsonl(path) == [{"b": 1, "a": "é"}, GOOD]
    write_jsonl(path, read_jsonl(path))
    assert path.read_bytes() == first
    assert first.splitlines()[0] == '{"a": "é", "b": 1}'.encode("utf-8")


def test_bad_lines_name_their_location(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"file": "a"}\n', "utf-8")
    with pytest.raises(SchemaError, match="bad.jsonl:1"):
        read_log_records(path)
    path.write_text("{not json\n", "utf-8")
    with pytest.raises(SchemaError, match="bad.jsonl:1"):
        read_jsonl(path)
