import pytest
from checks import FIXTURES, insertion_safety

from logsmith import parse_project
from logsmith.codemodel import LogStatement, parse_sources
from logsmith.insertion import insert_logs, java_string, remove_lines, render_call

TRICKY = (FIXTURES / "insertion" / "p" / "Tricky.java").read_text("utf-8")


@pytest.fixture(scope="module")
def model():
    return parse_sources({"p/Tricky.java": TRICKY})


def log(model, method, anchor, message="m", variables=()):
    return LogStatement("p/Tricky.java", anchor, "info", message, tuple(variables),
                        ("MethodDef", 1), method)


def lines_of(text):
    return text.splitlines()


def test_corpus_insertion_safety():
    total, failures = insertion_safety()
    assert failures == []
    assert total > 200


def test_fallback_logger_field_is_declared_once(model):
    mid = "p.Tricky.layout(int,int,int)"
    res = insert_logs(model, [log(model, mid, 9), log(model, mid, 13)])
    out = lines_of(res.files["p/Tricky.java"])
    assert out[5] == ("    private static final org.slf4j.Logger LOG = "
                      "org.slf4j.LoggerFactory.getLogger(Tricky.class);")
    assert sum("getLogger" in l for l in out) == 1
    assert res.inserted["p/Tricky.java"] == [6, 11, 16]


def test_logger_name_avoids_existing_fields(model):
    res = insert_logs(model, [log(model, "p.Tricky.Inner.work(int)", 57)])
    text = res.files["p/Tricky.java"]
    assert "org.slf4j.Logger LOG_ =" in text
    assert 'LOG_.info("m");' in text


def test_multi_line_condition_places_log_inside_the_arm(model):
    res = insert_logs(model, [log(model, "p.Tricky.layout(int,int,int)", 10)])
    out = lines_of(res.files["p/Tricky.java"])
    placed = res.placed[0].line
    assert out[placed - 2].strip() == "c > 0) {"
    assert out[placed - 1] == '            LOG.info("m");'


def test_log_after_a_jump_goes_before_it(model):
    res = insert_logs(model, [log(model, "p.Tricky.early(List)", 31)])
    out = lines_of(res.files["p/Tricky.java"])
    assert out[res.placed[0].line - 1].strip() == 'LOG.info("m");'
    assert out[res.placed[0].line].strip() == "continue;"


def test_braceless_statement_is_skipped_over(model):
    res = insert_logs(model, [log(model, "p.Tricky.layout(int,int,int)", 25)])
    out = lines_of(res.files["p/Tricky.java"])
    assert out[res.placed[0].line - 2].strip().startswith("for (int i = 0")


def test_existing_logger_is_reused(fixtures):
    model = parse_project(fixtures / "sample")
    m = model.methods["shop.store.Main.main(String[])"]
    res = insert_logs(model, [LogStatement(m.file, m.body_span[0], "warn", "hi", (), ("MethodDef", 1),
                                           m.id)])
    assert res.files[m.file].count("getLogger") == model.sources[m.file].text.count("getLogger")
    assert 'logger.warn("hi");' in res.files[m.file]


def test_crlf_files_keep_their_line_endings():
    src = (FIXTURES / "insertion" / "p" / "Windows.java").read_bytes().decode("utf-8")
    model = parse_sources({"p/Windows.java": src})
    res = insert_logs(model, [LogStatement("p/Windows.java", 5, "debug", "r={}", ("r",),
                                           ("MethodDef", 1), "p.Windows.twice(int)")])
    out = res.files["p/Windows.java"]
    assert "\n" not in out.replace("\r\n", "")
    assert remove_lines(res.files, res.inserted)["p/Windows.java"] == src


def test_unknown_file_and_bad_anchor_are_diagnosed(model):
    bad = [LogStatement("p/Other.java", 3, "info", "x", (), ("MethodDef", 1)),
           log(model, "p.Tricky.layout(int,int,int)", 10_000)]
    res = insert_logs(model, bad)
    assert len(res.diagnostics) == 2
    assert res.files["p/Tricky.java"] == TRICKY


def test_string_escaping():
    assert java_string('say "hi"\n\\') == 'say \\"hi\\"\\n\\\\'
    entry = LogStatement("f", 1, "error", 'bad "{}"', ("x.y()",), ("MethodDef", 1))
    assert render_call("LOG", entry) == 'LOG.error("bad \\"{}\\"", x.y());'
