import os
import shutil
from pathlib import Path

import pytest

import samp

DATA = Path(os.environ.get("SAMP_TEST_DATA_DIR", Path(__file__).resolve().parents[1] / "data"))


def evenodd():
    return (DATA / "evenodd.samp").read_text()


def test_record_and_passes():
    trace, output = samp.record(evenodd(), "evenodd.samp")
    assert output == ""
    assert trace.hits_per_line == 1
    assert trace.passes() == [1, 2]
    lines = {p: sorted(e["ln"] for e in trace.events if e["pass"] == p) for p in trace.passes()}
    assert lines == {1: [1, 2, 5], 2: [3]}
    assert trace.passes_covering("evenodd.samp", 3) == [2]


def test_unlimited_records_every_execution():
    limited, _ = samp.record(evenodd(), "evenodd.samp", 1)
    full, _ = samp.record(evenodd(), "evenodd.samp", None)
    assert full.hits_per_line == -1
    assert len(full.events) > len(limited.events)


def test_annotate_matches_golden():
    trace, _ = samp.record(evenodd(), "evenodd.samp", None)
    for cursor in (3, 5):
        golden = (DATA / f"evenodd_cursor{cursor}.golden").read_text()
        got = samp.annotate(trace, evenodd(), "evenodd.samp", cursor)
        assert got.rstrip("\n") == golden.rstrip("\n")


def test_staleness():
    trace, _ = samp.record(evenodd(), "evenodd.samp")
    assert not samp.is_stale(trace, evenodd(), "evenodd.samp")
    assert samp.is_stale(trace, evenodd().replace("odd += n", "odd -= n"), "evenodd.samp")


def test_run_writes_trace_file(tmp_path):
    program = tmp_path / "evenodd.samp"
    shutil.copy(DATA / "evenodd.samp", program)
    summary = samp.run(str(program))
    assert summary["passes"] == 2
    assert Path(summary["trace"]).is_file()
    loaded = samp.load_trace(summary["trace"])
    assert loaded.passes() == [1, 2]
    copy = tmp_path / "copy.samptrace"
    loaded.save(str(copy))
    assert samp.load_trace(str(copy)).events == loaded.events


def test_render():
    assert samp.render(3) == "3"
    assert samp.render("hi") == '"hi"'
    assert samp.render([1, 2]) == "{1, 2}"
    assert len(samp.render("x" * 500)) <= 60


def test_line_vars():
    table = samp.line_vars(evenodd())
    assert [name for name, _ in table[3]] == ["n", "even"]


def test_errors(tmp_path):
    with pytest.raises(samp.SyntaxError):
        samp.record("fn main() { let = ; }")
    with pytest.raises(samp.RuntimeError):
        samp.record("fn main() { let x = 1 / 0; }")
    bad = tmp_path / "bad.samptrace"
    bad.write_text("not json\n")
    with pytest.raises(samp.TraceError):
        samp.load_trace(str(bad))
