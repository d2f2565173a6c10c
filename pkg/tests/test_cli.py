import csv
import io
import json

import pytest

from posetfree import standard_poset
from posetfree.cache import ExtremalRecord, format_record, parse_record
from posetfree.cli import emit_report, main
from posetfree.extremal import la_star


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), stdout=buf)
    return code, buf.getvalue()


def test_la_star_prints_value_and_witness():
    code, out = run("la-star", "--poset", "chain:2", "--n", "4")
    assert code == 0
    assert "value: 6" in out and "witness: {1,2}" in out


def test_forb_count():
    code, out = run("forb-count", "--poset", "chain:2", "--n", "4", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(ln for ln in out.splitlines() if not ln.startswith("#")))
    assert rows == [{"n": "4", "value": "168", "exact": "true"}]


def test_interval_lemma_verdict():
    code, out = run("verify", "interval-lemma", "--n", "6", "--m", "3", "--trials", "100000",
                    "--seed", "7")
    assert code == 0
    assert "seed: 7" in out and "verdict: PASS" in out
    assert "formula: " in out and "exhaustive: " in out


def test_exit_codes(capsys):
    assert run("la-star", "--poset", "chain:2")[0] == 1
    assert run("no-such-command")[0] == 1
    assert run("verify", "interval-lemma", "--n", "4", "--m", "2")[0] == 1  # seed is mandatory
    assert run("la-star", "--poset", "V", "--n", "9")[0] == 2
    code, out = run("forb-count", "--poset", "chain:3", "--n", "5", "--timeout", "0.05")
    assert code == 2 and "partial: true" in out
    assert run("la-star", "--poset", "heptagon", "--n", "3")[0] == 1


def test_emit_report_formats(tmp_path):
    assert emit_report([], "csv", columns=["n", "value"]) == "n,value\n"
    out = emit_report([{"b": 1, "a": 2}], "json")
    assert json.loads(out) == {"meta": {}, "rows": [{"a": 2, "b": 1}]}
    assert out == emit_report([{"b": 1, "a": 2}], "json")
    path = tmp_path / "r.csv"
    emit_report([{"x": 1}], "csv", path=path)
    assert path.read_text() == "x\n1\n"


def test_plot_data_series(tmp_path):
    path = tmp_path / "series.csv"
    code, _ = run("la-star", "--poset", "chain:2", "--n", "1..4", "--plot-data", str(path))
    assert code == 0
    assert path.read_text() == "n,la_star\n1,1\n2,2\n3,3\n4,6\n"


def test_record_round_trip_through_reports():
    res = la_star(3, standard_poset("v"))
    rec = ExtremalRecord.for_result("la_star", standard_poset("v"), res.value, res.witness, n=3)
    line = format_record(rec)
    out = emit_report([{"record": line}], "json")
    assert parse_record(json.loads(out)["rows"][0]["record"]) == rec
    out = emit_report([{"record": line}], "csv")
    back = list(csv.DictReader(io.StringIO(out)))[0]["record"]
    assert parse_record(back) == rec


def test_cache_commands(tmp_path):
    path = str(tmp_path / "cache.txt")
    code, first = run("ex-star", "--poset", "V", "--sides", "2x3", "--cache", path)
    code2, second = run("ex-star", "--poset", "V", "--sides", "2x3", "--cache", path)
    assert code == code2 == 0 and first == second
    code, out = run("cache", "verify", "--cache", path)
    assert code == 0 and "records: 1" in out
    code, out = run("cache", "get", "--cache", path, "--kind", "ex_star", "--poset", "V",
                    "--sides", "2x3")
    assert "value: 4" in out


def test_config_file_defaults(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 3}))
    code, out = run("supersat", "--poset", "chain:2", "--n", "5", "--t-prime", "0",
                    "--seed", "3")
    code2, out2 = run("grid-partition", "--n", "4", "--d", "2", "--config", str(cfg))
    assert code == 0 and code2 == 0 and "seed: 3" in out2


@pytest.mark.parametrize("argv", [
    ["poset-info", "--poset", "butterfly"],
    ["d-star", "--poset", "antichain:2"],
    ["mu", "--poset", "boolean:2"],
    ["scd", "--n", "4"],
    ["ex-star-gapped", "--poset", "chain:2", "--sides", "5", "--t", "2"],
    ["probe-gap-claim", "--n", "4", "--t", "3", "--seed", "1", "--samples", "30"],
    ["greedy-collection", "--poset", "V", "--n", "3", "--K-P", "2"],
    ["gapped-shift", "--poset", "chain:2", "--sides", "3x3", "--t", "2", "--seed", "2"],
    ["containers", "--poset", "chain:2", "--n", "3"],
    ["container-tree", "--poset", "chain:2", "--n", "3", "--check-coverage"],
    ["verify", "grid-lemma", "--n", "6", "--d", "2", "--trials", "2000", "--seed", "4"],
])
def test_every_command_runs(argv):
    for fmt in ("text", "csv", "json"):
        code, out = run(*argv, "--format", fmt)
        assert code == 0, out
        assert out.endswith("\n")


def test_forb_count_cache_round_trip(tmp_path, capsys):
    path = str(tmp_path / "c.txt")
    first = run("forb-count", "--poset", "chain:2", "--n", "2..3", "--cache", path)
    second = run("forb-count", "--poset", "chain:2", "--n", "2..3", "--cache", path)
    assert first == second
    assert "cache hit" in capsys.readouterr().err
    code, out = run("cache", "get", "--cache", path, "--kind", "forb_star",
                    "--poset", "chain:2", "--n", "3")
    assert code == 0 and "value: 20" in out
