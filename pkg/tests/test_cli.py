import json
from fractions import Fraction

import pytest

from semik import io
from semik.cli import RunReport, emit_report, main
from semik.core import NEG_INF, TROP, SemiMatrix
from semik.errors import MalformedFile
from semik.tables import named_table


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    return {
        "p": write(tmp_path, "p.json", {"coords": [[0, 0], [0, 1], [1, 1]]}),
        "d2": write(tmp_path, "d2.json", {"field": "BOOL", "levels": [[1], [2], [4]],
                                          "steps": [[[2]], [[2]]], "period": 1}),
        "d4": write(tmp_path, "d4.json", {"field": "BOOL", "levels": [[1], [4], [16]],
                                          "steps": [[[4]], [[4]]], "period": 1}),
        "d3": write(tmp_path, "d3.json", {"levels": [[1], [3]], "steps": [[[3]]], "period": 1}),
        "sys": write(tmp_path, "s.json", {"units": [[1], [2]], "maps": [[[2]]], "period": 1}),
        "span": write(tmp_path, "sp.json", {"ambient": 2, "generators": [["0", "0"], ["0", "-1"]]}),
        "mat": write(tmp_path, "m.json", {"kernel": "TROP", "rows": 2, "cols": 2,
                                          "entries": ["0", "-1", "0", "0"]}),
        "z4": write(tmp_path, "z4.json", named_table("Z4").to_json()),
        "m2b": write(tmp_path, "m2b.json", named_table("M2B").to_json()),
    }


def test_bmod_analyze(capsys, files):
    code, out, _ = run(capsys, "bmod", "analyze", files["p"])
    r = json.loads(out)["result"]
    assert code == 0
    assert (r["projective"], r["free_rank"], r["cardinality"]) == (True, None, 3)


def test_bratteli_iso(capsys, files):
    code, out, _ = run(capsys, "bratteli", "iso", files["d2"], files["d4"], "--depth", "3")
    rep = json.loads(out)
    assert code == 0 and rep["result"]["verdict"] == "ISO"
    assert rep["flags"] == {"depth": 3}
    code, out, _ = run(capsys, "bratteli", "iso", files["d2"], files["d3"])
    assert code == 0 and json.loads(out)["result"]["verdict"] == "NOT_ISO"


def test_bratteli_sk0(capsys, files):
    code, out, _ = run(capsys, "bratteli", "sk0", files["d2"])
    r = json.loads(out)["result"]
    assert r["stages"][2] == {"rank": 1, "unit": [4]} and r["stable_rank"] == 1


def test_limits(capsys, files):
    _, out, _ = run(capsys, "limit", "eq", files["sys"], "0:1", "1:2")
    assert json.loads(out)["result"] == {"verdict": "EQUAL", "stage": 1}
    _, out, _ = run(capsys, "limit", "pos", files["sys"], "0:-1", "--depth", "5")
    assert json.loads(out)["result"] == {"verdict": "NOT_WITHIN_DEPTH"}


def test_trop_span(capsys, files):
    _, out, _ = run(capsys, "trop", "span", files["span"], "--probe-depth", "3")
    r = json.loads(out)["result"]
    assert r["dim_w"] == 2 and r["freeness"] == "NOT_FREE" and len(r["witness"]) == 2


def test_matrix_check(capsys, files):
    _, out, _ = run(capsys, "matrix", "check", files["mat"])
    r = json.loads(out)["result"]
    assert r["idempotent"] is True and r["complement"] is None and r["weakly_cancellative"] is False


def test_classify(capsys, files):
    _, out, _ = run(capsys, "semiring", "classify", files["z4"])
    r = json.loads(out)["result"]
    assert r["congruence_semisimple"] is False and r["factors"] is None
    _, out, _ = run(capsys, "semiring", "classify", files["m2b"])
    r = json.loads(out)["result"]
    assert r["factors"] == [["BOOL", 2]] and r["primitive_orthogonal_units"] == [1, 8]


def test_errors_exit_2(capsys, tmp_path, files):
    with pytest.raises(SystemExit) as exc:
        main(["nosuch"])
    assert exc.value.code == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"units":\n')
    code, _, err = run(capsys, "limit", "pos", str(bad), "0:1")
    assert code == 2 and "line" in err
    code, _, err = run(capsys, "limit", "pos", write(tmp_path, "x.json", {"units": [[1]]}), "0:1")
    assert code == 2 and "maps" in err
    code, _, err = run(capsys, "limit", "pos", files["sys"], "zero")
    assert code == 2
    code, _, _ = run(capsys, "bmod", "analyze", str(tmp_path / "missing.json"))
    assert code == 2


def _strip(out):
    doc = json.loads(out)
    doc.pop("elapsed_s")
    return doc


def test_determinism(capsys, files, monkeypatch):
    outs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("SEMIK_THREADS", threads)
        outs.append(_strip(run(capsys, "trop", "span", files["span"])[1]))
        outs.append(_strip(run(capsys, "bratteli", "iso", files["d2"], files["d4"])[1]))
    assert outs[0] == outs[2] and outs[1] == outs[3]


def test_emit_report_round_trip():
    r = RunReport("x y", {"a": "00"}, {"depth": 3}, {"verdict": "ISO", "witness": {"alpha": [[[1]]]}},
                  {"semik": "0"}, 0.5)
    text = emit_report(r)
    assert json.loads(text) == r.to_json()
    assert emit_report(r) == text
    table = emit_report(r, "table")
    assert "result.witness.alpha" in table and "[[[1]]]" in table


def test_table_format(capsys, files):
    code, out, _ = run(capsys, "--format", "table", "bmod", "analyze", files["p"])
    assert code == 0 and "result.cardinality" in out


def test_matrix_round_trip():
    A = SemiMatrix.from_rows(TROP, [[Fraction(-1, 3), NEG_INF], [0, Fraction(7, 2)]])
    doc = io.matrix_to_json(A)
    assert doc["entries"] == ["-1/3", "-inf", "0", "7/2"]
    assert io.matrix_from_json(json.loads(json.dumps(doc))) == A


def test_loader_field_errors():
    with pytest.raises(MalformedFile) as exc:
        io.matrix_from_json({"kernel": "TROP", "rows": 1, "cols": 1, "entries": ["x"]})
    assert exc.value.field == "entries"
    with pytest.raises(MalformedFile) as exc:
        io.table_from_json({"order": 2})
    assert exc.value.field == "add"
    with pytest.raises(MalformedFile):
        io.module_from_json({"n": 2, "join": [[0, 0], [1, 1]], "bottom": 0})
    with pytest.raises(MalformedFile):
        io.diagram_from_json({"levels": [[1], [3]], "steps": [[[2]]]})
