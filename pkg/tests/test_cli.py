import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from postft.cli import render_table, run

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"


def call(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], stdout=out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call(*argv)
    return code, json.loads(text)


def test_divisors():
    assert call_json("divisors", 12) == (0, {"d": 6, "match": True, "n": 12, "oracle": 6})
    code, doc = call_json("divisors", 12, "--omega")
    assert code == 0 and doc["omega"] == [1, 2, 2, 1]


@pytest.mark.parametrize("n", [0, -3, 10**7])
def test_divisor_range(n):
    code, doc = call_json("divisors", n)
    assert code == 1 and doc["error"] == "InputError"


def test_verify():
    code, doc = call_json("verify", "delta", "gluing", "--cases", 100, "--seed", 7)
    assert code == 0
    assert doc == {"cases": 100, "failures": 0, "instance": "delta", "theorem": "gluing"}


def test_verify_scoped_out_still_exits_zero():
    code, doc = call_json("verify", "max-step", "cyl-idempotent", "--cases", 10)
    assert code == 0 and doc["scoped_out"] and "witness" in doc


def test_statesum_signature():
    assert call_json("statesum", "signature", DATA / "closed-sigma3.json") == (0, {"3": "1"})
    assert call_json("statesum", "signature", DATA / "closed-e8.json") == (0, {"8": "1"})


def test_statesum_with_boundary():
    boundary = DATA / "iv-boundary.json"
    code, strands = call_json("statesum", "iv-step", DATA / "strands.json", "--boundary", boundary)
    assert code == 0 and strands == {"0": "440", "1": "1"}
    code, turnback = call_json("statesum", "iv-step", DATA / "turnback.json", "--boundary", boundary)
    assert code == 0 and turnback == {"0": "400"}


def test_statesum_vector_and_divisors():
    code, doc = call_json("statesum", "max-lc", DATA / "interval.json", "--k", 2)
    assert code == 0
    assert [["0"], ["0"]] in [k for k, _ in doc["values"]]
    assert call_json("statesum", "divisor", DATA / "n12.json") == (0, {"1": "6"})


@pytest.mark.parametrize("group, colors, orbits", [("c3.json", 2, 4), ("c4.json", 2, 6), ("d4.json", 3, 21)])
def test_polya(group, colors, orbits):
    code, doc = call_json("polya", DATA / group, "--colors", colors)
    assert code == 0 and doc["match"] and doc["orbits"] == orbits
    assert len(set(doc["counts"].values())) == 1


def test_polya_rejects_non_groups(tmp_path):
    bad = tmp_path / "g.json"
    bad.write_text(json.dumps({"degree": 3, "elements": [[0, 1, 2], [1, 2, 0]]}))
    code, doc = call_json("polya", bad, "--colors", 2)
    assert code == 1
    bad.write_text(json.dumps({"degree": 3, "generators": [[0, 0, 1]]}))
    assert call("polya", bad, "--colors", 2)[0] == 1


def test_laws_and_catcheck():
    code, doc = call_json("laws", "tropical-min-plus", "--samples", 30)
    assert code == 0 and doc["passed"]
    code, doc = call_json("catcheck", DATA / "arrow-category.json")
    assert code == 0 and doc["passed"]


def test_catcheck_reports_a_failing_table(tmp_path):
    els = ["1", "0"]
    doc = {
        "objects": ["*"],
        "morphisms": [{"id": e, "dom": "*", "cod": "*"} for e in els],
        "compose": [[b, a, "1" if a == b == "1" else "0"] for a in els for b in els],
        "identities": {"*": "1"},
        "tensor_objects": [["*", "*", "*"]],
        "tensor": [[a, b, "1" if a == b else "0"] for a in els for b in els],
        "unit": "*",
    }
    path = tmp_path / "cat.json"
    path.write_text(json.dumps(doc))
    code, report = call_json("catcheck", path)
    assert code == 2
    assert report["checks"]["interchange"]["failures"] > 0


def test_signature_and_aggregate():
    assert call_json("signature", DATA / "e8.json") == (0, {"match": True, "signature": 8, "size": 8, "sturm": 8})
    assert call_json("signature", DATA / "diag.json")[1]["signature"] == 1
    code, doc = call_json("aggregate", "signature", DATA / "catalog-a.json")
    assert code == 0
    assert doc["values"] == [[["*", "*"], {"-2": "1", "0": "1", "1": "2"}]]


@pytest.mark.parametrize(
    "argv",
    [
        ("laws", "tropical"),
        ("statesum", "max-lc", "missing.json"),
        ("statesum", "max-lc", DATA / "interval.json", "--k", 0),
        ("statesum", "delta", DATA / "interval.json", "--nmax", -1),
        ("signature", DATA / "c3.json"),
    ],
)
def test_invalid_input_exits_one(argv):
    code, doc = call_json(*argv)
    assert code == 1
    assert set(doc) == {"error", "message"}


def test_bad_boundary_exits_one(tmp_path):
    path = tmp_path / "b.json"
    path.write_text(json.dumps({"in": [7], "out": [0]}))
    code, doc = call_json("statesum", "max-lc", DATA / "interval.json", "--boundary", path)
    assert code == 1


def test_semiring_option_forms(tmp_path):
    desc = tmp_path / "s.json"
    desc.write_text(json.dumps("boolean"))
    for value in ("boolean", str(desc)):
        code, doc = call_json("statesum", "signature", DATA / "closed-sigma3.json", "--semiring", value)
        assert code == 0 and doc == {"3": "1"}


def test_table_format():
    code, text = call("--format", "table", "divisors", 12)
    assert code == 0
    lines = text.splitlines()
    assert lines[0].split() == ["d", "6"]
    assert [line.split()[0] for line in lines] == ["d", "match", "n", "oracle"]
    assert render_table({"a": {"b": [1, {"c": 2}]}}) == [("a.b[0]", "1"), ("a.b[1].c", "2")]


def test_output_file(tmp_path):
    target = tmp_path / "out.json"
    code, text = call("--output", target, "divisors", 30)
    assert code == 0 and text == ""
    assert json.loads(target.read_text())["d"] == 8


def test_runs_are_byte_identical():
    argv = [sys.executable, "-m", "postft", "verify", "max-step", "zigzag", "--cases", "15", "--seed", "3"]
    first = subprocess.run(argv, capture_output=True, cwd=ROOT, check=False)
    second = subprocess.run(argv, capture_output=True, cwd=ROOT, check=False)
    assert first.returncode == 0
    assert first.stdout == second.stdout and first.stdout
