import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homeodistort.cli import main
from homeodistort.io import ParseError, fixture_text, load_fixture, parse_sequence, serialize_sequence
from homeodistort.pl import affine, make_pl

from conftest import pl_maps

F = Fraction
FAST = ["--window", "-20", "20", "--samples", "20"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def four(tmp_path):
    p = tmp_path / "four.json"
    p.write_text(fixture_text("four"))
    return p


# -- io --------------------------------------------------------------------


def test_fixtures_load():
    assert len(load_fixture("four")) == 4
    assert len(load_fixture("eight")) == 8


@settings(max_examples=40)
@given(st.lists(pl_maps(), max_size=5))
def test_sequence_round_trip(fs):
    text = serialize_sequence(fs)
    assert parse_sequence(text) == fs
    assert serialize_sequence(parse_sequence(text)) == text


def test_fixture_text_is_canonical():
    text = fixture_text("eight")
    assert serialize_sequence(parse_sequence(text)) == text


def test_parse_error_reports_line():
    good = serialize_sequence([affine(1, 1), make_pl([(0, 0), (1, 2)])])
    lines = good.splitlines()
    lines[2] = lines[2].replace('"1/1"', '"1/0"', 1)
    with pytest.raises(ParseError) as exc:
        parse_sequence("\n".join(lines))
    assert exc.value.line == 3


def test_parse_rejects_garbage():
    for bad in ["", "{}", "[1", "[] []", '[{"breakpoints": []}]']:
        with pytest.raises(ParseError):
            parse_sequence(bad)


# -- commands --------------------------------------------------------------


def test_distort_writes_outputs(capsys, four, tmp_path):
    out = tmp_path / "cert.json"
    code, text, _ = run(capsys, "distort", "--input", str(four), "--out", str(out), *FAST)
    assert code == 0
    assert "generators\t10" in text
    assert (tmp_path / "cert.ledger.tsv").read_text().startswith("n\t")
    assert (tmp_path / "cert.ledger.png").stat().st_size > 1000
    assert json.loads(out.read_text())["format"] == "homeodistort.certificate/1"


def test_distort_deterministic(capsys, four, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "distort", "--input", str(four), "--out", str(a), *FAST)
    run(capsys, "distort", "--input", str(four), "--out", str(b), *FAST)
    assert a.read_bytes() == b.read_bytes()


def test_verify_round_trip_and_corruption(capsys, four, tmp_path):
    cert = tmp_path / "cert.json"
    assert run(capsys, "distort", "--input", str(four), "--out", str(cert), *FAST)[0] == 0
    code, text, _ = run(capsys, "verify", "--input", str(cert), *FAST)
    assert code == 0, text
    data = json.loads(cert.read_text())
    word = data["words"][2]
    word[0][1] += 1 if word[0][1] > 0 else -1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, text, _ = run(capsys, "verify", "--input", str(bad), *FAST)
    assert code == 1
    assert "witness\tverify\t" in text and "n=2" in text


def test_factorize(capsys, four, tmp_path):
    out = tmp_path / "fac.json"
    code, text, _ = run(capsys, "factorize", "--input", str(four), "--out", str(out), *FAST)
    assert code == 0, text
    assert (tmp_path / "fac.anchors.png").exists()
    assert json.loads(out.read_text())["verification"]["passed"]


def test_orbits(capsys, tmp_path):
    out = tmp_path / "orb.json"
    code, text, _ = run(capsys, "orbits", "--count", "2", "--depth", "8", "--out", str(out))
    assert code == 0
    assert "violations\t0" in text
    assert (tmp_path / "orb.figure.txt").exists() and (tmp_path / "orb.orbits.png").exists()


def test_orbits_exhausted_is_input_error(capsys):
    code, _, err = run(capsys, "orbits", "--count", "1", "--den-bound", "1")
    assert code == 2 and "no admissible" in err


def test_counterexample(capsys, tmp_path):
    spec = tmp_path / "cx.json"
    spec.write_text(json.dumps({"group": "S3", "generators": [[1, 1, 2], [3, 3, 0]], "target": [1, 2, 0]}))
    code, text, _ = run(capsys, "counterexample", "--input", str(spec))
    assert code == 0
    assert "certificate\tclass=[0, 1]" in text and "generated=False" in text
    spec.write_text(json.dumps({"group": "S3", "generators": [[1, 1, 2]], "target": [1, 1, 2]}))
    code, text, _ = run(capsys, "counterexample", "--input", str(spec))
    assert code == 1 and "not found" in text


def test_counterexample_table_file(capsys, tmp_path):
    (tmp_path / "z3.txt").write_text("0 1 2\n1 2 0\n2 0 1\n")
    spec = tmp_path / "cx.json"
    spec.write_text(json.dumps({"table_file": "z3.txt", "generators": [[1, 1]], "target": [0, 2]}))
    assert run(capsys, "counterexample", "--input", str(spec))[0] == 0


def test_selftest(capsys):
    code, text, _ = run(capsys, "selftest", "--samples", "10")
    assert code == 0
    assert "FAIL" not in text


# -- input errors ----------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["distort"],
        ["distort", "--input", "/nonexistent/file.json"],
        ["distort", "--input", "fixture:nope"],
        ["distort", "--input", "fixture:four", "--window", "1/0", "2"],
        ["distort", "--input", "fixture:four", "--window", "3", "1"],
        ["orbits", "--count", "0"],
        ["bogus"],
    ],
)
def test_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_parse_error_exit_2(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('[\n{"breakpoints": [["0/1", "1/0"]], "slope_left": "1/1", "slope_right": "1/1"}\n]\n')
    code, _, err = run(capsys, "distort", "--input", str(p))
    assert code == 2 and "line 2" in err


def test_verify_rejects_non_certificate(capsys, four):
    assert run(capsys, "verify", "--input", str(four))[0] == 2


def test_bad_group_table(capsys, tmp_path):
    spec = tmp_path / "cx.json"
    spec.write_text(json.dumps({"table": [[0, 1], [1, 1]], "generators": [], "target": [0]}))
    assert run(capsys, "counterexample", "--input", str(spec))[0] == 2


def test_module_entry_point(tmp_path):
    r = subprocess.run(
        [sys.executable, "-m", "homeodistort", "selftest", "--samples", "5"],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert r.returncode == 0, r.stderr
