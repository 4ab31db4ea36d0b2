import json

import pytest

from slewind.cli import parse_complex, parse_frame, run


def _json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


@pytest.mark.parametrize("text,value", [("1+1i", 1 + 1j), ("0.5i", 0.5j), ("-2+3.5i", -2 + 3.5j),
                                        ("1e-1+2i", 0.1 + 2j)])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_parse_frame():
    f = parse_frame("-1,inf")
    assert f.x1 == -1 and f.x2 == float("inf")


def test_prob_one_point(capsys):
    code, doc = _json(capsys, ["prob", "--points", "1+1i", "--frame", "0,inf"])
    assert code == 0
    assert doc["p_separated"] == pytest.approx(0.8535533905932737, abs=1e-12)
    assert doc["provenance"]["command"] == "prob"


def test_prob_two_points_csv(capsys, tmp_path):
    out = tmp_path / "p.csv"
    assert run(["prob", "--points", "1i", "2i", "--format", "csv", "-o", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("# ")
    assert len([ln for ln in text.splitlines() if not ln.startswith("#")]) == 5


def test_green_commands(capsys):
    code, doc = _json(capsys, ["green", "--points", "1i", "--method", "direct_block"])
    assert code == 0
    assert doc["results"][0]["value"] == pytest.approx(1.0)
    assert run(["green", "--points", "1i", "2i", "--method", "direct_block"]) == 3


def test_bad_input_exit_codes(capsys):
    assert run(["prob", "--points", "1-1i"]) == 2
    assert run(["prob", "--points", "1+1i", "--kappa", "5"]) == 2
    assert run(["grid", "--ymin", "-1"]) == 2
    assert run(["nonsense"]) == 2


def test_grid_closed(capsys):
    code, doc = _json(capsys, ["grid", "--method", "closed", "--nx", "3", "--ny", "2"])
    assert code == 0 and len(doc["results"]) == 6


def test_mc_and_verify(capsys):
    code, doc = _json(capsys, ["mc", "--points", "1+1i", "--samples", "2000"])
    assert code == 0 and len(doc["results"]) == 2
    code, doc = _json(capsys, ["verify", "--suite", "closedform"])
    assert code == 0 and doc["all_pass"]
