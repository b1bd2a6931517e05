import json

import pytest

import zmsq.figures as figures
from zmsq.cli import main
from zmsq.squares import parse_text, render_text, square_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_build_text_round_trip(capsys):
    code, out = run(capsys, "build", "--group", "Z9", "--format", "text")
    assert code == 0
    sq = parse_text(out)
    code, out = run(capsys, "build", "--group", "Z9")
    assert code == 0
    assert square_from_json(json.loads(out)).cells == sq.cells


def test_build_impossible_carries_certificate(capsys):
    code, out = run(capsys, "build", "--group", "Z36")
    assert code == 1
    obj = json.loads(out)
    assert obj["status"] == "impossible"
    assert obj["certificate"]["reason"] == "unique_involution"
    assert obj["certificate"]["involution"] == [18]

    code, out = run(capsys, "build", "--group", "Z2xZ2")
    assert code == 1
    assert json.loads(out)["certificate"]["reason"] == "side_too_small"


def test_build_verify_pipeline(tmp_path, capsys):
    code, out = run(capsys, "build", "--group", "Z2xZ8", "--trace")
    assert code == 0
    path = tmp_path / "sq.json"
    path.write_text(out)
    code, out = run(capsys, "verify", "--in", str(path))
    assert code == 0
    report = json.loads(out)
    assert report["is_zero_sum"] and report["constant"] == [0, 0]

    code, out = run(capsys, "blocks", "--in", str(path))
    assert code == 0
    blocks = json.loads(out)["blocks"]
    assert len(blocks) == 2 * 4 + 2


def test_verify_text_input(tmp_path, capsys):
    sq = figures.figure("zms_z4z4_4")
    path = tmp_path / "sq.txt"
    path.write_text(render_text(sq))
    code, out = run(capsys, "verify", "--in", str(path))
    assert code == 0 and json.loads(out)["is_magic"]


def test_verify_bad_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{broken")
    code, _ = run(capsys, "verify", "--in", str(path))
    assert code == 2
    code, _ = run(capsys, "verify", "--in", str(tmp_path / "missing.json"))
    assert code == 2


def test_classify(capsys):
    code, out = run(capsys, "classify", "--group", "Z2xZ8")
    assert code == 0
    obj = json.loads(out)
    assert obj == {
        "order": 16,
        "side": 4,
        "involution_count": 3,
        "in_g": True,
        "total_sum": [0, 0],
    }


def test_classic(capsys):
    code, out = run(capsys, "classic", "--n", "5")
    assert code == 0 and json.loads(out)["n"] == 5
    code, _ = run(capsys, "classic", "--n", "2")
    assert code == 1


def test_kotzig(capsys):
    code, out = run(capsys, "kotzig", "--group", "Z2xZ2", "--rows", "3")
    assert code == 0
    obj = json.loads(out)
    assert obj["rows"] == 3 and obj["cols"] == 4

    code, out = run(capsys, "kotzig", "--group", "Z16", "--rows", "3")
    assert code == 1
    assert json.loads(out)["certificate"]["reason"] == "unique_involution"

    code, out = run(capsys, "kotzig", "--group", "Z9", "--rows", "4", "--grouped", "3")
    assert code == 0 and json.loads(out)["group_size"] == 3


def test_oracle(capsys):
    code, out = run(capsys, "oracle", "--group", "Z4", "--n", "2")
    assert code == 0
    obj = json.loads(out)
    assert obj["count"] == 0 and obj["exhaustive"]

    code, out = run(capsys, "oracle", "--group", "Z9", "--n", "3", "--mu", "0", "--cap", "2")
    assert code == 0
    obj = json.loads(out)
    assert obj["count"] > 0 and len(obj["squares"]) == 2

    code, out = run(capsys, "oracle", "--group", "Z2xZ8", "--n", "4", "--budget", "50")
    assert code == 3
    assert not json.loads(out)["exhaustive"]


def test_spectrum(capsys):
    code, out = run(capsys, "spectrum", "--group", "Z9", "--n", "3", "--budget", "100000")
    assert code == 0
    obj = json.loads(out)
    assert obj["exhaustive"]
    achieved = {tuple(e["mu"]) for e in obj["entries"] if e["status"] == "achieved"}
    assert achieved == {(0,), (3,), (6,)}


def test_figure_command(capsys):
    code, out = run(capsys, "figure", "--list")
    assert code == 0 and "zms_z2z8_4" in json.loads(out)
    code, out = run(capsys, "figure", "zms_z2z8_4")
    assert code == 0 and json.loads(out)["group"] == {"moduli": [2, 8]}


def test_bad_group_is_usage_error(capsys):
    code, _ = run(capsys, "classify", "--group", "Z1")
    assert code == 2
    code, _ = run(capsys, "build", "--group", "Z8")  # non-square order
    assert code == 2
