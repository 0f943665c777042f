import json
from fractions import Fraction

import jsonschema
import pytest

from nlgames.cli import main
from nlgames.classical import ee_worst_dist
from nlgames.dsl import serialize_game
from nlgames.game import build_ee
from nlgames.report import load_schema

SCHEMA = load_schema()


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, tmp_path, *argv):
    path = tmp_path / "report.json"
    code, out, err = run(capsys, *argv, "--json", str(path))
    report = json.loads(path.read_text())
    jsonschema.validate(report, SCHEMA)
    assert report["schema"] == 1
    return code, report, out


def test_value_chsh(capsys, tmp_path):
    code, report, out = run_json(capsys, tmp_path, "value", "builtin:chsh", "--dist", "uniform")
    assert code == 0
    assert report["result"]["value"] == {"exact": "1/2"}


def test_value_point_mass(capsys, tmp_path):
    code, report, _ = run_json(capsys, tmp_path, "value", "builtin:ee,6", "--dist", "point:1,1")
    assert code == 0 and report["result"]["value"] == {"exact": "1/1"}


def test_worst_nand4(capsys, tmp_path):
    code, report, _ = run_json(capsys, tmp_path, "worst", "builtin:nand,4")
    assert code == 0 and report["result"]["value"] == {"exact": "4/11"}


def test_worst_ee_quantum_bracket(capsys, tmp_path):
    code, report, out = run_json(capsys, tmp_path, "worst", "builtin:ee,6", "--quantum")
    assert code == 0
    assert Fraction(report["result"]["lower"]["exact"]) == Fraction(report["result"]["upper"]["exact"]) == Fraction(6, 14)


def test_worst_ma4_quantum(capsys, tmp_path):
    code, report, _ = run_json(capsys, tmp_path, "worst", "builtin:ma,4", "--quantum")
    assert code == 0
    assert abs(report["result"]["upper"]["float"] - 2**-0.5) < 1e-5


def test_worst_or_and_no_shared(capsys, tmp_path):
    code, report, out = run_json(capsys, tmp_path, "worst", "builtin:orand", "--no-shared")
    assert code == 0
    assert abs(report["result"]["value"]["float"] - (5**0.5 - 2)) < 1e-6
    assert "sqrt(5) - 2" in out


def test_file_game_with_file_distribution(capsys, tmp_path):
    game = tmp_path / "ee4.nlg"
    game.write_text(serialize_game(build_ee(4), ee_worst_dist(4)))
    code, report, _ = run_json(capsys, tmp_path, "value", str(game))
    assert code == 0 and report["result"]["value"] == {"exact": "1/2"}


def test_simulate(capsys, tmp_path):
    code, report, _ = run_json(capsys, tmp_path, "simulate", "builtin:chsh", "--strategy", "classical",
                               "--rounds", "100000", "--seed", "3")
    assert code == 0
    assert report["result"]["rounds"] == 100000
    assert report["result"]["within_4_stderr"]


def test_reports_are_byte_identical(capsys, tmp_path):
    texts = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        assert main(["worst", "builtin:ee,3", "--json", str(path)]) == 0
        texts.append(path.read_bytes())
    capsys.readouterr()
    assert texts[0] == texts[1]


def test_verify_only_group(capsys, tmp_path):
    code, report, out = run_json(capsys, tmp_path, "verify-paper", "--only", "ee")
    assert code == 0
    assert report["rows"] and all(r["group"] == "ee" and r["passed"] for r in report["rows"])


def test_builtins_listing(capsys):
    code, out, _ = run(capsys, "builtins")
    assert code == 0
    for gid in ("chsh", "ee", "nand", "ma", "nmaj", "orand"):
        assert gid in out


def test_parse_check(capsys, tmp_path):
    good = tmp_path / "g.nlg"
    good.write_text("players 2\ninputs 2 2\nbuiltin chsh\n")
    code, out, _ = run(capsys, "parse-check", str(good), "--canonical")
    assert code == 0 and "builtin chsh" in out
    bad = tmp_path / "b.nlg"
    bad.write_text("players 2\ninputs 2 2\nwin 1 1 : 0\n")
    code, _, err = run(capsys, "parse-check", str(bad))
    assert code == 1 and "line" in err


@pytest.mark.parametrize(
    "argv,code",
    [
        (["value", "builtin:nope"], 1),
        (["value", "builtin:chsh", "--dist", "point:3,1"], 1),
        (["value", "/nonexistent.nlg"], 1),
        (["worst", "builtin:orand", "--quantum"], 2),
        (["worst", "builtin:nand,3", "--no-shared"], 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_non_convergence_exit_code(capsys, tmp_path):
    path = tmp_path / "r.json"
    code = main(["worst", "builtin:nand,3", "--quantum", "--tol", "1e-14", "--json", str(path)])
    capsys.readouterr()
    assert code == 3
    jsonschema.validate(json.loads(path.read_text()), SCHEMA)
