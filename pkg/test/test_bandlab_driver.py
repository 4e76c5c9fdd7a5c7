import json

import pytest

from bandlab import bandlab_driver
from bandlab.bandlab_driver import EXIT_IO, EXIT_NONTRIVIAL, EXIT_OK, EXIT_USAGE, main
from bandlab.group_core import relator
from bandlab.van_kampen import diagram_from_conjugates


def _dot_nodes(text):
    return [line for line in text.splitlines() if "[label=" in line and "->" not in line]


def test_parser_defaults():
    args = bandlab_driver._parse_args(["experiment"])
    assert (args.level, args.base, args.push, args.beta_len, args.ball) == (2, 15, 6, 8, 12)
    assert args.use_ball
    assert bandlab_driver._parse_args(["experiment", "--no-ball"]).use_ball is False
    assert bandlab_driver._parse_args(["wp", "--word", "a", "--in", "G1:3"]).target == ("G1", 3)


@pytest.mark.parametrize(
    "argv, code, verdict",
    [
        (["wp", "--word", "aa", "--in", "L"], EXIT_OK, "trivial"),
        (["wp", "--word", "a X^2 a x^2 a X^2 a x^2", "--in", "G1:2"], EXIT_NONTRIVIAL, "nontrivial"),
        (["wp", "--word", "a X^2 a x^2 a X^2 a x^2", "--in", "G1:3"], EXIT_OK, "trivial"),
        (["wp", "--word", "xtXT", "--in", "E"], EXIT_OK, "trivial"),
        (["wp", "--word", "ax"], EXIT_NONTRIVIAL, "nontrivial"),
    ],
)
def test_word_problem(capsys, argv, code, verdict):
    assert main(argv) == code
    assert capsys.readouterr().out.split()[0] == verdict


def test_word_problem_usage_errors():
    with pytest.raises(SystemExit) as err:
        main(["wp", "--word", "aa", "--in", "G1:0"])
    assert err.value.code == 2
    assert main(["wp", "--word", "ab"]) == EXIT_USAGE
    assert main(["wp", "--word", "at", "--in", "L"]) == EXIT_USAGE


def test_fill_then_bands(tmp_path, capsys):
    diagram_file = tmp_path / "d.json"
    assert main(["fill", "--word", relator(1), "--level", "2", "--json", str(diagram_file)]) == EXIT_OK
    assert "area=1" in capsys.readouterr().out
    assert main(["bands", "--diagram", str(diagram_file)]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["area"] == 1
    assert len(report["bands"]) == 2


def test_fill_not_found(capsys):
    assert main(["fill", "--word", relator(2), "--level", "2", "--max-area", "6"]) == EXIT_NONTRIVIAL
    assert capsys.readouterr().out.startswith("not found")


def test_bands_rejects_bad_input(tmp_path):
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{}")
    assert main(["bands", "--diagram", str(garbage)]) == EXIT_USAGE

    data = diagram_from_conjugates([("", 2, 1)], 3).to_dict()
    data["level"] = 2
    invalid = tmp_path / "invalid.json"
    invalid.write_text(json.dumps(data))
    assert main(["bands", "--diagram", str(invalid)]) == EXIT_USAGE

    assert main(["bands", "--diagram", str(tmp_path / "missing.json")]) == EXIT_IO


def test_ball_dot_is_deterministic(capsys):
    assert main(["ball", "--radius", "1", "--level", "2", "--dot", "-"]) == EXIT_OK
    first = capsys.readouterr().out
    assert main(["ball", "--radius", "1", "--level", "2", "--dot", "-"]) == EXIT_OK
    second = capsys.readouterr().out
    assert first == second
    assert len(_dot_nodes(first)) == 4


def test_experiment(tmp_path, capsys):
    argv = [
        "experiment",
        "--level", "1",
        "--base", "4",
        "--push", "2",
        "--beta-len", "6",
        "--ball", "3",
        "--no-progress",
        "--outdir", str(tmp_path),
    ]
    assert main(argv) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("n=1 m=4 k=2 betas=")
    assert out.strip().endswith("fillable=0")
    assert (tmp_path / "pushout_n1_m4_k2_len6_N3.json").exists()
    assert (tmp_path / "pushout_n1_m4_k2_len6_N3.ecsv").exists()


def test_ext(capsys):
    assert main(["ext", "--word", "Tat"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "[1 + x^1]" in out
    assert "abelian_image=(0, 0)" in out
    assert main(["ext", "--word", "xxt", "--json", "-"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out.splitlines()[-1])
    assert (data["m"], data["q"]) == (2, 1)


def test_k_table(capsys):
    assert main(["k", "--level", "1", "2", "--json", "-"]) == EXIT_OK
    records = json.loads(capsys.readouterr().out)
    assert [r["K"] for r in records] == [1, 4]


def test_experiment_json_and_bad_config(capsys):
    argv = ["experiment", "--level", "1", "--base", "4", "--push", "2", "--beta-len", "4",
            "--ball", "3", "--no-progress", "--json", "-"]
    assert main(argv) == EXIT_OK
    out = capsys.readouterr().out
    report = json.loads(out[out.index("{"):])
    assert report["config"]["beta_len_max"] == 4
    assert report["candidates"] == len(report["verdicts"])
    assert report["control"]["verdict"] == "fillable"

    assert main(["experiment", "--level", "0", "--no-progress"]) == EXIT_USAGE
