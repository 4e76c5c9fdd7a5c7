import itertools
import json
import logging

import pandas as pd
import pytest
from astropy.table import Table

from bandlab.cayley import distance
from bandlab.group_core import IDENTITY, eval_word, lamp_mul, path_vertices, relator
from bandlab.semistability import (
    ExperimentConfig,
    Fillable,
    NotFillable,
    alpha_loop,
    analyze_obstruction,
    backtracking_beta,
    check_pushout,
    enumerate_beta,
    pushout_word,
    run_experiment,
)
from bandlab.van_kampen import diagram_from_conjugates, validate

SMALL = dict(n=1, m=4, k=2, beta_len_max=6, N=3)


def _brute_force_betas(cfg):
    base = cfg.basepoint
    found = set()
    for length in range(cfg.beta_len_max + 1):
        for letters in itertools.product("axX", repeat=length):
            w = "".join(letters)
            if not eval_word(w).is_identity():
                continue
            vertices = [lamp_mul(base, g) for g in path_vertices(w)]
            if cfg.ball and any(distance(IDENTITY, v, cfg.N) is not None for v in vertices):
                continue
            found.add(w)
    return found


def test_alpha_loop():
    assert alpha_loop(1) == relator(1)
    assert alpha_loop(3) == "aXXXaxxxaXXXaxxx"
    with pytest.raises(ValueError):
        alpha_loop(0)


def test_pushout_word():
    assert pushout_word("aa", 3, "") == "aaxxxXXX"
    assert pushout_word("", 1, "ax") == "xXaX"
    with pytest.raises(ValueError):
        pushout_word("aa", -1, "")


def test_config_validation(caplog):
    with pytest.raises(ValueError):
        ExperimentConfig(n=0)
    with pytest.raises(ValueError):
        ExperimentConfig(k=-1)
    with caplog.at_level(logging.WARNING):
        ExperimentConfig(m=3, N=5)
    assert "does not clear" in caplog.text
    assert ExperimentConfig().basepoint == eval_word("x" * 21)


def test_short_enumerations():
    assert list(enumerate_beta(ExperimentConfig(beta_len_max=0))) == [""]
    assert list(enumerate_beta(ExperimentConfig(beta_len_max=1))) == [""]
    betas = list(enumerate_beta(ExperimentConfig(beta_len_max=2)))
    assert betas[0] == ""
    assert sorted(betas) == ["", "aa", "xX", "Xx"]


@pytest.mark.parametrize("ball", [True, False])
def test_enumeration_matches_brute_force(ball):
    cfg = ExperimentConfig(**SMALL, ball=ball)
    betas = list(enumerate_beta(cfg))
    assert len(betas) == len(set(betas))
    assert set(betas) == _brute_force_betas(cfg)


def test_ball_constraint_prunes_loops():
    free = set(enumerate_beta(ExperimentConfig(**SMALL, ball=False)))
    constrained = set(enumerate_beta(ExperimentConfig(**SMALL)))
    assert constrained < free
    # x^6 is at distance 6; walking three steps back reaches the ball
    assert "XXXxxx" in free
    assert "XXXxxx" not in constrained


def test_check_pushout():
    cfg = ExperimentConfig(**SMALL)
    verdict = check_pushout(cfg, "")
    assert isinstance(verdict, NotFillable)
    assert not verdict.fillable
    assert verdict.dinfty is not None
    assert verdict.to_dict()["verdict"] == "not_fillable"

    control = check_pushout(cfg, backtracking_beta(cfg))
    assert isinstance(control, Fillable)
    assert control.diagram is None
    assert control.to_dict()["certificate"]["free_reduction"]


def test_materialized_control_diagram():
    cfg = ExperimentConfig(**SMALL, materialize=True)
    control = check_pushout(cfg, backtracking_beta(cfg))
    assert control.fillable
    assert control.diagram is not None
    assert validate(control.diagram) == []
    assert control.diagram.outer_word() == control.word
    assert "diagram" in control.to_dict()["certificate"]

    trace = analyze_obstruction(control.diagram, cfg.n, cfg.k)
    assert trace.k == cfg.k
    assert trace.beta == backtracking_beta(cfg)
    assert trace.self_crossing == ()
    assert not trace.contradiction


def test_small_experiment():
    report = run_experiment(ExperimentConfig(**SMALL), progress=False)
    assert report.candidates == len(_brute_force_betas(report.config))
    assert report.fillable == 0
    assert report.control.fillable
    assert report.summary() == f"n=1 m=4 k=2 betas={report.candidates} fillable=0"


def test_positive_control_without_ball():
    cfg = ExperimentConfig(**SMALL, ball=False)
    report = run_experiment(cfg, progress=False)
    assert report.fillable >= 1
    assert backtracking_beta(cfg) in {v.beta for v in report.verdicts if v.fillable}


def test_workers_do_not_change_verdicts():
    cfg = ExperimentConfig(**SMALL)
    serial = run_experiment(cfg, progress=False)
    parallel = run_experiment(cfg, workers=2, progress=False)
    pd.testing.assert_frame_equal(serial.to_frame(), parallel.to_frame())
    with pytest.raises(ValueError):
        run_experiment(cfg, workers=0)


def test_report_outputs(tmp_path):
    report = run_experiment(ExperimentConfig(**SMALL), progress=False)
    frame = report.to_frame()
    assert len(frame) == report.candidates
    assert not frame["fillable"].any()
    assert frame["beta"].iloc[0] == ""

    data = json.loads(report.to_json())
    assert data["config"]["n"] == 1
    assert data["fillable"] == 0
    assert data["control"]["verdict"] == "fillable"

    paths = report.write(tmp_path, label="small")
    assert json.loads((tmp_path / "small.json").read_text()) == data
    table = Table.read(paths["ecsv"], format="ascii.ecsv")
    assert len(table) == report.candidates
    assert list(table.colnames) == list(frame.columns)


@pytest.mark.slow
def test_default_experiment_finds_nothing():
    report = run_experiment(ExperimentConfig(), progress=False)
    assert report.candidates > 0
    assert report.fillable == 0
    assert report.control.fillable


def test_analyze_obstruction():
    d = diagram_from_conjugates([("", 1, 1), ("", 1, -1)], 2)
    trace = analyze_obstruction(d, 1)
    assert trace.k == 0
    assert trace.beta == "aXaxaXax"
    assert [t.label for t in trace.bands] == ["B1", "B2", "B3", "B4"]
    first = trace.bands[0]
    assert first.start_position == 0
    assert first.end_position == 4
    assert first.ends_on == "alpha"
    assert trace.boundary_sums["B1"] == (0, 0)
    assert not trace.contradiction
    assert trace.self_crossing == ()
    assert json.loads(trace.to_json())["contradiction"] is False


def test_analyze_obstruction_needs_a_pushout_boundary():
    d = diagram_from_conjugates([("", 0, 1)], 1)
    with pytest.raises(ValueError):
        analyze_obstruction(d, 1)
