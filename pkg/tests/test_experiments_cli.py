import csv
import io

import pytest

from mrmlearn.cli import main
from mrmlearn.errors import ConfigError
from mrmlearn.experiments import (COLUMNS, RunConfig, format_csv, load_run_config, run_batch,
                                  run_trial, strip_timing, summarize)
from mrmlearn.formats import emit_mrm

FAST = {"acts_to_ext": 200, "mcts_trajectories": 20}


def test_csv_layout():
    cfg = RunConfig(domain="cookie", mode="learn-random", trials=2, seed=4, learner=FAST)
    results = run_batch(cfg)
    rows = list(csv.reader(io.StringIO(format_csv(results))))
    assert tuple(rows[0]) == COLUMNS
    assert [r[1] for r in rows[1:3]] == ["4", "5"]
    assert rows[-1][0] == "mean±sd" and "±" in rows[-1][3]
    assert len(rows) == 4
    assert summarize(results)["learned_ok"][0] == 1.0


def test_config_validation():
    for bad in ({"trials": 0}, {"apf": 0.0}, {"domain": "maze"}, {"mode": "guess"},
                {"domain": "custom"}, {"learner": {"warp": 1}}, {"learner": {"gamma": 2}}):
        with pytest.raises(ConfigError):
            RunConfig(**bad)


def test_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("domain = cookie\nmode = learn-random\ntrials = 3\nk = 4\n")
    cfg = load_run_config(path, {"trials": 2, "seed": None})
    assert (cfg.domain, cfg.trials, cfg.learner) == ("cookie", 2, {"k": 4})
    path.write_text("domain = cookie\ntrials = lots\n")
    with pytest.raises(ConfigError, match="line 2"):
        load_run_config(path)
    path.write_text("speed = 3\n")
    with pytest.raises(ConfigError, match="unknown setting"):
        load_run_config(path)


def test_custom_domain_from_files(tmp_path, treasure):
    (tmp_path / "world.map").write_text("S.a\n...\nb..\nlegend:\na = m\nb = e\n")
    machine = treasure.__class__(["u0", "u1"], "u0", ["m", "e"], {("u0", "m"): "u1"},
                                 {("u0", "m"): 4.0, ("u1", "e"): 2.0})
    (tmp_path / "hidden.mrm").write_text(emit_mrm(machine))
    (tmp_path / "run.cfg").write_text(
        "domain = custom\ngrid = world.map\nmachine = hidden.mrm\napf = 0.9\n")
    cfg = load_run_config(tmp_path / "run.cfg", {"trials": 1})
    res = run_trial(cfg, 0)
    assert res.learned_ok == 1


def test_batch_is_reproducible():
    cfg = RunConfig(domain="treasure", apf=0.95, trials=2, seed=11, learner=FAST)
    assert strip_timing(format_csv(run_batch(cfg))) == strip_timing(format_csv(run_batch(cfg)))


def test_cli_commands(tmp_path, capsys):
    out = tmp_path / "m.mrm"
    assert main(["learn", "--domain", "cookie", "--mode", "learn-random", "--seed", "1",
                 "--out", str(out)]) == 0
    assert out.read_text().startswith("alphabet:")
    assert main(["exploit", "--domain", "cookie", "--machine", str(out), "--episodes", "5",
                 "--horizon", "50"]) == 0
    assert "V(s0, u0)" in capsys.readouterr().err
    csv_out = tmp_path / "runs.csv"
    assert main(["batch", "--domain", "cookie", "--mode", "learn-random", "--trials", "2",
                 "--out", str(csv_out)]) == 0
    assert csv_out.read_text().splitlines()[0] == ",".join(COLUMNS)
    assert main(["inspect-table", "--domain", "cookie", "--mode", "learn-random"]) == 0
    assert capsys.readouterr().out.strip()


def test_cli_errors(tmp_path, capsys):
    assert main(["batch", "--trials", "0"]) == 2
    assert "trials" in capsys.readouterr().err
    assert main(["learn", "--config", str(tmp_path / "missing.cfg")]) == 2
    assert main(["exploit", "--domain", "cookie", "--machine", str(tmp_path / "x.mrm")]) == 2
    with pytest.raises(SystemExit):
        main(["learn", "--domain", "maze"])
