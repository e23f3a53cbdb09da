import json
import subprocess
import sys

import pytest

from skirental.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestDecide:
    def test_prior_file(self, capsys, tmp_path):
        path = tmp_path / "pm.txt"
        path.write_text("5,1.0\n")
        assert run(capsys, "decide", "--prior-file", str(path), "--buy-cost", "3")[:2] == (0, "t*=1\n")

    def test_never(self, capsys):
        assert run(capsys, "decide", "--prior", "uniform(N=50)")[:2] == (0, "never (t*=51)\n")

    def test_buy_first_day(self, capsys):
        assert run(capsys, "decide", "--prior", "uniform(N=500)", "--buy-cost", "100")[1] == "t*=1\n"

    def test_default_horizon(self, capsys):
        assert run(capsys, "decide", "--prior", "gaussian(mu=100,sigma=30)", "--buy-cost", "120")[1] \
            == "never (t*=501)\n"

    @pytest.mark.parametrize("method", ["dense", "sparse"])
    def test_methods(self, capsys, method):
        assert run(capsys, "decide", "--prior", "uniform(N=500)", "--method", method)[1] == "t*=1\n"

    def test_trace(self, capsys):
        code, out, _ = run(capsys, "decide", "--prior", "0.5*point(k=2)+0.5*point(k=20)", "--buy-cost", "15",
                           "--trace")
        assert code == 0
        assert out.splitlines() == ["day,e_rent,action", "1,11.0,rent", "2,10.0,rent", "3,18.0,buy", "t*=3"]

    @pytest.mark.parametrize(
        "argv",
        [
            ["decide"],
            ["decide", "--prior", "weibull(k=1)"],
            ["decide", "--prior", "uniform(N=50)", "--buy-cost", "0.5"],
            ["decide", "--prior", "uniform(N=50)", "--horizon", "10"],
        ],
    )
    def test_validation_errors(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 2
        assert err.startswith("error:")

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "decide", "--prior-file", str(tmp_path / "nope"))[0] == 1


class TestSimulate:
    def test_outputs(self, capsys, tmp_path):
        code, out, _ = run(capsys, "simulate", "--prior", "point(k=100)", "--buy-cost", "100", "--horizon", "500",
                           "--trials", "20", "--out", str(tmp_path))
        assert code == 0
        rows = {line.split(",")[0]: line.split(",") for line in out.splitlines()[1:]}
        assert float(rows["deterministic"][1]) == pytest.approx(1.99)
        for name in ("trials.csv", "summary.csv", "config.json"):
            assert (tmp_path / name).exists()
        cfg = json.loads((tmp_path / "config.json").read_text())
        assert cfg["trials"] == 20 and cfg["seed"] == 42

    def test_repeatable(self, capsys, tmp_path):
        argv = ["simulate", "--prior", "gaussian(mu=100,sigma=30)", "--trials", "100", "--seed", "42"]
        run(capsys, *argv, "--out", str(tmp_path / "a"))
        run(capsys, *argv, "--out", str(tmp_path / "b"))
        for name in ("trials.csv", "summary.csv", "config.json"):
            a = (tmp_path / "a" / name).read_bytes()
            b = (tmp_path / "b" / name).read_bytes()
            assert a == b

    def test_config_file_and_override(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"prior": "uniform(N=500)", "trials": 30, "policy": "bayesian"}))
        run(capsys, "simulate", "--config", str(cfg), "--trials", "10", "--out", str(tmp_path / "o"))
        lines = (tmp_path / "o" / "trials.csv").read_text().splitlines()
        assert len(lines) == 11

    def test_config_replay(self, capsys, tmp_path):
        run(capsys, "simulate", "--prior", "uniform(N=200)", "--trials", "25", "--policy", "bayesian,randomized",
            "--out", str(tmp_path / "a"))
        run(capsys, "simulate", "--config", str(tmp_path / "a" / "config.json"), "--out", str(tmp_path / "b"))
        assert (tmp_path / "a" / "trials.csv").read_bytes() == (tmp_path / "b" / "trials.csv").read_bytes()

    def test_unknown_config_key(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"priorr": "uniform"}))
        assert run(capsys, "simulate", "--config", str(cfg))[0] == 2

    def test_unknown_policy(self, capsys, tmp_path):
        assert run(capsys, "simulate", "--prior", "uniform", "--policy", "psychic", "--out", str(tmp_path))[0] == 2


class TestOtherCommands:
    def test_fuse(self, capsys, tmp_path):
        preds = tmp_path / "preds.txt"
        preds.write_text("100,10\n100,10\n")
        out = tmp_path / "fused.txt"
        code, stdout, _ = run(capsys, "fuse", "--predictions", str(preds), "--horizon", "500", "--out", str(out))
        assert code == 0
        assert "mean=100" in stdout
        assert out.read_text().startswith("#")

    def test_fuse_requires_predictions(self, capsys):
        assert run(capsys, "fuse")[0] == 2

    def test_adapt(self, capsys, tmp_path):
        code, out, _ = run(capsys, "adapt", "--prior", "gaussian(mu=100,sigma=30)", "--rounds", "20",
                           "--out", str(tmp_path))
        assert code == 0 and "fitted_C=" in out
        assert len((tmp_path / "regret.csv").read_text().splitlines()) == 21

    def test_experiment(self, capsys, tmp_path):
        code, out, _ = run(capsys, "experiment", "q4", "--out", str(tmp_path))
        assert code == 0
        assert (tmp_path / "q4_summary.csv").exists()

    def test_module_entry_point(self):
        res = subprocess.run([sys.executable, "-m", "skirental", "decide", "--prior", "point(k=5)", "--buy-cost", "3"],
                             capture_output=True, text=True)
        assert res.returncode == 0 and res.stdout == "t*=1\n"
