"""Tests for the command-line interface and its exit codes.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""

import json

import pytest

import cli.commands
from cli.main import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, main
from utils.csv_writer import read_csv

GRID = ["--X", "4", "--h", "0.0078125"]


def test_limit_ode(tmp_path):
    """limit-ode writes the table and the constants."""
    code = main(["limit-ode", "--m", "2", "--xmax", "20", "--step", "1e-2", "--out", str(tmp_path)])
    assert code == EXIT_OK
    data = json.loads((tmp_path / "limit_ode_m2.json").read_text(encoding="utf-8"))
    assert data["mu_bar"] == pytest.approx(2.0 / 6.0 ** 0.5)
    assert len(data["manifest_hash"]) == 64
    table = read_csv(tmp_path / "limit_ode_m2.csv")
    assert list(table.columns) == ["xbar", "Sbar", "Sbar_prime"]
    assert (tmp_path / "manifest_limit-ode.json").is_file()


def test_limit_ode_requires_m(tmp_path):
    """--m is mandatory for limit-ode."""
    assert main(["limit-ode", "--out", str(tmp_path)]) == EXIT_USAGE


def test_limit_ode_step_too_large(tmp_path):
    """An integration failure maps to exit code 1."""
    assert main(["limit-ode", "--m", "2", "--xmax", "50", "--step", "10", "--out", str(tmp_path)]) == EXIT_NUMERICAL


def test_no_command():
    """Without a subcommand the help is printed and usage is reported."""
    assert main([]) == EXIT_USAGE


def test_solve_rejects_delta(tmp_path):
    """delta outside (0, 1/2) is a configuration error."""
    assert main(["solve", "--m", "2", "--delta", "0.9", *GRID, "--out", str(tmp_path)]) == EXIT_USAGE


def test_solve_rejects_spacing(tmp_path):
    """h must be of the form 1/(2K)."""
    assert main(["solve", "--m", "2", "--delta", "0.2", "--X", "4", "--h", "0.003", "--out", str(tmp_path)]) == EXIT_USAGE


def test_solve_is_reproducible(tmp_path):
    """Two runs into different directories write byte-identical profiles."""
    first, second = tmp_path / "a", tmp_path / "b"
    for out in (first, second):
        assert main(["solve", "--m", "2", "--delta", "0.2", *GRID, "--out", str(out)]) == EXIT_OK
    name = "wave_m2_d0.2.csv"
    assert (first / name).read_bytes() == (second / name).read_bytes()
    assert (first / "wave_m2_d0.2.json").read_bytes() == (second / "wave_m2_d0.2.json").read_bytes()


def test_saved_wave_feeds_rescale(tmp_path):
    """rescale reads the wave written by solve."""
    assert main(["solve", "--m", "2", "--delta", "0.2", *GRID, "--out", str(tmp_path)]) == EXIT_OK
    code = main(["rescale", "--wave", str(tmp_path / "wave_m2_d0.2.json"), "--xmax", "50",
                 "--out", str(tmp_path)])
    assert code == EXIT_OK
    data = json.loads((tmp_path / "rescaled_m2_d0.2.json").read_text(encoding="utf-8"))
    assert data["kernel_count"] == 1
    assert data["wronskian"] == pytest.approx(-1.0, abs=1e-6)


def test_empty_sweep(tmp_path):
    """An empty delta list is a usage error."""
    assert main(["sweep", "--m", "2", "--deltas", "", *GRID, "--out", str(tmp_path)]) == EXIT_USAGE


def test_rescale_missing_wave(tmp_path):
    """A missing wave file is a usage error."""
    assert main(["rescale", "--wave", str(tmp_path / "absent.json"), "--out", str(tmp_path)]) == EXIT_USAGE


def test_config_file_unknown_key(tmp_path):
    """Unknown keys in the configuration file are rejected."""
    cfg = tmp_path / "run.cfg"
    cfg.write_text("m = 2\ncolour = blue\n", encoding="utf-8")
    assert main(["solve", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_USAGE


def test_config_file_values(tmp_path):
    """Values from the file are used; flags override them."""
    cfg = tmp_path / "run.cfg"
    cfg.write_text("m = 3\ndeltas = 0.9\nhalf_width = 4\nnodes_per_half = 64\n", encoding="utf-8")
    assert main(["solve", "--config", str(cfg), "--m", "2", "--delta", "0.2", "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "wave_m2_d0.2.csv").is_file()


def test_linearize(tmp_path):
    """linearize writes the essential spectrum curves and the kernel summary."""
    code = main(["linearize", "--m", "2", "--delta", "0.2", *GRID, "--nk", "101", "--out", str(tmp_path)])
    assert code == EXIT_OK
    [summary] = list(tmp_path.glob("spectrum_m2_d0.2_a*.json"))
    data = json.loads(summary.read_text(encoding="utf-8"))
    assert data["kernel_count"] == 1
    assert data["max_real_part"] < 0.0


def test_simulate(tmp_path):
    """simulate writes snapshots, the history and a summary."""
    code = main(["simulate", "--m", "2", "--delta", "0.2", *GRID, "--T-transits", "0.5",
                 "--dt-fraction", "0.2", "--out", str(tmp_path)])
    assert code == EXIT_OK
    assert (tmp_path / "traj_history.csv").is_file()
    data = json.loads((tmp_path / "traj_summary.json").read_text(encoding="utf-8"))
    assert data["energy_drift"] < 1e-2
    assert len(list(tmp_path.glob("traj_t*.csv"))) == 2
    assert data["delta"] == 0.2


def test_lemma4(tmp_path):
    """lemma4 writes the constants table."""
    assert main(["lemma4", "--deltas", "0.4,0.2", "--trials", "2", "--out", str(tmp_path)]) == EXIT_OK
    data = json.loads((tmp_path / "lemma4.json").read_text(encoding="utf-8"))
    assert data["trials"] == 2
    assert (tmp_path / "lemma4.csv").is_file()


def test_lemma4_default_spacing(tmp_path):
    """lemma4 runs with its own rescaled spacing when no flag is given."""
    assert main(["lemma4", "--deltas", "0.2", "--trials", "1", "--out", str(tmp_path)]) == EXIT_OK
    data = json.loads((tmp_path / "lemma4.json").read_text(encoding="utf-8"))
    assert data["spacing"] == pytest.approx(0.05)


def test_sweep_failure_exits_numerical(tmp_path):
    """A failed stage still writes the report, then exits with code 1."""
    code = main(["sweep", "--m", "2", "--deltas", "0.2", *GRID, "--max-iter", "2", "--workers", "1",
                 "--out", str(tmp_path)])
    assert code == EXIT_NUMERICAL
    report = read_csv(tmp_path / "sweep_m2.csv")
    assert list(report["delta"])[0] == pytest.approx(0.2)
    assert (tmp_path / "manifest_sweep.json").is_file()


def test_unwritable_json_exits_numerical(tmp_path, monkeypatch):
    """A JSON artifact that cannot be written is reported as a failure."""
    monkeypatch.setattr(cli.commands, "save_json", lambda *args, **kwargs: False)
    code = main(["limit-ode", "--m", "2", "--xmax", "20", "--step", "1e-2", "--out", str(tmp_path)])
    assert code == EXIT_NUMERICAL
