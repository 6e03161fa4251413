"""CLI tests: exit codes, file outputs, config files, remote mode."""

import csv
import json

import pytest
from starlette.testclient import TestClient

import beamtrain.cli as cli_mod
from beamtrain.cli import main
from beamtrain.service.app import create_app
from beamtrain.service.handlers import execute_sweep, sweep_csv_text
from beamtrain.service.schemas import SweepRequest

SMALL = [
    "--snr-start", "0", "--snr-stop", "0", "--snr-step", "5",
    "--bits", "1", "--paths", "1", "--grid", "8", "--array", "8",
    "--trials", "6", "--seed", "3",
]


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_sweep_writes_csv(tmp_path, capsys):
    out = tmp_path / "run.csv"
    rc = main(["sweep", *SMALL, "--out", str(out)])
    assert rc == 0
    assert "wrote" in capsys.readouterr().out
    rows = read_rows(out)
    assert len(rows) == 1
    assert rows[0]["bits"] == "1" and rows[0]["trials"] == "6"


def test_sweep_csv_matches_library_output(tmp_path):
    out = tmp_path / "run.csv"
    assert main(["sweep", *SMALL, "--out", str(out)]) == 0
    req = SweepRequest(
        snr_db=[0.0], bits=[1], paths=[1], grid=[8], array=8, trials=6, seed=3
    )
    result, _ = execute_sweep(req)
    assert out.read_bytes() == sweep_csv_text(result).encode()


def test_sweep_json_summary(tmp_path):
    out = tmp_path / "run.csv"
    rc = main(["sweep", *SMALL, "--json", "--out", str(out)])
    assert rc == 0
    data = json.loads((tmp_path / "run.json").read_text())
    assert data["config"]["trials"] == 6
    assert data["config"]["gain_dist"] == "unit"
    assert len(data["cells"]) == 1
    assert data["cells"][0]["successes"] <= data["cells"][0]["trials"]


def test_demo_output(capsys):
    rc = main(["demo", "--snr", "100", "--bits", "inf", "--paths", "2", "--seed", "1"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "truth pairs:" in out
    assert "recovered arrivals:" in out
    assert "slots used:         3" in out
    assert "success:            True" in out


def test_timing_output(capsys):
    rc = main(["timing", "--paths", "2", "--sectors", "2", "--gt", "32"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "proposed (L=2)" in out
    values = [int(line.split()[-1]) for line in out.strip().splitlines()[1:]]
    assert values == [3, 20]


class TestExitCodes:
    def test_unknown_option_is_config_error(self, capsys):
        assert main(["sweep", "--definitely-not-a-flag"]) == 1

    def test_bad_choice_is_config_error(self, capsys):
        assert main(["sweep", "--bits", "3"]) == 1

    def test_invalid_trials_is_config_error(self, capsys):
        assert main(["sweep", *SMALL[:-4], "--trials", "0"]) == 1
        assert "trials" in capsys.readouterr().err

    def test_bad_snr_range_is_config_error(self, capsys):
        assert main(["sweep", "--snr-start", "0", "--snr-stop", "-5"]) == 1
        assert main(["sweep", "--snr-step", "0"]) == 1

    def test_unwritable_output_is_io_error(self, tmp_path, capsys):
        missing = tmp_path / "no" / "such" / "dir" / "x.csv"
        rc = main(["sweep", *SMALL, "--out", str(missing)])
        assert rc == 2
        assert "i/o error" in capsys.readouterr().err

    def test_bad_sector_count_is_config_error(self, capsys):
        assert main(["timing", "--sectors", "1"]) == 1


class TestConfigFile:
    def test_values_come_from_file(self, tmp_path):
        cfg = tmp_path / "sweep.conf"
        cfg.write_text(
            "# sweep settings\n"
            "snr-start = 0\n"
            "snr-stop = 0\n"
            "bits = 1,2\n"
            "paths = 1\n"
            "grid = 8\n"
            "array = 8\n"
            "trials = 4\n"
            "seed = 9\n"
        )
        out = tmp_path / "out.csv"
        rc = main(["sweep", "--config", str(cfg), "--out", str(out)])
        assert rc == 0
        rows = read_rows(out)
        assert [r["bits"] for r in rows] == ["1", "2"]
        assert all(r["trials"] == "4" for r in rows)

    def test_flags_override_file(self, tmp_path):
        cfg = tmp_path / "sweep.conf"
        cfg.write_text("trials = 4\nbits = 2\npaths = 1\ngrid = 8\narray = 8\nsnr-start = 0\nsnr-stop = 0\n")
        out = tmp_path / "out.csv"
        rc = main(["sweep", "--config", str(cfg), "--trials", "2", "--out", str(out)])
        assert rc == 0
        rows = read_rows(out)
        assert all(r["trials"] == "2" for r in rows)
        assert [r["bits"] for r in rows] == ["2"]

    def test_malformed_line_is_config_error(self, tmp_path, capsys):
        cfg = tmp_path / "bad.conf"
        cfg.write_text("trials 4\n")
        assert main(["sweep", "--config", str(cfg)]) == 1
        assert "expected key=value" in capsys.readouterr().err

    def test_missing_file_is_config_error(self, tmp_path):
        assert main(["sweep", "--config", str(tmp_path / "absent.conf")]) == 1


class TestRemote:
    @pytest.fixture()
    def served_app(self, monkeypatch):
        app = create_app()
        monkeypatch.setattr(cli_mod, "_make_http_client", lambda server: TestClient(app))
        return app

    def test_remote_sweep_matches_local(self, served_app, tmp_path):
        remote_out = tmp_path / "remote.csv"
        local_out = tmp_path / "local.csv"
        assert main(["sweep", *SMALL, "--server", "http://svc", "--out", str(remote_out)]) == 0
        assert main(["sweep", *SMALL, "--out", str(local_out)]) == 0
        assert remote_out.read_bytes() == local_out.read_bytes()

    def test_remote_timing(self, served_app, capsys):
        assert main(["timing", "--paths", "1", "--server", "http://svc"]) == 0
        assert "proposed (L=1)" in capsys.readouterr().out

    def test_remote_demo(self, served_app, capsys):
        assert main(["demo", "--snr", "50", "--bits", "2", "--server", "http://svc"]) == 0
        assert "recovered pairs:" in capsys.readouterr().out

    def test_server_rejection_is_config_error(self, served_app, capsys):
        # the service refuses impossible path counts; the client reports it
        assert main(["demo", "--paths", "9", "--grid", "2", "--array", "2",
                     "--server", "http://svc"]) == 1


def test_serve_wires_uvicorn(monkeypatch):
    calls = {}

    def fake_run(app, host, port):
        calls["host"] = host
        calls["port"] = port

    monkeypatch.setattr("uvicorn.run", fake_run)
    assert main(["serve", "--host", "0.0.0.0", "--port", "9100"]) == 0
    assert calls == {"host": "0.0.0.0", "port": 9100}
