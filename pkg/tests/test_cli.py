import json
import subprocess
import sys

import pytest

from delpezzo import cli


def run_cli(args):
    proc = subprocess.run(
        [sys.executable, "-m", "delpezzo.cli", *args],
        capture_output=True, text=True,
    )
    return proc


class TestParsing:
    def test_count_defaults(self):
        cfg = cli.parse_args(["count", "--bmax", "10"])
        assert cfg.command == "count" and cfg.bmax == 10
        assert cfg.method == "torsor"

    def test_densities_primes(self):
        cfg = cli.parse_args(["densities", "--p", "2,3,5", "--rmax", "4"])
        assert cfg.primes == [2, 3, 5] and cfg.rmax == 4

    def test_negative_bmax_rejected(self):
        with pytest.raises(cli.UsageError):
            cli.parse_args(["count", "--bmax", "-1"])

    def test_unknown_flag_rejected(self):
        with pytest.raises(cli.UsageError):
            cli.parse_args(["count", "--bmax", "1", "--nope"])

    def test_threads_env(self, monkeypatch):
        monkeypatch.setenv("DELPEZZO_THREADS", "3")
        cfg = cli.parse_args(["count", "--bmax", "10"])
        assert cfg.threads == 3
        cfg = cli.parse_args(["count", "--bmax", "10", "--threads", "2"])
        assert cfg.threads == 2  # flag wins

    def test_threads_env_malformed(self, monkeypatch):
        monkeypatch.setenv("DELPEZZO_THREADS", "two")
        with pytest.raises(cli.UsageError):
            cli.parse_args(["count", "--bmax", "10"])


class TestExitCodes:
    def test_success(self):
        assert run_cli(["count", "--bmax", "100", "--no-timestamp"]).returncode == 0

    def test_usage(self):
        assert run_cli(["count", "--bmax", "-5"]).returncode == 1

    def test_cap(self):
        assert run_cli(["count", "--bmax", "100", "--method", "naive"]).returncode == 3

    def test_help(self):
        proc = run_cli(["--help"])
        assert proc.returncode == 0 and "usage" in proc.stdout.lower()

    def test_verify_passes(self):
        assert run_cli(["verify", "--suite", "all", "--bmax", "200",
                        "--no-timestamp"]).returncode == 0


class TestReports:
    def test_count_json_schema(self):
        proc = run_cli(["count", "--bmax", "1000", "--method", "torsor",
                        "--format", "json", "--no-timestamp"])
        doc = json.loads(proc.stdout)
        row = doc["rows"][0]
        assert row["B"] == 1000 and row["N_pos"] == 2214

    def test_densities_csv_header(self):
        proc = run_cli(["densities", "--p", "2", "--rmax", "1", "--format",
                        "csv", "--no-timestamp"])
        lines = proc.stdout.splitlines()
        assert lines[0] == "p,r,estimate,closed_form,abs_error"

    def test_decompose_csv_header(self):
        proc = run_cli(["decompose", "--grid", "100", "--beta-cutoff", "5",
                        "--format", "csv", "--no-timestamp"])
        assert proc.stdout.splitlines()[0] == \
            "B,n_uh,main_delta,main_linear,residual,residual_scaled"

    def test_empty_rows_header_only(self):
        text = cli.render_report([], "csv", None,
                                 cli._SCHEMAS["decompose"])
        assert text == "B,n_uh,main_delta,main_linear,residual,residual_scaled\n"

    def test_timestamp_line_suppressed(self):
        with_ts = run_cli(["count", "--bmax", "50"]).stdout
        without = run_cli(["count", "--bmax", "50", "--no-timestamp"]).stdout
        assert "generated_at" in with_ts and "generated_at" not in without

    def test_determinism_across_threads(self):
        a = run_cli(["count", "--bmax", "2000", "--threads", "1",
                     "--no-timestamp"]).stdout
        b = run_cli(["count", "--bmax", "2000", "--threads", "2",
                     "--no-timestamp"]).stdout
        assert a == b

    def test_big_int_as_string(self):
        text = cli.render_report([{"n": 2**60}], "json", None)
        assert json.loads(text)["rows"][0]["n"] == str(2**60)

    def test_csv_written_to_file(self, tmp_path):
        out = tmp_path / "report.csv"
        proc = run_cli(["densities", "--p", "2,3", "--rmax", "1", "--format",
                        "csv", "--no-timestamp", "--out", str(out)])
        assert proc.returncode == 0
        content = out.read_bytes()
        assert content.startswith(b"p,r,") and b"\r" not in content

    def test_constants_json_fields(self):
        proc = run_cli(["constants", "--prime-cutoff", "1000", "--beta-cutoff",
                        "5", "--no-timestamp"])
        assert proc.returncode == 0
        row = json.loads(proc.stdout)["rows"][0]
        assert row["alpha"] == "1/288"
        for key in ("c", "c_error", "omega_inf", "tau", "tau_tail", "beta",
                    "beta_tail", "tau_H", "peyre", "peyre_error", "leading_coeff"):
            assert key in row
        assert abs(row["leading_coeff"] - row["peyre"]) < 1e-9
