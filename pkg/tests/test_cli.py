"""Command-line interface: outputs, determinism, exit codes."""

import json
import subprocess
import sys

import pytest

from fdmimo import cli
from fdmimo.hardening_oracle import MomentCheck, MomentReport

FAST = ["--set", "n_drops=3", "--set", "tiers=1", "--set", "n_antennas=16",
        "--set", "k_downlink_per_cell=2", "--set", "k_uplink_per_cell=2"]


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_simulate_stdout_csv(capsys):
    code, out, err = run(["simulate", *FAST], capsys)
    assert code == 0 and err == ""
    lines = out.strip().split("\n")
    assert lines[0] == "drop_index,avg_sqinr_db,gross_se,effective_se"
    assert len(lines) == 4  # header + 3 drops
    first = lines[1].split(",")
    assert first[0] == "0"
    float(first[1]), float(first[2]), float(first[3])


def test_simulate_single_drop(capsys):
    code, out, _ = run(["simulate", "--set", "n_drops=1", "--set", "tiers=0",
                        "--set", "k_uplink_per_cell=0"], capsys)
    assert code == 0
    assert len(out.strip().split("\n")) == 2


def test_simulate_writes_file_and_summary(tmp_path, capsys):
    out_path = tmp_path / "run.csv"
    code, out, _ = run(["simulate", *FAST, "--out", str(out_path)], capsys)
    assert code == 0 and out == ""
    assert out_path.exists()
    summary = json.loads((tmp_path / "run.summary.json").read_text())
    assert summary["n_drops"] == 3
    assert set(summary["sqinr_db_quantiles"]) == {"5", "25", "50", "75", "95"}


def test_simulate_reruns_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["simulate", *FAST, "--out", str(a)], capsys)[0] == 0
    assert run(["simulate", *FAST, "--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_worker_count_does_not_change_bytes(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(["simulate", *FAST, "--workers", "1", "--out", str(a)], capsys)
    run(["simulate", *FAST, "--workers", "2", "--out", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_simulate_audit_sidecar(tmp_path, capsys):
    out_path = tmp_path / "run.csv"
    code, _, _ = run(["simulate", *FAST, "--out", str(out_path), "--audit"],
                     capsys)
    assert code == 0
    audit = json.loads((tmp_path / "run.audit.json").read_text())
    assert len(audit) == 2  # one breakdown per downlink user of cell 0
    assert set(audit[0]) == {"numerator", "den_noise", "den_intracell_intercell",
                             "den_pilot_contamination", "den_iui", "den_aqnm",
                             "sqinr"}


def test_simulate_audit_csv_needs_out(capsys):
    code, _, err = run(["simulate", *FAST, "--audit"], capsys)
    assert code == 1
    assert "--out" in err


def test_simulate_json_embeds_everything(capsys):
    code, out, _ = run(["simulate", *FAST, "--format", "json", "--audit"],
                       capsys)
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"samples", "summary", "audit"}
    assert len(payload["samples"]) == 3
    assert payload["samples"][0]["drop_index"] == 0


def test_unknown_scenario_field_fails_cleanly(capsys):
    code, _, err = run(["simulate", "--set", "warp_factor=9"], capsys)
    assert code == 1
    assert "warp_factor" in err


def test_malformed_override_fails_cleanly(capsys):
    code, _, err = run(["simulate", "--set", "n_drops"], capsys)
    assert code == 1
    assert "KEY=VALUE" in err


def test_invalid_field_value_fails_cleanly(capsys):
    code, _, err = run(["simulate", "--set", "adc_bits=0"], capsys)
    assert code == 1
    assert "adc_bits" in err


def test_config_file_is_loaded(tmp_path, capsys):
    cfg = tmp_path / "case.cfg"
    cfg.write_text("n_drops = 2\ntiers = 0\nk_uplink_per_cell = 0\n"
                   "n_antennas = 16\n")
    code, out, _ = run(["simulate", "--config", str(cfg)], capsys)
    assert code == 0
    assert len(out.strip().split("\n")) == 3


def test_sweep_rows(capsys):
    code, out, _ = run(["sweep", *FAST, "--axis", "adc_bits",
                        "--values", "1,inf"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("axis,value,q05_sqinr_db")
    assert len(lines) == 3
    one_bit = lines[1].split(",")
    ideal = lines[2].split(",")
    assert one_bit[:2] == ["adc_bits", "1"]
    assert ideal[:2] == ["adc_bits", "inf"]
    # the median must improve with resolution
    assert float(one_bit[4]) < float(ideal[4])


def test_sweep_rejects_unknown_axis(capsys):
    code, _, err = run(["sweep", *FAST, "--axis", "bogus", "--values", "1"],
                       capsys)
    assert code == 1 and "bogus" in err


def test_limits_all_regimes(capsys):
    code, out, _ = run(["limits"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "regime,scale,se_bits,limit_bits,gap"
    regimes = {line.split(",")[0] for line in lines[1:]}
    assert regimes == {"full_resolution", "high_snr", "power_scaling",
                       "antenna_ratio"}


def test_limits_single_regime(capsys):
    code, out, _ = run(["limits", "--regime", "power_scaling"], capsys)
    assert code == 0
    regimes = {line.split(",")[0] for line in out.strip().split("\n")[1:]}
    assert regimes == {"power_scaling"}


def test_limits_rejects_unknown_regime(capsys):
    code, _, err = run(["limits", "--regime", "lemmax"], capsys)
    assert code == 1
    assert "invalid choice" in err


def test_limits_flags_unconverged_probe(monkeypatch, capsys):
    monkeypatch.setitem(cli._GAP_TOLERANCES, "high_snr", 0.0)
    code, _, _ = run(["limits", "--regime", "high_snr"], capsys)
    assert code == 2


def test_verify_passes_on_default_budget(capsys):
    code, out, _ = run(["verify", "--samples", "20000", "--set",
                        "n_antennas=32"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["all_passed"] is True
    assert {c["name"] for c in report["checks"]} == {
        "mean_norm_sq", "mean_norm_4th", "alignment_mean",
        "uncorrelated_leakage"}


def test_verify_reports_failure_with_exit_2(monkeypatch, capsys):
    failing = MomentReport(checks=(MomentCheck("mean_norm_sq", 5.0, 1.0, 0.1),),
                           n_samples=10000)
    monkeypatch.setattr(cli, "verify_precoder_moments",
                        lambda *a, **k: failing)
    code, out, _ = run(["verify"], capsys)
    assert code == 2
    assert json.loads(out)["all_passed"] is False


def test_verify_rejects_small_sample_count(capsys):
    code, _, err = run(["verify", "--samples", "100"], capsys)
    assert code == 1 and err.startswith("error:")


def test_dump_realization_rows(capsys):
    code, out, _ = run(["dump-realization", *FAST], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "cell_id,user_index,direction,x_m,y_m,serving_cell"
    assert len(lines) == 1 + 7 * 2 + 7 * 2  # 7 cells x (2 dl + 2 ul)
    cells = {line.split(",")[0] for line in lines[1:]}
    assert cells == {str(c) for c in range(7)}


def test_dump_realization_depends_on_drop_index(capsys):
    a = run(["dump-realization", *FAST, "--drop-index", "0"], capsys)[1]
    b = run(["dump-realization", *FAST, "--drop-index", "1"], capsys)[1]
    assert a != b


def test_help_exits_zero(capsys):
    assert cli.main(["--help"]) == 0


def test_missing_subcommand_exits_one(capsys):
    assert cli.main([]) == 1


def test_unknown_subcommand_exits_one(capsys):
    assert cli.main(["transmogrify"]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fdmimo.cli", "limits",
                           "--regime", "full_resolution"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("regime,scale,se_bits")
