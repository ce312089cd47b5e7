"""CLI contract tests: outputs, determinism, configuration, exit codes."""

import csv
import json
import math

import pytest

from ptrotor import cli
from ptrotor.presets import PRESETS


def run_cli(*argv):
    return cli.main(list(argv))


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestSpectrumCommand:
    def test_spectrum_outputs_and_row_count(self, tmp_path):
        code = run_cli(
            "spectrum", "--two-pi-beta", "0.7", "--K", "3", "--lambda", "0.1",
            "--Ns", "60", "--out-dir", str(tmp_path), "--no-plot",
        )
        assert code == 0
        header, rows = read_csv(tmp_path / "spectrum.csv")
        assert header == ["re_epsT", "im_epsT", "R", "center", "edge_flagged"]
        assert len(rows) == 121
        manifest = json.loads((tmp_path / "spectrum_manifest.json").read_text())
        assert manifest["command"] == "spectrum"
        listed = {entry["path"] for entry in manifest["outputs"]}
        assert "spectrum.csv" in listed
        # defaults are materialized into the manifest
        assert manifest["parameters"]["edge_fraction"] == 0.1
        assert manifest["parameters"]["two_pi_beta"] == pytest.approx(0.7)

    def test_antiresonance_spectrum_values(self, tmp_path):
        code = run_cli(
            "spectrum", "--beta-rational", "1/2", "--K", "3", "--lambda", "0.3",
            "--Ns", "60", "--out-dir", str(tmp_path), "--no-plot",
        )
        assert code == 0
        _, rows = read_csv(tmp_path / "spectrum.csv")
        for row in rows:
            if row[4] == "0":  # unflagged
                re_eps = float(row[0])
                dist = min(abs(re_eps), abs(abs(re_eps) - math.pi))
                assert dist < 1e-8
                assert abs(float(row[1])) < 1e-8

    def test_missing_required_flag_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            run_cli("spectrum", "--two-pi-beta", "0.7", "--out-dir", str(tmp_path))
        assert info.value.code != 0

    def test_conflicting_beta_flags_rejected(self, tmp_path):
        with pytest.raises(SystemExit):
            run_cli(
                "spectrum", "--K", "3", "--two-pi-beta", "0.7", "--beta", "0.25",
                "--out-dir", str(tmp_path),
            )

    def test_plot_rendered_by_default(self, tmp_path):
        code = run_cli(
            "spectrum", "--two-pi-beta", "0.7", "--K", "3", "--Ns", "30",
            "--out-dir", str(tmp_path),
        )
        assert code == 0
        assert (tmp_path / "spectrum.png").exists()

    def test_determinism_byte_identical(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        for out in (a, b):
            run_cli(
                "spectrum", "--two-pi-beta", "0.7", "--K", "3", "--lambda", "0.2",
                "--Ns", "50", "--out-dir", str(out), "--no-plot",
            )
        assert (a / "spectrum.csv").read_bytes() == (b / "spectrum.csv").read_bytes()


class TestThresholdCommand:
    def test_band_route_threshold(self, tmp_path):
        code = run_cli(
            "threshold", "--beta-rational", "1/12", "--K", "3",
            "--out-dir", str(tmp_path), "--no-plot",
        )
        assert code == 0
        header, rows = read_csv(tmp_path / "threshold.csv")
        assert header == ["beta", "two_pi_beta", "n_sites", "lambda_pt", "status", "scan_file"]
        assert len(rows) == 1
        assert float(rows[0][3]) < 5e-3  # broken at any loss: threshold ~ 0
        scan_header, scan_rows = read_csv(tmp_path / rows[0][5])
        assert scan_header == ["lambda", "mean_abs_im"]
        assert len(scan_rows) >= 5

    def test_multi_beta_summary_sorted_and_deterministic(self, tmp_path):
        code = run_cli(
            "threshold", "--beta-rational", "1/6,1/12", "--K", "3",
            "--out-dir", str(tmp_path), "--no-plot", "--workers", "2",
        )
        assert code == 0
        _, rows = read_csv(tmp_path / "threshold.csv")
        # merged sorted by the kinetic parameter, not input or finish order
        assert [float(r[0]) for r in rows] == pytest.approx([1 / 12, 1 / 6])
        scans = {r[5] for r in rows}
        assert scans == {"threshold_scan_00.csv", "threshold_scan_01.csv"}


class TestBandsCommand:
    def test_twelve_band_csv(self, tmp_path):
        code = run_cli(
            "bands", "--beta-rational", "1/12", "--K", "3", "--lambda", "0.3",
            "--q-points", "21", "--out-dir", str(tmp_path), "--no-plot",
        )
        assert code == 0
        header, rows = read_csv(tmp_path / "bands.csv")
        assert header == ["q", "band", "re_epsT", "im_epsT"]
        assert len(rows) == 21 * 12
        bands = {int(r[1]) for r in rows}
        assert bands == set(range(12))

    def test_requires_rational(self, tmp_path):
        with pytest.raises(SystemExit):
            run_cli("bands", "--K", "3", "--beta", "0.3", "--out-dir", str(tmp_path))


class TestEvolveCommand:
    def test_series_and_snapshots(self, tmp_path):
        code = run_cli(
            "evolve", "--beta", "1/12", "--K", "3", "--lambda", "0.0333",
            "--kicks", "40", "--Ns", "300", "--snapshots", "0,40",
            "--out-dir", str(tmp_path), "--no-plot",
        )
        assert code == 0
        header, rows = read_csv(tmp_path / "evolve.csv")
        assert header == ["n", "P", "mean_l", "spread", "raw_spread"]
        assert len(rows) == 41
        assert float(rows[0][1]) == 1.0
        assert (tmp_path / "evolve_snapshot_n0.csv").exists()
        assert (tmp_path / "evolve_snapshot_n40.csv").exists()
        _, snap = read_csv(tmp_path / "evolve_snapshot_n40.csv")
        assert len(snap) == 601

    def test_beta_expression_parsing(self, tmp_path):
        code = run_cli(
            "evolve", "--beta", "0.5/2pi", "--K", "3", "--kicks", "5",
            "--Ns", "100", "--out-dir", str(tmp_path), "--no-plot",
        )
        assert code == 0
        manifest = json.loads((tmp_path / "evolve_manifest.json").read_text())
        assert manifest["parameters"]["beta"] == pytest.approx(0.5 / (2 * math.pi))


class TestResonanceCommand:
    def test_dispersion_and_profile(self, tmp_path):
        code = run_cli(
            "resonance", "--K", "3", "--lambda", "0.0333", "--kicks", "50",
            "--out-dir", str(tmp_path), "--no-plot",
        )
        assert code == 0
        header, rows = read_csv(tmp_path / "dispersion.csv")
        assert header == ["q", "re_eps", "im_eps"]
        assert len(rows) == 513
        header, rows = read_csv(tmp_path / "resonance_profile.csv")
        assert header == ["l", "abs2_exact", "abs2_asymptotic"]


class TestCavityCommand:
    def test_preset_run_with_units_report(self, tmp_path):
        code = run_cli(
            "cavity", "--preset", "fig6", "--trips", "5",
            "--out-dir", str(tmp_path), "--no-plot",
        )
        assert code == 0
        header, rows = read_csv(tmp_path / "cavity.csv")
        assert header == ["n", "power", "meanX_over_spacing", "stdX_over_spacing"]
        assert len(rows) == 6
        units = json.loads((tmp_path / "cavity_units.json").read_text())
        assert units["talbot_length"] == pytest.approx(0.11538, rel=1e-3)
        assert units["mirror_spacing"] == pytest.approx(9.182e-3, rel=1e-3)
        assert units["peak_spacing"] == pytest.approx(130e-6, rel=1e-3)
        assert (tmp_path / "cavity_farfield_n0.csv").exists()
        assert (tmp_path / "cavity_farfield_n5.csv").exists()

    def test_flag_overrides_preset(self, tmp_path):
        code = run_cli(
            "cavity", "--preset", "fig7", "--trips", "3", "--lambda", "0.0",
            "--out-dir", str(tmp_path), "--no-plot",
        )
        assert code == 0
        manifest = json.loads((tmp_path / "cavity_manifest.json").read_text())
        assert manifest["parameters"]["lam"] == 0.0
        assert manifest["parameters"]["beta"] == pytest.approx(1.0 / 12.0, rel=1e-9)


class TestConfigHandling:
    def test_config_file_applied_and_flag_wins(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("kick_strength = 3\ntwo_pi_beta = 0.7\nn_sites = 40\n# comment\n")
        out = tmp_path / "out"
        code = run_cli(
            "spectrum", "--config", str(cfg), "--Ns", "30",
            "--out-dir", str(out), "--no-plot",
        )
        assert code == 0
        _, rows = read_csv(out / "spectrum.csv")
        assert len(rows) == 61  # flag --Ns 30 overrode the file's 40

    def test_unknown_config_key_fails(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("kick_strength = 3\nno_such_option = 1\n")
        code = run_cli(
            "spectrum", "--config", str(cfg), "--two-pi-beta", "0.7",
            "--out-dir", str(tmp_path),
        )
        assert code == 1

    def test_malformed_config_line_fails(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("kick_strength 3\n")
        code = run_cli(
            "spectrum", "--config", str(cfg), "--two-pi-beta", "0.7",
            "--out-dir", str(tmp_path),
        )
        assert code == 1

    def test_env_config_dir_provides_defaults(self, tmp_path, monkeypatch):
        cfg_dir = tmp_path / "cfg"
        cfg_dir.mkdir()
        (cfg_dir / "defaults.cfg").write_text("n_sites = 25\n")
        monkeypatch.setenv(cli.ENV_CONFIG_DIR, str(cfg_dir))
        out = tmp_path / "out"
        code = run_cli(
            "spectrum", "--K", "3", "--two-pi-beta", "0.7",
            "--out-dir", str(out), "--no-plot",
        )
        assert code == 0
        _, rows = read_csv(out / "spectrum.csv")
        assert len(rows) == 51

    def test_presets_cover_documented_scenarios(self):
        assert set(PRESETS) == {"fig1a", "fig1b", "fig2", "fig3", "fig4", "fig6", "fig7"}


class TestLengthParsing:
    @pytest.mark.parametrize(
        "text,expected",
        [("300um", 300e-6), ("780nm", 780e-9), ("5cm", 5e-2), ("9.182mm", 9.182e-3),
         ("0.3m", 0.3), ("1.5e-3", 1.5e-3)],
    )
    def test_lengths(self, text, expected):
        assert cli.parse_length(text) == pytest.approx(expected, rel=1e-12)

    def test_beta_forms(self):
        assert cli.parse_beta("1/12") == ("rational", 1, 12)
        kind, value = cli.parse_beta("0.7/2pi")
        assert kind == "real"
        assert value == pytest.approx(0.7 / (2 * math.pi))
        assert cli.parse_beta("0.25") == ("real", 0.25)


class TestVerifyCommand:
    def test_fast_level_passes(self, tmp_path, capsys):
        code = run_cli("verify", "--level", "fast", "--out-dir", str(tmp_path))
        out = capsys.readouterr().out
        assert code == 0
        assert "FAIL" not in out
        report = json.loads((tmp_path / "verify_report.json").read_text())
        assert all(check["passed"] for check in report["checks"])
