import csv
import json
from pathlib import Path

import numpy as np
import pytest

from qnoise.cli import load_config, main

REPO_ROOT = Path(__file__).resolve().parent.parent
CONFIGS = {
    "planck": REPO_ROOT / "configs" / "planck.json",
    "flat": REPO_ROOT / "configs" / "flat.json",
    "mixed": REPO_ROOT / "configs" / "mixed.json",
}


def run(*argv):
    return main([str(part) for part in argv])


def read_tree(root: Path) -> dict:
    return {
        path.relative_to(root).as_posix(): path.read_bytes()
        for path in sorted(root.rglob("*"))
        if path.is_file()
    }


class TestConfigLoading:
    def test_reference_configs_load(self):
        for path in CONFIGS.values():
            config = load_config(str(path))
            assert config.n_points * config.step * config.eps == pytest.approx(1.0)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"model": "flat", "sigma2": 1.0, "n_points": 5, "step": 1.0, "sigm2": 2}')
        with pytest.raises(Exception, match="unknown config keys"):
            load_config(str(path))

    def test_wrong_model_params_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"model": "flat", "beta": 1.0, "sigma2": 1.0, "n_points": 5, "step": 1.0}')
        with pytest.raises(Exception, match="unknown config keys"):
            load_config(str(path))

    def test_inconsistent_eps_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"model": "flat", "sigma2": 1.0, "n_points": 5, "step": 1.0, "eps": 0.3}')
        with pytest.raises(Exception, match="duality"):
            load_config(str(path))


class TestExitCodes:
    def test_verify_reference_configs_exit_zero(self, tmp_path, capsys):
        for name, config in CONFIGS.items():
            code = run("verify", "--config", config, "--out", tmp_path / name)
            assert code == 0, capsys.readouterr().out
            assert (tmp_path / name / "verify_report.json").exists()

    def test_verify_with_impossible_tolerance_exits_one(self, tmp_path):
        code = run(
            "verify",
            "--config",
            CONFIGS["planck"],
            "--out",
            tmp_path,
            "--tol",
            "1e-16",
        )
        assert code == 1
        report = json.loads((tmp_path / "verify_report.json").read_text())
        assert report["all_pass"] is False

    def test_malformed_json_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run("spectrum", "--config", bad, "--out", tmp_path) == 2
        assert "config error" in capsys.readouterr().err

    def test_negative_tabulated_value_exits_two(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(
            json.dumps(
                {"model": "tabulated", "values": [1.0, -2.0, 1.0], "n_points": 3, "step": 1.0}
            )
        )
        assert run("spectrum", "--config", bad, "--out", tmp_path) == 2

    def test_even_point_count_exits_two(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"model": "flat", "sigma2": 1.0, "n_points": 4, "step": 1.0}))
        assert run("spectrum", "--config", bad, "--out", tmp_path) == 2

    def test_missing_config_file_exits_two(self, tmp_path):
        assert run("spectrum", "--config", tmp_path / "nope.json", "--out", tmp_path) == 2

    def test_negative_mode_occupation_exits_two(self, capsys):
        assert run("mode", "--n", "-1") == 2
        assert "nonnegative" in capsys.readouterr().err


class TestDeterminism:
    @pytest.mark.parametrize("name", ["planck", "flat", "mixed"])
    def test_byte_identical_reruns(self, name, tmp_path, capsys):
        outputs = []
        for label in ("first", "second"):
            out_dir = tmp_path / label
            for command in ("spectrum", "corr", "decompose", "synth", "qsi", "verify"):
                assert run(command, "--config", CONFIGS[name], "--out", out_dir) == 0
            outputs.append(read_tree(out_dir))
        capsys.readouterr()
        assert outputs[0] == outputs[1]


class TestEmptySpectrum:
    def test_zero_level_flat_runs_clean_everywhere(self, tmp_path, capsys):
        cfg = tmp_path / "zero.json"
        cfg.write_text(
            json.dumps({"model": "flat", "sigma2": 0.0, "n_points": 9, "step": 0.5})
        )
        for command in ("spectrum", "corr", "decompose", "synth", "qsi", "verify"):
            assert run(command, "--config", cfg, "--out", tmp_path / "out") == 0
        capsys.readouterr()
        with open(tmp_path / "out" / "spectrum.csv", newline="") as handle:
            assert list(csv.DictReader(handle)) == []


class TestArtifacts:
    def test_spectrum_csv_content(self, tmp_path):
        assert run("spectrum", "--config", CONFIGS["planck"], "--out", tmp_path) == 0
        with open(tmp_path / "spectrum.csv", newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 65
        for row in rows:
            nu = float(row["nu"])
            diff = float(row["kappa_rev"]) - float(row["kappa"])
            assert diff == pytest.approx(nu, rel=1e-12, abs=1e-12)
            assert row["region"] == "Theta"

    def test_flat_spectrum_csv_constant_columns(self, tmp_path):
        assert run("spectrum", "--config", CONFIGS["flat"], "--out", tmp_path) == 0
        with open(tmp_path / "spectrum.csv", newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 33
        assert all(float(row["kappa"]) == 1.0 for row in rows)
        assert all(float(row["lambda"]) == 1.0 for row in rows)
        assert all(float(row["gamma"]) == 1.0 for row in rows)

    def test_planck_synth_summary_error(self, tmp_path, capsys):
        assert run("synth", "--config", CONFIGS["planck"], "--out", tmp_path) == 0
        out = capsys.readouterr().out
        line = [l for l in out.splitlines() if l.startswith("max relative")][0]
        assert float(line.split("=")[1]) <= 1e-10

    def test_mixed_spectrum_csv_drops_nothing_but_labels_regions(self, tmp_path):
        assert run("spectrum", "--config", CONFIGS["mixed"], "--out", tmp_path) == 0
        with open(tmp_path / "spectrum.csv", newline="") as handle:
            rows = list(csv.DictReader(handle))
        regions = {row["region"] for row in rows}
        assert regions == {"N+", "N-", "Theta"}

    def test_synth_summary_reports_small_error(self, tmp_path, capsys):
        assert run("synth", "--config", CONFIGS["mixed"], "--out", tmp_path) == 0
        out = capsys.readouterr().out
        line = [l for l in out.splitlines() if l.startswith("max relative")][0]
        assert float(line.split("=")[1]) <= 1e-10
        with open(tmp_path / "synth_spectrum.csv", newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert all(float(row["rel_error"]) <= 1e-10 for row in rows)

    def test_corr_residuals_all_pass(self, tmp_path):
        assert run("corr", "--config", CONFIGS["planck"], "--out", tmp_path) == 0
        report = json.loads((tmp_path / "corr_residuals.json").read_text())
        assert report["all_pass"] is True
        assert report["invertible"] is True
        first = report["checks"][0]
        assert set(first) == {"suite", "check", "residual", "tolerance", "pass"}
        kernels = (tmp_path / "corr_kernels.csv").read_text().splitlines()
        names = {line.split(",")[0] for line in kernels[1:]}
        assert names == {"k", "k_rev", "r", "l_half", "l_inv_half"}

    def test_decompose_report_residual_matches_vacuum_mass(self, tmp_path):
        assert run("decompose", "--config", CONFIGS["mixed"], "--out", tmp_path) == 0
        report = json.loads((tmp_path / "decompose_report.json").read_text())
        assert report["residual_norm2"] == pytest.approx(
            report["residual_norm2_expected"], abs=1e-12
        )
        regions = {point["region"] for point in report["points"]}
        assert regions == {"N+", "N-", "Theta"}

    def test_qsi_table_structure(self, tmp_path):
        assert run("qsi", "--config", CONFIGS["flat"], "--out", tmp_path) == 0
        table = json.loads((tmp_path / "qsi_table.json").read_text())
        assert table["canonical_vacuum_moments"]["creation_annihilation"] == 0.0
        assert table["canonical_vacuum_moments"]["annihilation_creation"] > 0.0
        assert set(table["integrator_second_moments"]) == {
            "noise_dag_noise",
            "noise_dag_reverse",
            "reverse_dag_noise",
            "reverse_dag_reverse",
        }

    def test_qsi_custom_interval_bounds(self, tmp_path):
        cfg = tmp_path / "custom.json"
        cfg.write_text(
            json.dumps(
                {
                    "model": "flat",
                    "sigma2": 1.0,
                    "n_points": 9,
                    "step": 0.5,
                    "delta": [0.0, 1.0],
                    "delta_prime": [0.5, 2.0],
                }
            )
        )
        assert run("qsi", "--config", cfg, "--out", tmp_path) == 0
        table = json.loads((tmp_path / "qsi_table.json").read_text())
        assert table["delta"] == [0.0, 1.0]
        assert table["delta_prime"] == [0.5, 2.0]
        # overlap cells {0.5, 1.0} with unit density: moment = 2 * step
        assert table["integrator_second_moments"]["noise_dag_noise"] == pytest.approx(1.0)

    def test_mode_json_table(self, capsys):
        assert run("mode", "--n", "2") == 0
        payload = json.loads(capsys.readouterr().out)
        table = payload["correlations_dag_first"]
        assert table["noise_dag_noise"] == pytest.approx(2.0, abs=1e-12)
        assert table["reverse_dag_reverse"] == pytest.approx(3.0, abs=1e-12)
        assert payload["correlations_dag_second"]["noise_noise_dag"] == pytest.approx(
            3.0, abs=1e-12
        )
        assert payload["correlations_dag_first"]["reverse_dag_noise"] == pytest.approx(
            np.sqrt(6.0), abs=1e-12
        )
        assert payload["commutators"]["reverse_noise"] == pytest.approx(0.0, abs=1e-12)
