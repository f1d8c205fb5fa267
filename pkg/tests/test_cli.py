import json

import numpy as np
import pytest

from superres import cli, fileio
from superres.errors import OvercompleteSupportError


def run_cli(args, capsys=None):
    code = cli.main(args)
    return code


class TestSynth:
    def test_writes_files_and_prints_coherence(self, tmp_path, capsys):
        sig = tmp_path / "sig.txt"
        meas = tmp_path / "meas.csv"
        code = cli.main([
            "synth", "--family", "k2", "--n", "1000", "--m", "120",
            "--sigma", "1e-3", "--seed", "7",
            "--signal-out", str(sig), "--measurement-out", str(meas)])
        assert code == 0
        assert sig.exists() and meas.exists()
        out = capsys.readouterr().out
        assert "coherence 0.9765" in out

    def test_round_trip_matches_memory(self, tmp_path):
        sig = tmp_path / "sig.txt"
        meas = tmp_path / "meas.csv"
        cli.main(["synth", "--family", "k2", "--n", "1000", "--m", "120",
                  "--sigma", "1e-3", "--seed", "7",
                  "--signal-out", str(sig), "--measurement-out", str(meas)])
        from superres.experiments import k_sparse_family, make_signal
        from superres.fourier import MeasurementModel, NoiseSpec, measure

        signal = make_signal(k_sparse_family(2), 1000, 120, 7)
        assert fileio.read_signal(sig) == signal
        y = measure(signal, MeasurementModel(1000, 120, 40), NoiseSpec(1e-3, 7))
        back, sigma = fileio.read_measurement(meas)
        assert sigma == 1e-3
        assert np.array_equal(back.values, y.values)

    def test_zero_m_is_usage_error(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code = cli.main(["synth", "--family", "k2", "--m", "0"])
        assert code == cli.EXIT_USAGE

    def test_m_exceeding_n_is_an_error(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code = cli.main(["synth", "--family", "well-separated",
                         "--n", "100", "--m", "120"])
        assert code == cli.EXIT_USAGE


class TestRecover:
    @pytest.fixture
    def noiseless_files(self, tmp_path):
        sig = tmp_path / "sig.txt"
        meas = tmp_path / "meas.csv"
        cli.main(["synth", "--family", "k2", "--n", "1000", "--m", "120",
                  "--sigma", "0", "--seed", "1",
                  "--signal-out", str(sig), "--measurement-out", str(meas)])
        return sig, meas

    def test_noiseless_superset(self, noiseless_files, tmp_path, capsys):
        sig, meas = noiseless_files
        out = tmp_path / "rec.json"
        code = cli.main(["recover", "--measurement", str(meas), "--signal", str(sig),
                         "--method", "superset", "--out", str(out)])
        assert code == 0
        text = capsys.readouterr().out
        assert "support=[100, 101]" in text
        rel = float(text.split("rel_error=")[1].split()[0])
        assert rel < 1e-8
        result, model, method = fileio.read_recovery(out)
        assert method == "superset"
        assert result.support == (100, 101)

    def test_both_methods(self, noiseless_files, tmp_path):
        sig, meas = noiseless_files
        out = tmp_path / "rec.json"
        code = cli.main(["recover", "--measurement", str(meas),
                         "--method", "both", "--out", str(out)])
        assert code == 0
        for method in ("superset", "pencil"):
            result, _, tag = fileio.read_recovery(tmp_path / f"rec.{method}.json")
            assert tag == method
            assert result.support == (100, 101)

    def test_verbose_writes_gamma_profile(self, noiseless_files, tmp_path):
        sig, meas = noiseless_files
        out = tmp_path / "rec.json"
        code = cli.main(["recover", "--measurement", str(meas), "--out", str(out),
                         "--verbose"])
        assert code == 0
        assert (tmp_path / "rec.gammas.csv").exists()

    def test_garbage_input_is_parse_error(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("this is not a measurement\n")
        code = cli.main(["recover", "--measurement", str(bad)])
        assert code == cli.EXIT_PARSE

    def test_missing_file_is_parse_error(self, tmp_path):
        code = cli.main(["recover", "--measurement", str(tmp_path / "nope.csv")])
        assert code == cli.EXIT_PARSE

    def test_empty_estimate_exit_code(self, tmp_path):
        from superres.fourier import Measurement, MeasurementModel

        meas = tmp_path / "zero.csv"
        model = MeasurementModel(64, 16, 5)
        fileio.write_measurement(
            Measurement(np.zeros(16, dtype=complex), model), meas, sigma=1e-2)
        code = cli.main(["recover", "--measurement", str(meas), "--method", "pencil"])
        assert code == cli.EXIT_EMPTY_ESTIMATE

    def test_overcomplete_exit_code(self, noiseless_files, monkeypatch):
        _, meas = noiseless_files

        def boom(*args, **kwargs):
            raise OvercompleteSupportError("forced")

        monkeypatch.setattr(cli, "_recover_one", boom)
        code = cli.main(["recover", "--measurement", str(meas)])
        assert code == cli.EXIT_OVERCOMPLETE


class TestPhaseDiagramCommand:
    def test_small_grid(self, tmp_path, capsys):
        prefix = str(tmp_path / "phase")
        code = cli.main([
            "phase-diagram", "--family", "k2", "--trials", "2",
            "--sigma-grid=-3.5:-2.5:0.5", "--m-grid", "40:120:80",
            "--method", "both", "--seed", "4", "--out", prefix, "--pgm"])
        assert code == 0
        for method in ("superset", "pencil"):
            for ext in ("csv", "json", "pgm"):
                assert (tmp_path / f"phase_k2_{method}.{ext}").exists()
        m_grid, _, sigmas, success = fileio.read_phase_diagram_csv(
            tmp_path / "phase_k2_superset.csv")
        assert m_grid == [40, 120]
        assert sigmas == [10 ** -3.5, 10 ** -3.0, 10 ** -2.5]
        assert success.shape == (2, 3)

    def test_zero_trials_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            cli.main(["phase-diagram", "--family", "k2", "--trials", "0",
                      "--out", str(tmp_path / "p")])
        assert exc.value.code == cli.EXIT_USAGE

    def test_progress_resume(self, tmp_path):
        prefix = str(tmp_path / "phase")
        args = ["phase-diagram", "--family", "k2", "--trials", "2",
                "--sigma-grid=-3", "--m-grid", "60,120",
                "--method", "superset", "--seed", "4", "--out", prefix]
        assert cli.main(args) == 0
        fresh = (tmp_path / "phase_k2_superset.csv").read_bytes()
        # no leftover progress file after a clean finish
        progress = tmp_path / "phase_k2_superset.progress.json"
        assert not progress.exists()

        # a matching progress file short-circuits its cells
        config_key = json.dumps({
            "family": "k2", "n": 1000, "m_grid": [60, 120],
            "sigmas": [10.0 ** -3], "trials": 2, "method": "superset",
            "seed": 4, "c": 1.0, "noise": "circular",
            "denoise_constant": 1.5,
        }, sort_keys=True)
        progress.write_text(json.dumps(
            {"config_key": config_key, "cells": {"0,0": 0.77}}))
        assert cli.main(args) == 0
        m_grid, _, _, success = fileio.read_phase_diagram_csv(
            tmp_path / "phase_k2_superset.csv")
        assert success[0, 0] == 0.77
        assert not progress.exists()

        # a stale progress file (different config) is ignored
        progress.write_text(json.dumps(
            {"config_key": "something else", "cells": {"0,0": 0.77}}))
        assert cli.main(args) == 0
        assert (tmp_path / "phase_k2_superset.csv").read_bytes() == fresh


class TestCoherenceCommand:
    def test_prints_value(self, capsys):
        assert cli.main(["coherence", "--n", "1000", "--m", "120"]) == 0
        assert "coherence 0.9765" in capsys.readouterr().out

    def test_invalid_geometry(self, capsys):
        assert cli.main(["coherence", "--n", "100", "--m", "120"]) == cli.EXIT_USAGE


class TestConfigFile:
    def test_config_supplies_defaults_flags_override(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"n": 1000, "m": 120}))
        code = cli.main(["--config", str(config), "coherence"])
        assert code == 0
        assert "coherence 0.9765" in capsys.readouterr().out
        # an explicit flag beats the config value
        code = cli.main(["--config", str(config), "coherence", "--m", "1000"])
        assert code == 0
        assert "coherence 0.0000" in capsys.readouterr().out

    def test_unreadable_config(self, tmp_path):
        assert cli.main(["--config", str(tmp_path / "nope.json"),
                         "coherence", "--n", "8", "--m", "4"]) == cli.EXIT_PARSE
