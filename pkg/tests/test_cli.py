import csv
import io
import json

import numpy as np
import pytest

from spikedlr import __version__
from spikedlr.cli import run
from spikedlr.ensembles import CaseSpec, sample_case
from spikedlr.lrengine import evaluate


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.reader(io.StringIO("\n".join(lines))))


class TestEnvelope:
    def test_pca_grid(self, capsys):
        code, out, _ = call(capsys, "envelope", "--case", "pca", "--gamma1", "0.9", "--alpha", "0.05",
                            "--grid", "200")
        assert code == 0
        rows = csv_rows(out)
        assert rows[0] == ["theta", "PE"] and len(rows) == 201
        assert float(rows[1][0]) == 0.0 and float(rows[1][1]) == 0.05
        pe = np.array([float(r[1]) for r in rows[1:]])
        assert np.all(np.diff(pe) >= 0) and pe[-1] == 1.0

    def test_provenance_header(self, capsys):
        _, out, _ = call(capsys, "envelope", "--case", "smd", "--grid", "5")
        head = json.loads(out.splitlines()[0][1:])
        assert head["version"] == __version__ and head["config"]["case"] == "SMD"

    def test_seventeen_digits(self, capsys):
        _, out, _ = call(capsys, "envelope", "--case", "smd", "--grid", "7")
        value = csv_rows(out)[2][1]
        assert len(value.replace(".", "").lstrip("0")) == 17

    def test_bad_alpha(self, capsys):
        code, _, err = call(capsys, "envelope", "--case", "smd", "--alpha", "2")
        assert code == 2 and err.startswith("ERR E103:")

    def test_missing_gamma(self, capsys):
        code, _, err = call(capsys, "envelope", "--case", "pca")
        assert code == 2 and err.startswith("ERR ")


class TestLR:
    def test_smd_all_methods(self, capsys):
        code, out, _ = call(capsys, "lr", "--case", "smd", "--p", "40", "--theta", "0.5",
                            "--theta-true", "0", "--seed", "7", "--method", "all")
        assert code == 0
        res = json.loads(out)
        logl = res["logL"]
        assert set(logl) == {"laplace", "quadrature", "asymptotic"}
        assert abs(np.exp(logl["laplace"] - logl["quadrature"]) - 1) < 0.05
        assert res["z0"] == 2.5 and res["config"]["seed"] == 7

    @pytest.mark.parametrize("fmt", ["json", "csv"])
    def test_round_trip(self, capsys, tmp_path, fmt):
        path = tmp_path / f"eigs.{fmt}"
        code, _, _ = call(capsys, "sample", "--case", "reg", "--p", "8", "--n1", "30", "--n2", "20",
                          "--theta", "0.3", "--seed", "4", "--format", fmt, "--out", str(path))
        assert code == 0
        _, out, _ = call(capsys, "lr", "--eigs", str(path), "--theta", "0.2")
        from_file = json.loads(out)["logL"]
        spec = CaseSpec("REG", 8, 30, 20)
        direct = evaluate(spec, 0.2, sample_case(spec, 0.3, 4))
        assert from_file == {"laplace": direct.log_laplace, "quadrature": direct.log_quadrature,
                             "asymptotic": direct.log_asymptotic}

    def test_sample_embeds_config(self, capsys):
        _, out, _ = call(capsys, "sample", "--case", "smd", "--p", "3", "--seed", "2")
        d = json.loads(out)
        assert d["meta"]["version"] == __version__ and d["meta"]["config"]["seed"] == 2

    def test_seed_env_override(self, capsys, monkeypatch):
        monkeypatch.setenv("SPIKEDLR_SEED", "11")
        _, out, _ = call(capsys, "sample", "--case", "smd", "--p", "3", "--seed", "2")
        d = json.loads(out)
        assert d["seed"] == 11
        np.testing.assert_array_equal(d["values"], sample_case(CaseSpec("SMD", 3), 0.0, 11).values)

    def test_bad_seed_env(self, capsys, monkeypatch):
        monkeypatch.setenv("SPIKEDLR_SEED", "abc")
        code, _, err = call(capsys, "sample", "--case", "smd", "--p", "3")
        assert code == 2 and err.startswith("ERR E103:")

    def test_mismatched_dims(self, capsys, tmp_path):
        path = tmp_path / "e.json"
        call(capsys, "sample", "--case", "smd", "--p", "4", "--out", str(path))
        code, _, err = call(capsys, "lr", "--eigs", str(path), "--p", "5", "--theta", "0.2")
        assert code == 2 and "disagrees" in err

    def test_validation_exit_code(self, capsys):
        code, _, err = call(capsys, "lr", "--case", "pca", "--p", "20", "--n1", "10", "--theta", "0.1")
        assert code == 2 and err.startswith("ERR E101:")

    def test_numerical_exit_code(self, capsys):
        code, _, err = call(capsys, "lr", "--case", "pca", "--p", "20", "--n1", "60", "--theta", "0.9")
        assert code == 3 and err.startswith("ERR E201:")

    def test_unknown_subcommand(self, capsys):
        code, _, err = call(capsys, "bogus")
        assert code == 2 and err.startswith("ERR E103:")


class TestSpectrum:
    def test_table(self, capsys):
        code, out, _ = call(capsys, "spectrum", "--case", "pca", "--gamma1", "0.5", "--grid", "50")
        rows = csv_rows(out)
        assert code == 0 and rows[0] == ["lambda", "density", "cdf"] and len(rows) == 51
        dens = np.array([float(r[1]) for r in rows[1:]])
        assert dens[0] == 0.0 and dens[-1] == 0.0 and dens.max() > 0


class TestMC:
    def _config(self, tmp_path, **extra):
        cfg = {"case": "pca", "p": 10, "n1": 30, "theta_grid": [0.2, 0.4], "replicates": 8,
               "seed": 3, "output": str(tmp_path / "out.json"), **extra}
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        return path

    def test_byte_identical(self, capsys, tmp_path):
        cfg = self._config(tmp_path, record=str(tmp_path / "rec.csv"))
        assert run(["mc", "--config", str(cfg)]) == 0
        first = (tmp_path / "out.json").read_bytes()
        assert run(["mc", "--config", str(cfg)]) == 0
        assert (tmp_path / "out.json").read_bytes() == first
        d = json.loads(first)
        assert d["version"] == __version__ and d["config"]["case"] == "PCA"
        assert len((tmp_path / "rec.csv").read_text().splitlines()) == 9

    def test_unknown_key(self, capsys, tmp_path):
        cfg = self._config(tmp_path, colour="blue")
        code, _, err = call(capsys, "mc", "--config", str(cfg))
        assert code == 2 and "colour" in err

    def test_missing_key(self, capsys, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"case": "smd", "p": 5}))
        code, _, err = call(capsys, "mc", "--config", str(path))
        assert code == 2 and "theta_grid" in err

    def test_env_seed(self, capsys, tmp_path, monkeypatch):
        cfg = self._config(tmp_path)
        monkeypatch.setenv("SPIKEDLR_SEED", "99")
        run(["mc", "--config", str(cfg)])
        assert json.loads((tmp_path / "out.json").read_text())["seed"] == 99


class TestVerify:
    def test_table_and_sweep(self, capsys, tmp_path):
        path = tmp_path / "sweep.csv"
        code, out, _ = call(capsys, "verify", "--specfun-check", str(path))
        assert code == 0 and "11/11 checks passed" in out
        rows = csv_rows(path.read_text())
        assert rows[0] == ["j", "m", "eta_re", "eta_im", "log_series", "log_approx", "relerr"]
        assert {r[0] for r in rows[1:]} == {"0", "1", "2"}
