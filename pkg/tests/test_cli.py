"""CLI tests through typer's CliRunner."""

import json
from unittest.mock import patch

import pytest
from typer.testing import CliRunner

from fermamp import __version__
from fermamp.cli import app
from fermamp.config import ENV_MAPPINGS
from fermamp.schema import CheckResult, VerifyReport


runner = CliRunner()


@pytest.fixture(autouse=True)
def isolated_cwd(monkeypatch, tmp_path):
    """No fermamp.yaml, .env or FERMAMP_* variables leak into a test."""
    monkeypatch.chdir(tmp_path)
    for env_var in ENV_MAPPINGS:
        monkeypatch.delenv(env_var, raising=False)
    return tmp_path


BELL = ["--state", "phi-plus", "--alpha", "0.7853981634", "--qr", "1"]


class TestCurveCommand:
    """Tests for fermamp curve."""

    def test_csv_to_stdout(self):
        """Data rows go to stdout."""
        result = runner.invoke(app, ["curve", *BELL, "--grid", "5"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "gamma,negativity"
        gamma, value = lines[1].split(",")
        assert float(gamma) == 0.0
        assert value == "0.500000000000"
        assert len(lines) == 6

    def test_json_format(self):
        """--format json switches the serialization."""
        result = runner.invoke(app, ["curve", *BELL, "--grid", "3", "--format", "json"])
        assert result.exit_code == 0
        assert len(json.loads(result.stdout)["values"]) == 3

    def test_output_file(self, isolated_cwd):
        """--output writes the file and keeps stdout free of data."""
        target = isolated_cwd / "curve.csv"
        result = runner.invoke(app, ["curve", *BELL, "--grid", "5", "--output", str(target)])
        assert result.exit_code == 0
        assert target.read_text().startswith("gamma,negativity\n")
        assert "gamma,negativity" not in result.stdout

    def test_grid_from_config_file(self, isolated_cwd):
        """fermamp.yaml supplies defaults for omitted flags."""
        (isolated_cwd / "fermamp.yaml").write_text("grid_n: 7\n")
        result = runner.invoke(app, ["curve", *BELL])
        assert result.exit_code == 0
        assert len(result.stdout.splitlines()) == 8

    def test_missing_alpha(self):
        """A pure family without --alpha exits 2."""
        result = runner.invoke(app, ["curve", "--state", "phi-plus"])
        assert result.exit_code == 2
        assert "--alpha" in result.output

    def test_q_r_out_of_range(self):
        """q_R above 1 exits 2."""
        result = runner.invoke(app, ["curve", "--state", "werner", "--fidelity", "0.5", "--qr", "1.5"])
        assert result.exit_code == 2
        assert "q_R" in result.output

    def test_unknown_state(self):
        """Unknown families exit 2."""
        result = runner.invoke(app, ["curve", "--state", "ghz", "--alpha", "0.3"])
        assert result.exit_code == 2
        assert "Unknown state family" in result.output

    def test_invalid_config_file(self, isolated_cwd):
        """A config that fails validation exits 2."""
        (isolated_cwd / "fermamp.yaml").write_text("grid_n: 1\n")
        result = runner.invoke(app, ["curve", *BELL])
        assert result.exit_code == 2
        assert "invalid configuration" in result.output


class TestMatrixCommand:
    """Tests for fermamp matrix."""

    def test_printed_provenance(self):
        """Printed matrices carry their provenance header."""
        result = runner.invoke(app, [
            "matrix", "--state", "phi-plus", "--alpha", "0.7853981634", "--qr", "0.8",
            "--gamma", "0", "--provenance", "printed",
        ])
        assert result.exit_code == 0
        assert "# provenance: printed" in result.stdout.splitlines()

    def test_acceleration_instead_of_gamma(self):
        """--acceleration is converted to gamma."""
        result = runner.invoke(app, [
            "matrix", "--state", "werner", "--fidelity", "0.5", "--acceleration", "2.0",
            "--format", "json",
        ])
        assert result.exit_code == 0
        assert len(json.loads(result.stdout)["matrix"]) == 8

    def test_gamma_and_acceleration_conflict(self):
        """Both --gamma and --acceleration exit 2."""
        result = runner.invoke(app, [
            "matrix", "--state", "werner", "--fidelity", "0.5", "--gamma", "0.1", "--acceleration", "2.0",
        ])
        assert result.exit_code == 2

    def test_non_positive_acceleration(self):
        """a <= 0 exits 2."""
        result = runner.invoke(app, ["matrix", "--state", "werner", "--fidelity", "0.5", "--acceleration", "0"])
        assert result.exit_code == 2

    def test_phi_minus_closed_form(self):
        """phi_minus has no closed form."""
        result = runner.invoke(app, [
            "matrix", "--state", "phi-minus", "--alpha", "0.3", "--gamma", "0.1", "--provenance", "closed-form",
        ])
        assert result.exit_code == 2
        assert "phi_minus" in result.output

    def test_unknown_provenance(self):
        """Provenance outside oracle/closed-form/printed exits 2."""
        result = runner.invoke(app, [
            "matrix", "--state", "phi-plus", "--alpha", "0.3", "--gamma", "0.1", "--provenance", "guess",
        ])
        assert result.exit_code == 2


class TestOtherCommands:
    """Tests for variation, threshold, verify, sweep and version."""

    def test_variation_monotone(self):
        """The single-mode Bell curve has no variation points."""
        result = runner.invoke(app, ["variation", *BELL, "--grid", "101"])
        assert result.exit_code == 0
        assert json.loads(result.stdout) == []

    def test_threshold_single_mode(self):
        """No threshold exists at q_R = 1."""
        result = runner.invoke(app, ["threshold", "--qr", "1", "--grid", "401", "--scan-points", "16"])
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["alpha_star"] is None
        assert data["q_r"] == 1.0

    def test_threshold_rejects_mixed_family(self):
        """The threshold is searched over alpha."""
        result = runner.invoke(app, ["threshold", "--state", "werner"])
        assert result.exit_code == 2

    def test_verify_failure_exits_one(self):
        """A failed invariant exits 1."""
        report = VerifyReport(passed=False, checks=[CheckResult(name="trace_linearity", passed=False)])
        with patch("fermamp.core.runner.run_checks", return_value=report):
            result = runner.invoke(app, ["verify", "--draws", "5"])
        assert result.exit_code == 1

    def test_verify_success(self):
        """A clean report exits 0 and prints JSON."""
        report = VerifyReport(passed=True, checks=[CheckResult(name="trace_linearity", passed=True)])
        with patch("fermamp.core.runner.run_checks", return_value=report):
            result = runner.invoke(app, ["verify"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)["passed"] is True

    def test_sweep(self):
        """One row per value."""
        result = runner.invoke(app, ["sweep", "--state", "phi-plus", "--values", "0.3,0.5", "--qr", "1", "--grid", "101"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0].startswith("param,count")
        assert len(lines) == 3

    def test_sweep_bad_values(self):
        """Non-numeric values exit 2."""
        result = runner.invoke(app, ["sweep", "--state", "werner", "--values", "0.5,abc"])
        assert result.exit_code == 2

    def test_version(self):
        """version prints the package version."""
        result = runner.invoke(app, ["version"])
        assert result.exit_code == 0
        assert f"fermamp {__version__}" in result.stdout
