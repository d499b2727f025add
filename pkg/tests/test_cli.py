"""Tests for the CLI interface."""

import json

import pytest
import typer
from typer.testing import CliRunner

from kahler_circles.cli import app, parse_vector
from kahler_circles.formats.json_handler import load_report

runner = CliRunner()


class TestParseVector:
    """Tests for parsing comma-separated vectors."""

    def test_four_values(self):
        assert list(parse_vector("0.1, 0,-2,3e-1", "--point")) == [0.1, 0.0, -2.0, 0.3]

    @pytest.mark.parametrize("text", ["1,2,3", "1,2,3,4,5", "a,b,c,d", "1,2,3,nan"])
    def test_invalid(self, text):
        with pytest.raises(typer.BadParameter):
            parse_vector(text, "--point")


class TestCLI:
    """Tests for top-level commands."""

    def test_version_flag(self):
        """Test --version flag."""
        result = runner.invoke(app, ["--version"])

        assert result.exit_code == 0
        assert "kahler-circles v0.1.0" in result.stdout

    def test_help_flag(self):
        result = runner.invoke(app, ["--help"])

        assert result.exit_code == 0
        assert "verify" in result.stdout
        assert "export" in result.stdout

    def test_suites_command(self):
        result = runner.invoke(app, ["suites"])

        assert result.exit_code == 0
        assert "geodesic-circles" in result.stdout


class TestVerify:
    """Tests for the verify command."""

    def test_passing_suite(self, tmp_report_path):
        result = runner.invoke(
            app, ["verify", "kahler", "--metric", "euclidean", "--samples", "2", "--out", str(tmp_report_path)]
        )

        assert result.exit_code == 0
        report = load_report(tmp_report_path)
        assert report.passed
        assert report.config["seed"] == 7
        assert len(report.cases) == 2

    def test_failing_suite(self, tmp_report_path):
        result = runner.invoke(
            app,
            ["verify", "kahler", "--metric", "testfield:nonkahler", "--samples", "2", "--out", str(tmp_report_path)],
        )

        assert result.exit_code == 1
        assert tmp_report_path.exists()
        assert not load_report(tmp_report_path).passed

    def test_unknown_suite(self, tmp_report_path):
        result = runner.invoke(app, ["verify", "circles", "--out", str(tmp_report_path)])

        assert result.exit_code == 2
        assert not tmp_report_path.exists()

    def test_unknown_metric(self, tmp_report_path):
        result = runner.invoke(app, ["verify", "kahler", "--metric", "fubini:x", "--out", str(tmp_report_path)])
        assert result.exit_code == 2

    def test_invalid_samples(self, tmp_report_path):
        result = runner.invoke(app, ["verify", "kahler", "--samples", "0", "--out", str(tmp_report_path)])
        assert result.exit_code == 2

    def test_csv_report(self, tmp_path):
        out = tmp_path / "kahler.csv"
        result = runner.invoke(
            app,
            ["verify", "kahler", "--metric", "euclidean", "--samples", "2", "--format", "csv", "--out", str(out)],
        )

        assert result.exit_code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "id,status,complex_bilinearity_defect,kahler_defect,error"
        assert len(lines) == 3

    def test_default_output_path(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        result = runner.invoke(app, ["verify", "kahler", "--metric", "euclidean", "--samples", "1"])

        assert result.exit_code == 0
        assert (tmp_path / "kahler.json").exists()

    def test_config_file_with_flag_override(self, tmp_path, tmp_report_path):
        config = tmp_path / "run.conf"
        config.write_text("metric=euclidean\nsamples=3\nseed=11\n")

        result = runner.invoke(
            app, ["verify", "kahler", "--config", str(config), "--samples", "2", "--out", str(tmp_report_path)]
        )

        assert result.exit_code == 0
        report = load_report(tmp_report_path)
        assert report.config["samples"] == 2
        assert report.config["seed"] == 11
        assert report.config["metric"] == "euclidean"

    def test_config_file_unknown_key(self, tmp_path, tmp_report_path):
        config = tmp_path / "run.conf"
        config.write_text("metric=euclidean\ncolour=red\n")

        result = runner.invoke(app, ["verify", "kahler", "--config", str(config), "--out", str(tmp_report_path)])

        assert result.exit_code == 2

    def test_missing_config_file(self, tmp_path, tmp_report_path):
        result = runner.invoke(
            app, ["verify", "kahler", "--config", str(tmp_path / "none.conf"), "--out", str(tmp_report_path)]
        )
        assert result.exit_code == 2


class TestExportTrajectory:
    """Tests for the export trajectory command."""

    def test_csv_to_stdout(self):
        result = runner.invoke(
            app,
            [
                "export", "trajectory",
                "--metric", "euclidean",
                "--point", "0,0,0,0",
                "--velocity", "1,0,0,0",
                "--steps", "16",
            ],
        )

        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert len(lines) == 18
        assert lines[0] == "t,x0,x1,x2,x3,v0,v1,v2,v3"
        assert lines[-1].startswith("1,1,0,0,0,1,0,0,0")

    def test_json_to_file(self, tmp_path):
        out = tmp_path / "curve.json"
        result = runner.invoke(
            app,
            [
                "export", "trajectory",
                "--family", "suspension:poincare",
                "--point", "0,1,0,0",
                "--velocity", "1,0,0.5,0",
                "--steps", "16",
                "--format", "json",
                "--out", str(out),
            ],
        )

        assert result.exit_code == 0
        data = json.loads(out.read_text(encoding="utf-8"))
        assert data["metric"] == "suspension:poincare"
        assert len(data["points"]) == 17

    def test_metric_and_family(self):
        result = runner.invoke(
            app,
            [
                "export", "trajectory",
                "--metric", "euclidean",
                "--family", "exterior-ball",
                "--point", "2,0,0,0",
                "--velocity", "0,1,0,0",
            ],
        )
        assert result.exit_code == 2

    def test_bad_point(self):
        result = runner.invoke(
            app,
            ["export", "trajectory", "--metric", "euclidean", "--point", "1,2", "--velocity", "0,1,0,0"],
        )
        assert result.exit_code == 2

    def test_leaving_the_domain(self):
        result = runner.invoke(
            app,
            [
                "export", "trajectory",
                "--metric", "ball",
                "--point", "0.9,0,0,0",
                "--velocity", "50,0,0,0",
                "--steps", "16",
            ],
        )
        assert result.exit_code == 1


class TestReportMerge:
    """Tests for the report merge command."""

    def _passing_report(self, path):
        result = runner.invoke(
            app, ["verify", "kahler", "--metric", "euclidean", "--samples", "1", "--out", str(path)]
        )
        assert result.exit_code == 0
        return path

    def test_merge(self, tmp_path):
        first = self._passing_report(tmp_path / "a.json")
        second = self._passing_report(tmp_path / "b.json")
        out = tmp_path / "merged.json"

        result = runner.invoke(app, ["report", "merge", str(first), str(second), "--out", str(out)])

        assert result.exit_code == 0
        merged = load_report(out)
        assert merged.suite == "merged"
        assert merged.summary.total == 2
        assert merged.cases[0].id == "kahler:point-0000"

    def test_merge_with_failures(self, tmp_path, sample_report):
        source = tmp_path / "failing.json"
        source.write_text(json.dumps(sample_report.to_payload(), allow_nan=True), encoding="utf-8")

        result = runner.invoke(app, ["report", "merge", str(source), "--out", str(tmp_path / "m.json")])

        assert result.exit_code == 1

    def test_not_a_report(self, tmp_path):
        source = tmp_path / "other.json"
        source.write_text(json.dumps({"hello": "world"}), encoding="utf-8")

        result = runner.invoke(app, ["report", "merge", str(source), "--out", str(tmp_path / "m.json")])

        assert result.exit_code == 2
