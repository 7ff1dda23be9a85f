"""
The command line, saved reports and the golden suite.
"""

import json
import shutil

import pytest

import app
from src.app_api.golden import GOLDEN_SUITE_DIR, GoldenManifest, golden_check
from src.app_api.report_mgmt import Report, run
from src.app_api.run_config import RunConfig
from src.knot_algebra.checks import CheckOutcome
from src.knot_algebra.exceptions import ArgumentError, IngestionError


FAST_CASES = [
    "theta_reduce.yaml",
    "morse_zeta_genus1.yaml",
    "morse_alexander_genus1.yaml",
    "scheme_check.yaml",
    "diagram_canonicalize_omega.yaml",
]


def json_output(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


@pytest.fixture
def suite(tmp_path, test_cases):
    """A copy of part of the golden suite, with the fixtures its manifests point at."""
    for fp in test_cases.glob("*.json"):
        shutil.copy(fp, tmp_path / fp.name)
    golden = tmp_path / "golden"
    golden.mkdir()
    for name in FAST_CASES:
        shutil.copy(test_cases / "golden" / name, golden / name)
    return golden


class TestCommandLine:
    def test_theta_reduce(self, capsys):
        assert app.main(["theta", "reduce", "-p", "1", "-q", "0", "--format", "json"]) == app.EXIT_PASS
        report = json_output(capsys)
        assert report["command"]["params"]["p"] == 1
        assert report["results"]["W"] == "t mod Q"
        assert report["passed"] is True
        assert isinstance(report["timing"]["elapsed_ns"], int)

    def test_global_flags_before_the_subcommand(self, capsys):
        assert app.main(["--format", "json", "theta", "reduce", "-p", "0", "-q", "2"]) == app.EXIT_PASS
        assert json_output(capsys)["results"]["W"] == "t^2 mod Q"

    def test_morse_alexander(self, capsys, test_cases):
        argv = ["morse", "alexander", "-i", str(test_cases / "genus1.json"), "-f", "json"]
        assert app.main(argv) == app.EXIT_PASS
        results = json_output(capsys)["results"]
        assert results["alexander"] == "1 - 3t + t^2"
        assert results["name"] == "genus1"

    def test_conventions_are_echoed(self, capsys, test_cases):
        argv = ["diagram", "canonicalize", "-i", str(test_cases / "omega1.json"), "-f", "json",
                "--ihx-sign-convention", "B"]
        assert app.main(argv) == app.EXIT_PASS
        report = json_output(capsys)
        assert report["command"]["conventions"] == {"ihx_sign": "B", "stu_order": "A"}
        assert report["command"]["params"]["input"] == "omega1.json"

    def test_text_rendering(self, capsys):
        assert app.main(["scheme", "check", "--max-k", "2"]) == app.EXIT_PASS
        out = capsys.readouterr().out
        assert "knotforge scheme check" in out
        assert "PASS" in out

    def test_errors_exit_with_two(self, tmp_path):
        assert app.main(["morse", "zeta"]) == app.EXIT_ERROR
        assert app.main(["theta", "reduce", "--threads", "0"]) == app.EXIT_ERROR
        broken = tmp_path / "broken.json"
        broken.write_text("{")
        assert app.main(["diagram", "canonicalize", "-i", str(broken)]) == app.EXIT_ERROR

    def test_no_command_prints_help(self, capsys):
        assert app.main([]) == app.EXIT_PASS
        assert "usage: knotforge" in capsys.readouterr().out

    def test_saved_report_and_csv(self, tmp_path):
        target = tmp_path / "scheme.json"
        assert app.main(["scheme", "check", "--max-k", "2", "-o", str(target)]) == app.EXIT_PASS
        saved = Report.from_json(target.read_text())
        assert saved.passed
        assert saved.results["max_k"] == 2
        assert target.with_suffix(".csv").exists()

    def test_saved_into_directory(self, tmp_path):
        assert app.main(["theta", "reduce", "-p", "0", "-q", "1", "-o", str(tmp_path)]) == app.EXIT_PASS
        [saved] = tmp_path.glob("theta_reduce__*.json")
        assert Report.from_json(saved.read_text()).results["theta"] == "Θ(0,1)"


class TestReports:
    def test_json_round_trip(self):
        report = Report(
            {"command": "scheme", "subcommand": "check", "params": {}, "conventions": None},
            {"identities": 2},
            [CheckOutcome("telescoping k=1", True, {"k": 1})],
            [{"name": "telescoping k=1", "passed": True}],
            {"elapsed_ns": 12},
        )
        text = report.to_json(include_timing=True)
        assert Report.from_json(text).to_json(include_timing=True) == text
        assert "timing" not in json.loads(report.to_json())

    def test_canonical_text_ignores_timing(self):
        config = RunConfig.from_defaults("scheme", "check", max_k=2)
        assert run(config).to_json() == run(config).to_json()

    def test_from_json_errors(self):
        with pytest.raises(IngestionError):
            Report.from_json("[]")
        with pytest.raises(IngestionError):
            Report.from_json('{"command": {}, "schema_version": 9}')

    def test_unknown_command(self):
        with pytest.raises(ArgumentError):
            run(RunConfig.from_defaults("theta", "prove"))
        with pytest.raises(ArgumentError):
            RunConfig.from_defaults("theta", "verify", colour="blue")


class TestGolden:
    def test_regenerate_then_compare(self, suite):
        regenerated = golden_check(suite, regenerate=True)
        assert regenerated.passed
        assert len(list((suite / "expected").glob("*.json"))) == len(FAST_CASES)

        for threads in (1, 4):
            report = golden_check(suite, threads=threads)
            assert report.passed, report.results
            assert report.results == {"cases": len(FAST_CASES), "failed": []}

    def test_mismatch_shows_a_diff(self, suite):
        golden_check(suite, regenerate=True)
        expected = suite / "expected" / "theta_reduce.json"
        expected.write_text(expected.read_text().replace('"W": "t^2 mod Q"', '"W": "t^3 mod Q"'))
        report = golden_check(suite)
        assert not report.passed
        assert report.results["failed"] == ["theta_reduce"]
        [failed] = [c for c in report.checks if not c.passed]
        assert any(line.startswith("-") and "t^3 mod Q" in line for line in failed.detail["diff"])

    def test_missing_expectation(self, suite):
        report = golden_check(suite)
        assert not report.passed
        assert all(c.detail["error"] == "missing expected file" for c in report.checks)

    def test_empty_suite(self, tmp_path):
        report = golden_check(tmp_path)
        assert report.passed
        assert report.results == {"cases": 0, "warning": "empty suite"}

    def test_bad_manifests(self, tmp_path):
        (tmp_path / "broken.yaml").write_text("command: theta\nexpected: [oops\n")
        with pytest.raises(IngestionError, match="line"):
            golden_check(tmp_path)
        (tmp_path / "broken.yaml").write_text("command: theta\n")
        with pytest.raises(IngestionError):
            GoldenManifest(tmp_path / "broken.yaml")
        with pytest.raises(IngestionError):
            golden_check(tmp_path / "nowhere")

    def test_cli(self, suite, capsys):
        assert app.main(["golden", "-s", str(suite), "--regenerate"]) == app.EXIT_PASS
        capsys.readouterr()
        assert app.main(["golden", "-s", str(suite), "-t", "2", "-f", "json"]) == app.EXIT_PASS
        report = json_output(capsys)
        assert report["command"]["params"] == {"suite": "golden", "regenerate": False}

    @pytest.mark.parametrize("threads", [1, 4])
    def test_committed_expectations_pass(self, threads):
        manifests = sorted(GOLDEN_SUITE_DIR.glob("*.yaml"))
        expected = sorted((GOLDEN_SUITE_DIR / "expected").glob("*.json"))
        assert [fp.stem for fp in manifests] == [fp.stem for fp in expected]

        report = golden_check(GOLDEN_SUITE_DIR, threads=threads)
        assert report.passed, [c.detail for c in report.checks if not c.passed]
        assert report.results == {"cases": len(manifests), "failed": []}

    def test_committed_suite_reports_read_back(self):
        for fp in sorted((GOLDEN_SUITE_DIR / "expected").glob("*.json")):
            report = Report.from_json(fp.read_text(encoding="utf-8"), str(fp))
            assert report.passed, fp.name
            assert report.to_json() == fp.read_text(encoding="utf-8")

    @pytest.mark.slow
    def test_shipped_suite_is_consistent(self, tmp_path, test_cases):
        for fp in test_cases.glob("*.json"):
            shutil.copy(fp, tmp_path / fp.name)
        golden = tmp_path / "golden"
        shutil.copytree(GOLDEN_SUITE_DIR, golden, ignore=shutil.ignore_patterns("expected"))
        assert golden_check(golden, regenerate=True).passed
        assert golden_check(golden, threads=3).passed
