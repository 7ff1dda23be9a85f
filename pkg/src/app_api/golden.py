from __future__ import annotations

import difflib
import logging
import pathlib
from typing import Any, Union

import yaml

from src.app_api import utils
from src.app_api.report_mgmt import Report, run
from src.app_api.run_config import RunConfig
from src.knot_algebra.checks import CheckOutcome
from src.knot_algebra.exceptions import IngestionError


logger = logging.getLogger("knotforge_logger")

GOLDEN_SUITE_DIR: pathlib.Path = utils.get_repo_root() / "MyData" / "TestCases" / "golden"

MAX_DIFF_LINES = 40


class GoldenManifest:
    """
    One golden case, read from a yaml file in the suite directory:

        command: theta
        subcommand: verify
        params: {max_exponent: 3}
        conventions: {ihx_sign: A}     # optional
        expected: expected/theta_verify.json

    `params.input` and `expected` are relative to the manifest's directory.
    """

    name: str
    manifest_fp: pathlib.Path
    source: dict[str, Any]

    def __init__(self, manifest_fp: pathlib.Path):
        self.manifest_fp = manifest_fp
        self.source = self.read_and_parse_file(manifest_fp)
        self.name = str(self.source.get("name", manifest_fp.stem))

    @staticmethod
    def read_and_parse_file(manifest_fp: pathlib.Path) -> dict[str, Any]:
        try:
            with open(manifest_fp, "r", encoding="utf-8") as file:
                source = yaml.load(file, yaml.SafeLoader)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            where = f" at line {mark.line + 1}" if mark is not None else ""
            raise IngestionError(f"invalid YAML{where}", str(manifest_fp))
        if not isinstance(source, dict):
            raise IngestionError("a golden manifest is a mapping", str(manifest_fp))
        for key in ("command", "expected"):
            if not isinstance(source.get(key), str):
                raise IngestionError("missing or non-string field", str(manifest_fp), key)
        return source

    @property
    def expected_fp(self) -> pathlib.Path:
        return self.manifest_fp.parent / self.source["expected"]

    def config(self, threads: int = 1) -> RunConfig:
        return RunConfig.from_manifest(self.source, self.manifest_fp.parent, threads=threads)


def _diff(expected: str, actual: str, label: str) -> list[str]:
    lines = difflib.unified_diff(
        expected.splitlines(), actual.splitlines(), f"{label} (expected)", f"{label} (actual)", lineterm=""
    )
    return list(lines)[:MAX_DIFF_LINES]


def golden_check(
    suite: Union[str, pathlib.Path, None] = None, threads: int = 1, regenerate: bool = False
) -> Report:
    """
    Reruns every case of the suite and compares the canonical report text byte for byte with
    the stored expectation. With `regenerate`, the expectations are rewritten instead.

    Parameters:
    -----------
    suite: str | pathlib.Path | None
        Directory of yaml manifests. Defaults to MyData/TestCases/golden.
    threads: int
        Passed to every case; reports must not depend on it.
    regenerate: bool
        Write the expected files rather than compare against them.
    """
    suite = pathlib.Path(suite) if suite is not None else GOLDEN_SUITE_DIR
    if not suite.is_dir():
        raise IngestionError("the golden suite is not a directory", str(suite))
    manifests = sorted(suite.glob("*.yaml")) + sorted(suite.glob("*.yml"))

    echo = {
        "command": "golden",
        "subcommand": None,
        "params": {"suite": suite.name, "regenerate": regenerate},
        "conventions": None,
    }
    if not manifests:
        logger.warning(f"golden suite {str(suite)} has no cases")
        return Report(echo, {"cases": 0, "warning": "empty suite"})

    checks = []
    for fp in manifests:
        case = GoldenManifest(fp)
        logger.info(f"golden case {case.name}")
        actual = run(case.config(threads)).to_json(include_timing=False)

        if regenerate:
            case.expected_fp.parent.mkdir(parents=True, exist_ok=True)
            case.expected_fp.write_text(actual, encoding="utf-8")
            logger.info(f"wrote {str(case.expected_fp)}")
            checks.append(CheckOutcome(case.name, True, {"expected": case.source["expected"], "regenerated": True}))
            continue

        if not case.expected_fp.exists():
            checks.append(
                CheckOutcome(case.name, False, {"expected": case.source["expected"], "error": "missing expected file"})
            )
            continue
        expected = case.expected_fp.read_text(encoding="utf-8")
        passed = expected == actual
        detail: dict[str, Any] = {"expected": case.source["expected"]}
        if not passed:
            detail["diff"] = _diff(expected, actual, case.name)
            logger.error(f"golden case {case.name} differs from {case.source['expected']}")
        checks.append(CheckOutcome(case.name, passed, detail))

    results = {"cases": len(checks), "failed": [c.name for c in checks if not c.passed]}
    return Report(echo, results, checks)
