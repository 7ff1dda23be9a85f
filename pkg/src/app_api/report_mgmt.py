"""
Reports and the command dispatcher. A Report holds only JSON-ready values: exact numbers
travel as strings, and timing is integer nanoseconds kept out of the canonical serialization.
"""

from __future__ import annotations

import json
import logging
import pathlib
import time
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Callable, Optional

import pandas as pd
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from src.app_api import utils
from src.app_api.ingestion import SCHEMA_VERSION, diagram_to_json, load_diagram, load_morse_data
from src.app_api.run_config import RunConfig
from src.knot_algebra.checks import CheckOutcome, all_passed
from src.knot_algebra.diagrams import automorphism_group_order, canonicalize, enumerate_canonical
from src.knot_algebra.diagrams.vector import DiagramVector
from src.knot_algebra.exceptions import ArgumentError, IngestionError
from src.knot_algebra.morse import (
    alexander_polynomial,
    check_denominator,
    closed_orbit_series,
    denominator_bound,
    enumerate_closed_orbits,
)
from src.knot_algebra.relations import Window, build_quotient, stu_expand
from src.knot_algebra.surgery import (
    Z_of_surgery,
    check_scheme_identities,
    labeling_orbit_count,
    occupied_region_report,
    psi,
    surgery_window,
    whitehead_example,
    whitehead_presentation,
)
from src.knot_algebra.theta import (
    PolyModConstants,
    ThetaDiagram,
    reduce_theta,
    theta_name,
    verify_isomorphism,
)


logger = logging.getLogger("knotforge_logger")


@dataclass
class Report:
    command: dict[str, Any]
    results: dict[str, Any] = field(default_factory=dict)
    checks: list[CheckOutcome] = field(default_factory=list)
    rows: list[dict[str, Any]] = field(default_factory=list)
    timing: dict[str, int] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all_passed(self.checks)

    def as_dict(self, include_timing: bool = False) -> dict[str, Any]:
        out = {
            "schema_version": self.schema_version,
            "command": self.command,
            "results": self.results,
            "checks": [c.as_dict() for c in self.checks],
            "passed": self.passed,
        }
        if self.rows:
            out["rows"] = self.rows
        if include_timing:
            out["timing"] = self.timing
        return out

    def to_json(self, include_timing: bool = False) -> str:
        """
        Canonical text: sorted keys, two-space indent, trailing newline. Without timing the
        output depends only on the command and its inputs.
        """
        return json.dumps(self.as_dict(include_timing), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str, origin: str = "<report>") -> Report:
        try:
            source = json.loads(text)
        except json.JSONDecodeError as e:
            raise IngestionError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}", origin)
        if not isinstance(source, dict) or "command" not in source:
            raise IngestionError("a report is an object with a command echo", origin, "command")
        if source.get("schema_version") != SCHEMA_VERSION:
            raise IngestionError(
                f"unsupported schema_version {source.get('schema_version')!r}", origin, "schema_version"
            )
        return cls(
            command=source["command"],
            results=source.get("results", {}),
            checks=[CheckOutcome.from_dict(c) for c in source.get("checks", [])],
            rows=source.get("rows", []),
            timing=source.get("timing", {}),
        )

    def render(self, console: Optional[Console] = None) -> None:
        """
        Prints the report as rich tables: results, then checks.
        """
        console = console or Console()
        name = " ".join(str(p) for p in (self.command.get("command"), self.command.get("subcommand")) if p)
        verdict = "[bold green]PASS[/bold green]" if self.passed else "[bold red]FAIL[/bold red]"
        console.print(f"[bold]knotforge {escape(name)}[/bold]  {verdict if self.checks else ''}")

        table = Table(show_header=True, header_style="bold magenta")
        table.add_column("Result")
        table.add_column("Value")
        for key, value in sorted(self.results.items()):
            text = value if isinstance(value, str) else json.dumps(value, sort_keys=True, ensure_ascii=False)
            table.add_row(escape(key), escape(text))
        console.print(table)

        if self.checks:
            checks = Table(show_header=True, header_style="bold magenta")
            checks.add_column("Check")
            checks.add_column("Passed")
            checks.add_column("Detail")
            for c in self.checks:
                mark = "[bold green]Yes[/bold green]" if c.passed else "[bold red]No[/bold red]"
                checks.add_row(escape(c.name), mark, escape(json.dumps(c.detail, sort_keys=True, ensure_ascii=False)))
            console.print(checks)

        if "elapsed_ns" in self.timing:
            console.print(f"[grey70]elapsed: {self.timing['elapsed_ns'] / 1e9:.3f}s[/grey70]")


def print_report(report: Report, fmt: str, console: Optional[Console] = None) -> None:
    console = console or Console()
    if fmt == "json":
        console.out(report.to_json(include_timing=True), end="", highlight=False)
    else:
        report.render(console)


def save_report(report: Report, config: RunConfig) -> pathlib.Path:
    """
    Saves the report as JSON to --output (a .json file, or a directory) or to the results
    directory from defaults.yaml. Reports with tabular rows also get a CSV summary next to it.
    """
    if config.output is not None and config.output.suffix == ".json":
        fp = config.output
    else:
        directory = config.output or utils.get_repo_root() / utils.read_defaults().get(
            "results_dir", "MyData/TestResults"
        )
        stem = config.name.replace(" ", "_")
        fp = pathlib.Path(directory) / f"{stem}__{datetime.now().strftime('%Y-%m-%dT%H%M%S')}.json"
    fp.parent.mkdir(parents=True, exist_ok=True)

    logger.info(f"saving results to {str(fp)}")
    fp.write_text(report.to_json(include_timing=True))

    if report.rows:
        df = pd.DataFrame(
            [{k: v if isinstance(v, (str, int, bool)) else json.dumps(v) for k, v in row.items()} for row in report.rows]
        )
        df.to_csv(fp.with_suffix(".csv"), index=False)
    return fp


##############################################################################
############################## COMMAND HANDLERS ##############################
##############################################################################

# each handler returns (results, checks, rows)
Outcome = tuple[dict[str, Any], list[CheckOutcome], list[dict[str, Any]]]


def _require_input(config: RunConfig) -> pathlib.Path:
    if config.params.input is None:
        raise ArgumentError(f"`{config.name}` needs --input")
    return config.params.input


def _quotient(config: RunConfig) -> Outcome:
    p = config.params
    window = Window(p.degree, p.window, nh_only=p.nh_only)
    quotient = build_quotient(window, config.conventions, threads=config.threads)
    if p.window >= 2:
        smaller = build_quotient(
            Window(p.degree, p.window - 2, nh_only=p.nh_only), config.conventions, threads=config.threads
        )
        stabilization = smaller.stabilization_check(quotient)
    else:
        stabilization = CheckOutcome("stabilization", True, {"skipped": "window below 2"})
    basis_ids = [canonicalize(b).hash for b in quotient.basis]
    results = {
        **quotient.summary(),
        "basis": basis_ids,
        "relation_count": quotient.relation_count,
        "stabilization_check": stabilization.passed,
    }
    rows = [
        {
            "id": h,
            "name": theta_name(b) or "",
            "trivalent": len(b.trivalent_vertices),
            "diagram": str(b),
        }
        for h, b in zip(basis_ids, quotient.basis)
    ]
    return results, [stabilization], rows


def _theta_verify(config: RunConfig) -> Outcome:
    k = config.params.max_exponent
    checks = verify_isomorphism(k, config.conventions, threads=config.threads)
    return {"max_exponent": k, "window": k + 2}, checks, []


def _theta_reduce(config: RunConfig) -> Outcome:
    p, q = config.params.p, config.params.q
    reduced, image, quotient = reduce_theta(p, q, config.conventions, threads=config.threads)
    expected = PolyModConstants.monomial(abs(p + q))
    check = CheckOutcome(
        "W(Θ(p,q)) = t^|p+q|",
        image == expected,
        {"W": str(image), "expected": str(expected)},
    )
    results = {
        "theta": str(ThetaDiagram(p, q)),
        "window": quotient.window.as_dict(),
        "normal_form": reduced.format(theta_name),
        "terms": reduced.as_json(theta_name),
        "W": str(image),
    }
    return results, [check], []


def _morse_zeta(config: RunConfig) -> Outcome:
    m = load_morse_data(_require_input(config))
    order = config.params.order
    series = closed_orbit_series(m, check_order=order, threads=config.threads)
    orbits = enumerate_closed_orbits(m, order, threads=config.threads)
    rows = [dict(o.as_dict(), sequence=",".join(o.sequence)) for o in orbits]
    results = {"name": m.name, "order": order, "orbit_count": len(orbits), **series.as_dict()}
    return results, list(series.checks), rows


def _morse_alexander(config: RunConfig) -> Outcome:
    m = load_morse_data(_require_input(config))
    delta = alexander_polynomial(m)
    results = {
        "name": m.name,
        "fiber_genus": m.fiber_genus,
        "alexander": str(delta),
        "denominator_bound": str(denominator_bound(m, delta)),
    }
    return results, [], []


def _morse_check_denominator(config: RunConfig) -> Outcome:
    m = load_morse_data(_require_input(config))
    check = check_denominator(m, closed_orbit_series(m, check_order=config.params.order, threads=config.threads))
    return {"name": m.name, **check.detail}, [check], []


def _surgery_z(config: RunConfig) -> Outcome:
    d = load_diagram(_require_input(config))
    n = config.params.n
    if d.degree != n:
        raise ArgumentError(f"diagram degree {d.degree} does not match --n {n}")
    chords = DiagramVector.from_diagram(d) if d.is_chord_diagram else stu_expand(d, config.conventions)
    widest = max([c.max_abs_exponent() for c in chords.diagrams()] + [d.max_abs_exponent()])
    quotient = build_quotient(surgery_window(n, widest), config.conventions, threads=config.threads)
    value = Z_of_surgery(d, n, quotient, config.conventions, threads=config.threads)
    target = quotient.reduce(DiagramVector.from_diagram(d, 2 ** n))
    check = CheckOutcome(
        f"Z_{n}(psi_{n}(Γ)) = {2 ** n}·Γ",
        value == target,
        {"Z": value.format(theta_name), "expected": target.format(theta_name)},
    )
    rows = []
    for _, chord, coeff in chords.items():
        rows.append(
            {
                "id": canonicalize(chord).hash,
                "coefficient": str(coeff),
                "labeling_orbits": labeling_orbit_count(chord),
                "aut": automorphism_group_order(chord),
            }
        )
    results = {
        "n": n,
        "input": canonicalize(d).hash,
        "presentation": psi(d).as_dict(),
        "Z": value.format(theta_name),
        "terms": value.as_json(theta_name),
    }
    return results, [check], rows


def _surgery_whitehead(config: RunConfig) -> Outcome:
    theta = ThetaDiagram(0, 1).diagram()
    quotient = build_quotient(surgery_window(1, 1), config.conventions, threads=config.threads)
    value = whitehead_example(quotient, config.conventions, threads=config.threads)
    expected = quotient.reduce(DiagramVector.from_diagram(theta, 2))
    check = CheckOutcome(
        "Z_1(Wh(K)) = 2·Θ(0,1)",
        value == expected,
        {"Z": value.format(theta_name), "expected": expected.format(theta_name)},
    )
    results = {
        "presentation": whitehead_presentation().as_dict(),
        "Z": value.format(theta_name),
        "terms": value.as_json(theta_name),
    }
    return results, [check], []


def _scheme_check(config: RunConfig) -> Outcome:
    max_k = config.params.max_k
    checks = check_scheme_identities(max_k)
    for n in (1, 2):
        checks += occupied_region_report(n)
    rows = [dict(c.detail, name=c.name, passed=c.passed) for c in checks]
    return {"max_k": max_k, "identities": len(checks)}, checks, rows


def _diagram_canonicalize(config: RunConfig) -> Outcome:
    d = load_diagram(_require_input(config))
    form = canonicalize(d)
    results = {
        "id": form.hash,
        "sign": form.sign,
        "name": theta_name(form.diagram) or "",
        "automorphisms": automorphism_group_order(d),
        "canonical": diagram_to_json(form.diagram),
    }
    return results, [], []


def _diagram_enumerate(config: RunConfig) -> Outcome:
    p = config.params
    forms = enumerate_canonical(
        p.degree, p.window, chord_only=p.chord_only, nh_only=p.nh_only, threads=config.threads
    )
    rows = [
        {
            "id": f.hash,
            "sign": f.sign,
            "trivalent": len(f.diagram.trivalent_vertices),
            "holonomy": f.diagram.wilson_holonomy,
            "diagram": str(f.diagram),
        }
        for f in forms
    ]
    results = {
        "degree": p.degree,
        "window": p.window,
        "count": len(forms),
        "vanishing": sum(1 for f in forms if f.sign == 0),
        "ids": [f.hash for f in forms],
    }
    return results, [], rows


HANDLERS: dict[tuple[str, Optional[str]], Callable[[RunConfig], Outcome]] = {
    ("quotient", None): _quotient,
    ("theta", "verify"): _theta_verify,
    ("theta", "reduce"): _theta_reduce,
    ("morse", "zeta"): _morse_zeta,
    ("morse", "alexander"): _morse_alexander,
    ("morse", "check-denominator"): _morse_check_denominator,
    ("surgery", "z"): _surgery_z,
    ("surgery", "whitehead"): _surgery_whitehead,
    ("scheme", "check"): _scheme_check,
    ("diagram", "canonicalize"): _diagram_canonicalize,
    ("diagram", "enumerate"): _diagram_enumerate,
}


def run(config: RunConfig) -> Report:
    """
    Runs one command and wraps its results in a Report.

    Parameters:
    -----------
    config: RunConfig
        The resolved command, parameters, conventions and thread count.
    """
    handler = HANDLERS.get((config.command, config.subcommand))
    if handler is None:
        raise ArgumentError(f"unknown command {config.name!r}")
    logger.info(f"running {config.name}")
    logger.debug(f"config: {config.echo()}")
    start = time.perf_counter_ns()
    results, checks, rows = handler(config)
    elapsed = time.perf_counter_ns() - start
    report = Report(config.echo(), results, checks, rows, {"elapsed_ns": elapsed})
    logger.info(f"{config.name} finished: {'pass' if report.passed else 'FAIL'}")
    return report
