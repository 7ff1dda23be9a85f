"""
The JSON exchange formats for diagrams and Morse data.
"""

import copy
import json
from fractions import Fraction

import pytest

from src.app_api.ingestion import (
    diagram_to_json,
    load_diagram,
    load_morse_data,
    morse_data_to_json,
    parse_diagram,
    parse_morse_data,
    read_json,
)
from src.knot_algebra.diagrams import PolyColoredDiagram, canonicalize
from src.knot_algebra.exceptions import IngestionError, InvariantViolation, StructuralError
from src.knot_algebra.theta import OmegaDiagram, ThetaDiagram


THETA = {
    "schema_version": 1,
    "degree": 1,
    "wilson_cycle": [0, 1],
    "edges": [
        {"from": 1, "to": 0, "kind": "W", "color": {"0": "1/1"}},
        {"from": 0, "to": 1, "kind": "W", "color": {"0": "1/1"}},
        {"from": 1, "to": 0, "kind": "I", "color": {"2": "1/1"}},
    ],
}


def edited(**changes):
    source = copy.deepcopy(THETA)
    source.update(changes)
    return source


class TestDiagrams:
    def test_fixtures(self, test_cases):
        assert load_diagram(test_cases / "theta01.json") == ThetaDiagram(0, 1).diagram()
        assert load_diagram(test_cases / "omega1.json") == OmegaDiagram(1).diagram()
        assert load_diagram(test_cases / "crossed_chords.json").degree == 2

    def test_wilson_edges_in_any_order(self):
        assert parse_diagram(THETA) == ThetaDiagram(0, 2).diagram()

    def test_polynomial_colors(self, test_cases):
        with pytest.raises(IngestionError):
            load_diagram(test_cases / "poly_theta.json")
        colored = load_diagram(test_cases / "poly_theta.json", allow_poly=True)
        assert isinstance(colored, PolyColoredDiagram)
        assert colored.expand_linearity().coefficient(ThetaDiagram(0, 2).diagram()) == -3

    def test_export_reads_back(self):
        d = OmegaDiagram(-2).diagram()
        exported = json.loads(json.dumps(diagram_to_json(d)))
        assert exported["schema_version"] == 1
        assert [e["kind"] for e in exported["edges"]] == ["W", "I", "rho"]
        assert parse_diagram(exported) == d

    def test_canonical_export_reads_back(self):
        form = canonicalize(OmegaDiagram(3).diagram())
        assert canonicalize(parse_diagram(diagram_to_json(form.diagram))).key == form.key

    @pytest.mark.parametrize(
        "changes, field",
        [
            ({"schema_version": 2}, "schema_version"),
            ({"degree": 2}, "degree"),
            ({"wilson_cycle": [0, True]}, "wilson_cycle[1]"),
            ({"wilson_cycle": []}, "wilson_cycle"),
        ],
    )
    def test_top_level_errors(self, changes, field):
        with pytest.raises(IngestionError) as info:
            parse_diagram(edited(**changes), "theta.json")
        assert info.value.field == field
        assert "theta.json" in str(info.value)

    def test_edge_errors(self):
        bad_kind = edited()
        bad_kind["edges"][2]["kind"] = "chord"
        with pytest.raises(IngestionError, match="kind"):
            parse_diagram(bad_kind)

        loop_as_chord = edited()
        loop_as_chord["edges"][2].update({"from": 1, "to": 1, "kind": "I"})
        with pytest.raises(IngestionError):
            parse_diagram(loop_as_chord)

        missing_wilson = edited()
        del missing_wilson["edges"][0]
        with pytest.raises(IngestionError, match="missing Wilson"):
            parse_diagram(missing_wilson)

        float_color = edited()
        float_color["edges"][2]["color"] = {"1": "0.5"}
        with pytest.raises(IngestionError) as info:
            parse_diagram(float_color)
        assert info.value.field == "edges[2].color.1"

        no_head = edited()
        del no_head["edges"][2]["to"]
        with pytest.raises(IngestionError) as info:
            parse_diagram(no_head)
        assert info.value.field == "edges[2].to"

    def test_structural_errors_pass_through(self):
        source = edited()
        source["edges"].append({"from": 0, "to": 1, "kind": "I", "color": {"0": "1/1"}})
        with pytest.raises(StructuralError):
            parse_diagram(source)

    def test_bad_files(self, tmp_path):
        broken = tmp_path / "broken.json"
        broken.write_text('{"wilson_cycle": [0, 1],\n "edges": [}')
        with pytest.raises(IngestionError, match="line 2"):
            read_json(broken)
        with pytest.raises(IngestionError, match="cannot read"):
            read_json(tmp_path / "absent.json")


class TestMorseData:
    def test_fixture(self, genus1):
        assert genus1.name == "genus1"
        assert genus1.fiber_genus == 1
        assert [e.base_angle for e in genus1.one_one_events] == [Fraction(1, 4), Fraction(3, 4)]
        assert genus1.monodromy == ((2, 1), (1, 1))

    def test_export_reads_back(self, genus1, selfevent):
        for m in (genus1, selfevent):
            assert parse_morse_data(json.loads(json.dumps(morse_data_to_json(m))), m.name) == m

    def test_defaults(self):
        source = {
            "fiber_genus": 0,
            "critical_loci": [
                {"id": "lo", "index": 0, "period": 1},
                {"id": "hi", "index": 2, "period": 1},
            ],
        }
        m = parse_morse_data(source)
        assert m.one_one_events == ()
        assert m.monodromy == ()
        assert all(c.sign == 1 for c in m.critical_loci)

    def test_inexact_angle(self, test_cases):
        source = read_json(test_cases / "genus1.json")
        source["one_one_events"][0]["base_angle"] = "0.25"
        with pytest.raises(IngestionError) as info:
            parse_morse_data(source, "genus1.json")
        assert info.value.field == "one_one_events[0].base_angle"

    def test_monodromy_entries(self, test_cases):
        source = read_json(test_cases / "genus1.json")
        source["monodromy"] = [[2, 1], [1, 1.0]]
        with pytest.raises(IngestionError):
            parse_morse_data(source)

    def test_invariants_checked_on_load(self, test_cases):
        source = read_json(test_cases / "genus1.json")
        source["fiber_genus"] = 2
        with pytest.raises(InvariantViolation):
            parse_morse_data(source)

    def test_load_by_path(self, test_cases):
        assert load_morse_data(test_cases / "s2xs1.json").euler_characteristic == 2
