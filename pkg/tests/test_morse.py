"""
Fiberwise Morse data: validation, the transfer graph, closed AL-path enumeration, exact series
and the assembly of F_Γ.
"""

from dataclasses import replace
from fractions import Fraction

import pytest

from src.knot_algebra.coefficients.laurent import LaurentPoly, RationalFn
from src.knot_algebra.diagrams import DiagramVector
from src.knot_algebra.exceptions import ArgumentError, InvariantViolation
from src.knot_algebra.morse import (
    OneOneEvent,
    alexander_polynomial,
    assemble_F,
    build_transfer_graph,
    check_denominator,
    closed_orbit_series,
    denominator_bound,
    enumerate_closed_orbits,
    transfer_matrix_determinant,
)
from src.knot_algebra.theta import OmegaDiagram, ThetaDiagram


t = LaurentPoly.monomial(1)
one = LaurentPoly.one()


class TestValidation:
    def test_euler_characteristic(self, s2xs1):
        with pytest.raises(InvariantViolation):
            replace(s2xs1, fiber_genus=1, monodromy=((1, 0), (0, 1))).validate()

    def test_monodromy_must_be_unimodular(self, genus1):
        with pytest.raises(InvariantViolation):
            replace(genus1, monodromy=((2, 0), (0, 1))).validate()
        with pytest.raises(InvariantViolation):
            replace(genus1, monodromy=((1, 0, 0),)).validate()

    def test_events_join_index_one_loci(self, genus1):
        stray = OneOneEvent("e3", "min", "a", Fraction(1, 2))
        with pytest.raises(InvariantViolation):
            replace(genus1, one_one_events=genus1.one_one_events + (stray,)).validate()

    def test_events_avoid_the_reference_fiber(self, genus1):
        on_fiber = OneOneEvent("e3", "a", "b", Fraction(0))
        with pytest.raises(InvariantViolation):
            replace(genus1, one_one_events=genus1.one_one_events + (on_fiber,)).validate()


class TestAlexander:
    def test_trivial_fiber(self, s2xs1):
        assert alexander_polynomial(s2xs1) == one
        assert str(denominator_bound(s2xs1)) == "1 - 2t + t^2"

    def test_genus_one(self, genus1):
        assert str(alexander_polynomial(genus1)) == "1 - 3t + t^2"


class TestOrbits:
    def test_transfer_graph(self, genus1):
        g = build_transfer_graph(genus1)
        assert sorted(g.edges) == [("e1", "e2"), ("e2", "e1")]
        assert g.edges["e1", "e2"]["exponent"] == 1
        assert g.edges["e2", "e1"]["exponent"] == 0
        assert transfer_matrix_determinant(g) == one - t

    def test_bare_loci_only(self, s2xs1):
        orbits = enumerate_closed_orbits(s2xs1, 3)
        assert len(orbits) == 6
        assert all(o.kind == "locus" for o in orbits)
        assert [o.period for o in orbits] == [1, 1, 2, 2, 3, 3]

    def test_event_cycles(self, genus1):
        orbits = enumerate_closed_orbits(genus1, 3)
        assert len(orbits) == 15
        cycles = [o for o in orbits if o.kind == "events"]
        assert [(o.period, o.multiplicity) for o in cycles] == [(1, 1), (2, 2), (3, 3)]
        assert cycles[1].id == "events:e1,e2^2"

    def test_self_event(self, selfevent):
        assert len(enumerate_closed_orbits(selfevent, 2)) == 10

    def test_threads_do_not_change_orbits(self, genus1):
        assert enumerate_closed_orbits(genus1, 4, threads=1) == enumerate_closed_orbits(genus1, 4, threads=3)

    def test_period_must_be_positive(self, s2xs1):
        with pytest.raises(ArgumentError):
            enumerate_closed_orbits(s2xs1, 0)


class TestSeries:
    def test_s2xs1(self, s2xs1):
        series = closed_orbit_series(s2xs1, check_order=6)
        assert str(series.boundary_series) == "2t/(1 - t)"
        assert str(series.self_loop_series) == "2t/(1 - t)"
        assert str(series.lefschetz_series) == "2t/(1 - t)"
        assert series.transfer_determinant == one
        assert all(c.passed for c in series.checks)

    def test_genus_one(self, genus1):
        series = closed_orbit_series(genus1, check_order=8)
        assert str(series.boundary_series) == "-t/(1 - t)"
        assert str(series.self_loop_series) == "5t/(1 - t)"
        assert str(series.lefschetz_series) == "-t/(1 - t)"
        assert series.checks[0].name == "series/enumeration duality"

    def test_self_event(self, selfevent):
        series = closed_orbit_series(selfevent, check_order=6)
        assert series.boundary_series == RationalFn(t, one - t)
        assert series.self_loop_series == RationalFn(t * 5, one - t)
        assert series.lefschetz_series == RationalFn(t, one - t)

    def test_series_match_enumeration(self, genus1):
        series = closed_orbit_series(genus1, check_order=0)
        coefficients = series.self_loop_series.taylor(4)
        counts = [0] * 5
        for o in enumerate_closed_orbits(genus1, 4):
            counts[o.period] += o.sign
        assert coefficients == [Fraction(c) for c in counts]

    def test_tangled_component_is_not_rational(self, genus1):
        extra = OneOneEvent("e3", "b", "a", Fraction(1, 2))
        tangled = replace(genus1, one_one_events=genus1.one_one_events + (extra,)).validate()
        with pytest.raises(InvariantViolation):
            closed_orbit_series(tangled)

    @pytest.mark.parametrize("fixture", ["s2xs1", "genus1", "selfevent"])
    def test_denominator_bound(self, fixture, request):
        check = check_denominator(request.getfixturevalue(fixture))
        assert check.passed, check.detail


class TestAssembly:
    def test_loop_edges_default_to_self_loop_series(self, s2xs1):
        assembled, traced = assemble_F(OmegaDiagram(0).diagram(), {"e0": RationalFn(1)}, s2xs1)
        assert str(assembled.edge_functions["e1"]) == "2t/(1 - t)"
        assert traced.denominator == one - t
        assert traced.numerator == DiagramVector.from_diagram(OmegaDiagram(1).diagram(), 2)

    def test_zero_series_give_zero(self, s2xs1):
        _, traced = assemble_F(ThetaDiagram(0, 0).diagram(), {"e0": RationalFn(0)}, s2xs1)
        assert traced.numerator.is_zero

    def test_chord_series_within_bound(self, s2xs1):
        _, traced = assemble_F(ThetaDiagram(0, 0).diagram(), {"e0": RationalFn(t, one - t)}, s2xs1)
        assert traced.numerator == DiagramVector.from_diagram(ThetaDiagram(0, 1).diagram())

    def test_denominator_outside_bound(self, s2xs1):
        with pytest.raises(InvariantViolation):
            assemble_F(ThetaDiagram(0, 0).diagram(), {"e0": RationalFn(one, one + t)}, s2xs1)

    def test_missing_series(self, s2xs1):
        with pytest.raises(ArgumentError):
            assemble_F(ThetaDiagram(0, 0).diagram(), {}, s2xs1)
        with pytest.raises(ArgumentError):
            assemble_F(ThetaDiagram(0, 0).diagram(), {"w0": RationalFn(1)}, s2xs1)
