"""
Relation instances, the exact quotient and traced classes.
"""

from collections import Counter
from fractions import Fraction
import random

import pytest

from src.knot_algebra.coefficients.laurent import LaurentPoly, RationalFn
from src.knot_algebra.diagrams import (
    ColoredJacobiDiagram,
    DiagramVector,
    enumerate_diagrams,
    is_nullhomotopic,
)
from src.knot_algebra.exceptions import ArgumentError, WindowError
from src.knot_algebra.relations import (
    Conventions,
    RelationRule,
    TracedClass,
    Window,
    build_quotient,
    generate_relations,
    holonomy_move,
    stu_expand,
    trace,
)
from src.knot_algebra.theta import OmegaDiagram, ThetaDiagram


t = LaurentPoly.monomial(1)
one = LaurentPoly.one()


def theta(p, q):
    return ThetaDiagram(p, q).diagram()


def omega(p):
    return OmegaDiagram(p).diagram()


class TestRelations:
    def test_instances_on_the_trivial_window(self):
        instances = generate_relations(Window(1, 0))
        kinds = Counter(r.kind for r in instances)
        assert kinds == Counter({"OrientationReversal": 3, "FI": 1, "AS": 1, "STU": 1})

    @pytest.mark.parametrize("bound", [0, 1, 2, 5])
    def test_instance_counts_match_a_site_by_site_count(self, bound):
        window = Window(1, bound)
        expected = Counter()
        for d in enumerate_diagrams(1, bound, nh_only=True):
            expected["AS"] += len(d.trivalent_vertices)
            expected["OrientationReversal"] += len(d.edges)
            expected["Holonomy"] += sum(window.contains(holonomy_move(d, v)) for v in d.vertices)
            # a nullhomotopic degree-1 chord diagram is exactly one whose small loop is trivial
            expected["FI"] += d.is_chord_diagram and is_nullhomotopic(d)
            # a resolved leg keeps the loop color, so every STU site stays in the window
            expected["STU"] += sum(
                (e.tail in d.univalent_vertices) != (e.head in d.univalent_vertices) for e in d.edges
            )
        assert Counter(r.kind for r in generate_relations(window)) == +expected

    def test_instance_counts_on_window_five(self):
        kinds = Counter(r.kind for r in generate_relations(Window(1, 5)))
        assert kinds == Counter(
            {"AS": 66, "OrientationReversal": 193, "Holonomy": 221, "FI": 6, "STU": 66}
        )
        assert sum(kinds.values()) == 552

    def test_instances_stay_in_window(self):
        window = Window(1, 1)
        for r in generate_relations(window):
            assert all(window.contains(d) for d in r.diagrams())

    def test_threads_do_not_change_instances(self):
        one_thread = [(r.kind, r.site, r.vector()) for r in generate_relations(Window(1, 1), threads=1)]
        many = [(r.kind, r.site, r.vector()) for r in generate_relations(Window(1, 1), threads=3)]
        assert one_thread == many

    def test_holonomy_move(self):
        assert holonomy_move(theta(0, 0), 1) == theta(1, -1)
        assert holonomy_move(theta(0, 1), 1) == theta(1, 0)

    def test_fi_needs_trivial_small_loop(self):
        rule = RelationRule.create("FI")
        assert len(rule(theta(0, 0))) == 1
        assert rule(theta(0, 1)) == []

    def test_stu_expansion_kills_omega(self):
        for p in range(-2, 3):
            assert stu_expand(omega(p)).is_zero
            assert stu_expand(omega(p), Conventions(stu_order="B")).is_zero

    def test_stu_expand_leaves_chord_diagrams(self):
        assert stu_expand(theta(0, 2)) == DiagramVector.from_diagram(theta(0, 2))

    def test_registry(self):
        assert RelationRule.create("IHX", Conventions(ihx_sign="B")).conventions.ihx_sign == "B"
        with pytest.raises(ArgumentError):
            RelationRule.create("Jacobi")
        with pytest.raises(ArgumentError):
            Conventions(ihx_sign="C")


class TestQuotient:
    def test_trivial_window_is_zero(self):
        quotient = build_quotient(Window(1, 0))
        assert quotient.dimension == 0
        assert quotient.reduce_diagram(theta(0, 0)).is_zero

    def test_holonomy_classes(self, quotient_deg1):
        for p, q in [(1, 0), (2, -1), (-1, 2), (3, -2)]:
            assert quotient_deg1.reduce_diagram(theta(p, q)) == quotient_deg1.reduce_diagram(theta(0, p + q))

    def test_framing_and_loops_vanish(self, quotient_deg1):
        assert quotient_deg1.is_zero(DiagramVector.from_diagram(theta(0, 0)))
        assert quotient_deg1.is_zero(DiagramVector.from_diagram(theta(2, -2)))
        for p in range(-3, 4):
            assert quotient_deg1.reduce_diagram(omega(p)).is_zero

    def test_reduction_is_linear_and_idempotent(self, quotient_deg1):
        v = DiagramVector([(2, theta(1, 1)), (Fraction(-1, 3), theta(0, 1))])
        reduced = quotient_deg1.reduce(v)
        assert quotient_deg1.reduce(reduced) == reduced
        assert reduced == quotient_deg1.reduce_diagram(theta(1, 1)) * 2 - quotient_deg1.reduce_diagram(
            theta(0, 1)
        ) * Fraction(1, 3)
        assert len(quotient_deg1.coordinates(v)) == quotient_deg1.dimension

    def test_reduce_is_linear_on_random_combinations(self, quotient_deg1):
        rng = random.Random(11)
        diagrams = [quotient_deg1.column_diagrams[k] for k in quotient_deg1.columns]

        def random_vector():
            return DiagramVector(
                (Fraction(rng.randint(-9, 9), rng.randint(1, 5)), rng.choice(diagrams)) for _ in range(4)
            )

        for _ in range(40):
            x, y = random_vector(), random_vector()
            a, b = Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-5, 5), 3)
            combined = quotient_deg1.reduce(x * a + y * b)
            assert combined == quotient_deg1.reduce(x) * a + quotient_deg1.reduce(y) * b

    @pytest.mark.parametrize("p", range(-2, 3))
    @pytest.mark.parametrize("q", range(-2, 3))
    def test_theta_depends_only_on_total_holonomy(self, quotient_deg1, p, q):
        difference = DiagramVector([(1, theta(p, q)), (-1, theta(0, p + q))])
        assert quotient_deg1.is_zero(difference)

    def test_basis_prefers_simple_diagrams(self, quotient_deg1):
        assert all(b.is_chord_diagram for b in quotient_deg1.basis)

    def test_window_error(self, quotient_deg1_k3):
        with pytest.raises(WindowError):
            quotient_deg1_k3.reduce_diagram(theta(0, 4))
        off_nh = ColoredJacobiDiagram.build((0, 1), (1, 0), [(1, 0, 0)])
        with pytest.raises(WindowError):
            quotient_deg1_k3.reduce_diagram(off_nh)

    def test_stabilization(self, quotient_deg1_k3, quotient_deg1):
        check = quotient_deg1_k3.stabilization_check(quotient_deg1)
        assert check.name == "stabilization"
        assert check.passed, check.detail
        with pytest.raises(ArgumentError):
            quotient_deg1.stabilization_check(quotient_deg1_k3)

    def test_stabilization_from_five_to_seven(self, quotient_deg1):
        check = quotient_deg1.stabilization_check(build_quotient(Window(1, 7)))
        assert check.passed, check.detail
        assert check.detail["windows"] == [5, 7]
        assert check.detail["mismatches"] == []

    def test_summary(self, quotient_deg1_k3):
        summary = quotient_deg1_k3.summary()
        assert summary["window"] == {"degree": 1, "bound": 3, "nh_only": True}
        assert summary["conventions"] == {"ihx_sign": "A", "stu_order": "A"}
        assert summary["dimension"] == quotient_deg1_k3.dimension

    def test_other_stu_order_still_kills_omega(self):
        quotient = build_quotient(Window(1, 2), Conventions(stu_order="B"))
        assert quotient.reduce_diagram(omega(1)).is_zero

    @pytest.mark.slow
    def test_degree_two_reduces_connected_sums(self, quotient_deg2):
        from src.knot_algebra.diagrams import connected_sum

        framed = connected_sum(theta(0, 0), theta(0, 1))
        assert quotient_deg2.reduce_diagram(framed).is_zero


class TestTrace:
    def test_denominators_move_out_front(self):
        traced = trace(theta(0, 0), {"e0": RationalFn(t, one - t)})
        assert traced.denominator == one - t
        assert traced.numerator == DiagramVector.from_diagram(theta(0, 1))

    def test_unknown_edge(self):
        with pytest.raises(ArgumentError):
            trace(theta(0, 0), {"e7": RationalFn(t)})

    def test_normalized(self):
        traced = TracedClass(LaurentPoly({0: 2, 1: -2}), DiagramVector.from_diagram(theta(0, 1)))
        normal = traced.normalized()
        assert normal.denominator == one - t
        assert normal.numerator == DiagramVector.from_diagram(theta(0, 1), Fraction(1, 2))

    def test_normalized_refuses_monomial_factor(self):
        traced = TracedClass(t - t * t, DiagramVector.from_diagram(theta(0, 1)))
        with pytest.raises(ArgumentError):
            traced.normalized()

    def test_equivalence_goes_through_the_quotient(self, quotient_deg1):
        a = TracedClass(one - t, DiagramVector.from_diagram(theta(0, 1)))
        b = TracedClass((one - t) * 3, DiagramVector.from_diagram(theta(1, 0), 3))
        c = TracedClass(one + t, DiagramVector.from_diagram(theta(0, 1)))
        assert a.equivalent(b, quotient_deg1)
        assert not a.equivalent(c, quotient_deg1)
