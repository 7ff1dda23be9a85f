"""
Diagram construction, canonical forms, automorphisms, enumeration and diagram vectors.
"""

from fractions import Fraction
from math import factorial
import random

import pytest

from src.knot_algebra.coefficients.laurent import LaurentPoly
from src.knot_algebra.diagrams import (
    ColoredJacobiDiagram,
    DiagramLabels,
    DiagramVector,
    Edge,
    PolyColoredDiagram,
    automorphism_group_order,
    canonical_hash,
    canonicalize,
    connected_sum,
    enumerate_canonical,
    enumerate_diagrams,
    enumerate_shapes,
    holonomy_normal_form,
    is_nullhomotopic,
)
from src.knot_algebra.exceptions import AmbiguityError, ArgumentError, ResourceError, StructuralError
from src.knot_algebra.theta import OmegaDiagram, ThetaDiagram


def theta(p, q):
    return ThetaDiagram(p, q).diagram()


def omega(p):
    return OmegaDiagram(p).diagram()


def shuffled_copy(d, rng):
    """An isomorphic copy with renamed vertices, reordered edges, a rotated loop and random edge directions."""
    vertex_map = dict(zip(d.vertices, rng.sample(range(20, 60), len(d.vertices))))
    edge_order = rng.sample(range(len(d.edges)), len(d.edges))
    copy = d.relabeled(vertex_map, edge_order, rng.randrange(len(d.wilson_cycle)))
    for j in range(len(copy.edges)):
        if rng.random() < 0.5:
            copy = copy.reverse_edge(j)
    return copy


@pytest.fixture(scope="module")
def small_diagrams():
    """Every degree-1 class on window 2 and every nullhomotopic degree-2 class on window 1."""
    return enumerate_diagrams(1, 2) + enumerate_diagrams(2, 1, nh_only=True)


class TestStructure:
    def test_theta_shape(self):
        d = theta(1, -1)
        assert d.degree == 1
        assert d.is_chord_diagram
        assert d.is_nh
        assert d.edge_ids() == ["w0", "w1", "e0"]
        assert d.edge_by_id("w0") == Edge(0, 1, 1)
        assert d.edge_kind(0) == "I"

    def test_omega_shape(self):
        d = omega(2)
        assert d.trivalent_vertices == (1,)
        assert d.univalent_vertices == frozenset({0})
        assert not d.is_chord_diagram
        assert d.edge_kind(1) == "rho"

    @pytest.mark.parametrize(
        "cycle, edges",
        [
            ((0, 1), [(0, 1, 0), (0, 1, 0)]),  # univalent vertex with two legs
            ((0, 1), [(0, 2, 0), (1, 2, 0), (2, 2, 0)]),  # 4-valent internal vertex
            ((0, 1), [(0, 1, 0), (2, 3, 0), (2, 3, 0), (2, 3, 0)]),  # disconnected
        ],
    )
    def test_build_rejects_malformed(self, cycle, edges):
        with pytest.raises(StructuralError):
            ColoredJacobiDiagram.build(cycle, [0] * len(cycle), edges)

    def test_orientation_on_univalent_vertex_is_rejected(self):
        with pytest.raises(StructuralError):
            ColoredJacobiDiagram.build((0, 1), (0, 0), [(1, 0, 0)], {0: ((0, 0), (0, 1), (0, 1))})

    def test_labels_must_be_bijections(self):
        good = DiagramLabels(((0, 1), (1, 2)), (("w0", 1), ("w1", 2), ("e0", 3)))
        ColoredJacobiDiagram.build((0, 1), (0, 0), [(1, 0, 0)], labels=good)
        bad = DiagramLabels(((0, 1), (1, 1)), (("w0", 1), ("w1", 2), ("e0", 3)))
        with pytest.raises(StructuralError):
            ColoredJacobiDiagram.build((0, 1), (0, 0), [(1, 0, 0)], labels=bad)

    def test_reverse_edge_inverts_color(self):
        d = omega(0).reverse_edge(0)
        assert d.edges[0] == Edge(1, 0, 0)
        assert d.orientation_map[1][0] == (0, 0)
        assert theta(0, 3).reverse_edge(0).edges[0] == Edge(0, 1, -3)


class TestHolonomy:
    def test_normal_form_sees_only_cycle_holonomy(self):
        a, b = theta(1, 0), theta(0, 1)
        assert holonomy_normal_form(a.vertices, a.all_edges()) == (0, 0, 1)
        assert holonomy_normal_form(b.vertices, b.all_edges()) == (0, 0, 1)

    def test_nullhomotopic(self):
        assert is_nullhomotopic(theta(2, -2))
        assert not is_nullhomotopic(theta(0, 1))

    def test_connected_sum(self):
        s = connected_sum(theta(0, 0), theta(0, 1))
        assert s.degree == 2
        assert len(s.wilson_cycle) == 4
        assert s.is_chord_diagram
        assert sorted(e.color for e in s.edges) == [0, 1]

    def test_connected_sum_adds_degrees(self):
        rng = random.Random(5)
        pool = enumerate_diagrams(1, 2) + enumerate_diagrams(2, 0)
        for _ in range(50):
            g1, g2 = rng.choice(pool), rng.choice(pool)
            arc = (rng.randrange(len(g1.wilson_cycle)), rng.randrange(len(g2.wilson_cycle)))
            s = connected_sum(g1, g2, arc=arc)
            assert s.degree == g1.degree + g2.degree
            assert len(s.wilson_cycle) == len(g1.wilson_cycle) + len(g2.wilson_cycle)
            assert len(s.edges) == len(g1.edges) + len(g2.edges)
            assert s.wilson_holonomy == g1.wilson_holonomy + g2.wilson_holonomy

    @pytest.mark.slow
    def test_connected_sum_with_nullhomotopic_summand_ignores_the_arc(self, quotient_deg2):
        for g1 in (theta(0, 0), theta(1, -1)):
            for g2 in enumerate_diagrams(1, 1, nh_only=True):
                reduced = [
                    quotient_deg2.reduce_diagram(connected_sum(g1, g2, arc=(i1, i2)))
                    for i1 in range(len(g1.wilson_cycle))
                    for i2 in range(len(g2.wilson_cycle))
                ]
                assert all(r == reduced[0] for r in reduced), str(g2)

    def test_connected_sum_needs_arc_when_ambiguous(self):
        with pytest.raises(AmbiguityError):
            connected_sum(theta(0, 1), theta(0, 0))
        assert connected_sum(theta(0, 1), theta(0, 0), arc=(1, 0)).degree == 2
        with pytest.raises(ArgumentError):
            connected_sum(theta(0, 1), theta(0, 0), arc=(5, 0))


class TestCanonical:
    def test_orientation_reversal_is_folded_in(self):
        assert canonicalize(theta(0, 1)).key == canonicalize(theta(0, -1)).key
        assert canonicalize(theta(1, 0)).key != canonicalize(theta(0, 1)).key

    def test_idempotent(self):
        for d in (theta(2, -1), omega(1)):
            form = canonicalize(d)
            again = canonicalize(form.diagram)
            assert again.key == form.key
            assert again.diagram == form.diagram
            assert again.sign == 1

    def test_relabeling_invariance(self):
        d = omega(-2)
        copy = d.relabeled({0: 7, 1: 3})
        assert canonical_hash(copy) == canonical_hash(d)

    def test_as_sign(self):
        form = canonicalize(omega(1))
        assert form.sign in (1, -1)
        assert canonicalize(omega(1).flip_orientation(1)).sign == -form.sign
        assert canonicalize(omega(-1)).key == form.key
        assert canonicalize(omega(-1)).sign == -form.sign

    def test_random_relabelings_keep_key_and_sign(self, small_diagrams):
        rng = random.Random(2024)
        for d in rng.sample(small_diagrams, 120):
            form = canonicalize(d)
            copy = shuffled_copy(d, rng)
            moved = canonicalize(copy)
            assert moved.key == form.key, str(copy)
            assert moved.sign == form.sign, str(copy)
            for v in copy.trivalent_vertices:
                assert canonicalize(copy.flip_orientation(v)).sign == -form.sign

    def test_idempotent_on_random_copies(self, small_diagrams):
        rng = random.Random(99)
        for d in rng.sample(small_diagrams, 120):
            form = canonicalize(shuffled_copy(d, rng))
            again = canonicalize(form.diagram)
            assert again.key == form.key
            assert again.diagram == form.diagram
            assert again.sign == abs(form.sign)

    def test_trivially_colored_loop_vanishes(self):
        assert canonicalize(omega(0)).sign == 0

    def test_automorphisms(self):
        assert automorphism_group_order(theta(0, 0)) == 2
        assert automorphism_group_order(theta(0, 1)) == 1
        crossed = ColoredJacobiDiagram.build((0, 1, 2, 3), (0, 0, 0, 0), [(0, 2, 0), (1, 3, 0)])
        assert automorphism_group_order(crossed) == 4

    def test_automorphism_orders_divide_the_labeling_group(self):
        for d in enumerate_diagrams(1, 1) + enumerate_diagrams(2, 0):
            aut = automorphism_group_order(d)
            group = 2 ** len(d.edges) * factorial(len(d.wilson_cycle)) * factorial(len(d.trivalent_vertices))
            assert aut >= 1
            assert group % aut == 0, str(d)

    def test_ids_read_as_codes(self):
        assert canonical_hash(theta(0, 1)) == "2|0,0|0-1:-1"
        assert canonical_hash(theta(1, 0)) == canonicalize(theta(1, 0)).hash


class TestEnumeration:
    def test_shapes(self):
        assert len(enumerate_shapes(1)) == 2
        assert sum(s.is_chord_diagram for s in enumerate_shapes(2)) == 2

    def test_degree_two_shape_count(self):
        shapes = enumerate_shapes(2)
        assert len(shapes) == 10
        by_loop = sorted(len(s.wilson_cycle) for s in shapes)
        assert by_loop == [1, 1, 1, 2, 2, 2, 3, 3, 4, 4]
        assert len(enumerate_canonical(2, 0)) == 10

    @pytest.mark.parametrize("degree, bound", [(1, 2), (2, 1)])
    def test_ids_are_unique(self, degree, bound):
        forms = enumerate_canonical(degree, bound, nh_only=True)
        assert len({f.hash for f in forms}) == len(forms)
        assert len({f.key for f in forms}) == len(forms)

    def test_degree_one_window_zero(self):
        forms = enumerate_canonical(1, 0)
        assert len(forms) == 2
        assert sorted(f.sign for f in forms) == [0, 1]

    def test_degree_one_chords_window_one(self):
        assert len(enumerate_canonical(1, 1, chord_only=True)) == 15
        assert len(enumerate_canonical(1, 1, chord_only=True, nh_only=True)) == 5

    def test_threads_do_not_change_the_result(self):
        one = [f.key for f in enumerate_canonical(1, 2, threads=1)]
        many = [f.key for f in enumerate_canonical(1, 2, threads=4)]
        assert one == many

    def test_limits(self):
        with pytest.raises(ArgumentError):
            enumerate_canonical(0, 1)
        with pytest.raises(ResourceError):
            enumerate_canonical(4, 0)
        with pytest.raises(ResourceError):
            enumerate_canonical(1, 3, resource_cap=100)


class TestVectors:
    def test_terms_are_canonical(self):
        v = DiagramVector([(1, theta(0, 1)), (2, theta(0, -1))])
        assert len(v) == 1
        assert v.coefficient(theta(0, 1)) == 3

    def test_as_sign_absorbed(self):
        v = DiagramVector([(1, omega(1)), (1, omega(-1))])
        assert v.is_zero
        assert DiagramVector.from_diagram(omega(0)).is_zero

    def test_arithmetic(self):
        a = DiagramVector.from_diagram(theta(0, 1))
        b = DiagramVector.from_diagram(theta(1, 0), Fraction(1, 2))
        assert (a + b) - b == a
        assert (a * 2).coefficient(theta(0, 1)) == 2
        assert (-a + a).is_zero

    def test_format_uses_names(self):
        v = DiagramVector.from_diagram(theta(0, 1), 2)
        assert v.format(lambda d: "X") == "2·X"
        assert DiagramVector.zero().format() == "0"


def test_linearity_expansion():
    shape = theta(0, 0)
    colored = PolyColoredDiagram(
        shape,
        (LaurentPoly.one(), LaurentPoly.one()),
        (LaurentPoly({1: Fraction(1, 2), 2: -3}),),
    )
    assert not colored.is_monomial
    v = colored.expand_linearity()
    assert v.coefficient(theta(0, 1)) == Fraction(1, 2)
    assert v.coefficient(theta(0, 2)) == -3
    assert PolyColoredDiagram.from_monomial(theta(1, 2)).to_monomial() == theta(1, 2)
