from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import networkx as nx

from src.knot_algebra.diagrams.canonical import automorphism_group_order
from src.knot_algebra.diagrams.colorings import MultigradedDiagram, PolyColoredDiagram
from src.knot_algebra.diagrams.diagram import ColoredJacobiDiagram, Edge, holonomy_normal_form
from src.knot_algebra.diagrams.vector import DiagramVector
from src.knot_algebra.exceptions import ArgumentError, ConsistencyError
from src.knot_algebra.relations.quotient import QuotientSpace, build_quotient
from src.knot_algebra.relations.relations import Conventions, Window, stu_expand
from src.knot_algebra.surgery.forest_scheme import STRICT, Clasper, ForestScheme, SurgeryKnot
from src.knot_algebra.theta.theta import W, PolyModConstants, ThetaDiagram


logger = logging.getLogger("knotforge_logger")


@dataclass(frozen=True)
class SurgeryPresentation:
    source: ColoredJacobiDiagram
    scheme: ForestScheme

    def as_dict(self) -> dict:
        return {
            "size": self.scheme.size,
            "degree": self.scheme.degree,
            "claspers": [
                {"name": c.name, "degree": c.degree, "tag": c.tag, "homology": dict(c.homology)}
                for c in self.scheme.claspers
            ],
        }


def psi(d: ColoredJacobiDiagram, base: str = "K") -> SurgeryPresentation:
    """
    One strict tree clasper per connected component of the non-Wilson graph, of degree half the
    component's vertex count, recording the component's edge colors as its homology datum.
    Claspers are numbered by their smallest vertex.
    """
    if isinstance(d, PolyColoredDiagram):
        raise ArgumentError("psi needs monomial colors; expand by linearity first")
    if not d.is_nh:
        raise ArgumentError(f"psi needs a nullhomotopic Wilson loop, got holonomy {d.wilson_holonomy}")
    g = d.nonwilson_graph()
    components = sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: c[0])
    claspers = []
    for i, component in enumerate(components):
        members = set(component)
        datum = tuple(
            (f"e{j}", e.color) for j, e in enumerate(d.edges) if e.tail in members
        )
        claspers.append(Clasper(f"G{i + 1}", len(component) // 2, STRICT, homology=datum))
    scheme = ForestScheme(SurgeryKnot(base), tuple(claspers))
    if scheme.degree != d.degree:
        raise ConsistencyError(f"scheme degree {scheme.degree} differs from diagram degree {d.degree}")
    return SurgeryPresentation(d, scheme)


def _labeled_key(d: ColoredJacobiDiagram, labels: dict[int, int], flips: Sequence[bool]) -> tuple:
    wilson = sorted((labels[e.tail], labels[e.head], e.color) for e in d.wilson_edges())
    chords = sorted(
        (labels[e.head], labels[e.tail], -e.color) if flip else (labels[e.tail], labels[e.head], e.color)
        for e, flip in zip(d.edges, flips)
    )
    edges = [Edge(t, h, c) for t, h, c in wilson + chords]
    colors = holonomy_normal_form(sorted(labels.values()), edges)
    return tuple((e.tail, e.head) for e in edges), colors


def _edge_labelings(d: ColoredJacobiDiagram, labels: dict[int, int]) -> int:
    """
    Distinct ways to put the labels 1..|E| on the edges of one vertex-labeled version of d.
    """
    ends = [("W", labels[e.tail], labels[e.head]) for e in d.wilson_edges()] + [
        ("I", labels[e.tail], labels[e.head]) for e in d.edges
    ]
    return len(
        {frozenset(zip(ends, perm)) for perm in itertools.permutations(range(1, len(ends) + 1))}
    )


def labeling_orbit_count(d: ColoredJacobiDiagram) -> int:
    """
    The number of distinct labeled, edge-oriented versions of a chord diagram: vertex labelings
    and chord orientations up to Holonomy, times the edge labelings of one such version.
    Orbit-stabilizer predicts 2^n (2n)! (3n)! / |Aut|; Z_of_surgery holds the count to it.
    """
    if not d.is_chord_diagram:
        raise ArgumentError("labeling orbits are counted on chord diagrams; apply stu_expand first")
    vertices = list(d.vertices)
    keys = set()
    for perm in itertools.permutations(range(1, len(vertices) + 1)):
        labels = dict(zip(vertices, perm))
        for flips in itertools.product((False, True), repeat=len(d.edges)):
            keys.add(_labeled_key(d, labels, flips))
    first = dict(zip(vertices, range(1, len(vertices) + 1)))
    return len(keys) * _edge_labelings(d, first)


def surgery_window(degree: int, widest: int) -> Window:
    """
    A window holding exponents up to `widest`, with room for Holonomy moves at degree 1.
    """
    bound = max(widest, 1)
    return Window(degree, bound + 2 if degree == 1 else bound, nh_only=True)


def _check_presentation(presentation: SurgeryPresentation, n: int) -> None:
    components = nx.number_connected_components(presentation.source.nonwilson_graph())
    scheme = presentation.scheme
    if scheme.size != components:
        raise ConsistencyError(f"scheme has {scheme.size} claspers for {components} components of P(Γ)")
    if scheme.degree != n:
        raise ConsistencyError(f"scheme degree {scheme.degree} differs from n = {n}")
    if any(c.tag != STRICT for c in scheme.claspers):
        raise ConsistencyError("a surgery presentation uses strict claspers only")


def Z_of_surgery(
    source: Union[ColoredJacobiDiagram, SurgeryPresentation],
    n: int,
    quotient: Optional[QuotientSpace] = None,
    conventions: Optional[Conventions] = None,
    threads: int = 1,
) -> DiagramVector:
    """
    Z_n of the surgery presentation psi(d), assembled from the labeling count: each chord term
    c contributes (orbits(c) |Aut c| / ((2n)! (3n)!)) [c], and that scalar must be 2^n.

    Parameters:
    -----------
    source: ColoredJacobiDiagram | SurgeryPresentation
        The diagram d, or a presentation already built by psi.
    n: int
        1 or 2.
    quotient: QuotientSpace | None
        Built on surgery_window when omitted.
    """
    if n not in (1, 2):
        raise ArgumentError(f"the surgery formula is implemented for n = 1, 2; got {n}")
    presentation = source if isinstance(source, SurgeryPresentation) else None
    d = presentation.source if presentation is not None else source
    if isinstance(d, PolyColoredDiagram):
        raise ArgumentError("Z of a surgery presentation needs monomial colors")
    if d.degree != n:
        raise ArgumentError(f"diagram degree {d.degree} does not match n = {n}")
    if not d.is_nh:
        raise ArgumentError("Z of a surgery presentation needs a nullhomotopic Wilson loop")
    presentation = presentation or psi(d)
    _check_presentation(presentation, n)

    chords = DiagramVector.from_diagram(d) if d.is_chord_diagram else stu_expand(d, conventions)
    if quotient is None:
        widest = max([c.max_abs_exponent() for c in chords.diagrams()], default=0)
        quotient = build_quotient(surgery_window(n, widest), conventions, threads=threads)

    denominator = math.factorial(2 * n) * math.factorial(3 * n)
    total = DiagramVector.zero()
    for _, chord, coeff in chords.items():
        orbits, aut = labeling_orbit_count(chord), automorphism_group_order(chord)
        scalar = Fraction(orbits * aut, denominator)
        if scalar != 2 ** n:
            raise ConsistencyError(
                f"surgery constant for {chord} is {orbits} labelings x |Aut| {aut} / {denominator} "
                f"= {scalar}, expected {2 ** n}"
            )
        total = total + quotient.reduce(DiagramVector.from_diagram(chord, coeff * scalar))
    return total


def Z_of_unknot(n: int) -> DiagramVector:
    """
    Z_n(O) for n >= 1. The unknot is the base of an empty scheme, so it has no part in positive
    degree.
    """
    if n < 1:
        raise ArgumentError(f"degree must be >= 1, got {n}")
    return DiagramVector.zero()


def whitehead_presentation() -> SurgeryPresentation:
    """
    psi(Θ(0,1)) on the unknot O: the single I-clasper G1 turns O into the Whitehead double
    Wh(K), so the scheme expands to [O; G1] = O^{G1} - O.
    """
    presentation = psi(ThetaDiagram(0, 1).diagram(), base="O")
    expansion = {str(knot): coeff for knot, coeff in presentation.scheme.expansion().items()}
    if expansion != {"O^{G1}": 1, "O": -1}:
        raise ConsistencyError(f"the Whitehead scheme expands to {expansion}")
    return presentation


def whitehead_example(
    quotient: Optional[QuotientSpace] = None,
    conventions: Optional[Conventions] = None,
    threads: int = 1,
) -> DiagramVector:
    """
    Z_1(Wh(K)) for K = {p0} x S^1 in S^2 x S^1, from Z_1(Wh(K)) = Z_1([O; G1]) + Z_1(O).
    """
    presentation = whitehead_presentation()
    value = Z_of_surgery(presentation, 1, quotient, conventions, threads) + Z_of_unknot(1)
    if value.is_zero:
        raise ConsistencyError("Z_1(Wh(K)) reduced to 0")
    image = W(value)
    if image != PolyModConstants.monomial(1, 2):
        raise ConsistencyError(f"W(Z_1(Wh(K))) is {image}, expected 2t mod Q")
    return value


def kappa_star(d: MultigradedDiagram, projection: Sequence[int]) -> ColoredJacobiDiagram:
    """
    Projects Z^r exponent vectors to Z through the linear functional `projection`.
    """
    if len(projection) != d.rank:
        raise ArgumentError(f"projection has length {len(projection)}, colors have rank {d.rank}")

    def dot(v: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(projection, v))

    return d.shape.with_colors(
        [dot(v) for v in d.wilson_exponents], [dot(v) for v in d.edge_exponents]
    )
