"""
Colored Jacobi diagrams on an oriented Wilson loop.

A diagram is stored as half-edge incidence data: the univalent vertices sit on the Wilson cycle
(Wilson edge i runs from wilson_cycle[i] to wilson_cycle[i+1]), and every other edge is an
`Edge(tail, head, color)`. A half-edge is the pair (edge index, end) with end 0 for the tail and
1 for the head, which keeps self-loops and vertex orientations unambiguous. Colors on this layer
are monomials t^k stored as the integer exponent k.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

import networkx as nx

from src.knot_algebra.exceptions import AmbiguityError, ArgumentError, StructuralError


logger = logging.getLogger("knotforge_logger")


TAIL, HEAD = 0, 1

HalfEdge = tuple[int, int]


class Edge(NamedTuple):
    tail: int
    head: int
    color: int

    @property
    def is_self_loop(self) -> bool:
        return self.tail == self.head

    def reversed(self) -> Edge:
        """
        The same edge traversed the other way; the color is inverted (t^c -> t^-c).
        """
        return Edge(self.head, self.tail, -self.color)


def half_edge_id(half_edge: HalfEdge) -> str:
    j, end = half_edge
    return f"e{j}:{'tail' if end == TAIL else 'head'}"


def parse_half_edge_id(text: str) -> HalfEdge:
    edge, _, end = text.partition(":")
    if not edge.startswith("e") or not edge[1:].isdigit() or end not in ("tail", "head"):
        raise ValueError(f"malformed half-edge id {text!r}")
    return int(edge[1:]), TAIL if end == "tail" else HEAD


@dataclass(frozen=True)
class DiagramLabels:
    """
    The optional labeled-diagram structure: a bijection from vertices onto 1..|V| and one from
    edge ids ("w0", "e3", ...) onto 1..|E|.
    """

    vertex_labels: tuple[tuple[int, int], ...]
    edge_labels: tuple[tuple[str, int], ...]

    def validate(self, diagram: ColoredJacobiDiagram) -> None:
        vertices = sorted(v for v, _ in self.vertex_labels)
        if vertices != sorted(diagram.vertices):
            raise StructuralError("vertex labels must cover exactly the diagram's vertices")
        if sorted(lbl for _, lbl in self.vertex_labels) != list(range(1, len(vertices) + 1)):
            raise StructuralError("vertex labels must be a bijection onto 1..|V|")
        edge_ids = sorted(e for e, _ in self.edge_labels)
        if edge_ids != sorted(diagram.edge_ids()):
            raise StructuralError("edge labels must cover exactly the diagram's edges")
        if sorted(lbl for _, lbl in self.edge_labels) != list(range(1, len(edge_ids) + 1)):
            raise StructuralError("edge labels must be a bijection onto 1..|E|")

    def vertex_label(self, v: int) -> int:
        return dict(self.vertex_labels)[v]

    def edge_label(self, edge_id: str) -> int:
        return dict(self.edge_labels)[edge_id]


@dataclass(frozen=True)
class ColoredJacobiDiagram:
    wilson_cycle: tuple[int, ...]
    wilson_colors: tuple[int, ...]
    edges: tuple[Edge, ...]
    orientations: tuple[tuple[int, tuple[HalfEdge, HalfEdge, HalfEdge]], ...]
    labels: Optional[DiagramLabels] = field(default=None, compare=True)

    @classmethod
    def build(
        cls,
        wilson_cycle: Sequence[int],
        wilson_colors: Sequence[int],
        edges: Iterable[Sequence[int]],
        orientations: Optional[Mapping[int, Sequence[HalfEdge]]] = None,
        labels: Optional[DiagramLabels] = None,
    ) -> ColoredJacobiDiagram:
        """
        Builds and validates a diagram. Trivalent vertices missing from `orientations` get the
        reference orientation (their half-edges in sorted order).
        """
        edge_tuple = tuple(Edge(int(t), int(h), int(c)) for t, h, c in edges)
        draft = cls(
            tuple(int(v) for v in wilson_cycle),
            tuple(int(c) for c in wilson_colors),
            edge_tuple,
            (),
            labels,
        )
        given = {int(v): tuple(tuple(h) for h in hs) for v, hs in (orientations or {}).items()}
        incidence = draft.incidence
        resolved = []
        for v in draft.trivalent_vertices:
            cyc = given.pop(v, None)
            if cyc is None:
                cyc = tuple(sorted(incidence.get(v, ())))
            resolved.append((v, cyc))
        if given:
            raise StructuralError(
                f"orientations given for non-trivalent vertices {sorted(given)}"
            )
        diagram = replace(draft, orientations=tuple(resolved))
        diagram.validate()
        return diagram

    @cached_property
    def incidence(self) -> dict[int, list[HalfEdge]]:
        """
        Non-Wilson half-edges at each vertex, in sorted order.
        """
        result: dict[int, list[HalfEdge]] = {v: [] for v in self.wilson_cycle}
        for j, e in enumerate(self.edges):
            result.setdefault(e.tail, []).append((j, TAIL))
            result.setdefault(e.head, []).append((j, HEAD))
        for hs in result.values():
            hs.sort()
        return result

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.incidence))

    @cached_property
    def univalent_vertices(self) -> frozenset[int]:
        return frozenset(self.wilson_cycle)

    @cached_property
    def trivalent_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if v not in self.univalent_vertices)

    @cached_property
    def orientation_map(self) -> dict[int, tuple[HalfEdge, HalfEdge, HalfEdge]]:
        return dict(self.orientations)

    @property
    def degree(self) -> int:
        return len(self.vertices) // 2

    @property
    def is_chord_diagram(self) -> bool:
        return not self.trivalent_vertices

    @property
    def wilson_holonomy(self) -> int:
        return sum(self.wilson_colors)

    @property
    def is_nh(self) -> bool:
        """
        True when the product of the Wilson edge colors is 1.
        """
        return self.wilson_holonomy == 0

    def wilson_edge(self, i: int) -> Edge:
        m = len(self.wilson_cycle)
        return Edge(self.wilson_cycle[i], self.wilson_cycle[(i + 1) % m], self.wilson_colors[i])

    def wilson_edges(self) -> list[Edge]:
        return [self.wilson_edge(i) for i in range(len(self.wilson_cycle))]

    def edge_ids(self) -> list[str]:
        return [f"w{i}" for i in range(len(self.wilson_cycle))] + [
            f"e{j}" for j in range(len(self.edges))
        ]

    def edge_by_id(self, edge_id: str) -> Edge:
        kind, index = edge_id[0], int(edge_id[1:])
        return self.wilson_edge(index) if kind == "w" else self.edges[index]

    def edge_kind(self, j: int) -> str:
        return "rho" if self.edges[j].is_self_loop else "I"

    def all_edges(self) -> list[Edge]:
        """
        Wilson edges followed by non-Wilson edges, matching `edge_ids()`.
        """
        return self.wilson_edges() + list(self.edges)

    def endpoint(self, half_edge: HalfEdge) -> int:
        j, end = half_edge
        return self.edges[j].tail if end == TAIL else self.edges[j].head

    def max_abs_exponent(self) -> int:
        return max((abs(c) for c in self.wilson_colors + tuple(e.color for e in self.edges)), default=0)

    def validate(self) -> None:
        """
        Checks valence, the Wilson cycle, vertex orientations, parity of |V| and connectivity.
        """
        m = len(self.wilson_cycle)
        if m == 0:
            raise StructuralError("a diagram needs at least one univalent vertex on the Wilson loop")
        if len(set(self.wilson_cycle)) != m:
            raise StructuralError("the Wilson cycle visits a vertex twice")
        if len(self.wilson_colors) != m:
            raise StructuralError(
                f"{m} Wilson vertices but {len(self.wilson_colors)} Wilson edge colors"
            )
        for v in self.wilson_cycle:
            if len(self.incidence[v]) != 1:
                raise StructuralError(
                    f"univalent vertex {v} has {len(self.incidence[v])} non-Wilson half-edges"
                )
        for v in self.trivalent_vertices:
            if len(self.incidence[v]) != 3:
                raise StructuralError(f"vertex {v} has valence {len(self.incidence[v])}, not 3")
        if {v for v, _ in self.orientations} != set(self.trivalent_vertices):
            raise StructuralError("vertex orientations must be given for exactly the trivalent vertices")
        for v, cyc in self.orientations:
            if len(cyc) != 3 or sorted(cyc) != self.incidence[v]:
                raise StructuralError(
                    f"orientation at vertex {v} is not a cyclic order of its half-edges"
                )
        if len(self.vertices) % 2:
            raise StructuralError(f"odd number of vertices ({len(self.vertices)})")
        if not nx.is_connected(self.graph().to_undirected(as_view=True)):
            raise StructuralError("the diagram is not connected")
        if self.labels is not None:
            self.labels.validate(self)

    def graph(self) -> nx.MultiDiGraph:
        """
        All edges as a networkx multigraph, keyed by edge id.
        """
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for eid, e in zip(self.edge_ids(), self.all_edges()):
            g.add_edge(e.tail, e.head, key=eid, color=e.color)
        return g

    def nonwilson_graph(self) -> nx.MultiGraph:
        """
        The graph P(Gamma): every vertex, non-Wilson edges only.
        """
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for j, e in enumerate(self.edges):
            g.add_edge(e.tail, e.head, key=f"e{j}")
        return g

    def flip_orientation(self, v: int) -> ColoredJacobiDiagram:
        a, b, c = self.orientation_map[v]
        orientations = tuple((u, (a, c, b) if u == v else cyc) for u, cyc in self.orientations)
        return replace(self, orientations=orientations)

    def reverse_edge(self, j: int) -> ColoredJacobiDiagram:
        """
        Reverses non-Wilson edge j and inverts its color; half-edge names follow the ends.
        """
        edges = tuple(e.reversed() if i == j else e for i, e in enumerate(self.edges))

        def swap(h: HalfEdge) -> HalfEdge:
            return (h[0], 1 - h[1]) if h[0] == j else h

        orientations = tuple((v, tuple(swap(h) for h in cyc)) for v, cyc in self.orientations)
        return replace(self, edges=edges, orientations=orientations)

    def with_colors(
        self, wilson_colors: Sequence[int], edge_colors: Sequence[int]
    ) -> ColoredJacobiDiagram:
        return replace(
            self,
            wilson_colors=tuple(wilson_colors),
            edges=tuple(Edge(e.tail, e.head, c) for e, c in zip(self.edges, edge_colors)),
        )

    def relabeled(
        self,
        vertex_map: Mapping[int, int],
        edge_order: Optional[Sequence[int]] = None,
        rotation: int = 0,
    ) -> ColoredJacobiDiagram:
        """
        An isomorphic copy: vertices renamed by `vertex_map`, non-Wilson edges listed in
        `edge_order` (new position i holds old edge edge_order[i]) and the Wilson cycle started
        `rotation` places later.
        """
        order = list(edge_order) if edge_order is not None else list(range(len(self.edges)))
        position = {old: new for new, old in enumerate(order)}
        m = len(self.wilson_cycle)
        cycle = tuple(vertex_map[self.wilson_cycle[(rotation + i) % m]] for i in range(m))
        colors = tuple(self.wilson_colors[(rotation + i) % m] for i in range(m))
        edges = tuple(
            Edge(vertex_map[self.edges[old].tail], vertex_map[self.edges[old].head], self.edges[old].color)
            for old in order
        )
        orientations = tuple(
            sorted(
                (vertex_map[v], tuple((position[j], end) for j, end in cyc))
                for v, cyc in self.orientations
            )
        )
        return ColoredJacobiDiagram(cycle, colors, edges, orientations, None)

    def as_json(self) -> dict:
        """
        The exchange format: Wilson edges first, then non-Wilson edges in storage order.
        """
        edges = [
            {"from": e.tail, "to": e.head, "kind": "W", "color": {str(e.color): "1/1"}}
            for e in self.wilson_edges()
        ]
        edges += [
            {"from": e.tail, "to": e.head, "kind": self.edge_kind(j), "color": {str(e.color): "1/1"}}
            for j, e in enumerate(self.edges)
        ]
        return {
            "degree": self.degree,
            "wilson_cycle": list(self.wilson_cycle),
            "edges": edges,
            "vertex_orientations": {
                str(v): [half_edge_id(h) for h in cyc] for v, cyc in self.orientations
            },
        }

    def __str__(self) -> str:
        wilson = " ".join(f"{e.tail}-[{e.color}]->{e.head}" for e in self.wilson_edges())
        chords = " ".join(f"{e.tail}-({e.color})->{e.head}" for e in self.edges)
        return f"<deg {self.degree} | W: {wilson} | {chords}>"


def holonomy_normal_form(vertices: Iterable[int], edges: Sequence[Edge]) -> tuple[int, ...]:
    """
    Gauge-fixes a monomial coloring: along a breadth-first spanning forest (deterministic in the
    vertex and edge order) every tree edge is moved to color 0 by Holonomy moves. Two colorings
    of the same labeled graph are Holonomy-equivalent iff their normal forms are equal.
    """
    adjacency: dict[int, list[int]] = {v: [] for v in vertices}
    for j, e in enumerate(edges):
        adjacency[e.tail].append(j)
        if not e.is_self_loop:
            adjacency[e.head].append(j)
    gauge: dict[int, int] = {}
    for root in sorted(adjacency):
        if root in gauge:
            continue
        gauge[root] = 0
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for j in adjacency[a]:
                e = edges[j]
                if e.tail == a and e.head not in gauge:
                    gauge[e.head] = gauge[a] - e.color
                    queue.append(e.head)
                elif e.head == a and e.tail not in gauge:
                    gauge[e.tail] = gauge[a] + e.color
                    queue.append(e.tail)
    return tuple(e.color + gauge[e.head] - gauge[e.tail] for e in edges)


def is_nullhomotopic(d: ColoredJacobiDiagram) -> bool:
    """
    True when every cycle of the diagram (Wilson edges included) has trivial total color.
    """
    return not any(holonomy_normal_form(d.vertices, d.all_edges()))


def connected_sum(
    g1: ColoredJacobiDiagram,
    g2: ColoredJacobiDiagram,
    arc: Optional[tuple[int, int]] = None,
) -> ColoredJacobiDiagram:
    """
    Splices the Wilson loops of g1 and g2 at Wilson edge arc[0] of g1 and arc[1] of g2.

    Cutting a -> b (color c1) in g1 and x -> y (color c2) in g2, the new loop runs b .. a in g1,
    then a -> y with color c1, y .. x in g2, then x -> b with color c2. Without an explicit arc
    the result is only well defined when g1 is nullhomotopic.
    """
    if arc is None:
        if not is_nullhomotopic(g1):
            raise AmbiguityError(
                "the connected sum depends on the splicing arc unless the first summand is "
                "nullhomotopic; pass an explicit arc"
            )
        arc = (0, 0)
    i1, i2 = arc
    m1, m2 = len(g1.wilson_cycle), len(g2.wilson_cycle)
    if not (0 <= i1 < m1 and 0 <= i2 < m2):
        raise ArgumentError(f"arc {arc} is not a pair of Wilson edge indices")

    offset = max(g1.vertices) + 1 - min(g2.vertices)
    shift = {v: v + offset for v in g2.vertices}

    cycle1 = [g1.wilson_cycle[(i1 + 1 + k) % m1] for k in range(m1)]
    colors1 = [g1.wilson_colors[(i1 + 1 + k) % m1] for k in range(m1 - 1)]
    cycle2 = [shift[g2.wilson_cycle[(i2 + 1 + k) % m2]] for k in range(m2)]
    colors2 = [g2.wilson_colors[(i2 + 1 + k) % m2] for k in range(m2 - 1)]

    cycle = cycle1 + cycle2
    colors = colors1 + [g1.wilson_colors[i1]] + colors2 + [g2.wilson_colors[i2]]

    n1 = len(g1.edges)
    edges = list(g1.edges) + [Edge(shift[e.tail], shift[e.head], e.color) for e in g2.edges]
    orientations = dict(g1.orientations)
    for v, cyc in g2.orientations:
        orientations[shift[v]] = tuple((j + n1, end) for j, end in cyc)

    logger.debug(f"connected sum at arcs {arc}: degrees {g1.degree} + {g2.degree}")
    return ColoredJacobiDiagram.build(cycle, colors, edges, orientations)
