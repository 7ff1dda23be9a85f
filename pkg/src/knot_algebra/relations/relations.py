"""
Relation instances on monomially colored diagrams and the rule registry that produces them.

Each rule subclass declares a `_TYPE` and is looked up through `RelationRule.create`. A rule is
called on one diagram and returns every instance sited on it; `generate_relations` runs all rules
over the diagrams of a window and drops instances with a term outside the window.
"""

from __future__ import annotations

import abc
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Optional

from src.app_api import utils
from src.knot_algebra.diagrams.diagram import HEAD, TAIL, ColoredJacobiDiagram, Edge, HalfEdge
from src.knot_algebra.diagrams.enumeration import enumerate_canonical
from src.knot_algebra.diagrams.vector import DiagramVector
from src.knot_algebra.exceptions import ArgumentError, ResourceError


logger = logging.getLogger("knotforge_logger")


RELATION_KINDS = ("AS", "OrientationReversal", "Holonomy", "FI", "STU", "IHX", "Linearity")


@dataclass(frozen=True)
class Window:
    """
    The truncation window: diagrams of one degree with every exponent in [-bound, bound],
    optionally restricted to trivial total Wilson holonomy.
    """

    degree: int
    bound: int
    nh_only: bool = True

    def contains(self, d: ColoredJacobiDiagram) -> bool:
        return (
            d.degree == self.degree
            and d.max_abs_exponent() <= self.bound
            and (d.is_nh or not self.nh_only)
        )

    def as_dict(self) -> dict[str, Any]:
        return {"degree": self.degree, "bound": self.bound, "nh_only": self.nh_only}


@dataclass(frozen=True)
class Conventions:
    """
    Sign and order toggles for the relations whose pictures admit two readings.
    ihx_sign "A" is I + H + X = 0 and "B" is I - H + X = 0; stu_order "A" is S - T + U = 0 and
    "B" swaps the roles of T and U.
    """

    ihx_sign: str = "A"
    stu_order: str = "A"

    def __post_init__(self):
        for name, value in (("ihx_sign", self.ihx_sign), ("stu_order", self.stu_order)):
            if value not in ("A", "B"):
                raise ArgumentError(f"{name} must be 'A' or 'B', got {value!r}")


@dataclass(frozen=True)
class RelationInstance:
    kind: str
    terms: tuple[tuple[Fraction, ColoredJacobiDiagram], ...]
    site: str

    def vector(self) -> DiagramVector:
        return DiagramVector(self.terms)

    def diagrams(self) -> list[ColoredJacobiDiagram]:
        return [d for _, d in self.terms]


def _instance(kind: str, site: str, *terms: tuple[int, ColoredJacobiDiagram]) -> RelationInstance:
    return RelationInstance(kind, tuple((Fraction(c), d) for c, d in terms), site)


def _rotate_to(cyc: tuple[HalfEdge, ...], first: HalfEdge) -> tuple[HalfEdge, ...]:
    k = cyc.index(first)
    return cyc[k:] + cyc[:k]


def holonomy_move(d: ColoredJacobiDiagram, v: int, step: int = 1) -> ColoredJacobiDiagram:
    """
    Multiplies the color of every edge at v by t^step for edges oriented toward v and by
    t^-step for edges leaving v; a self-loop at v is unchanged.
    """

    def moved(e: Edge) -> int:
        return e.color + step * (e.head == v) - step * (e.tail == v)

    return d.with_colors([moved(e) for e in d.wilson_edges()], [moved(e) for e in d.edges])


def _rebuild(
    wilson_cycle: list[int],
    wilson_colors: list[int],
    tails: list[int],
    heads: list[int],
    colors: list[int],
    orientations: dict[int, tuple[HalfEdge, ...]],
    dropped: Optional[int] = None,
) -> ColoredJacobiDiagram:
    """
    Assembles a diagram from edited edge arrays, removing edge `dropped` and renumbering the
    half-edges that remain.
    """
    keep = [j for j in range(len(tails)) if j != dropped]
    position = {old: new for new, old in enumerate(keep)}
    edges = tuple(Edge(tails[j], heads[j], colors[j]) for j in keep)
    remapped = tuple(
        sorted((v, tuple((position[j], end) for j, end in cyc)) for v, cyc in orientations.items())
    )
    return ColoredJacobiDiagram(tuple(wilson_cycle), tuple(wilson_colors), edges, remapped)


def resolve_leg(
    d: ColoredJacobiDiagram, stem: int, first: HalfEdge, second: HalfEdge
) -> ColoredJacobiDiagram:
    """
    Removes the trivalent vertex v at the end of non-Wilson edge `stem` (whose other end is the
    univalent u) and re-attaches v's other two half-edges to the Wilson loop where u was:
    `first` at u, then `second` at a new univalent vertex right after it. The moved ends carry
    the stem color sigma (read from the Wilson side toward v): +sigma on a tail, -sigma on a head.
    """
    e = d.edges[stem]
    if e.tail in d.univalent_vertices:
        u, v, sigma = e.tail, e.head, e.color
    else:
        u, v, sigma = e.head, e.tail, -e.color
    w = max(d.vertices) + 1
    i = d.wilson_cycle.index(u)
    cycle = list(d.wilson_cycle[:i]) + [u, w] + list(d.wilson_cycle[i + 1:])
    wilson_colors = list(d.wilson_colors[:i]) + [0] + list(d.wilson_colors[i:])

    tails = [x.tail for x in d.edges]
    heads = [x.head for x in d.edges]
    colors = [x.color for x in d.edges]
    for (j, end), target in ((first, u), (second, w)):
        if end == TAIL:
            tails[j] = target
            colors[j] += sigma
        else:
            heads[j] = target
            colors[j] -= sigma
    orientations = {x: cyc for x, cyc in d.orientations if x != v}
    return _rebuild(cycle, wilson_colors, tails, heads, colors, orientations, dropped=stem)


def _regraft(
    d: ColoredJacobiDiagram,
    j: int,
    v_pair: tuple[HalfEdge, HalfEdge],
    w_pair: tuple[HalfEdge, HalfEdge],
) -> ColoredJacobiDiagram:
    """
    Re-distributes the four outer half-edges of internal edge j: v -> w (color c) so that v
    holds `v_pair` and w holds `w_pair`. An end crossing from w to v changes color by +c on a
    tail and -c on a head; crossing from v to w is the opposite.
    """
    e = d.edges[j]
    v, w, c = e.tail, e.head, e.color
    tails = [x.tail for x in d.edges]
    heads = [x.head for x in d.edges]
    colors = [x.color for x in d.edges]
    for pair, target, delta in ((v_pair, v, c), (w_pair, w, -c)):
        for jj, end in pair:
            if d.endpoint((jj, end)) == target:
                continue
            if end == TAIL:
                tails[jj] = target
                colors[jj] += delta
            else:
                heads[jj] = target
                colors[jj] -= delta
    orientations = dict(d.orientations)
    orientations[v] = ((j, TAIL),) + tuple(v_pair)
    orientations[w] = ((j, HEAD),) + tuple(w_pair)
    return _rebuild(list(d.wilson_cycle), list(d.wilson_colors), tails, heads, colors, orientations)


class RelationRule:
    """
    Factory for relation rules. A rule is called on a single diagram and returns the relation
    instances sited on it.
    """

    _TYPE: str = "base"

    subclasses: dict[str, type] = {}

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if cls._TYPE in cls.subclasses:
            raise ValueError("_TYPE alias already reserved.")
        cls.subclasses[cls._TYPE] = cls

    def __init__(self, conventions: Optional[Conventions] = None):
        self.conventions = conventions or Conventions()

    @classmethod
    def create(cls, class_type: str, *args, **kwargs) -> RelationRule:
        if class_type not in cls.subclasses:
            raise ArgumentError(
                "Bad or unknown relation kind {}. Does the subclass specify _TYPE ?".format(class_type)
            )
        return cls.subclasses[class_type](*args, **kwargs)

    @abc.abstractmethod
    def __call__(self, d: ColoredJacobiDiagram) -> list[RelationInstance]:
        raise NotImplementedError


class AntisymmetryRule(RelationRule):
    _TYPE = "AS"

    def __call__(self, d):
        return [
            _instance(self._TYPE, f"vertex {v}", (1, d), (1, d.flip_orientation(v)))
            for v in d.trivalent_vertices
        ]


class OrientationReversalRule(RelationRule):
    _TYPE = "OrientationReversal"

    def __call__(self, d):
        return [
            _instance(self._TYPE, f"edge e{j}", (1, d), (-1, d.reverse_edge(j)))
            for j in range(len(d.edges))
        ]


class HolonomyRule(RelationRule):
    _TYPE = "Holonomy"

    def __call__(self, d):
        return [
            _instance(self._TYPE, f"vertex {v}", (1, d), (-1, holonomy_move(d, v)))
            for v in d.vertices
        ]


class FramingIndependenceRule(RelationRule):
    """
    Kills a chord whose endpoints are adjacent on the Wilson loop when the small loop formed by
    the chord and the short arc has trivial holonomy.
    """

    _TYPE = "FI"

    def __call__(self, d):
        found = []
        univalent = d.univalent_vertices
        for j, e in enumerate(d.edges):
            if e.tail not in univalent or e.head not in univalent:
                continue
            for i, arc in enumerate(d.wilson_edges()):
                if {arc.tail, arc.head} != {e.tail, e.head}:
                    continue
                loop = arc.color + e.color if e.tail == arc.head else arc.color - e.color
                if loop == 0:
                    found.append(_instance(self._TYPE, f"chord e{j} over w{i}", (1, d)))
                    break
        return found


class STURule(RelationRule):
    _TYPE = "STU"

    def __call__(self, d):
        found = []
        for j, e in enumerate(d.edges):
            terms = stu_resolution(d, j, self.conventions)
            if terms is not None:
                found.append(_instance(self._TYPE, f"edge e{j}", *terms))
        return found


class IHXRule(RelationRule):
    _TYPE = "IHX"

    def __call__(self, d):
        found = []
        trivalent = set(d.trivalent_vertices)
        signs = (1, 1, 1) if self.conventions.ihx_sign == "A" else (1, -1, 1)
        for j, e in enumerate(d.edges):
            if e.is_self_loop or e.tail not in trivalent or e.head not in trivalent:
                continue
            _, a, b = _rotate_to(d.orientation_map[e.tail], (j, TAIL))
            _, x, y = _rotate_to(d.orientation_map[e.head], (j, HEAD))
            h_term = _regraft(d, j, (b, x), (a, y))
            x_term = _regraft(d, j, (x, a), (b, y))
            found.append(
                _instance(
                    self._TYPE,
                    f"edge e{j}",
                    (signs[0], d),
                    (signs[1], h_term),
                    (signs[2], x_term),
                )
            )
        return found


class LinearityRule(RelationRule):
    """
    Linearity is realized by expanding polynomial colors into monomials, so it contributes no
    instances on monomially colored diagrams.
    """

    _TYPE = "Linearity"

    def __call__(self, d):
        return []


def stu_resolution(
    d: ColoredJacobiDiagram, j: int, conventions: Conventions
) -> Optional[tuple[tuple[int, ColoredJacobiDiagram], ...]]:
    """
    The STU terms at edge j if it joins a univalent and a trivalent vertex, else None. T puts the
    second half-edge of v's cyclic order (counted from the stem) first along the Wilson loop.
    """
    e = d.edges[j]
    univalent = d.univalent_vertices
    if e.tail in univalent and e.head not in univalent:
        v, stem = e.head, (j, HEAD)
    elif e.head in univalent and e.tail not in univalent:
        v, stem = e.tail, (j, TAIL)
    else:
        return None
    _, h2, h3 = _rotate_to(d.orientation_map[v], stem)
    t_term = resolve_leg(d, j, h2, h3)
    u_term = resolve_leg(d, j, h3, h2)
    if conventions.stu_order == "A":
        return (1, d), (-1, t_term), (1, u_term)
    return (1, d), (-1, u_term), (1, t_term)


def stu_expand(d: ColoredJacobiDiagram, conventions: Optional[Conventions] = None) -> DiagramVector:
    """
    Rewrites d as a rational combination of chord diagrams by resolving legs until no trivalent
    vertex is left. No window applies; colors are transported along each resolved leg.
    """
    conventions = conventions or Conventions()
    pending: list[tuple[Fraction, ColoredJacobiDiagram]] = [(Fraction(1), d)]
    chords: list[tuple[Fraction, ColoredJacobiDiagram]] = []
    while pending:
        coeff, current = pending.pop()
        if current.is_chord_diagram:
            chords.append((coeff, current))
            continue
        for j in range(len(current.edges)):
            terms = stu_resolution(current, j, conventions)
            if terms is not None:
                break
        else:
            raise ArgumentError("no leg to resolve: the diagram has no univalent-trivalent edge")
        # S = -(second + third) from S + c2*T2 + c3*T3 = 0
        (_, _), (c2, t2), (c3, t3) = terms
        pending.append((-coeff * c2, t2))
        pending.append((-coeff * c3, t3))
    return DiagramVector(chords)


def _instances_at(
    d: ColoredJacobiDiagram, rules: list[RelationRule], window: Window
) -> list[RelationInstance]:
    found = []
    for rule in rules:
        for inst in rule(d):
            if all(window.contains(x) for x in inst.diagrams()):
                found.append(inst)
    return found


def generate_relations(
    window: Window,
    conventions: Optional[Conventions] = None,
    threads: int = 1,
    kinds: Optional[Iterable[str]] = None,
    diagrams: Optional[list[ColoredJacobiDiagram]] = None,
    resource_cap: Optional[int] = None,
) -> list[RelationInstance]:
    """
    Every relation instance sited on a diagram of the window whose terms all stay inside it.
    Sites are visited in canonical-key order, so the output does not depend on `threads`.
    """
    conventions = conventions or Conventions()
    rules = [RelationRule.create(kind, conventions) for kind in (kinds or RELATION_KINDS)]
    if diagrams is None:
        diagrams = [
            f.diagram
            for f in enumerate_canonical(
                window.degree, window.bound, nh_only=window.nh_only, threads=threads,
                resource_cap=resource_cap,
            )
        ]
    cap = resource_cap if resource_cap is not None else utils.get_resource_cap()
    if len(diagrams) * len(diagrams) > cap:
        raise ResourceError(
            f"window {window.as_dict()} has {len(diagrams)} diagrams; the relation matrix would "
            f"exceed the cap of {cap} entries"
        )
    instances: list[RelationInstance] = []
    for found in utils.parallel_map(lambda d: _instances_at(d, rules, window), diagrams, threads):
        instances.extend(found)
    logger.info(f"generated {len(instances)} relation instances for window {window.as_dict()}")
    return instances
