"""
Canonical labeling and automorphism counting for colored Jacobi diagrams.

Candidate labelings are a rotation of the Wilson cycle (its vertices become 0..m-1) combined with
a permutation of the trivalent vertices (they become m..|V|-1). Under a candidate every
non-Wilson edge is written in a canonical direction: tail label <= head label, and a self-loop
with its color exponent >= 0; a reversed edge has its color inverted, so Orientation reversal is
folded into the canonical form. The canonical key is the lexicographically smallest
(m, Wilson colors, sorted edge triples) over all candidates. Vertex orientations do not enter
the key; they are compared against the reference orientation (sorted half-edges) and contribute
an AS sign.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from src.knot_algebra.diagrams.diagram import (
    HEAD,
    TAIL,
    ColoredJacobiDiagram,
    Edge,
    HalfEdge,
    holonomy_normal_form,
)


CanonicalKey = tuple


@dataclass(frozen=True)
class CanonicalForm:
    """
    The canonical representative of an isomorphism class together with the AS sign relating
    the input to it (input = sign * diagram). A sign of 0 means AS forces the class to vanish.
    """

    diagram: ColoredJacobiDiagram
    sign: int
    key: CanonicalKey

    @property
    def hash(self) -> str:
        return key_hash(self.key)


def key_hash(key: CanonicalKey) -> str:
    """
    The diagram id used in reports: the canonical key written out as a code. "2|0,0|0-1:-1" is
    two Wilson vertices with trivially colored arcs and one edge 0 -> 1 colored t^-1. Equal ids
    mean equal keys.
    """
    m, colors, edges = key
    wilson = ",".join(str(c) for c in colors)
    rest = ",".join(f"{e.tail}-{e.head}:{e.color}" for e in edges)
    return f"{m}|{wilson}|{rest}"


def _even(order: tuple[HalfEdge, ...]) -> bool:
    ref = sorted(order)
    perm = tuple(ref.index(h) for h in order)
    return perm in ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def _labelings(d: ColoredJacobiDiagram, rotations: list[int]) -> Iterator[tuple[int, dict[int, int]]]:
    m = len(d.wilson_cycle)
    trivalent = d.trivalent_vertices
    for r in rotations:
        base = {d.wilson_cycle[(r + i) % m]: i for i in range(m)}
        for perm in itertools.permutations(range(m, m + len(trivalent))):
            mapping = dict(base)
            mapping.update(zip(trivalent, perm))
            yield r, mapping


def _rotated_colors(d: ColoredJacobiDiagram, r: int) -> tuple[int, ...]:
    m = len(d.wilson_cycle)
    return tuple(d.wilson_colors[(r + i) % m] for i in range(m))


def _edge_images(d: ColoredJacobiDiagram, mapping: dict[int, int]) -> Iterator[list[tuple[Edge, int, bool]]]:
    """
    Yields, for one vertex relabeling, every way of writing the edges in canonical direction:
    a list of (relabeled edge, old index, flipped). Only trivially colored self-loops branch.
    """
    fixed: list[tuple[Edge, int, bool]] = []
    ambiguous: list[tuple[Edge, int]] = []
    for j, e in enumerate(d.edges):
        a, b = mapping[e.tail], mapping[e.head]
        if a > b or (a == b and e.color < 0):
            fixed.append((Edge(b, a, -e.color), j, True))
        elif a == b and e.color == 0:
            ambiguous.append((Edge(a, a, 0), j))
        else:
            fixed.append((Edge(a, b, e.color), j, False))
    for flips in itertools.product((False, True), repeat=len(ambiguous)):
        yield fixed + [(e, j, f) for (e, j), f in zip(ambiguous, flips)]


def _sign(d: ColoredJacobiDiagram, mapping: dict[int, int], images: list[tuple[Edge, int, bool]]) -> int:
    position = {j: pos for pos, (_, j, _) in enumerate(images)}
    flipped = {j: f for _, j, f in images}
    sign = 1
    for v, cyc in d.orientations:
        moved = tuple((position[j], (1 - end) if flipped[j] else end) for j, end in cyc)
        if not _even(moved):
            sign = -sign
    return sign


@lru_cache(maxsize=500_000)
def canonicalize(d: ColoredJacobiDiagram) -> CanonicalForm:
    """
    Returns the canonical form of d. Idempotent: canonicalize(canonicalize(d).diagram) has the
    same diagram and key, with sign +1 (or 0 for a vanishing class).
    """
    m = len(d.wilson_cycle)
    best_colors = min(_rotated_colors(d, r) for r in range(m))
    rotations = [r for r in range(m) if _rotated_colors(d, r) == best_colors]

    best_key = None
    signs: set[int] = set()
    for _, mapping in _labelings(d, rotations):
        for images in _edge_images(d, mapping):
            images.sort(key=lambda item: (item[0], item[1]))
            key = (m, best_colors, tuple(e for e, _, _ in images))
            if best_key is not None and key > best_key:
                continue
            sign = _sign(d, mapping, images)
            if best_key is None or key < best_key:
                best_key, signs = key, {sign}
            else:
                signs.add(sign)

    _, colors, edges = best_key
    incidence: dict[int, list[HalfEdge]] = {}
    for j, e in enumerate(edges):
        incidence.setdefault(e.tail, []).append((j, TAIL))
        incidence.setdefault(e.head, []).append((j, HEAD))
    orientations = tuple(
        (v, tuple(sorted(incidence[v]))) for v in sorted(incidence) if v >= m
    )
    diagram = ColoredJacobiDiagram(tuple(range(m)), colors, edges, orientations)
    return CanonicalForm(diagram, signs.pop() if len(signs) == 1 else 0, best_key)


def canonical_hash(d: ColoredJacobiDiagram) -> str:
    return canonicalize(d).hash


def automorphism_group_order(d: ColoredJacobiDiagram) -> int:
    """
    Counts the automorphisms of d: vertex permutations rotating the Wilson cycle, together with
    a matching of the non-Wilson edges (reversal allowed, inverting the color) and a choice of
    direction for each self-loop, such that the transported coloring is Holonomy-equivalent to
    the original one. Vertex orientations are matched up to AS parity, i.e. not constrained.
    """
    m = len(d.wilson_cycle)
    labelings = list(_labelings(d, list(range(m))))
    _, base_mapping = labelings[0]

    def relabel(mapping: dict[int, int]) -> tuple[tuple[int, ...], list[Edge]]:
        return tuple(sorted(mapping.values())), [
            Edge(mapping[e.tail], mapping[e.head], e.color) for e in d.edges
        ]

    vertices, base_edges = relabel(base_mapping)
    base_wilson = [Edge(i, (i + 1) % m, c) for i, c in enumerate(d.wilson_colors)]
    reference = holonomy_normal_form(vertices, base_wilson + base_edges)

    base_groups: dict[frozenset, list[int]] = {}
    for j, e in enumerate(base_edges):
        base_groups.setdefault(frozenset((e.tail, e.head)), []).append(j)

    count = 0
    for r, mapping in labelings:
        _, edges = relabel(mapping)
        groups: dict[frozenset, list[int]] = {}
        for j, e in enumerate(edges):
            groups.setdefault(frozenset((e.tail, e.head)), []).append(j)
        if {k: len(v) for k, v in groups.items()} != {k: len(v) for k, v in base_groups.items()}:
            continue
        wilson = [Edge(i, (i + 1) % m, c) for i, c in enumerate(_rotated_colors(d, r))]

        group_keys = sorted(base_groups, key=lambda k: tuple(sorted(k)))
        choices = []
        for k in group_keys:
            options = []
            for perm in itertools.permutations(groups[k]):
                loop = len(k) == 1
                for flips in itertools.product((False, True), repeat=len(perm) if loop else 0):
                    options.append((perm, flips))
            choices.append(options)

        for selection in itertools.product(*choices):
            transported = [0] * len(base_edges)
            for k, (perm, flips) in zip(group_keys, selection):
                for slot, (target, source) in enumerate(zip(base_groups[k], perm)):
                    src, tgt = edges[source], base_edges[target]
                    color = src.color
                    if len(k) == 1:
                        color = -color if flips[slot] else color
                    elif src.tail != tgt.tail:
                        color = -color
                    transported[target] = color
            candidate = wilson + [
                Edge(e.tail, e.head, c) for e, c in zip(base_edges, transported)
            ]
            if holonomy_normal_form(vertices, candidate) == reference:
                count += 1
    return count
