from __future__ import annotations

import itertools
import logging
from typing import Iterator, Optional

import networkx as nx

from src.app_api import utils
from src.knot_algebra.diagrams.canonical import CanonicalForm, canonicalize
from src.knot_algebra.diagrams.diagram import ColoredJacobiDiagram, Edge
from src.knot_algebra.exceptions import ArgumentError, ResourceError


logger = logging.getLogger("knotforge_logger")

MAX_DEGREE = 3


def _check_degree(degree: int) -> None:
    if degree <= 0:
        raise ArgumentError(f"degree must be a positive integer, got {degree}")
    if degree > MAX_DEGREE:
        raise ResourceError(f"degree {degree} is beyond the supported range (<= {MAX_DEGREE})")


def _matchings(slots: list[int]) -> Iterator[list[tuple[int, int]]]:
    """
    Perfect matchings of a sorted slot list. Slots of the same vertex are interchangeable, so a
    partner equal to the previous candidate is skipped.
    """
    if not slots:
        yield []
        return
    first, rest = slots[0], slots[1:]
    for i, other in enumerate(rest):
        if i > 0 and other == rest[i - 1]:
            continue
        remaining = rest[:i] + rest[i + 1:]
        for tail in _matchings(remaining):
            yield [(first, other)] + tail


def enumerate_shapes(degree: int) -> list[ColoredJacobiDiagram]:
    """
    All connected uncolored shapes of the given degree, one per isomorphism class, sorted by
    canonical key. Shapes whose class is killed by AS are included.
    """
    _check_degree(degree)
    found: dict[tuple, ColoredJacobiDiagram] = {}
    for m in range(1, 2 * degree + 1):
        k = 2 * degree - m
        if (m + 3 * k) % 2:
            continue
        slots = list(range(m)) + [v for v in range(m, m + k) for _ in range(3)]
        for matching in _matchings(slots):
            graph = nx.MultiGraph()
            graph.add_nodes_from(range(m + k))
            graph.add_edges_from((i, (i + 1) % m) for i in range(m))
            graph.add_edges_from(matching)
            if not nx.is_connected(graph):
                continue
            shape = ColoredJacobiDiagram.build(
                range(m), [0] * m, [Edge(a, b, 0) for a, b in matching]
            )
            form = canonicalize(shape)
            found.setdefault(form.key, form.diagram)
    logger.debug(f"degree {degree}: {len(found)} uncolored shapes")
    return [found[key] for key in sorted(found)]


def _colorings(
    shape: ColoredJacobiDiagram, bound: int, nh_only: bool
) -> dict[tuple, CanonicalForm]:
    exponents = range(-bound, bound + 1)
    m = len(shape.wilson_cycle)
    forms: dict[tuple, CanonicalForm] = {}
    for wilson in itertools.product(exponents, repeat=m):
        if nh_only and sum(wilson) != 0:
            continue
        for colors in itertools.product(exponents, repeat=len(shape.edges)):
            form = canonicalize(shape.with_colors(wilson, colors))
            forms.setdefault(form.key, form)
    return forms


def enumerate_canonical(
    degree: int,
    bound: int,
    chord_only: bool = False,
    nh_only: bool = False,
    threads: int = 1,
    resource_cap: Optional[int] = None,
) -> list[CanonicalForm]:
    """
    Canonical forms of every colored diagram of the given degree with all exponents in
    [-bound, bound], one per isomorphism class, sorted by key.
    """
    if bound < 0:
        raise ArgumentError(f"color window must be >= 0, got {bound}")
    shapes = enumerate_shapes(degree)
    if chord_only:
        shapes = [s for s in shapes if s.is_chord_diagram]

    cap = resource_cap if resource_cap is not None else utils.get_resource_cap()
    estimate = len(shapes) * (2 * bound + 1) ** (3 * degree)
    if estimate > cap:
        raise ResourceError(
            f"enumerating degree {degree} with window {bound} touches ~{estimate} colorings "
            f"(cap {cap}); raise KNOTFORGE_RESOURCE_CAP or shrink the window"
        )

    merged: dict[tuple, CanonicalForm] = {}
    for forms in utils.parallel_map(lambda s: _colorings(s, bound, nh_only), shapes, threads):
        for key, form in forms.items():
            merged.setdefault(key, form)
    logger.info(
        f"enumerated {len(merged)} classes (degree {degree}, window {bound}, "
        f"chord_only={chord_only}, nh_only={nh_only})"
    )
    return [merged[key] for key in sorted(merged)]


def enumerate_diagrams(
    degree: int,
    bound: int,
    chord_only: bool = False,
    nh_only: bool = False,
    threads: int = 1,
) -> list[ColoredJacobiDiagram]:
    return [
        form.diagram
        for form in enumerate_canonical(degree, bound, chord_only, nh_only, threads)
    ]
