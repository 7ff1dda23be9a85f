"""
The transfer digraph of 1/1-events and the enumeration of closed AL-paths up to rotation.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import networkx as nx

from src.app_api import utils
from src.knot_algebra.exceptions import ArgumentError
from src.knot_algebra.morse.data import FiberwiseMorseData


logger = logging.getLogger("knotforge_logger")


@dataclass(frozen=True)
class ClosedALPath:
    """
    One equivalence class of closed AL-paths. `sequence` is the minimal rotation of the event
    ids along the path, or the single locus id for a bare critical locus. `multiplicity` is k
    when the class is the k-fold iterate of an irreducible one.
    """

    kind: str
    sequence: tuple[str, ...]
    period: int
    sign: int
    index: int
    multiplicity: int = 1

    @property
    def irreducible(self) -> bool:
        return self.multiplicity == 1

    @property
    def root_period(self) -> int:
        return self.period // self.multiplicity

    @property
    def root_sequence(self) -> tuple[str, ...]:
        if self.kind == "locus":
            return self.sequence
        return self.sequence[: len(self.sequence) // self.multiplicity]

    @property
    def id(self) -> str:
        return f"{self.kind}:{','.join(self.root_sequence)}" + (
            f"^{self.multiplicity}" if self.multiplicity > 1 else ""
        )

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "sequence": list(self.sequence),
            "period": self.period,
            "sign": self.sign,
            "index": self.index,
            "multiplicity": self.multiplicity,
        }


def _descent(landing: Fraction, departure: Fraction, period: int) -> Fraction:
    """
    How far a path descends along a locus of the given period from `landing` to `departure`;
    a full turn when they coincide.
    """
    length = (landing - departure) % period
    return length if length else Fraction(period)


def build_transfer_graph(m: FiberwiseMorseData) -> nx.DiGraph:
    """
    Nodes are 1/1-events. An edge e -> f means a path landing by e can descend along the
    shared locus and leave by f; it carries the descent length, the number of crossings of the
    reference fiber on the way (`exponent`) and the sign of f.
    """
    g = nx.DiGraph()
    events = sorted(m.one_one_events, key=lambda e: e.id)
    for event in events:
        g.add_node(event.id, source=event.source, target=event.target, sign=event.sign)
    theta = m.base_fiber_angle
    for e in events:
        period = m.locus(e.target).period
        for f in events:
            if f.source != e.target:
                continue
            length = _descent(e.landing, f.departure, period)
            exponent = math.floor(e.landing - theta) - math.floor(e.landing - length - theta)
            g.add_edge(e.id, f.id, length=length, exponent=exponent, sign=f.sign)
    return g


def _minimal_rotation(seq: tuple[str, ...]) -> tuple[str, ...]:
    return min(seq[i:] + seq[:i] for i in range(len(seq)))


def _primitive_length(seq: tuple[str, ...]) -> int:
    n = len(seq)
    for d in range(1, n + 1):
        if n % d == 0 and seq[:d] * (n // d) == seq:
            return d
    return n


def _walks_from(
    g: nx.DiGraph, start: str, order: dict[str, int], max_period: int, max_length: int
) -> set[tuple[tuple[str, ...], int, int]]:
    """
    Closed walks starting at `start` that stay on nodes not smaller than it, as
    (node sequence, period, sign).
    """
    found = set()
    stack = [((start,), 0, 1)]
    while stack:
        path, period, sign = stack.pop()
        for nxt in g.successors(path[-1]):
            if order[nxt] < order[start]:
                continue
            data = g.edges[path[-1], nxt]
            total = period + data["exponent"]
            if total > max_period:
                continue
            new_sign = sign * data["sign"]
            if nxt == start:
                if total > 0:
                    found.add((path, total, new_sign))
            if len(path) < max_length:
                stack.append((path + (nxt,), total, new_sign))
    return found


def enumerate_closed_orbits(
    m: FiberwiseMorseData,
    max_period: int,
    threads: int = 1,
    graph: Optional[nx.DiGraph] = None,
) -> list[ClosedALPath]:
    """
    Every closed AL-path class of period <= max_period: iterates of bare critical loci of all
    indices, then closed walks of the transfer graph through 1/1-events (index 1), each with
    its irreducible factorization. Sorted by (period, kind, sequence).
    """
    if max_period < 1:
        raise ArgumentError(f"max period must be >= 1, got {max_period}")
    orbits: list[ClosedALPath] = []
    for locus in sorted(m.critical_loci, key=lambda x: x.id):
        for k in range(1, max_period // locus.period + 1):
            orbits.append(
                ClosedALPath("locus", (locus.id,), k * locus.period, locus.sign ** k, locus.index, k)
            )

    g = graph if graph is not None else build_transfer_graph(m)
    nodes = sorted(g.nodes)
    order = {node: i for i, node in enumerate(nodes)}
    max_length = (max_period + 1) * max(len(nodes), 1)
    classes: dict[tuple[str, ...], tuple[int, int]] = {}
    for walks in utils.parallel_map(
        lambda s: _walks_from(g, s, order, max_period, max_length), nodes, threads
    ):
        for seq, period, sign in walks:
            classes.setdefault(_minimal_rotation(seq), (period, sign))
    for seq in sorted(classes):
        period, sign = classes[seq]
        orbits.append(ClosedALPath("events", seq, period, sign, 1, len(seq) // _primitive_length(seq)))

    orbits.sort(key=lambda o: (o.period, o.kind, o.sequence))
    logger.debug(f"{len(orbits)} closed AL-path classes with period <= {max_period}")
    return orbits
