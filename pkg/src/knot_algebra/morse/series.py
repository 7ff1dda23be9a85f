"""
Exact generating functions over closed AL-paths, their cross-checks against the enumeration,
and the per-edge assembly of F_Γ with the (1-t)^2 Δ(t) denominator bound.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

import networkx as nx
import sympy

from src.knot_algebra.checks import CheckOutcome
from src.knot_algebra.coefficients.laurent import T, LaurentPoly, RationalFn
from src.knot_algebra.diagrams.diagram import ColoredJacobiDiagram
from src.knot_algebra.exceptions import ArgumentError, ConsistencyError, InvariantViolation
from src.knot_algebra.morse.data import FiberwiseMorseData, alexander_polynomial, denominator_bound
from src.knot_algebra.morse.orbits import ClosedALPath, build_transfer_graph, enumerate_closed_orbits
from src.knot_algebra.relations.trace import TracedClass, trace


logger = logging.getLogger("knotforge_logger")


@dataclass(frozen=True)
class ClosedOrbitSeries:
    irreducible_orbits: tuple[ClosedALPath, ...]
    iterate_series: dict[str, RationalFn]
    boundary_series: RationalFn
    self_loop_series: RationalFn
    lefschetz_series: RationalFn
    transfer_determinant: LaurentPoly
    checks: tuple[CheckOutcome, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "irreducible_orbits": [
                dict(o.as_dict(), iterate_series=str(self.iterate_series[o.id]))
                for o in self.irreducible_orbits
            ],
            "boundary_series": str(self.boundary_series),
            "self_loop_series": str(self.self_loop_series),
            "lefschetz_series": str(self.lefschetz_series),
            "transfer_determinant": str(self.transfer_determinant),
        }


def transfer_matrix_determinant(g: nx.DiGraph) -> LaurentPoly:
    """
    det(I - A(t)) with A[e][f] = sign * t^exponent over the transfer edges.
    """
    nodes = sorted(g.nodes)
    if not nodes:
        return LaurentPoly.one()
    position = {node: i for i, node in enumerate(nodes)}
    matrix = sympy.eye(len(nodes))
    for e, f, data in g.edges(data=True):
        matrix[position[e], position[f]] -= data["sign"] * T ** data["exponent"]
    return LaurentPoly.from_sympy(sympy.expand(matrix.det()))


def _irreducible_orbits(m: FiberwiseMorseData, g: nx.DiGraph) -> list[ClosedALPath]:
    """
    Bare loci plus the simple cycles of the transfer graph. Each class is counted once, which
    gives a rational sum only when there are finitely many irreducible orbits, i.e. every
    strongly connected component is a single cycle.
    """
    for component in nx.strongly_connected_components(g):
        sub = g.subgraph(component)
        if sub.number_of_edges() > sub.number_of_nodes():
            raise InvariantViolation(
                f"transfer component {sorted(component)} carries infinitely many irreducible "
                f"orbits; the once-per-class series is not a rational function"
            )
    orbits = [
        ClosedALPath("locus", (locus.id,), locus.period, locus.sign, locus.index)
        for locus in sorted(m.critical_loci, key=lambda x: x.id)
    ]
    for cycle in sorted(nx.simple_cycles(g), key=lambda c: min(c[i:] + c[:i] for i in range(len(c)))):
        k = min(range(len(cycle)), key=lambda i: cycle[i:] + cycle[:i])
        seq = tuple(cycle[k:] + cycle[:k])
        period = sum(g.edges[a, b]["exponent"] for a, b in zip(seq, seq[1:] + seq[:1]))
        sign = 1
        for a, b in zip(seq, seq[1:] + seq[:1]):
            sign *= g.edges[a, b]["sign"]
        orbits.append(ClosedALPath("events", seq, period, sign, 1))
    return orbits


def _lefschetz_from_orbits(orbits: list[ClosedALPath]) -> RationalFn:
    total = RationalFn(0)
    for o in orbits:
        total = total + RationalFn.geometric(o.sign, o.period) * ((-1) ** o.index * o.period)
    return total


def _duality_check(
    m: FiberwiseMorseData, series: dict[str, RationalFn], order: int, threads: int, g: nx.DiGraph
) -> CheckOutcome:
    """
    Taylor coefficients of each series against signed counts from the orbit enumeration.
    """
    counts = {name: [Fraction(0)] * (order + 1) for name in series}
    for o in enumerate_closed_orbits(m, order, threads=threads, graph=g):
        weight = (-1) ** o.index * o.sign
        counts["boundary"][o.period] += weight
        counts["self_loop"][o.period] += o.sign
        counts["lefschetz"][o.period] += weight * o.root_period
    mismatches = {
        name: {"series": [str(c) for c in fn.taylor(order)], "enumeration": [str(c) for c in counts[name]]}
        for name, fn in series.items()
        if fn.taylor(order) != counts[name]
    }
    return CheckOutcome("series/enumeration duality", not mismatches, {"order": order, "mismatches": mismatches})


def closed_orbit_series(
    m: FiberwiseMorseData, check_order: int = 10, threads: int = 1
) -> ClosedOrbitSeries:
    """
    Exact rational generating functions of the closed AL-paths of m: one geometric series per
    irreducible orbit, the (-1)^ind-signed boundary series, the unsigned self-loop series and
    the period-weighted Lefschetz series. The Lefschetz series is computed from det(I - A(t))
    and compared with the orbit sum; all three are compared with the enumeration up to
    t^check_order. Any disagreement raises ConsistencyError.
    """
    g = build_transfer_graph(m)
    orbits = _irreducible_orbits(m, g)
    iterate = {o.id: RationalFn.geometric(o.sign, o.period) for o in orbits}

    boundary, self_loop = RationalFn(0), RationalFn(0)
    for o in orbits:
        boundary = boundary + iterate[o.id] * (-1) ** o.index
        self_loop = self_loop + iterate[o.id]

    determinant = transfer_matrix_determinant(g)
    lefschetz = RationalFn(determinant.derivative().shift(1), determinant)
    for locus in m.critical_loci:
        lefschetz = lefschetz + RationalFn.geometric(locus.sign, locus.period) * (
            (-1) ** locus.index * locus.period
        )
    by_orbits = _lefschetz_from_orbits(orbits)
    if lefschetz != by_orbits:
        raise ConsistencyError(
            f"Lefschetz series from det(I - A) is {lefschetz} but the orbit sum gives {by_orbits}"
        )

    checks = []
    if check_order > 0:
        duality = _duality_check(
            m, {"boundary": boundary, "self_loop": self_loop, "lefschetz": lefschetz}, check_order, threads, g
        )
        if not duality.passed:
            raise ConsistencyError(f"series disagree with the orbit enumeration: {duality.detail}")
        checks.append(duality)

    logger.info(f"{len(orbits)} irreducible orbits; boundary series {boundary}")
    return ClosedOrbitSeries(
        tuple(orbits), iterate, boundary, self_loop, lefschetz, determinant, tuple(checks)
    )


def check_denominator(
    m: FiberwiseMorseData, series: Optional[ClosedOrbitSeries] = None
) -> CheckOutcome:
    """
    Whether (1-t)^2 Δ(t) times the self-loop series is a Laurent polynomial.
    """
    series = series or closed_orbit_series(m)
    delta = alexander_polynomial(m)
    bound = denominator_bound(m, delta)
    product = series.self_loop_series * bound
    return CheckOutcome(
        "denominator bound",
        product.is_polynomial,
        {
            "alexander": str(delta),
            "bound": str(bound),
            "self_loop_series": str(series.self_loop_series),
            "product": str(product),
        },
    )


@dataclass(frozen=True)
class AssembledF:
    """
    F_Γ in product form: one rational function per edge, each in its own variable.
    """

    diagram: ColoredJacobiDiagram
    edge_functions: dict[str, RationalFn]
    bound: LaurentPoly

    def as_dict(self) -> dict:
        return {
            "edges": {eid: str(fn) for eid, fn in sorted(self.edge_functions.items())},
            "bound": str(self.bound),
        }


def assemble_F(
    diagram: ColoredJacobiDiagram,
    edge_series: Mapping[str, RationalFn],
    m: FiberwiseMorseData,
    series: Optional[ClosedOrbitSeries] = None,
) -> tuple[AssembledF, TracedClass]:
    """
    Self-loop edges default to the self-loop series of m; every other non-Wilson edge needs a
    series in `edge_series`. Each denominator must divide (1-t)^2 Δ(t) before the trace
    t_i -> t is taken.
    """
    nonwilson = [f"e{j}" for j in range(len(diagram.edges))]
    unknown = sorted(set(edge_series) - set(nonwilson))
    if unknown:
        raise ArgumentError(f"edge series given for {unknown}, which are not non-Wilson edges")
    loop_series = None
    functions: dict[str, RationalFn] = {}
    for eid, edge in zip(nonwilson, diagram.edges):
        if eid in edge_series:
            functions[eid] = edge_series[eid]
        elif edge.is_self_loop:
            if loop_series is None:
                loop_series = (series or closed_orbit_series(m)).self_loop_series
            functions[eid] = loop_series
        else:
            raise ArgumentError(f"no series supplied for non-loop edge {eid}")

    bound = denominator_bound(m)
    for eid, fn in functions.items():
        if bound.exact_quotient(fn.denominator) is None:
            raise InvariantViolation(
                f"edge {eid}: denominator {fn.denominator} does not divide (1-t)^2 Δ(t) = {bound}"
            )
    assembled = AssembledF(diagram, functions, bound)
    return assembled, trace(diagram, functions)
