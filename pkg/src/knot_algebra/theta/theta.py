"""
Degree one, nullhomotopic Wilson loop: the generators Θ(p,q) and Ω(p), the functional W onto
Q[t]/Q, its inverse L, and an exact check that W is an isomorphism on a window.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import sympy

from src.knot_algebra.checks import CheckOutcome
from src.knot_algebra.coefficients.laurent import LaurentPoly
from src.knot_algebra.diagrams.canonical import canonicalize
from src.knot_algebra.diagrams.diagram import ColoredJacobiDiagram, Edge
from src.knot_algebra.diagrams.vector import DiagramVector
from src.knot_algebra.exceptions import ArgumentError
from src.knot_algebra.relations.quotient import QuotientSpace, build_quotient
from src.knot_algebra.relations.relations import Conventions, Window, generate_relations


logger = logging.getLogger("knotforge_logger")


@dataclass(frozen=True)
class ThetaDiagram:
    """
    Θ(p,q): Wilson arcs 0 -> 1 colored t^p and 1 -> 0 colored t^-p, chord 1 -> 0 colored t^q.
    """

    p: int
    q: int

    def diagram(self) -> ColoredJacobiDiagram:
        return ColoredJacobiDiagram.build((0, 1), (self.p, -self.p), [Edge(1, 0, self.q)])

    def holonomy(self) -> int:
        return self.p + self.q

    def __str__(self) -> str:
        return f"Θ({self.p},{self.q})"


@dataclass(frozen=True)
class OmegaDiagram:
    """
    Ω(p): one Wilson vertex, a trivially colored stem 0 -> 1 and a self-loop at 1 colored t^p.
    """

    p: int

    def diagram(self) -> ColoredJacobiDiagram:
        return ColoredJacobiDiagram.build(
            (0,),
            (0,),
            [Edge(0, 1, 0), Edge(1, 1, self.p)],
            {1: ((0, 1), (1, 0), (1, 1))},
        )

    def __str__(self) -> str:
        return f"Ω({self.p})"


def chord_holonomy(d: ColoredJacobiDiagram) -> int:
    """
    Total color of the loop formed by the chord of a degree-1 chord diagram and the Wilson arc
    running from the chord's head back to its tail.
    """
    if d.degree != 1 or not d.is_chord_diagram:
        raise ArgumentError(f"holonomy is defined for degree-1 chord diagrams, got {d}")
    chord = d.edges[0]
    m = len(d.wilson_cycle)
    i = d.wilson_cycle.index(chord.head)
    total = chord.color
    while d.wilson_cycle[i] != chord.tail:
        total += d.wilson_colors[i]
        i = (i + 1) % m
    return total


@dataclass(frozen=True)
class PolyModConstants:
    """
    An element of Q[t]/Q, stored by its representative without constant term.
    """

    representative: LaurentPoly

    def __post_init__(self):
        rep = self.representative
        if not rep.is_zero and rep.min_exponent < 0:
            raise ArgumentError(f"{rep} has negative exponents; Q[t]/Q has none")
        if rep.coefficient(0):
            object.__setattr__(self, "representative", rep - rep.coefficient(0))

    @classmethod
    def monomial(cls, exponent: int, coefficient=1) -> PolyModConstants:
        return cls(LaurentPoly.monomial(exponent, coefficient))

    @property
    def is_zero(self) -> bool:
        return self.representative.is_zero

    def __add__(self, other: PolyModConstants) -> PolyModConstants:
        return PolyModConstants(self.representative + other.representative)

    def __sub__(self, other: PolyModConstants) -> PolyModConstants:
        return PolyModConstants(self.representative - other.representative)

    def __mul__(self, scalar) -> PolyModConstants:
        return PolyModConstants(self.representative * Fraction(scalar))

    __rmul__ = __mul__

    def to_json(self) -> dict[str, str]:
        return self.representative.to_json()

    def __str__(self) -> str:
        return f"{self.representative} mod Q"


def W(vector: DiagramVector) -> PolyModConstants:
    """
    Θ(p,q) -> t^|p+q| and Ω(p) -> 0, extended linearly. Negative holonomy is folded by
    Orientation reversal, which maps Θ(p,q) to a diagram of holonomy -(p+q).
    """
    total = LaurentPoly.zero()
    for _, d, coeff in vector.items():
        if d.degree != 1:
            raise ArgumentError(f"W is defined on degree-1 diagrams only, got degree {d.degree}")
        if not d.is_nh:
            raise ArgumentError(f"W needs a nullhomotopic Wilson loop, got holonomy {d.wilson_holonomy}")
        if d.is_chord_diagram:
            total = total + LaurentPoly.monomial(abs(chord_holonomy(d)), coeff)
    return PolyModConstants(total)


def L(f: PolyModConstants) -> DiagramVector:
    """
    t^p -> Θ(0,p), extended linearly.
    """
    return DiagramVector(
        (coeff, ThetaDiagram(0, p).diagram()) for p, coeff in f.representative.terms() if p != 0
    )


def theta_name(d: ColoredJacobiDiagram) -> Optional[str]:
    """
    Display name for degree-1 generators: "Θ(0,h)" or "Ω(p)" when d is in the class of the
    plain representative, else None.
    """
    if d.degree != 1 or not d.is_nh:
        return None
    key = canonicalize(d).key
    if d.is_chord_diagram:
        h = abs(chord_holonomy(d))
        theta = ThetaDiagram(0, h)
        return str(theta) if canonicalize(theta.diagram()).key == key else None
    loop = next(e for e in d.edges if e.is_self_loop)
    for p in (loop.color, -loop.color):
        omega = OmegaDiagram(p)
        if canonicalize(omega.diagram()).key == key:
            return str(omega)
    return None


def theta_window(*exponents: int) -> int:
    """
    The smallest bound K for which a degree-1 quotient sees these exponents with room for one
    Holonomy move on each side.
    """
    return max((abs(x) for x in exponents), default=0) + 2


def verify_isomorphism(
    max_exponent: int,
    conventions: Optional[Conventions] = None,
    threads: int = 1,
    quotient: Optional[QuotientSpace] = None,
) -> list[CheckOutcome]:
    """
    Checks, in the degree-1 quotient on window max_exponent + 2, that L∘W fixes every Θ(p,q)
    with |p|,|q| <= max_exponent/2, that W∘L fixes t^1..t^K, that the classes Θ(0,1)..Θ(0,K)
    are independent, that Ω(p) vanishes and that W annihilates every relation instance.
    """
    if max_exponent < 1:
        raise ArgumentError(f"max exponent must be >= 1, got {max_exponent}")
    window = Window(1, max_exponent + 2, nh_only=True)
    quotient = quotient or build_quotient(window, conventions, threads=threads)
    if quotient.window.degree != 1 or quotient.window.bound < window.bound:
        raise ArgumentError(f"the quotient window {quotient.window.as_dict()} is too small")

    half = max_exponent // 2
    failures = []
    for p in range(-half, half + 1):
        for q in range(-half, half + 1):
            theta = DiagramVector.from_diagram(ThetaDiagram(p, q).diagram())
            if not quotient.is_zero(L(W(theta)) - theta):
                failures.append(str(ThetaDiagram(p, q)))
    checks = [
        CheckOutcome(
            "L∘W = id on Θ(p,q)",
            not failures,
            {"range": [-half, half], "cases": (2 * half + 1) ** 2, "failures": failures},
        )
    ]

    bad_exponents = [
        p for p in range(1, max_exponent + 1)
        if W(L(PolyModConstants.monomial(p))) != PolyModConstants.monomial(p)
    ]
    checks.append(
        CheckOutcome("W∘L = id on t^p", not bad_exponents, {"max": max_exponent, "failures": bad_exponents})
    )

    rows = [
        quotient.coordinates(DiagramVector.from_diagram(ThetaDiagram(0, p).diagram()))
        for p in range(1, max_exponent + 1)
    ]
    rank = int(sympy.Matrix(rows).rank()) if quotient.basis else 0
    checks.append(
        CheckOutcome(
            "Θ(0,1..K) independent",
            rank == max_exponent,
            {"rank": rank, "expected": max_exponent, "dimension": quotient.dimension},
        )
    )

    surviving = [
        str(OmegaDiagram(p))
        for p in range(-max_exponent, max_exponent + 1)
        if not quotient.reduce_diagram(OmegaDiagram(p).diagram()).is_zero
    ]
    checks.append(CheckOutcome("Ω(p) = 0", not surviving, {"failures": surviving}))

    instances = generate_relations(window, quotient.conventions, threads=threads)
    leaks = [f"{r.kind}@{r.site}" for r in instances if not W(r.vector()).is_zero]
    checks.append(
        CheckOutcome(
            "W annihilates relations",
            not leaks,
            {"instances": len(instances), "failures": leaks[:20]},
        )
    )
    for check in checks:
        logger.info(f"{check.name}: {'pass' if check.passed else 'FAIL'}")
    return checks


def reduce_theta(p: int, q: int, conventions: Optional[Conventions] = None, threads: int = 1):
    """
    Normal form of Θ(p,q) in the smallest degree-1 window containing it and Θ(0,p+q), together
    with its image under W.
    """
    window = Window(1, theta_window(p, q, p + q), nh_only=True)
    quotient = build_quotient(window, conventions, threads=threads)
    reduced = quotient.reduce_diagram(ThetaDiagram(p, q).diagram())
    return reduced, W(reduced), quotient
