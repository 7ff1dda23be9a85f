"""
Colorings beyond single monomials: general Laurent polynomial colors (expanded by Linearity into
monomial diagrams) and Z^r-multigraded monomials for group rings Q[Z^r].
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from src.knot_algebra.coefficients.laurent import LaurentPoly
from src.knot_algebra.diagrams.diagram import ColoredJacobiDiagram
from src.knot_algebra.diagrams.vector import DiagramVector
from src.knot_algebra.exceptions import StructuralError


@dataclass(frozen=True)
class PolyColoredDiagram:
    """
    A diagram shape with one LaurentPoly per edge. The monomial colors stored on `shape` are
    ignored.
    """

    shape: ColoredJacobiDiagram
    wilson_colors: tuple[LaurentPoly, ...]
    edge_colors: tuple[LaurentPoly, ...]

    def __post_init__(self):
        if len(self.wilson_colors) != len(self.shape.wilson_cycle) or len(self.edge_colors) != len(
            self.shape.edges
        ):
            raise StructuralError("one color per edge is required")

    @classmethod
    def from_monomial(cls, diagram: ColoredJacobiDiagram) -> PolyColoredDiagram:
        return cls(
            diagram,
            tuple(LaurentPoly.monomial(c) for c in diagram.wilson_colors),
            tuple(LaurentPoly.monomial(e.color) for e in diagram.edges),
        )

    @property
    def is_monomial(self) -> bool:
        return all(
            c.is_monomial and c.terms()[0][1] == 1 for c in self.wilson_colors + self.edge_colors
        )

    def to_monomial(self) -> ColoredJacobiDiagram:
        if not self.is_monomial:
            raise StructuralError("the coloring is not monomial")
        return self.shape.with_colors(
            [c.min_exponent for c in self.wilson_colors], [c.min_exponent for c in self.edge_colors]
        )

    def expand_linearity(self) -> DiagramVector:
        """
        Multilinear expansion into monomially colored diagrams with rational coefficients.
        """
        factors = [c.terms() for c in self.wilson_colors + self.edge_colors]
        if any(not f for f in factors):
            return DiagramVector.zero()
        m = len(self.wilson_colors)
        terms = []
        for combo in itertools.product(*factors):
            coeff = math.prod((c for _, c in combo), start=Fraction(1))
            exps = [e for e, _ in combo]
            terms.append((coeff, self.shape.with_colors(exps[:m], exps[m:])))
        return DiagramVector(terms)

    def as_json(self) -> dict:
        source = self.shape.as_json()
        for edge, color in zip(source["edges"], self.wilson_colors + self.edge_colors):
            edge["color"] = color.to_json()
        return source


@dataclass(frozen=True)
class MultigradedDiagram:
    """
    A shape colored by exponent vectors in Z^r: the monomial t1^v1 ... tr^vr on each edge.
    """

    shape: ColoredJacobiDiagram
    wilson_exponents: tuple[tuple[int, ...], ...]
    edge_exponents: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.wilson_exponents) != len(self.shape.wilson_cycle) or len(
            self.edge_exponents
        ) != len(self.shape.edges):
            raise StructuralError("one exponent vector per edge is required")
        if len({len(v) for v in self.wilson_exponents + self.edge_exponents}) > 1:
            raise StructuralError("exponent vectors must all have the same rank")

    @property
    def rank(self) -> int:
        return len(self.wilson_exponents[0])

    @property
    def is_nh(self) -> bool:
        return all(sum(column) == 0 for column in zip(*self.wilson_exponents))
