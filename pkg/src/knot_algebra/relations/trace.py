from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from src.knot_algebra.coefficients.laurent import LaurentPoly, RationalFn
from src.knot_algebra.diagrams.colorings import PolyColoredDiagram
from src.knot_algebra.diagrams.diagram import ColoredJacobiDiagram
from src.knot_algebra.diagrams.vector import DiagramVector
from src.knot_algebra.exceptions import ArgumentError, CoefficientArithmeticError


EdgeFunction = Union[RationalFn, LaurentPoly, int]


@dataclass(frozen=True)
class TracedClass:
    """
    A diagram colored by rational functions, written as numerator / D: the numerator is a
    combination of monomially colored diagrams and D the common denominator.
    """

    denominator: LaurentPoly
    numerator: DiagramVector

    def normalized(self) -> TracedClass:
        """
        Rescales so that D has lowest coefficient 1. D must already have lowest exponent 0:
        a factor t^k cannot be moved onto the numerator, whose terms have no preferred edge.
        `trace` always produces such denominators.
        """
        if self.denominator.is_zero:
            raise CoefficientArithmeticError("a traced class needs a nonzero denominator")
        exponent, scale = self.denominator.terms()[0]
        if exponent != 0:
            raise ArgumentError(
                f"denominator {self.denominator} has lowest exponent {exponent}; clear t^{exponent} "
                "from the edge functions before tracing"
            )
        return TracedClass(self.denominator * (1 / scale), self.numerator * (1 / scale))

    def reduced(self, quotient) -> TracedClass:
        return TracedClass(self.denominator, quotient.reduce(self.numerator))

    def equivalent(self, other: TracedClass, quotient) -> bool:
        """
        True when the normalized denominators agree and the numerators have the same normal
        form in `quotient`.
        """
        a, b = self.normalized(), other.normalized()
        return a.denominator == b.denominator and quotient.reduce(a.numerator) == quotient.reduce(
            b.numerator
        )

    def as_json(self, namer=None) -> dict:
        return {"denominator": self.denominator.to_json(), "numerator": self.numerator.as_json(namer)}


def _as_rational(value: Optional[EdgeFunction], default_exponent: int) -> RationalFn:
    if value is None:
        return RationalFn(LaurentPoly.monomial(default_exponent))
    if isinstance(value, RationalFn):
        return value
    return RationalFn(value)


def trace(d: ColoredJacobiDiagram, edge_functions: Mapping[str, EdgeFunction]) -> TracedClass:
    """
    Colors the edges named in `edge_functions` ("w0", "e2", ...) by rational functions; other
    edges keep their monomial t^color. Multilinearity moves every denominator out front, and
    the numerator colorings are expanded into monomial diagrams.
    """
    known = set(d.edge_ids())
    unknown = sorted(set(edge_functions) - known)
    if unknown:
        raise ArgumentError(f"no edges named {unknown} in the diagram (edges: {sorted(known)})")
    functions = [
        _as_rational(edge_functions.get(eid), edge.color)
        for eid, edge in zip(d.edge_ids(), d.all_edges())
    ]
    denominator = math.prod((f.denominator for f in functions), start=LaurentPoly.one())
    m = len(d.wilson_cycle)
    numerators = [f.numerator for f in functions]
    colored = PolyColoredDiagram(d, tuple(numerators[:m]), tuple(numerators[m:]))
    return TracedClass(denominator, colored.expand_linearity())
