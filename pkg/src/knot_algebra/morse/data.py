"""
Combinatorial fiberwise Morse data on a mapping torus: critical loci winding around the base
circle, 1/1-intersection events between index-1 loci, and the monodromy on H_1 of the fiber.

Positions on a locus of period P are lifted base angles in [0, P): an event on sheet s at base
angle a sits at s + a. The reference fiber is the level base_fiber_angle (mod 1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
import sympy

from src.knot_algebra.coefficients.laurent import T, LaurentPoly
from src.knot_algebra.exceptions import InvariantViolation


logger = logging.getLogger("knotforge_logger")


@dataclass(frozen=True)
class CriticalLocus:
    id: str
    index: int
    period: int
    sign: int = 1


@dataclass(frozen=True)
class OneOneEvent:
    """
    An isolated horizontal flow line from index-1 locus `source` to index-1 locus `target`.
    """

    id: str
    source: str
    target: str
    base_angle: Fraction
    sign: int = 1
    source_sheet: int = 0
    target_sheet: int = 0

    @property
    def departure(self) -> Fraction:
        return self.source_sheet + self.base_angle

    @property
    def landing(self) -> Fraction:
        return self.target_sheet + self.base_angle


@dataclass(frozen=True)
class FiberwiseMorseData:
    fiber_genus: int
    critical_loci: tuple[CriticalLocus, ...]
    one_one_events: tuple[OneOneEvent, ...] = ()
    monodromy: tuple[tuple[int, ...], ...] = ()
    base_fiber_angle: Fraction = Fraction(0)
    name: str = field(default="", compare=False)

    def locus(self, locus_id: str) -> CriticalLocus:
        for locus in self.critical_loci:
            if locus.id == locus_id:
                return locus
        raise KeyError(locus_id)

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** locus.index * locus.period for locus in self.critical_loci)

    def validate(self) -> FiberwiseMorseData:
        """
        Checks the structural invariants and returns self. Every failure raises
        InvariantViolation.
        """
        if self.fiber_genus < 0:
            raise InvariantViolation(f"fiber genus must be >= 0, got {self.fiber_genus}")
        ids = [locus.id for locus in self.critical_loci]
        if len(set(ids)) != len(ids):
            raise InvariantViolation(f"duplicate critical locus ids in {ids}")
        for locus in self.critical_loci:
            if locus.index not in (0, 1, 2):
                raise InvariantViolation(f"locus {locus.id}: index {locus.index} is not 0, 1 or 2")
            if locus.period < 1:
                raise InvariantViolation(f"locus {locus.id}: period must be >= 1, got {locus.period}")
            if locus.sign not in (-1, 1):
                raise InvariantViolation(f"locus {locus.id}: sign must be +1 or -1")

        chi = 2 - 2 * self.fiber_genus
        if self.euler_characteristic != chi:
            raise InvariantViolation(
                f"critical counts give c0 - c1 + c2 = {self.euler_characteristic}, but the fiber of "
                f"genus {self.fiber_genus} has Euler characteristic {chi}"
            )

        event_ids = [e.id for e in self.one_one_events]
        if len(set(event_ids)) != len(event_ids):
            raise InvariantViolation(f"duplicate 1/1-event ids in {event_ids}")
        by_id = {locus.id: locus for locus in self.critical_loci}
        angles: dict[Fraction, str] = {}
        for event in self.one_one_events:
            for role, locus_id, sheet in (
                ("source", event.source, event.source_sheet),
                ("target", event.target, event.target_sheet),
            ):
                locus = by_id.get(locus_id)
                if locus is None:
                    raise InvariantViolation(f"event {event.id}: unknown {role} locus {locus_id!r}")
                if locus.index != 1:
                    raise InvariantViolation(
                        f"event {event.id}: {role} locus {locus_id} has index {locus.index}, not 1"
                    )
                if not 0 <= sheet < locus.period:
                    raise InvariantViolation(
                        f"event {event.id}: {role} sheet {sheet} outside 0..{locus.period - 1}"
                    )
            if not 0 <= event.base_angle < 1:
                raise InvariantViolation(f"event {event.id}: base angle {event.base_angle} not in [0, 1)")
            if event.base_angle == self.base_fiber_angle:
                raise InvariantViolation(f"event {event.id} lies on the reference fiber")
            if event.base_angle in angles:
                raise InvariantViolation(
                    f"events {angles[event.base_angle]} and {event.id} share base angle {event.base_angle}"
                )
            if event.sign not in (-1, 1):
                raise InvariantViolation(f"event {event.id}: sign must be +1 or -1")
            angles[event.base_angle] = event.id

        size = 2 * self.fiber_genus
        if len(self.monodromy) != size or any(len(row) != size for row in self.monodromy):
            raise InvariantViolation(
                f"monodromy must be {size}x{size} for genus {self.fiber_genus}, got "
                f"{[len(row) for row in self.monodromy]} entries per row"
            )
        matrix = np.array(self.monodromy, dtype=np.int64).reshape(size, size)
        if size:
            det = sympy.Matrix(matrix.tolist()).det()
            if det not in (1, -1):
                raise InvariantViolation(
                    f"monodromy has determinant {det}; it must be invertible over the integers"
                )
        return self


def alexander_polynomial(m: FiberwiseMorseData) -> LaurentPoly:
    """
    det(t I - monodromy), shifted to lowest exponent 0 with a positive lowest coefficient.
    """
    if not m.monodromy:
        return LaurentPoly.one()
    matrix = sympy.Matrix(m.monodromy)
    if matrix.det() == 0:
        raise InvariantViolation("singular monodromy")
    charpoly = matrix.charpoly(T)
    return LaurentPoly.from_sympy(charpoly.as_expr()).normalized()


def denominator_bound(m: FiberwiseMorseData, delta: Optional[LaurentPoly] = None) -> LaurentPoly:
    """
    (1 - t)^2 Delta(t).
    """
    delta = delta if delta is not None else alexander_polynomial(m)
    return (LaurentPoly.one() - LaurentPoly.monomial(1)) ** 2 * delta
