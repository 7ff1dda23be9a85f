from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Union

from src.knot_algebra.coefficients.laurent import rational_to_str
from src.knot_algebra.diagrams.canonical import CanonicalKey, canonicalize, key_hash
from src.knot_algebra.diagrams.diagram import ColoredJacobiDiagram


Scalar = Union[Fraction, int]


class DiagramVector:
    """
    A finite Q-linear combination of canonical diagrams. Every diagram is canonicalized on the
    way in, so the AS sign is absorbed into the coefficient and AS-vanishing classes drop out.
    Coefficients are never zero. Treated as immutable: arithmetic returns new vectors.
    """

    __slots__ = ("_terms",)

    _terms: dict[CanonicalKey, tuple[ColoredJacobiDiagram, Fraction]]

    def __init__(self, terms: Iterable[tuple[Scalar, ColoredJacobiDiagram]] = ()):
        self._terms = {}
        for coeff, diagram in terms:
            self._accumulate(diagram, Fraction(coeff))

    def _accumulate(self, diagram: ColoredJacobiDiagram, coeff: Fraction) -> None:
        if coeff == 0:
            return
        form = canonicalize(diagram)
        if form.sign == 0:
            return
        _, current = self._terms.get(form.key, (form.diagram, Fraction(0)))
        total = current + form.sign * coeff
        if total == 0:
            self._terms.pop(form.key, None)
        else:
            self._terms[form.key] = (form.diagram, total)

    @classmethod
    def _from_canonical(cls, items: dict[CanonicalKey, tuple[ColoredJacobiDiagram, Fraction]]) -> DiagramVector:
        vec = cls.__new__(cls)
        vec._terms = {k: v for k, v in items.items() if v[1] != 0}
        return vec

    @classmethod
    def zero(cls) -> DiagramVector:
        return cls()

    @classmethod
    def from_diagram(cls, diagram: ColoredJacobiDiagram, coeff: Scalar = 1) -> DiagramVector:
        return cls([(coeff, diagram)])

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def keys(self) -> list[CanonicalKey]:
        return sorted(self._terms)

    def items(self) -> Iterator[tuple[CanonicalKey, ColoredJacobiDiagram, Fraction]]:
        """
        (key, canonical diagram, coefficient) in canonical-key order.
        """
        for key in sorted(self._terms):
            diagram, coeff = self._terms[key]
            yield key, diagram, coeff

    def diagrams(self) -> list[ColoredJacobiDiagram]:
        return [d for _, d, _ in self.items()]

    def coefficient(self, diagram: ColoredJacobiDiagram) -> Fraction:
        """
        Coefficient of the class of `diagram`, relative to `diagram` itself.
        """
        form = canonicalize(diagram)
        if form.sign == 0:
            return Fraction(0)
        return form.sign * self._terms.get(form.key, (None, Fraction(0)))[1]

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: DiagramVector) -> DiagramVector:
        if not isinstance(other, DiagramVector):
            return NotImplemented
        merged = dict(self._terms)
        for key, (diagram, coeff) in other._terms.items():
            _, current = merged.get(key, (diagram, Fraction(0)))
            merged[key] = (diagram, current + coeff)
        return DiagramVector._from_canonical(merged)

    def __neg__(self) -> DiagramVector:
        return self * -1

    def __sub__(self, other: DiagramVector) -> DiagramVector:
        if not isinstance(other, DiagramVector):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> DiagramVector:
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        scalar = Fraction(scalar)
        return DiagramVector._from_canonical(
            {k: (d, c * scalar) for k, (d, c) in self._terms.items()}
        )

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiagramVector):
            return NotImplemented
        return {k: c for k, (_, c) in self._terms.items()} == {
            k: c for k, (_, c) in other._terms.items()
        }

    def __hash__(self) -> int:
        return hash(tuple((k, c) for k, (_, c) in sorted(self._terms.items())))

    def as_json(self, namer: Optional[Callable[[ColoredJacobiDiagram], Optional[str]]] = None) -> list[dict]:
        rows = []
        for key, diagram, coeff in self.items():
            row = {"diagram": key_hash(key), "coefficient": rational_to_str(coeff)}
            name = namer(diagram) if namer else None
            if name:
                row["name"] = name
            rows.append(row)
        return rows

    def format(self, namer: Optional[Callable[[ColoredJacobiDiagram], Optional[str]]] = None) -> str:
        """
        Human-readable form such as "2·Θ(0,1) - 1/2·[2|-1,1|0-1:3]".
        """
        if not self._terms:
            return "0"
        pieces = []
        for i, (key, diagram, coeff) in enumerate(self.items()):
            name = (namer(diagram) if namer else None) or f"[{key_hash(key)}]"
            magnitude = abs(coeff)
            body = name if magnitude == 1 else f"{magnitude}·{name}"
            if i == 0:
                pieces.append(f"-{body}" if coeff < 0 else body)
            else:
                pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"DiagramVector({self.format()})"
