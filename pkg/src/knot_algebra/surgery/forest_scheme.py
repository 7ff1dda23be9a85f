"""
Forest schemes as formal objects: knots, claspers and surgeries are opaque symbols, and a
scheme [K; G_1, ..., G_k] is the alternating sum of the knots obtained by surgery on every
subset of its claspers.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from src.knot_algebra.checks import CheckOutcome
from src.knot_algebra.exceptions import ArgumentError, ConstraintError


logger = logging.getLogger("knotforge_logger")

STRICT = "strict"
M_NULL = "M-null"
MAX_SCHEME_CHECK = 6

# univalent vertices an occupied region needs
REGION_DEMAND = {STRICT: 2, M_NULL: 1}


@dataclass(frozen=True)
class Clasper:
    """
    A tree clasper symbol. A composite clasper S ∪ T lists its parts; surgery on it is surgery
    on each part. `homology` holds the coloring datum recorded when the clasper realizes a
    diagram component.
    """

    name: str
    degree: int = 1
    tag: str = STRICT
    parts: frozenset[str] = frozenset()
    homology: tuple[tuple[str, int], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.tag not in (STRICT, M_NULL):
            raise ArgumentError(f"clasper tag must be {STRICT!r} or {M_NULL!r}, got {self.tag!r}")
        if self.degree < 1:
            raise ArgumentError(f"clasper degree must be >= 1, got {self.degree}")

    @property
    def atoms(self) -> frozenset[str]:
        return self.parts or frozenset((self.name,))

    @classmethod
    def union(cls, name: str, *claspers: Clasper) -> Clasper:
        parts = frozenset().union(*(c.atoms for c in claspers))
        return cls(name, sum(c.degree for c in claspers), STRICT, parts)


@dataclass(frozen=True)
class SurgeryKnot:
    """
    The knot obtained from `base` by surgery along the named claspers. Composite surgeries
    flatten: (K^S)^T = K^(S ∪ T).
    """

    base: str
    applied: frozenset[str] = frozenset()

    def surgery(self, claspers: Iterable[Clasper]) -> SurgeryKnot:
        atoms = frozenset().union(*(c.atoms for c in claspers))
        return SurgeryKnot(self.base, self.applied | atoms)

    def sort_key(self) -> tuple:
        return (-len(self.applied), sorted(self.applied), self.base)

    def __str__(self) -> str:
        if not self.applied:
            return self.base
        return f"{self.base}^{{{''.join(sorted(self.applied))}}}"


Scalar = Union[int, Fraction]


class FormalSum:
    """
    An element of the free Q-module on surgery knots.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[Scalar, SurgeryKnot]] = ()):
        self._terms: dict[SurgeryKnot, Fraction] = {}
        for coeff, knot in terms:
            total = self._terms.get(knot, Fraction(0)) + coeff
            if total:
                self._terms[knot] = total
            else:
                self._terms.pop(knot, None)

    def items(self) -> list[tuple[SurgeryKnot, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: FormalSum) -> FormalSum:
        return FormalSum([(c, k) for k, c in self._terms.items()] + [(c, k) for k, c in other._terms.items()])

    def __neg__(self) -> FormalSum:
        return FormalSum((-c, k) for k, c in self._terms.items())

    def __sub__(self, other: FormalSum) -> FormalSum:
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalSum) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, (knot, coeff) in enumerate(self.items()):
            body = str(knot) if abs(coeff) == 1 else f"{abs(coeff)}·{knot}"
            if i == 0:
                out.append(f"-{body}" if coeff < 0 else body)
            else:
                out.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(out)


@dataclass(frozen=True)
class ForestScheme:
    base: SurgeryKnot
    claspers: tuple[Clasper, ...] = ()

    def __post_init__(self):
        m_null = [c.name for c in self.claspers if c.tag == M_NULL]
        if len(m_null) > 1:
            raise ConstraintError(f"a forest scheme allows at most one M-null clasper, got {m_null}")

    @property
    def size(self) -> int:
        return len(self.claspers)

    @property
    def degree(self) -> int:
        return sum(c.degree for c in self.claspers)

    def terms(self) -> list[tuple[int, SurgeryKnot, tuple[str, ...]]]:
        """
        (sign, K^{G_I}, names in I) for every subset I, largest subsets first.
        """
        k = len(self.claspers)
        out = []
        for r in range(k, -1, -1):
            for subset in itertools.combinations(self.claspers, r):
                out.append(((-1) ** (k - r), self.base.surgery(subset), tuple(c.name for c in subset)))
        return out

    def expansion(self) -> FormalSum:
        return FormalSum((sign, knot) for sign, knot, _ in self.terms())

    def as_dict(self) -> dict:
        return {
            "base": str(self.base),
            "claspers": [
                {"name": c.name, "degree": c.degree, "tag": c.tag} for c in self.claspers
            ],
            "expansion": str(self.expansion()),
        }


def expand_forest_scheme(
    k: int, tags: Optional[Sequence[str]] = None, base: str = "K"
) -> ForestScheme:
    """
    The scheme [K; G1, ..., Gk] with the given tags (all strict by default).
    """
    if k < 1:
        raise ArgumentError(f"a forest scheme needs at least one clasper, got k = {k}")
    tags = list(tags) if tags is not None else [STRICT] * k
    if len(tags) != k:
        raise ArgumentError(f"{len(tags)} tags given for {k} claspers")
    claspers = tuple(Clasper(f"G{i + 1}", 1, tag) for i, tag in enumerate(tags))
    return ForestScheme(SurgeryKnot(base), claspers)


def check_scheme_identities(max_k: int) -> list[CheckOutcome]:
    """
    Verifies, as formal sums, for every size up to max_k:
    [K; G1..Gk] = [K^G1; G2..Gk] - [K; G2..Gk], and, with G1 = S ∪ T,
    [K; G1, G2..Gk] = [K; S, G2..Gk] + [K^S; T, G2..Gk].
    """
    if not 1 <= max_k <= MAX_SCHEME_CHECK:
        raise ArgumentError(f"max_k must be in 1..{MAX_SCHEME_CHECK}, got {max_k}")
    checks = []
    knot = SurgeryKnot("K")
    for k in range(1, max_k + 1):
        scheme = expand_forest_scheme(k)
        first, rest = scheme.claspers[0], scheme.claspers[1:]
        lhs = scheme.expansion()
        rhs = (
            ForestScheme(knot.surgery([first]), rest).expansion()
            - ForestScheme(knot, rest).expansion()
        )
        checks.append(
            CheckOutcome(
                f"telescoping k={k}", lhs == rhs, {"k": k, "terms": len(lhs), "lhs": str(lhs), "rhs": str(rhs)}
            )
        )

        s, t = Clasper("S"), Clasper("T")
        composite = Clasper.union("G1", s, t)
        lhs = ForestScheme(knot, (composite,) + rest).expansion()
        rhs = (
            ForestScheme(knot, (s,) + rest).expansion()
            + ForestScheme(knot.surgery([s]), (t,) + rest).expansion()
        )
        checks.append(
            CheckOutcome(
                f"splitting k={k}", lhs == rhs, {"k": k, "terms": len(lhs), "lhs": str(lhs), "rhs": str(rhs)}
            )
        )
    logger.info(f"checked scheme identities up to k = {max_k}")
    return checks


def occupied_region_report(n: int) -> list[CheckOutcome]:
    """
    Schemes of size n + 1, all strict or with the M-null clasper in each position, against a
    degree-n diagram. Every placement of the diagram's 2n univalent vertices into the occupied
    regions is tried; a placement works when each strict region gets at least two of them and
    the M-null region at least one. No scheme shape may admit a placement.
    """
    if n < 1:
        raise ArgumentError(f"degree must be >= 1, got {n}")
    k = n + 1
    supply = 2 * n
    patterns = [[STRICT] * k] + [[M_NULL if i == j else STRICT for i in range(k)] for j in range(k)]
    checks = []
    for tags in patterns:
        scheme = expand_forest_scheme(k, tags)
        demand = [REGION_DEMAND[c.tag] for c in scheme.claspers]
        feasible = 0
        for placement in itertools.product(range(k), repeat=supply):
            if all(placement.count(i) >= need for i, need in enumerate(demand)):
                feasible += 1
        m_null = [c.name for c in scheme.claspers if c.tag == M_NULL]
        checks.append(
            CheckOutcome(
                f"size {k}, M-null {m_null[0]}" if m_null else f"size {k}, all strict",
                feasible == 0,
                {"demand": sum(demand), "supply": supply, "placements": k ** supply, "feasible": feasible},
            )
        )
    return checks
