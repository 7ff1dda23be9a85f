"""
Exact quotient of a diagram window by its relation instances.

Columns are the window's canonical classes that survive AS, ordered from most to least complex
(number of trivalent vertices, then total |exponent|, then canonical key). Two-term relations
with coefficients of equal magnitude, the bulk of Orientation reversal and Holonomy, are merged
with a signed union-find; the remaining rows go through sympy's sparse reduced row echelon form,
which pivots on the lowest column index, so every basis element is the simplest diagram in its
class.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices.sdm import sdm_irref

from src.app_api import utils
from src.knot_algebra.checks import CheckOutcome
from src.knot_algebra.diagrams.canonical import CanonicalKey, canonicalize, key_hash
from src.knot_algebra.diagrams.diagram import ColoredJacobiDiagram
from src.knot_algebra.diagrams.enumeration import enumerate_canonical
from src.knot_algebra.diagrams.vector import DiagramVector
from src.knot_algebra.exceptions import ArgumentError, ResourceError, WindowError
from src.knot_algebra.relations.relations import (
    Conventions,
    RelationInstance,
    Window,
    generate_relations,
)


logger = logging.getLogger("knotforge_logger")


def complexity(key: CanonicalKey) -> tuple:
    m, colors, edges = key
    trivalent = len({v for e in edges for v in (e.tail, e.head) if v >= m})
    weight = sum(abs(c) for c in colors) + sum(abs(e.color) for e in edges)
    return trivalent, weight, key


class _SignedUnionFind:
    """
    Classes of columns identified up to sign: x_i = sign(i) * x_root(i). The root of a class is
    its largest column index, and a class whose sign bookkeeping contradicts itself is zero.
    """

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.sign = [1] * size
        self.zero = [False] * size

    def find(self, i: int) -> tuple[int, int]:
        path = []
        while self.parent[i] != i:
            path.append(i)
            i = self.parent[i]
        root, acc = i, 1
        for node in reversed(path):
            acc *= self.sign[node]
            self.parent[node], self.sign[node] = root, acc
        return root, (self.sign[path[0]] if path else 1)

    def union(self, i: int, j: int, ratio: int) -> None:
        """
        Records x_i = ratio * x_j with ratio = +-1.
        """
        ri, si = self.find(i)
        rj, sj = self.find(j)
        if ri == rj:
            if si != ratio * sj:
                self.zero[ri] = True
            return
        link = si * ratio * sj
        if ri < rj:
            ri, rj = rj, ri
        self.parent[rj], self.sign[rj] = ri, link
        self.zero[ri] = self.zero[ri] or self.zero[rj]

    def kill(self, i: int) -> None:
        root, _ = self.find(i)
        self.zero[root] = True


@dataclass
class QuotientSpace:
    """
    The quotient of the window's span by its relations, with a reduction map onto the basis.
    """

    window: Window
    conventions: Conventions
    columns: list[CanonicalKey]
    column_diagrams: dict[CanonicalKey, ColoredJacobiDiagram]
    relation_count: int
    basis: list[ColoredJacobiDiagram] = field(default_factory=list)
    _index: dict[CanonicalKey, int] = field(default_factory=dict, repr=False)
    _root: list[int] = field(default_factory=list, repr=False)
    _sign: list[int] = field(default_factory=list, repr=False)
    _zero_roots: frozenset[int] = field(default_factory=frozenset, repr=False)
    _pivot_rows: dict[int, dict[int, Fraction]] = field(default_factory=dict, repr=False)
    _basis_columns: list[int] = field(default_factory=list, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, d: ColoredJacobiDiagram) -> bool:
        return self.window.contains(d)

    def reduce(self, vector: DiagramVector) -> DiagramVector:
        """
        The unique basis combination equal to `vector` in the quotient.
        """
        acc: dict[int, Fraction] = defaultdict(Fraction)
        for key, diagram, coeff in vector.items():
            col = self._index.get(key)
            if col is None:
                raise WindowError(
                    f"diagram {key_hash(key)} ({diagram}) is outside the window "
                    f"{self.window.as_dict()}; rebuild the quotient with a larger window"
                )
            root = self._root[col]
            if root in self._zero_roots:
                continue
            acc[root] += self._sign[col] * coeff
        for pivot in [c for c in acc if c in self._pivot_rows]:
            value = acc.pop(pivot)
            for col, entry in self._pivot_rows[pivot].items():
                if col != pivot:
                    acc[col] -= entry * value
        return DiagramVector._from_canonical(
            {
                self.columns[col]: (self.column_diagrams[self.columns[col]], coeff)
                for col, coeff in acc.items()
                if coeff != 0
            }
        )

    def reduce_diagram(self, d: ColoredJacobiDiagram) -> DiagramVector:
        return self.reduce(DiagramVector.from_diagram(d))

    def coordinates(self, vector: DiagramVector) -> list[Fraction]:
        """
        Coefficients of reduce(vector) along `basis`.
        """
        reduced = self.reduce(vector)
        return [reduced.coefficient(b) for b in self.basis]

    def is_zero(self, vector: DiagramVector) -> bool:
        return self.reduce(vector).is_zero

    def stabilization_check(self, larger: QuotientSpace) -> CheckOutcome:
        """
        Compares this quotient with one built on a wider window: for every diagram two steps
        inside this window, the reduction computed here must stay a valid identity there, and
        the basis classes reached must remain independent.
        """
        if larger.window.degree != self.window.degree or larger.window.bound <= self.window.bound:
            raise ArgumentError("stabilization needs a quotient of the same degree on a wider window")
        sample_bound = self.window.bound - 2
        samples = [
            self.column_diagrams[k]
            for k in self.columns
            if self.column_diagrams[k].max_abs_exponent() <= sample_bound
        ]
        mismatches = []
        reached: dict[CanonicalKey, ColoredJacobiDiagram] = {}
        for d in samples:
            here = self.reduce_diagram(d)
            for key, diagram, _ in here.items():
                reached[key] = diagram
            if larger.reduce(here) != larger.reduce_diagram(d):
                mismatches.append(canonicalize(d).hash)
        images = [larger.coordinates(DiagramVector.from_diagram(d)) for d in reached.values()]
        rank = sympy.Matrix(images).rank() if images and larger.basis else 0
        passed = not mismatches and rank == len(reached)
        return CheckOutcome(
            "stabilization",
            passed,
            {
                "degree": self.window.degree,
                "windows": [self.window.bound, larger.window.bound],
                "samples": len(samples),
                "mismatches": mismatches[:20],
                "classes": len(reached),
                "rank": int(rank),
            },
        )

    def summary(self) -> dict:
        return {
            "window": self.window.as_dict(),
            "conventions": {
                "ihx_sign": self.conventions.ihx_sign,
                "stu_order": self.conventions.stu_order,
            },
            "columns": len(self.columns),
            "relations": self.relation_count,
            "dimension": self.dimension,
        }


def _row(instance: RelationInstance, index: dict[CanonicalKey, int]) -> list[tuple[int, Fraction]]:
    return [(index[key], coeff) for key, _, coeff in instance.vector().items()]


def build_quotient(
    window: Window,
    conventions: Optional[Conventions] = None,
    threads: int = 1,
    resource_cap: Optional[int] = None,
) -> QuotientSpace:
    conventions = conventions or Conventions()
    cap = resource_cap if resource_cap is not None else utils.get_resource_cap()
    forms = enumerate_canonical(
        window.degree, window.bound, nh_only=window.nh_only, threads=threads, resource_cap=cap
    )
    surviving = sorted((f for f in forms if f.sign != 0), key=lambda f: complexity(f.key), reverse=True)
    columns = [f.key for f in surviving]
    column_diagrams = {f.key: f.diagram for f in surviving}
    index = {key: i for i, key in enumerate(columns)}

    instances = generate_relations(
        window, conventions, threads=threads, diagrams=[f.diagram for f in forms], resource_cap=cap
    )
    if len(instances) * max(len(columns), 1) > cap:
        raise ResourceError(
            f"relation matrix {len(instances)} x {len(columns)} exceeds the cap of {cap} entries"
        )

    classes = _SignedUnionFind(len(columns))
    deferred: list[list[tuple[int, Fraction]]] = []
    for instance in instances:
        row = _row(instance, index)
        if len(row) == 1:
            classes.kill(row[0][0])
        elif len(row) == 2 and abs(row[0][1]) == abs(row[1][1]):
            (i, a), (j, b) = row
            classes.union(i, j, -1 if a == b else 1)
        elif row:
            deferred.append(row)

    roots = [classes.find(i) for i in range(len(columns))]
    zero_roots = frozenset(r for r in range(len(columns)) if classes.parent[r] == r and classes.zero[r])

    matrix: dict[int, dict[int, object]] = {}
    for n, row in enumerate(deferred):
        merged: dict[int, Fraction] = defaultdict(Fraction)
        for col, coeff in row:
            root, sign = roots[col]
            if root not in zero_roots:
                merged[root] += sign * coeff
        entries = {c: QQ(v.numerator, v.denominator) for c, v in merged.items() if v != 0}
        if entries:
            matrix[n] = entries

    pivot_rows: dict[int, dict[int, Fraction]] = {}
    if matrix:
        rref, pivots, _ = sdm_irref(matrix)
        for n, pivot in enumerate(pivots):
            pivot_rows[pivot] = {
                c: Fraction(int(x.numerator), int(x.denominator)) for c, x in rref[n].items()
            }

    basis_columns = sorted(
        (
            r
            for r in range(len(columns))
            if classes.parent[r] == r and r not in zero_roots and r not in pivot_rows
        ),
        reverse=True,
    )
    space = QuotientSpace(
        window=window,
        conventions=conventions,
        columns=columns,
        column_diagrams=column_diagrams,
        relation_count=len(instances),
        basis=[column_diagrams[columns[c]] for c in basis_columns],
        _index=index,
        _root=[r for r, _ in roots],
        _sign=[s for _, s in roots],
        _zero_roots=zero_roots,
        _pivot_rows=pivot_rows,
        _basis_columns=basis_columns,
    )
    logger.info(
        f"quotient at {window.as_dict()}: {len(columns)} columns, {len(instances)} relations, "
        f"{len(deferred)} rows to eliminate, dimension {space.dimension}"
    )
    return space
