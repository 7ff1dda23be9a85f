from src.knot_algebra.diagrams.diagram import (
    ColoredJacobiDiagram,
    DiagramLabels,
    Edge,
    connected_sum,
    holonomy_normal_form,
    is_nullhomotopic,
)
from src.knot_algebra.diagrams.canonical import (
    CanonicalForm,
    automorphism_group_order,
    canonical_hash,
    canonicalize,
)
from src.knot_algebra.diagrams.vector import DiagramVector
from src.knot_algebra.diagrams.colorings import MultigradedDiagram, PolyColoredDiagram
from src.knot_algebra.diagrams.enumeration import (
    enumerate_canonical,
    enumerate_diagrams,
    enumerate_shapes,
)

__all__ = [
    "CanonicalForm",
    "ColoredJacobiDiagram",
    "DiagramLabels",
    "DiagramVector",
    "Edge",
    "MultigradedDiagram",
    "PolyColoredDiagram",
    "automorphism_group_order",
    "canonical_hash",
    "canonicalize",
    "connected_sum",
    "enumerate_canonical",
    "enumerate_diagrams",
    "enumerate_shapes",
    "holonomy_normal_form",
    "is_nullhomotopic",
]
