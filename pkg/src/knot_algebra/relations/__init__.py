from src.knot_algebra.relations.relations import (
    RELATION_KINDS,
    Conventions,
    RelationInstance,
    RelationRule,
    Window,
    generate_relations,
    holonomy_move,
    stu_expand,
)
from src.knot_algebra.relations.quotient import QuotientSpace, build_quotient
from src.knot_algebra.relations.trace import TracedClass, trace

__all__ = [
    "RELATION_KINDS",
    "Conventions",
    "QuotientSpace",
    "RelationInstance",
    "RelationRule",
    "TracedClass",
    "Window",
    "build_quotient",
    "generate_relations",
    "holonomy_move",
    "stu_expand",
    "trace",
]
