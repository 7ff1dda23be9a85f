from src.knot_algebra.theta.theta import (
    L,
    OmegaDiagram,
    PolyModConstants,
    ThetaDiagram,
    W,
    chord_holonomy,
    reduce_theta,
    theta_name,
    theta_window,
    verify_isomorphism,
)

__all__ = [
    "L",
    "OmegaDiagram",
    "PolyModConstants",
    "ThetaDiagram",
    "W",
    "chord_holonomy",
    "reduce_theta",
    "theta_name",
    "theta_window",
    "verify_isomorphism",
]
