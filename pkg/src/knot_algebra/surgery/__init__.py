from src.knot_algebra.surgery.forest_scheme import (
    M_NULL,
    STRICT,
    Clasper,
    FormalSum,
    ForestScheme,
    SurgeryKnot,
    check_scheme_identities,
    expand_forest_scheme,
    occupied_region_report,
)
from src.knot_algebra.surgery.surgery_map import (
    SurgeryPresentation,
    Z_of_surgery,
    Z_of_unknot,
    kappa_star,
    labeling_orbit_count,
    psi,
    surgery_window,
    whitehead_example,
    whitehead_presentation,
)

__all__ = [
    "M_NULL",
    "STRICT",
    "Clasper",
    "FormalSum",
    "ForestScheme",
    "SurgeryKnot",
    "SurgeryPresentation",
    "Z_of_surgery",
    "Z_of_unknot",
    "check_scheme_identities",
    "expand_forest_scheme",
    "kappa_star",
    "labeling_orbit_count",
    "occupied_region_report",
    "psi",
    "surgery_window",
    "whitehead_example",
    "whitehead_presentation",
]
