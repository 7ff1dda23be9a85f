from src.knot_algebra.morse.data import (
    CriticalLocus,
    FiberwiseMorseData,
    OneOneEvent,
    alexander_polynomial,
    denominator_bound,
)
from src.knot_algebra.morse.orbits import ClosedALPath, build_transfer_graph, enumerate_closed_orbits
from src.knot_algebra.morse.series import (
    AssembledF,
    ClosedOrbitSeries,
    assemble_F,
    check_denominator,
    closed_orbit_series,
    transfer_matrix_determinant,
)

__all__ = [
    "AssembledF",
    "ClosedALPath",
    "ClosedOrbitSeries",
    "CriticalLocus",
    "FiberwiseMorseData",
    "OneOneEvent",
    "alexander_polynomial",
    "assemble_F",
    "build_transfer_graph",
    "check_denominator",
    "closed_orbit_series",
    "denominator_bound",
    "enumerate_closed_orbits",
    "transfer_matrix_determinant",
]
