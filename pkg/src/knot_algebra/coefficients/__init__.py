from src.knot_algebra.coefficients.laurent import (
    LaurentPoly,
    RationalFn,
    parse_rational,
    rational_to_str,
)

__all__ = ["LaurentPoly", "RationalFn", "parse_rational", "rational_to_str"]
