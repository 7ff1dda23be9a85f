"""
Exact diagram algebra, closed-orbit dynamics and surgery bookkeeping behind the knotforge CLI.

Subpackages are layered bottom-up: `coefficients` (Laurent polynomials and rational functions),
`diagrams` (colored Jacobi diagrams on S^1), `relations` (relation instances, quotient spaces and
the trace map), then `theta`, `morse` and `surgery`, which only talk to the layers below them.
"""
