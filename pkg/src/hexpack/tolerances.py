"""Global numeric tolerances.

Module-level attributes so callers can tighten or loosen them globally;
all operations read these at call time unless given an explicit override.
Geometry is assumed at desk scale (coordinates O(1..1e2)).
"""

#: absolute tolerance on invariance residuals (multi-ratio, incidence, ...)
GEOMETRIC = 1e-9

#: tolerance for quantities accumulated over two Moebius round trips
#: (s-circle common-point spreads, layout cycle closure)
CLOSURE = 1e-8

#: cross-module equivalence comparisons (layout vs. Euclidean construction)
EQUIVALENCE = 1e-7

#: residuals of closed-form constructions, checked right after building
CONSTRUCTION = 1e-12

#: |cos| below this counts as a tangent pole
POLE = 1e-8
