"""The continuum limit: a holomorphic map with linear Schwarzian.

Doyle spirals correspond to constant Schwarzians (exponentials); the
general conformally symmetric packing corresponds to S(f) = A z + B.  The
normalized case S(f) = z is solved by a ratio of Airy-type solutions of
psi'' = z psi, with the rotationally symmetric representative satisfying
f(q z) = q f(z) for the cube root of unity q.
"""

import cmath
import math
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from hexpack import airy, airy_map, hexgrid_image, schwarzian_fd
from hexpack.airy import Q3, airy_initial_values, airy_ode_oracle
from hexpack.serialize import polylines_to_svg

OUT = pathlib.Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)

ai0, aip0 = airy_initial_values()
print(f"initial values by oscillatory quadrature: "
      f"Ai(0) = {ai0:.12f}, Ai'(0) = {aip0:.12f}")

z = 0.7 - 0.4j
series = airy(z)
oracle = airy_ode_oracle(z)
print(f"series vs adaptive integration at {z}: "
      f"dAi = {abs(series[0] - oracle[0]):.2e}, "
      f"dBi = {abs(series[1] - oracle[1]):.2e}")

print("\nSchwarzian of reference maps (7-point finite differences):")
print(f"  identity: {schwarzian_fd(lambda w: w, 0.3 + 0.1j):.2e}")
print(f"  exp:      {schwarzian_fd(cmath.exp, 0.3 + 0.1j):.6f}  (constant -1/2)")
for zz in (0.4, 0.5j, -0.3 + 0.3j):
    s = schwarzian_fd(airy_map, zz, 1e-3)
    print(f"  airy map at {zz}: S = {s:.6f}  (target {complex(zz):.6f})")

print("\nrotational symmetry f(q z) = q f(z):")
for zz in (0.8, 0.5 + 0.5j):
    lhs = complex(airy_map(Q3 * zz))
    rhs = Q3 * complex(airy_map(zz))
    print(f"  z = {zz}: |f(qz) - q f(z)| = {abs(lhs - rhs):.2e}")

polys = hexgrid_image(airy_map, spacing=0.18, extent=1.6)
(OUT / "airy_grid.svg").write_text(polylines_to_svg(polys))
ident = hexgrid_image(lambda w: w, spacing=0.18, extent=1.6)
(OUT / "hex_grid.svg").write_text(polylines_to_svg(ident, stroke="#999999"))
print(f"\nimage of the hexagonal grid written to {OUT} "
      f"({len(polys)} polylines); compare with the undeformed grid")
